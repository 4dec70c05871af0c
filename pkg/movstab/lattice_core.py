"""
lattice_core.py - Néron-Severi lattices with an exact intersection pairing.

Provides the lattice and class value types, exact congruence diagonalization
and signature certification, the Hodge-index bound, lattice morphisms obeying
the projection formula, and the Cartier index of a sublattice pair.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Sequence, Tuple, Union

import sympy
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors

from movstab.errors import InvariantViolation, LatticeError, PreconditionError
from movstab.utils import Matrix, Vector, mat_mul, mat_vec, nullspace, transpose

logger = logging.getLogger(__name__)


class SignatureRecord(NamedTuple):
    """Counts of positive, negative and zero diagonal entries."""

    n_pos: int
    n_neg: int
    n_zero: int


class HodgeCertificate(NamedTuple):
    """Result of hodge_bound: D² together with its sign certificate."""

    value: Fraction
    is_zero_class: bool
    equality_iff_zero: bool


def _as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _check_symmetric(matrix: Matrix) -> None:
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise LatticeError("gram matrix is not square")
    for i in range(size):
        for j in range(i + 1, size):
            if matrix[i][j] != matrix[j][i]:
                raise LatticeError(f"gram matrix is not symmetric at ({i}, {j})")


def _integral_scaling(matrix: Matrix) -> List[List[int]]:
    """Scale a rational matrix by the positive lcm of its denominators."""
    scale = math.lcm(*(v.denominator for row in matrix for v in row)) if matrix else 1
    return [[int(v * scale) for v in row] for row in matrix]


def diagonalize(matrix: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """
    Fraction-free symmetric congruence diagonalization.

    Denominators are cleared by a positive scalar, then every step works in
    integers. Pivoting on a nonzero diagonal entry p replaces the trailing block
    by sign(p)·(p·a_ij - a_ik·a_jk), a positive multiple of the trailing block
    of a congruent matrix. The block is then divided by the gcd of its entries.
    When every remaining diagonal entry vanishes but an off-diagonal one does
    not, row/column j is first added to row/column i, which produces the
    nonzero pivot 2·a_ij. Only positive rescalings are applied, so the signs
    of the entries returned are those of a congruent diagonal form.

    Args:
        matrix: Symmetric square matrix of rationals

    Returns:
        Integral diagonal entries whose sign pattern is the signature of the
        input (zeros at the end)
    """
    rational = _as_matrix(matrix)
    _check_symmetric(rational)
    work = _integral_scaling(rational)
    size = len(work)
    diagonal: List[Fraction] = []

    for k in range(size):
        pivot_row = next((i for i in range(k, size) if work[i][i] != 0), None)
        if pivot_row is None:
            pair = next(
                ((i, j) for i in range(k, size) for j in range(i + 1, size) if work[i][j] != 0),
                None,
            )
            if pair is None:
                diagonal.extend([Fraction(0)] * (size - k))
                break
            i, j = pair
            for col in range(size):
                work[i][col] += work[j][col]
            for row in range(size):
                work[row][i] += work[row][j]
            pivot_row = i

        if pivot_row != k:
            work[k], work[pivot_row] = work[pivot_row], work[k]
            for row in work:
                row[k], row[pivot_row] = row[pivot_row], row[k]

        pivot = work[k][k]
        sign = 1 if pivot > 0 else -1
        for i in range(k + 1, size):
            for j in range(i, size):
                value = sign * (pivot * work[i][j] - work[i][k] * work[j][k])
                work[i][j] = value
                work[j][i] = value
        common = math.gcd(*(work[i][j] for i in range(k + 1, size) for j in range(i, size)))
        for i in range(k + 1, size):
            work[i][k] = 0
            work[k][i] = 0
            if common > 1:
                for j in range(k + 1, size):
                    work[i][j] //= common
        diagonal.append(Fraction(pivot))

    return diagonal


def certify_signature(lattice: Union["NSLattice", Sequence[Sequence[Fraction]]]) -> SignatureRecord:
    """
    Certify the signature of a symmetric pairing.

    Args:
        lattice: An NSLattice or a raw symmetric matrix

    Returns:
        SignatureRecord(n_pos, n_neg, n_zero)
    """
    gram = lattice.gram if isinstance(lattice, NSLattice) else _as_matrix(lattice)
    diagonal = diagonalize(gram)
    return SignatureRecord(
        n_pos=sum(1 for d in diagonal if d > 0),
        n_neg=sum(1 for d in diagonal if d < 0),
        n_zero=sum(1 for d in diagonal if d == 0),
    )


def is_negative_definite(matrix: Sequence[Sequence[Fraction]]) -> bool:
    """True when every congruence-diagonal entry is strictly negative."""
    return all(d < 0 for d in diagonalize(matrix))


@dataclass(frozen=True)
class NSLattice:
    """Free lattice of rank ρ with a nondegenerate symmetric rational pairing."""

    gram: Matrix
    basis_labels: Tuple[str, ...] = ()
    name: str = "NS"

    def __post_init__(self):
        gram = _as_matrix(self.gram)
        if not gram:
            raise LatticeError("lattice rank must be positive")
        _check_symmetric(gram)
        object.__setattr__(self, "gram", gram)

        labels = tuple(self.basis_labels) or tuple(f"e{i + 1}" for i in range(len(gram)))
        if len(labels) != len(gram):
            raise LatticeError(f"expected {len(gram)} basis labels, got {len(labels)}")
        object.__setattr__(self, "basis_labels", labels)

        if certify_signature(gram).n_zero:
            raise LatticeError("degenerate gram matrix")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def signature(self) -> SignatureRecord:
        return certify_signature(self.gram)

    def is_hyperbolic(self) -> bool:
        """True for signature (1, ρ−1)."""
        return self.signature == SignatureRecord(1, self.rank - 1, 0)

    def require_hyperbolic(self) -> None:
        if not self.is_hyperbolic():
            sig = self.signature
            raise LatticeError(
                f"lattice {self.name} has signature ({sig.n_pos}, {sig.n_neg}), "
                f"expected (1, {self.rank - 1})"
            )

    def make(self, coords: Iterable) -> "NumClass":
        return NumClass(tuple(Fraction(c) for c in coords), self)

    def zero(self) -> "NumClass":
        return self.make([0] * self.rank)

    def basis(self) -> List["NumClass"]:
        return [self.make([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]


@dataclass(frozen=True)
class NumClass:
    """Exact coordinate vector of a divisor or curve class."""

    coords: Vector
    lattice: NSLattice = field(repr=False)

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError(
                f"class has {len(coords)} coordinates, lattice rank is {self.lattice.rank}"
            )
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "NumClass") -> None:
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise LatticeError("incompatible lattices")

    def __add__(self, other: "NumClass") -> "NumClass":
        self._check(other)
        return NumClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __sub__(self, other: "NumClass") -> "NumClass":
        self._check(other)
        return NumClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __neg__(self) -> "NumClass":
        return NumClass(tuple(-a for a in self.coords), self.lattice)

    def __mul__(self, scalar) -> "NumClass":
        scalar = Fraction(scalar)
        return NumClass(tuple(scalar * a for a in self.coords), self.lattice)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "NumClass":
        return self * (1 / Fraction(scalar))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def same_lattice(*classes: NumClass) -> NSLattice:
    """Return the common lattice of the given classes or raise LatticeError."""
    lattice = classes[0].lattice
    for cls in classes[1:]:
        if cls.lattice is not lattice and cls.lattice != lattice:
            raise LatticeError("incompatible lattices")
    return lattice


def pairing(a: NumClass, b: NumClass) -> Fraction:
    """
    Intersection pairing aᵀ·gram·b.

    Args:
        a: First class
        b: Second class (same lattice)

    Returns:
        Exact rational pairing
    """
    lattice = same_lattice(a, b)
    total = Fraction(0)
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        row = lattice.gram[i]
        total += ai * sum((row[j] * bj for j, bj in enumerate(b.coords) if bj != 0), Fraction(0))
    return total


def square(a: NumClass) -> Fraction:
    """Self-intersection a²."""
    return pairing(a, a)


def restricted_gram(lattice: NSLattice, a: NumClass) -> Matrix:
    """
    Gram matrix of the pairing restricted to the orthogonal complement a^⊥.

    Args:
        lattice: The lattice
        a: A class of that lattice

    Returns:
        Gram matrix in an exact nullspace basis of a^⊥
    """
    same_lattice(lattice.zero(), a)
    functional = mat_vec(lattice.gram, a.coords)
    complement = nullspace([functional], lattice.rank)
    if not complement:
        return ()
    return mat_mul(mat_mul(complement, lattice.gram), transpose(complement))


def hodge_bound(divisor: NumClass, a: NumClass) -> HodgeCertificate:
    """
    Hodge-index bound D² ≤ 0 for D orthogonal to a class of positive square.

    Args:
        divisor: The class D
        a: A class with a² > 0 and D·a = 0

    Returns:
        HodgeCertificate with D² and the "equality iff D = 0" check
    """
    lattice = same_lattice(divisor, a)
    lattice.require_hyperbolic()
    if square(a) <= 0:
        raise PreconditionError("hodge_bound needs a² > 0")
    if pairing(divisor, a) != 0:
        raise PreconditionError("hodge_bound needs D·a = 0")

    value = square(divisor)
    is_zero = divisor.is_zero()
    if value > 0 or (value == 0) != is_zero:
        raise InvariantViolation(f"Hodge index bound violated: D² = {value}")
    return HodgeCertificate(value=value, is_zero_class=is_zero, equality_iff_zero=True)


@dataclass(frozen=True)
class LatticeMorphism:
    """
    Morphism between lattices: push acts on divisor classes, pull on curve classes.

    push is target.rank × source.rank and pull is source.rank × target.rank; the
    pair must satisfy G_source·pull = pushᵀ·G_target (projection formula).
    """

    source: NSLattice
    target: NSLattice
    push: Matrix
    pull: Matrix

    def __post_init__(self):
        push = _as_matrix(self.push)
        pull = _as_matrix(self.pull)
        if len(push) != self.target.rank or any(len(r) != self.source.rank for r in push):
            raise LatticeError("push matrix must be target.rank x source.rank")
        if len(pull) != self.source.rank or any(len(r) != self.target.rank for r in pull):
            raise LatticeError("pull matrix must be source.rank x target.rank")
        if mat_mul(self.source.gram, pull) != mat_mul(transpose(push), self.target.gram):
            raise LatticeError("push and pull violate the projection formula")
        object.__setattr__(self, "push", push)
        object.__setattr__(self, "pull", pull)

    @classmethod
    def identity(cls, lattice: NSLattice) -> "LatticeMorphism":
        eye = tuple(
            tuple(Fraction(int(i == j)) for j in range(lattice.rank)) for i in range(lattice.rank)
        )
        return cls(lattice, lattice, eye, eye)


def transport(morphism: LatticeMorphism, x: NumClass, direction: str) -> NumClass:
    """
    Move a class along a morphism.

    Args:
        morphism: The lattice morphism
        x: Class in the source (push) or target (pull)
        direction: "push" or "pull"

    Returns:
        The transported class
    """
    if direction == "push":
        same_lattice(x, morphism.source.zero())
        return morphism.target.make(mat_vec(morphism.push, x.coords))
    if direction == "pull":
        same_lattice(x, morphism.target.zero())
        return morphism.source.make(mat_vec(morphism.pull, x.coords))
    raise PreconditionError(f"unknown transport direction {direction!r}")


def pushforward_span(morphism: LatticeMorphism) -> List[NumClass]:
    """Images of the integral source basis under push."""
    return [transport(morphism, e, "push") for e in morphism.source.basis()]


def _integer_columns(classes: Sequence[NumClass], what: str) -> sympy.Matrix:
    for cls in classes:
        if any(c.denominator != 1 for c in cls.coords):
            raise LatticeError(f"{what} class {cls.coords} has non-integer coordinates")
    return sympy.Matrix([[int(c) for c in cls.coords] for cls in classes]).T


def cartier_index(ambient: Sequence[NumClass], sub: Sequence[NumClass]) -> int:
    """
    Exponent of the finite quotient ambient-lattice / sub-lattice.

    The ambient span is replaced by its Hermite basis B, the sub generators are
    written in that basis, and the largest Smith invariant factor of the
    resulting integer matrix is the smallest m with m·ambient ⊆ sub.

    Args:
        ambient: Integral classes spanning a full-rank lattice
        sub: Integral classes spanning a full-rank sublattice of it

    Returns:
        The positive integer m
    """
    if not ambient or not sub:
        raise LatticeError("cartier_index needs non-empty ambient and sub lists")
    lattice = same_lattice(*ambient, *sub)
    rho = lattice.rank

    ambient_cols = _integer_columns(ambient, "ambient")
    sub_cols = _integer_columns(sub, "sub")
    if ambient_cols.rank() < rho or sub_cols.rank() < rho:
        raise LatticeError("rank deficiency: lattices must have full rank")

    basis = hermite_normal_form(ambient_cols)
    coefficients = basis.inv() * sub_cols
    if any(not entry.is_integer for entry in coefficients):
        raise LatticeError("sub lattice is not contained in the ambient lattice")

    factors = [abs(int(f)) for f in invariant_factors(coefficients, domain=sympy.ZZ)]
    nonzero = [f for f in factors if f != 0]
    if len(nonzero) < rho:
        raise LatticeError("rank deficiency: lattices must have full rank")
    m = max(nonzero)
    logger.debug("cartier_index: invariant factors %s, exponent %d", nonzero, m)
    return m

