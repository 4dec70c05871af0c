"""
chern_calculus.py - Degree-2 Chern calculus for sheaf classes on a surface.

A SheafClass is (rank, c1, c2) with c2 already a number. Tensor products go
through the truncated Chern character ch = (r, c1, c1²/2 − c2); split bundles
carry their line-bundle summands and serve as an independent oracle.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Optional, Tuple

from movstab.cone_engine import RationalCone, contains
from movstab.errors import PreconditionError
from movstab.lattice_core import NSLattice, NumClass, pairing, same_lattice, square

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SheafClass:
    """Numerical class of a torsion-free sheaf: rank, c1 and the number c2."""

    rank: int
    c1: NumClass
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        if isinstance(self.rank, bool) or not isinstance(self.rank, int) or self.rank < 1:
            raise PreconditionError(f"sheaf rank must be a positive integer, got {self.rank!r}")
        object.__setattr__(self, "c2", Fraction(self.c2))

    @property
    def lattice(self) -> NSLattice:
        return self.c1.lattice

    @property
    def ch2(self) -> Fraction:
        return square(self.c1) / 2 - self.c2

    @classmethod
    def trivial(cls, lattice: NSLattice, rank: int = 1) -> "SheafClass":
        return cls(rank, lattice.zero(), Fraction(0))

    @classmethod
    def line(cls, c1: NumClass) -> "SheafClass":
        return cls(1, c1, Fraction(0))


@dataclass(frozen=True)
class SplitBundle:
    """Direct sum of line bundles, given by their first Chern classes."""

    summands: Tuple[NumClass, ...]

    def __post_init__(self):
        summands = tuple(self.summands)
        if not summands:
            raise PreconditionError("a split bundle needs at least one summand")
        same_lattice(*summands)
        object.__setattr__(self, "summands", summands)

    @property
    def rank(self) -> int:
        return len(self.summands)

    def sheaf_class(self) -> SheafClass:
        """Induced class: c1 = Σ Lᵢ, c2 = Σ_{i<j} Lᵢ·Lⱼ."""
        c1 = self.summands[0]
        for line in self.summands[1:]:
            c1 = c1 + line
        c2 = sum((pairing(a, b) for a, b in combinations(self.summands, 2)), Fraction(0))
        return SheafClass(self.rank, c1, c2)


def _from_character(rank: int, c1: NumClass, ch2: Fraction) -> SheafClass:
    return SheafClass(rank, c1, square(c1) / 2 - ch2)


def tensor_class(E: SheafClass, F: SheafClass) -> SheafClass:
    """
    Class of E ⊗ F from the product of truncated Chern characters.

    Args:
        E: First class
        F: Second class (same lattice)

    Returns:
        SheafClass of rank r_E·r_F
    """
    same_lattice(E.c1, F.c1)
    c1 = E.c1 * F.rank + F.c1 * E.rank
    ch2 = F.rank * E.ch2 + E.rank * F.ch2 + pairing(E.c1, F.c1)
    return _from_character(E.rank * F.rank, c1, ch2)


def dual_class(E: SheafClass) -> SheafClass:
    """Class of E^*: (r, −c1, c2)."""
    return SheafClass(E.rank, -E.c1, E.c2)


def determinant_class(E: SheafClass) -> SheafClass:
    """Rank-one class det E with c1(E)."""
    return SheafClass.line(E.c1)


def twist_class(E: SheafClass, L: NumClass) -> SheafClass:
    """E ⊗ O(L); slopes shift by the pairing with L."""
    return tensor_class(E, SheafClass.line(L))


def whitney_extension(F: SheafClass, Q: SheafClass) -> SheafClass:
    """
    Middle term of an extension 0 → F → E → Q → 0.

    Args:
        F: Subsheaf class
        Q: Quotient class

    Returns:
        Class with c2 = c2(F) + c2(Q) + c1(F)·c1(Q)
    """
    same_lattice(F.c1, Q.c1)
    return SheafClass(
        F.rank + Q.rank,
        F.c1 + Q.c1,
        F.c2 + Q.c2 + pairing(F.c1, Q.c1),
    )


def bg_discriminant(E: SheafClass) -> Fraction:
    """Δ(E) = 2r·c2 − (r − 1)·c1²."""
    return 2 * E.rank * E.c2 - (E.rank - 1) * square(E.c1)


def sym_split(B: SplitBundle, m: int) -> SplitBundle:
    """
    Symmetric power of a split bundle.

    Args:
        B: Split bundle with s summands
        m: Positive degree

    Returns:
        SplitBundle with the C(s + m − 1, m) degree-m monomial summands
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise PreconditionError(f"symmetric power degree must be >= 1, got {m!r}")
    lattice = B.summands[0].lattice
    summands = []
    for multiset in combinations_with_replacement(range(B.rank), m):
        total = lattice.zero()
        for index in multiset:
            total = total + B.summands[index]
        summands.append(total)
    return SplitBundle(tuple(summands))


def tensor_split(A: SplitBundle, B: SplitBundle) -> SplitBundle:
    """Split bundle of all pairwise sums Lᵢ + Mⱼ."""
    same_lattice(A.summands[0], B.summands[0])
    return SplitBundle(tuple(a + b for a in A.summands for b in B.summands))


def dual_split(B: SplitBundle) -> SplitBundle:
    """Split bundle with every summand negated."""
    return SplitBundle(tuple(-line for line in B.summands))


def direct_sum_split(A: SplitBundle, B: SplitBundle) -> SplitBundle:
    """Concatenated summand list of A ⊕ B."""
    return SplitBundle(A.summands + B.summands)


def saturate_class(
    F: SheafClass,
    D: NumClass,
    eff: RationalCone,
    c2: Optional[Fraction] = None,
) -> SheafClass:
    """
    Class of a saturation of F whose c1 grows by an effective class D.

    Only rank and c1 take part in slope comparisons, so c2 is carried over from
    F unless the caller supplies the saturation's own c2.

    Args:
        F: Class of the subsheaf
        D: Effective class with c1(F_sat) = c1(F) + D
        eff: RationalCone of effective classes
        c2: Optional c2 of the saturation

    Returns:
        SheafClass of the same rank as F
    """
    if not contains(eff, D, "closed"):
        raise PreconditionError("saturation divisor is not effective")
    return SheafClass(F.rank, F.c1 + D, F.c2 if c2 is None else Fraction(c2))

