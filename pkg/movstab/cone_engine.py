"""
cone_engine.py - Rational polyhedral cones with both descriptions.

A RationalCone stores its extreme rays (plus a ± basis of its lineality space)
as generators and its facet functionals (plus ± equalities) as classes that act
through the intersection pairing. Both descriptions are computed eagerly by an
exact double description step (cddlib in rational arithmetic), so membership
tests are facet evaluations.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import cdd

from movstab.errors import InvariantViolation, PreconditionError
from movstab.lattice_core import NSLattice, NumClass, pairing, same_lattice
from movstab.utils import Vector, dot, inverse, mat_vec, nullspace, primitive_integer, rank, solve

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]


def _cdd_generators(constraints: Sequence[Sequence[Fraction]], dim: int) -> Tuple[List[Vector], List[Vector]]:
    """
    V-representation of {x : h·x ≥ 0 for every row h} from cddlib in exact mode.

    The H-representation rows are [b, h] for b + h·x ≥ 0, so a cone has b = 0.
    Returns (rays, lines); the origin vertex cddlib reports is dropped.
    """
    rows = [[0, *row] for row in constraints] or [[0] * (dim + 1)]
    matrix = cdd.Matrix(rows, number_type="fraction")
    matrix.rep_type = cdd.RepType.INEQUALITY
    generators = cdd.Polyhedron(matrix).get_generators()
    rays: List[Vector] = []
    lines: List[Vector] = []
    for i in range(generators.row_size):
        row = [Fraction(v) for v in generators[i]]
        if row[0] != 0:  # 1 = vertex, 0 = ray
            continue
        (lines if i in generators.lin_set else rays).append(tuple(row[1:]))
    return rays, lines


def _project_off(vector: Vector, basis: Sequence[Vector]) -> Vector:
    """Euclidean projection of vector onto the orthogonal complement of span(basis)."""
    if not basis:
        return vector
    gram = [[dot(u, v) for v in basis] for u in basis]
    coeffs = solve(gram, [dot(u, vector) for u in basis])
    return tuple(
        x - sum((c * u[k] for c, u in zip(coeffs, basis)), Fraction(0)) for k, x in enumerate(vector)
    )


def _extreme_rays(constraints: Sequence[Sequence[Fraction]], dim: int) -> Tuple[List[IntVector], List[IntVector]]:
    """
    Extreme rays and lineality basis of {x : h·x ≥ 0 for every row h}.

    cddlib does the double description. Its rays are only defined modulo the
    lineality space L, so they are projected onto L's Euclidean complement
    (the pointed section) and the basis of L comes from an exact nullspace;
    both make the output independent of cddlib's internal ordering.

    Args:
        constraints: Coordinate inequality rows
        dim: Ambient dimension

    Returns:
        (sorted primitive extreme rays, primitive lineality basis)
    """
    constraints = [tuple(Fraction(v) for v in row) for row in constraints if any(row)]
    lineality = [tuple(v) for v in nullspace(constraints, dim)]
    lineality_basis = [primitive_integer(v) for v in lineality]

    raw_rays, lines = _cdd_generators(constraints, dim)
    if len(lines) != len(lineality):
        raise InvariantViolation(f"cddlib lineality {len(lines)} != nullspace dimension {len(lineality)}")
    rays = set()
    for ray in raw_rays:
        projected = _project_off(ray, lineality)
        if any(projected):
            rays.add(primitive_integer(projected))
    return sorted(rays), lineality_basis


def _with_lineality(rays: Iterable[IntVector], lineality: Iterable[IntVector]) -> List[IntVector]:
    vectors = list(rays)
    for v in lineality:
        vectors.append(tuple(v))
        vectors.append(tuple(-x for x in v))
    return vectors


@dataclass(frozen=True)
class RationalCone:
    """Finitely generated rational polyhedral cone in a lattice."""

    lattice: NSLattice
    generators: Tuple[NumClass, ...]
    facets: Tuple[NumClass, ...]

    @property
    def dimension(self) -> int:
        return rank([g.coords for g in self.generators]) if self.generators else 0

    def is_full_dimensional(self) -> bool:
        return self.dimension == self.lattice.rank

    def __contains__(self, x: NumClass) -> bool:
        return contains(self, x, "closed")


def _from_generator_coords(lattice: NSLattice, coords: Sequence[Sequence[Fraction]]) -> RationalCone:
    dim = lattice.rank
    gram_inverse = inverse(lattice.gram)

    # Facets: rays of the dual in coordinate space, mapped to pairing functionals
    # through f = G⁻¹·h so that pairing(x, f) = h·x.
    dual_rays, dual_lineality = _extreme_rays(coords, dim)
    facet_coords = [
        primitive_integer(mat_vec(gram_inverse, h))
        for h in _with_lineality(dual_rays, dual_lineality)
    ]

    # Generators: re-derived from the facets, which drops redundant input rays.
    rows = [mat_vec(lattice.gram, f) for f in facet_coords]
    rays, lineality = _extreme_rays(rows, dim)
    generators = tuple(lattice.make(v) for v in _with_lineality(rays, lineality))
    facets = tuple(lattice.make(f) for f in _sorted_functionals(facet_coords))
    logger.debug("cone in %s: %d generators, %d facets", lattice.name, len(generators), len(facets))
    return RationalCone(lattice=lattice, generators=generators, facets=facets)


def _sorted_functionals(vectors: List[IntVector]) -> List[IntVector]:
    # Inequalities first (sorted), then ± equality pairs in their original order.
    seen = set(vectors)
    singles = sorted(v for v in vectors if tuple(-x for x in v) not in seen)
    pairs = [v for v in vectors if tuple(-x for x in v) in seen]
    return singles + pairs


def cone_from_generators(gens: Sequence[NumClass]) -> RationalCone:
    """
    Build a cone from generators by the double description method.

    Args:
        gens: Non-empty list of classes of one lattice

    Returns:
        RationalCone with primitive extreme rays and facet functionals
    """
    if not gens:
        raise PreconditionError("cone_from_generators needs at least one generator")
    lattice = same_lattice(*gens)
    return _from_generator_coords(lattice, [g.coords for g in gens])


def cone_from_facets(facets: Sequence[NumClass], lattice: Optional[NSLattice] = None) -> RationalCone:
    """
    Build the cone {x : pairing(x, f) ≥ 0 for every facet f}.

    Args:
        facets: Functionals acting through the pairing (may be empty)
        lattice: Required when facets is empty (the whole space)

    Returns:
        RationalCone in canonical form
    """
    if facets:
        lattice = same_lattice(*facets)
    elif lattice is None:
        raise PreconditionError("cone_from_facets needs a lattice when no facets are given")
    rows = [mat_vec(lattice.gram, f.coords) for f in facets]
    rays, lineality = _extreme_rays(rows, lattice.rank)
    return _from_generator_coords(lattice, _with_lineality(rays, lineality))


def dual_cone(cone: RationalCone) -> RationalCone:
    """
    Dual cone {y : pairing(y, x) ≥ 0 for all x in the cone}.

    The facets of the cone generate the dual; running them through the double
    description again puts the result in canonical form, so
    dual_cone(dual_cone(c)) == c.
    """
    return _from_generator_coords(cone.lattice, [f.coords for f in cone.facets])


def contains(cone: RationalCone, x: NumClass, mode: str = "closed") -> bool:
    """
    Cone membership.

    Args:
        cone: The cone
        x: Class of the cone's lattice
        mode: "closed" (all facets ≥ 0) or "interior" (all facets > 0)

    Returns:
        True if x lies in the cone (or in its topological interior)
    """
    same_lattice(x, cone.lattice.zero())
    if mode == "closed":
        return all(pairing(x, f) >= 0 for f in cone.facets)
    if mode == "interior":
        if not cone.is_full_dimensional():
            raise PreconditionError("cone not full-dimensional")
        return all(pairing(x, f) > 0 for f in cone.facets)
    raise PreconditionError(f"unknown membership mode {mode!r}")


def interior_point(cone: RationalCone) -> NumClass:
    """Sum of the generators: a point of the relative interior."""
    total = cone.lattice.zero()
    for g in cone.generators:
        total = total + g
    return total


def segment(a: NumClass, b: NumClass, t) -> NumClass:
    """
    Convex interpolation (1 − t)·a + t·b.

    Args:
        a: Start class
        b: End class
        t: Rational in [0, 1]

    Returns:
        The interpolated class
    """
    same_lattice(a, b)
    t = Fraction(t)
    if t < 0 or t > 1:
        raise PreconditionError(f"segment parameter {t} outside [0, 1]")
    return a * (1 - t) + b * t
