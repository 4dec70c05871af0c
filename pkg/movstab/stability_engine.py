"""
stability_engine.py - Slope stability over finite destabilizer families.

A SubsheafFamily lists the candidate subsheaves of a top class E together with
an optional containment DAG. Every stability notion (μ^max, μ^max,sc,
(semi)stability, HN and JH filtrations, openness radii, stability intervals
along segments, walls and chambers) is evaluated exactly over that family.

Member indices run from 0 to len(members) − 1; the top class E has index
len(members) and is written "top" in bundle files.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

from movstab.chern_calculus import SheafClass, SplitBundle, tensor_class
from movstab.cone_engine import RationalCone, cone_from_facets, contains, segment
from movstab.config import POINT_STABLE, POINT_STRICTLY_SEMISTABLE, POINT_UNSTABLE
from movstab.errors import InvariantViolation, PreconditionError
from movstab.lattice_core import NumClass, pairing, same_lattice

logger = logging.getLogger(__name__)

MODE_HN = "hn"
MODE_REFINED = "refined"
MODE_JH = "jh"


# ============================================================================
# DATA MODEL
# ============================================================================

@dataclass(frozen=True)
class SubsheafFamily:
    """
    Finite family of candidate subsheaves of a top class.

    Attributes:
        top: The class E
        members: Candidate subsheaf classes
        contains: Edges (i, j) meaning member i ⊂ member j; j == len(members) is E.
            None means no containment data at all.
        saturated: When set, no two members may share (rank, c1)
    """

    top: SheafClass
    members: Tuple[SheafClass, ...] = ()
    contains: Optional[Tuple[Tuple[int, int], ...]] = None
    saturated: bool = False

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if members:
            same_lattice(self.top.c1, *(m.c1 for m in members))

        for i, member in enumerate(members):
            if member.rank > self.top.rank:
                raise PreconditionError(
                    f"member {i} has rank {member.rank} > rank(E) = {self.top.rank}"
                )

        if self.contains is not None:
            edges = tuple(sorted({(int(i), int(j)) for i, j in self.contains}))
            top_index = len(members)
            for i, j in edges:
                if not 0 <= i < top_index or not 0 <= j <= top_index:
                    raise PreconditionError(f"containment edge ({i}, {j}) is out of range")
                if self.class_of(i).rank >= self.class_of(j).rank:
                    raise PreconditionError(
                        f"containment edge ({i}, {j}) does not strictly increase rank"
                    )
            object.__setattr__(self, "contains", edges)

        if self.saturated:
            seen: Dict[Tuple, int] = {}
            for i, member in enumerate(members):
                key = (member.rank, member.c1.coords)
                if key in seen:
                    raise PreconditionError(
                        f"saturated family repeats (rank, c1) in members {seen[key]} and {i}"
                    )
                seen[key] = i

    @property
    def top_index(self) -> int:
        return len(self.members)

    @property
    def lattice(self):
        return self.top.lattice

    def class_of(self, index: int) -> SheafClass:
        return self.top if index == self.top_index else self.members[index]

    def strict_members(self) -> List[int]:
        """Indices of members of rank strictly below rank(E)."""
        return [i for i, m in enumerate(self.members) if m.rank < self.top.rank]

    def reachability(self) -> Dict[int, Set[int]]:
        """Transitive closure of the containment DAG (node -> strictly larger nodes)."""
        successors: Dict[int, Set[int]] = {i: set() for i in range(self.top_index + 1)}
        for i, j in self.contains or ():
            successors[i].add(j)
        # Ranks strictly increase along edges, so processing by decreasing rank
        # visits every successor before its predecessors.
        order = sorted(range(self.top_index + 1), key=lambda k: -self.class_of(k).rank)
        closure: Dict[int, Set[int]] = {}
        for node in order:
            reach = set(successors[node])
            for nxt in successors[node]:
                reach |= closure[nxt]
            closure[node] = reach
        return closure


class MaxResult(NamedTuple):
    """A maximal slope and the index attaining it (top_index means E)."""

    value: Fraction
    witness: int


@dataclass(frozen=True)
class Filtration:
    """Chain 0 ⊊ E₁ ⊊ ... ⊊ E_k = E with its quotient classes and slopes."""

    steps: Tuple[int, ...]
    quotients: Tuple[SheafClass, ...]
    slopes: Tuple[Fraction, ...]
    mode: str
    ties: Tuple[Tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class Interval:
    """Sub-interval of [0, 1] with open or closed endpoints; may be empty."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x: Fraction) -> bool:
        if self.is_empty():
            return False
        above = x > self.lo or (x == self.lo and self.lo_closed)
        below = x < self.hi or (x == self.hi and self.hi_closed)
        return above and below

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)


UNIT_INTERVAL = Interval(Fraction(0), Fraction(1))
EMPTY_INTERVAL = Interval(Fraction(1), Fraction(0), False, False)


class Wall(NamedTuple):
    member: int
    epsilon: Fraction


class WallHyperplane(NamedTuple):
    member: int
    functional: NumClass


@dataclass(frozen=True)
class SegmentReport:
    """Exact stability sets along (1 − ε)·a + ε·b, ε ∈ [0, 1]."""

    stable: Interval
    semistable: Interval
    walls: Tuple[Wall, ...]
    degenerate: Tuple[int, ...]
    points: Tuple[Tuple[Fraction, str], ...]


class HomVerdict(NamedTuple):
    certified: bool
    reason: str


# ============================================================================
# SLOPES
# ============================================================================

def slope(E: SheafClass, a: NumClass) -> Fraction:
    """μ_α(E) = (c1(E)·α) / rank(E)."""
    return pairing(E.c1, a) / E.rank


def check_polarization(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> None:
    """
    Validate a polarization before any slope comparison.

    Args:
        fam: Family whose lattice α must live in
        a: The polarization
        mov: Movable cone; when given, α must lie in it
    """
    same_lattice(fam.top.c1, a)
    if mov is not None and not contains(mov, a, "closed"):
        raise PreconditionError("polarization not movable")
    if a.is_zero():
        logger.warning("polarization is zero: every family is semistable")


def _best(fam: SubsheafFamily, indices: Sequence[int], a: NumClass) -> MaxResult:
    # Strict comparison: among equal slopes the first index scanned wins.
    best: Optional[MaxResult] = None
    for index in indices:
        value = slope(fam.class_of(index), a)
        if best is None or value > best.value:
            best = MaxResult(value, index)
    return best


def mu_max(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> MaxResult:
    """
    Maximal slope over the members and E itself.

    The witness is the lowest member index attaining the maximum; E is the
    witness only when no member attains it. Ties are not ordered by rank or
    c1 here (that ordering belongs to the HN step choice): on the running
    P¹×P¹ example at α = (1, 1) the two rank-1 members and E all have slope 1
    and the witness is the first member, which neither the higher-rank rule
    (E) nor the smallest-c1 rule (the second member) would pick.

    Args:
        fam: The family
        a: Movable polarization
        mov: Optional movable cone for the membership check

    Returns:
        MaxResult(value, witness)
    """
    check_polarization(fam, a, mov)
    return _best(fam, list(range(fam.top_index + 1)), a)


def mu_max_sc(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> MaxResult:
    """Maximal slope over members of rank strictly below rank(E)."""
    check_polarization(fam, a, mov)
    strict = fam.strict_members()
    if not strict:
        raise PreconditionError("empty strict family")
    return _best(fam, strict, a)


def is_semistable(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> bool:
    """Every member has slope at most μ_α(E)."""
    return mu_max(fam, a, mov).value <= slope(fam.top, a)


def is_stable(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> bool:
    """Every strict-rank member has slope below μ_α(E); vacuous without strict members."""
    check_polarization(fam, a, mov)
    if not fam.strict_members():
        return True
    return mu_max_sc(fam, a).value < slope(fam.top, a)


def destabilizer_filter(
    fam: SubsheafFamily, b: NumClass, c, mov: Optional[RationalCone] = None
) -> List[int]:
    """Indices (input order) of members with μ_β(F) ≥ c."""
    check_polarization(fam, b, mov)
    bound = Fraction(c)
    return [i for i, member in enumerate(fam.members) if slope(member, b) >= bound]


# ============================================================================
# FILTRATIONS
# ============================================================================

def quotient_class(sub: Optional[SheafClass], sup: SheafClass) -> SheafClass:
    """Class of sup/sub from the Whitney relation (sub=None means the zero sheaf)."""
    if sub is None:
        return sup
    c1 = sup.c1 - sub.c1
    c2 = sup.c2 - sub.c2 - pairing(sub.c1, c1)
    return SheafClass(sup.rank - sub.rank, c1, c2)


def _step_key(fam: SubsheafFamily, current: Optional[int], candidate: int, a: NumClass):
    sub = None if current is None else fam.class_of(current)
    quotient = quotient_class(sub, fam.class_of(candidate))
    cls = fam.class_of(candidate)
    return (slope(quotient, a), cls.rank, tuple(-c for c in cls.c1.coords))


def _eligible(fam: SubsheafFamily, closure: Dict[int, Set[int]]) -> Set[int]:
    top = fam.top_index
    return {i for i in range(top) if top in closure[i]} | {top}


def _build_filtration(
    fam: SubsheafFamily, steps: Sequence[int], a: NumClass, mode: str, ties=()
) -> Filtration:
    quotients = []
    previous = None
    for index in steps:
        quotients.append(quotient_class(previous, fam.class_of(index)))
        previous = fam.class_of(index)
    slopes = tuple(slope(q, a) for q in quotients)
    return Filtration(tuple(steps), tuple(quotients), slopes, mode, tuple(ties))


def hn_filtration(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> Filtration:
    """
    Greedy Harder-Narasimhan filtration over the containment DAG.

    Starting from 0, each step picks, among the members reachable from the
    current step (in the transitive closure) that still reach E, the one whose
    quotient has the largest slope; ties go to larger rank, then to the
    lexicographically smallest c1, then to the lowest index. Candidates that
    share the winner's quotient slope and rank are reported as ties.

    Args:
        fam: The family
        a: Movable polarization
        mov: Optional movable cone

    Returns:
        Filtration in mode "hn" (strictly decreasing slopes) or "refined"
    """
    check_polarization(fam, a, mov)
    closure = fam.reachability()
    eligible = _eligible(fam, closure)
    top = fam.top_index

    steps: List[int] = []
    ties: List[Tuple[int, ...]] = []
    current: Optional[int] = None
    while current != top:
        candidates = sorted(eligible if current is None else closure[current] & eligible)
        keyed = [(_step_key(fam, current, c, a), c) for c in candidates]
        best_key = max(key for key, _ in keyed)
        winners = [c for key, c in keyed if key == best_key]
        chosen = winners[0]
        tied = tuple(c for key, c in keyed if key[:2] == best_key[:2])
        if len(tied) > 1:
            logger.warning("HN step %d: tied candidates %s", len(steps) + 1, list(tied))
            ties.append(tied)
        steps.append(chosen)
        current = chosen

    filtration = _build_filtration(fam, steps, a, MODE_HN, ties)
    slopes = filtration.slopes
    if any(later > earlier for earlier, later in zip(slopes, slopes[1:])):
        raise InvariantViolation(f"HN quotient slopes increase: {[str(s) for s in slopes]}")
    if any(later == earlier for earlier, later in zip(slopes, slopes[1:])):
        filtration = _build_filtration(fam, steps, a, MODE_REFINED, ties)
    return filtration


def jh_filtration(fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None) -> Filtration:
    """
    Jordan-Hölder filtration: a longest chain with every quotient slope μ_α(E).

    Args:
        fam: A family semistable at α
        a: Movable polarization
        mov: Optional movable cone

    Returns:
        Filtration in mode "jh"
    """
    if not is_semistable(fam, a, mov):
        raise PreconditionError("jh_filtration needs a semistable family")
    top = fam.top_index
    if is_stable(fam, a):
        return _build_filtration(fam, [top], a, MODE_JH)

    target = slope(fam.top, a)
    closure = fam.reachability()
    nodes = sorted(
        (i for i in _eligible(fam, closure) if i != top and slope(fam.class_of(i), a) == target),
        key=lambda i: (fam.class_of(i).rank, i),
    )
    if not nodes:
        raise PreconditionError("family not JH-closed")

    # Longest chain ending at each node, by increasing rank; ties keep the
    # lexicographically smallest index sequence.
    best: Dict[int, Tuple[int, ...]] = {}
    for node in nodes:
        chain = (node,)
        for prev in nodes:
            if prev in best and node in closure[prev]:
                candidate = best[prev] + (node,)
                if len(candidate) > len(chain) or (len(candidate) == len(chain) and candidate < chain):
                    chain = candidate
        best[node] = chain
    longest = min(best.values(), key=lambda c: (-len(c), c))
    filtration = _build_filtration(fam, list(longest) + [top], a, MODE_JH)
    if any(s != target for s in filtration.slopes):
        raise InvariantViolation("JH quotient slopes differ from μ(E)")
    return filtration


def mu_min_quotient(filtration: Filtration) -> Fraction:
    """Slope of the last quotient of an HN filtration (the minimal one)."""
    return filtration.slopes[-1]


# ============================================================================
# OPENNESS AND SEGMENTS
# ============================================================================

def openness_epsilon(
    fam: SubsheafFamily, a: NumClass, b: NumClass, mov: Optional[RationalCone] = None
) -> Fraction:
    """
    Exact radius e such that E stays stable at (1 − ε)·a + ε·b for all ε < e.

    With d = μ_α(E) − μ^max,sc_α and g = max(0, μ^max_β − μ_β(E)) this is
    e = d / (d + g); e = 1 when g = 0 or when the family has no strict member.

    Args:
        fam: Family stable at a
        a: Polarization where E is stable
        b: Movable direction
        mov: Optional movable cone

    Returns:
        The rational e in (0, 1]
    """
    if not is_stable(fam, a, mov):
        raise PreconditionError("openness_epsilon needs E stable at the base polarization")
    check_polarization(fam, b, mov)
    if not fam.strict_members():
        return Fraction(1)

    d = slope(fam.top, a) - mu_max_sc(fam, a).value
    g = max(Fraction(0), mu_max(fam, b).value - slope(fam.top, b))
    e = d / (d + g)
    if not is_stable(fam, segment(a, b, e / 2)):
        raise InvariantViolation(f"stability fails inside the openness radius {e}")
    return e


def _affine_gap(fam: SubsheafFamily, index: int, a: NumClass, b: NumClass) -> Tuple[Fraction, Fraction]:
    member = fam.members[index]
    u = slope(fam.top, a) - slope(member, a)
    v = slope(fam.top, b) - slope(member, b)
    return u, v


def _positive_set(u: Fraction, v: Fraction, strict: bool) -> Interval:
    """{ε ∈ [0, 1] : u + ε(v − u) > 0} (or ≥ 0 when not strict)."""
    k = v - u
    if k == 0:
        holds = u > 0 if strict else u >= 0
        return UNIT_INTERVAL if holds else EMPTY_INTERVAL
    root = -u / k
    if k > 0:
        if root > 1 or (strict and root == 1):
            return EMPTY_INTERVAL
        if root < 0:
            return UNIT_INTERVAL
        return Interval(root, Fraction(1), not strict, True)
    if root < 0 or (strict and root == 0):
        return EMPTY_INTERVAL
    if root > 1:
        return UNIT_INTERVAL
    return Interval(Fraction(0), root, True, not strict)


def _label(fam: SubsheafFamily, gaps: Dict[int, Tuple[Fraction, Fraction]], eps: Fraction) -> str:
    strict = set(fam.strict_members())
    values = {i: u + eps * (v - u) for i, (u, v) in gaps.items()}
    semistable = all(value >= 0 for value in values.values())
    stable = all(value > 0 for i, value in values.items() if i in strict)
    if not semistable:
        return POINT_UNSTABLE
    return POINT_STABLE if stable else POINT_STRICTLY_SEMISTABLE


def segment_stability(
    fam: SubsheafFamily,
    a: NumClass,
    b: NumClass,
    mov: Optional[RationalCone] = None,
    workers: int = 1,
) -> SegmentReport:
    """
    Exact stable and semistable parameter sets along the segment from a to b.

    Each member F contributes the affine gap g_F(ε) = μ(E) − μ(F) at
    (1 − ε)·a + ε·b. The stable set intersects {g_F > 0} over strict-rank
    members; the semistable set intersects {g_F ≥ 0} over all members.

    Args:
        fam: The family
        a: Start polarization (movable)
        b: End polarization (movable)
        mov: Optional movable cone
        workers: Threads used for the per-member gap evaluation

    Returns:
        SegmentReport with both intervals, walls, degenerate members and
        labelled points
    """
    check_polarization(fam, a, mov)
    check_polarization(fam, b, mov)
    indices = list(range(len(fam.members)))
    if workers > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(lambda i: _affine_gap(fam, i, a, b), indices))
    else:
        pairs = [_affine_gap(fam, i, a, b) for i in indices]
    gaps = dict(zip(indices, pairs))
    strict = set(fam.strict_members())

    stable = UNIT_INTERVAL
    semistable = UNIT_INTERVAL
    walls: List[Wall] = []
    degenerate: List[int] = []
    for i in indices:
        u, v = gaps[i]
        semistable = semistable.intersect(_positive_set(u, v, strict=False))
        if i in strict:
            stable = stable.intersect(_positive_set(u, v, strict=True))
        if u == 0 and v == 0:
            degenerate.append(i)
        elif u != v:
            root = -u / (v - u)
            if 0 <= root <= 1:
                walls.append(Wall(i, root))
    if stable.is_empty():
        stable = EMPTY_INTERVAL
    if semistable.is_empty():
        semistable = EMPTY_INTERVAL

    marks = {Fraction(0), Fraction(1)} | {w.epsilon for w in walls}
    for interval in (stable, semistable):
        if not interval.is_empty():
            marks |= {interval.lo, interval.hi}
    points = tuple((eps, _label(fam, gaps, eps)) for eps in sorted(marks))

    # Both sets are convex; cross-check the midpoint of the semistable one.
    if not semistable.is_empty():
        middle = (semistable.lo + semistable.hi) / 2
        if _label(fam, gaps, middle) == POINT_UNSTABLE:
            raise InvariantViolation("semistable set is not an interval")

    return SegmentReport(
        stable=stable,
        semistable=semistable,
        walls=tuple(sorted(walls, key=lambda w: (w.epsilon, w.member))),
        degenerate=tuple(degenerate),
        points=points,
    )


# ============================================================================
# WALLS AND CHAMBERS
# ============================================================================

def _normalized_difference(fam: SubsheafFamily, index: int) -> NumClass:
    member = fam.members[index]
    return member.c1 / member.rank - fam.top.c1 / fam.top.rank


def wall_hyperplanes(fam: SubsheafFamily) -> List[WallHyperplane]:
    """
    Wall functionals c1(F)/r(F) − c1(E)/r(E) for strict-rank members.

    μ_α(F) − μ_α(E) equals the pairing of α with the functional; members whose
    functional vanishes never wall and are dropped.
    """
    walls = []
    for i in fam.strict_members():
        functional = _normalized_difference(fam, i)
        if not functional.is_zero():
            walls.append(WallHyperplane(i, functional))
    return walls


def stabilizing_cone(fam: SubsheafFamily, mov: RationalCone) -> RationalCone:
    """
    Closed cone of movable classes at which E is semistable.

    Intersects Mov with the half-spaces pairing(α, −w_F) ≥ 0 for every member.
    """
    same_lattice(fam.top.c1, mov.lattice.zero())
    half_spaces = [-_normalized_difference(fam, i) for i in range(len(fam.members))]
    half_spaces = [h for h in half_spaces if not h.is_zero()]
    return cone_from_facets(list(mov.facets) + half_spaces, mov.lattice)


def chamber_signature(
    fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None
) -> Tuple[int, ...]:
    """Signs of μ_α(F) − μ_α(E) per strict member; equal signatures share a chamber."""
    check_polarization(fam, a, mov)
    mu_e = slope(fam.top, a)
    signs = []
    for i in fam.strict_members():
        diff = slope(fam.members[i], a) - mu_e
        signs.append((diff > 0) - (diff < 0))
    return tuple(signs)


# ============================================================================
# DERIVED FAMILIES
# ============================================================================

def tensor_family(fam_e: SubsheafFamily, fam_f: SubsheafFamily) -> SubsheafFamily:
    """
    Product-closed family of E ⊗ F.

    Members are A ⊗ B for A in fam_e ∪ {E} and B in fam_f ∪ {F}, except E ⊗ F
    itself (the new top). A ⊗ B ⊂ A' ⊗ B' whenever A ⊆ A' and B ⊆ B' with a
    strict rank increase.
    """
    closure_e = fam_e.reachability()
    closure_f = fam_f.reachability()
    top_pair = (fam_e.top_index, fam_f.top_index)
    pairs = [
        (i, j)
        for i in range(fam_e.top_index + 1)
        for j in range(fam_f.top_index + 1)
        if (i, j) != top_pair
    ]
    nodes = pairs + [top_pair]
    classes = [tensor_class(fam_e.class_of(i), fam_f.class_of(j)) for i, j in nodes]

    def below(closure, x, y):
        return x == y or y in closure[x]

    edges = []
    for p, (i, j) in enumerate(pairs):
        for q, (k, m) in enumerate(nodes):
            if p == q or classes[p].rank >= classes[q].rank:
                continue
            if below(closure_e, i, k) and below(closure_f, j, m):
                edges.append((p, q))
    return SubsheafFamily(top=classes[-1], members=tuple(classes[:-1]), contains=tuple(edges))


def split_family(bundle: SplitBundle) -> SubsheafFamily:
    """
    Family of all partial direct sums of a split bundle.

    Members are ⊕_{i∈S} Lᵢ over non-empty proper subsets S, ordered by size then
    lexicographically, with inclusion edges S ⊂ S'.
    """
    size = bundle.rank
    subsets = [s for k in range(1, size) for s in combinations(range(size), k)]
    members = tuple(SplitBundle(tuple(bundle.summands[i] for i in s)).sheaf_class() for s in subsets)
    top_index = len(subsets)
    edges = []
    for p, small in enumerate(subsets):
        for q, large in enumerate(subsets):
            if len(small) < len(large) and set(small) <= set(large):
                edges.append((p, q))
        edges.append((p, top_index))
    return SubsheafFamily(top=bundle.sheaf_class(), members=members, contains=tuple(edges))


def hom_vanishes(
    fam_f: SubsheafFamily, fam_e: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None
) -> HomVerdict:
    """
    Certify Hom(F, E) = 0 from semistability and μ_α(F) > μ_α(E).

    Args:
        fam_f: Family of the source sheaf F
        fam_e: Family of the target sheaf E
        a: Movable polarization

    Returns:
        HomVerdict(certified, reason)
    """
    if not is_semistable(fam_f, a, mov):
        return HomVerdict(False, "source not semistable")
    if not is_semistable(fam_e, a, mov):
        return HomVerdict(False, "target not semistable")
    if slope(fam_f.top, a) <= slope(fam_e.top, a):
        return HomVerdict(False, "slope of source does not exceed slope of target")
    return HomVerdict(True, "semistable with decreasing slopes")
