"""
surface_criteria.py - Surface criteria built on the cone and stability engines.

Zariski decomposition over a candidate curve list, nefness of square-zero
classes, the pseudo-effectivity trichotomy, Bogomolov-Gieseker verdicts, and
the numeric flatness, projective-flatness and torus-quotient gates.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from movstab.chern_calculus import SheafClass, bg_discriminant
from movstab.config import (
    EFFECTIVITY_AMPLE_ORTHOGONAL,
    EFFECTIVITY_NEGATIVE,
    EFFECTIVITY_POSITIVE,
    VERDICT_CONSISTENT,
    VERDICT_DUAL_NEF,
    VERDICT_E_NEF,
    VERDICT_EQUALITY_FAILS,
    VERDICT_FAMILY_INCOMPLETE,
    VERDICT_FLAT,
    VERDICT_FLAT_FORCED,
    VERDICT_GATE_PASSED,
    VERDICT_HYPOTHESES_MET,
    VERDICT_INCONSISTENT_FAMILY,
    VERDICT_NEF,
    VERDICT_NEF_COUNTEREXAMPLE,
    VERDICT_PROJ_FLAT,
)
from movstab.cone_engine import RationalCone, contains, dual_cone, interior_point
from movstab.errors import InvariantViolation, LatticeError, PreconditionError
from movstab.exact_lp import strict_interior_point
from movstab.lattice_core import (
    NumClass,
    hodge_bound,
    is_negative_definite,
    pairing,
    same_lattice,
    square,
)
from movstab.stability_engine import SubsheafFamily, is_semistable, is_stable
from movstab.utils import mat_vec, primitive_integer, solve

logger = logging.getLogger(__name__)


# ============================================================================
# ZARISKI DECOMPOSITION
# ============================================================================

@dataclass(frozen=True)
class ZariskiPair:
    """D = P + Σ aᵢNᵢ with P nef and a negative definite support."""

    positive: NumClass
    support: Tuple[Tuple[NumClass, Fraction], ...] = ()

    @property
    def negative(self) -> NumClass:
        total = self.positive.lattice.zero()
        for curve, coefficient in self.support:
            total = total + curve * coefficient
        return total


def _dedupe_curves(curves: Sequence[NumClass]) -> List[NumClass]:
    seen = set()
    unique = []
    for curve in curves:
        if any(c.denominator != 1 for c in curve.coords):
            raise LatticeError(f"curve class {curve.coords} has non-integer coordinates")
        if curve.coords not in seen:
            seen.add(curve.coords)
            unique.append(curve)
    return unique


def verify_zariski_pair(
    D: NumClass,
    pair: ZariskiPair,
    curves: Sequence[NumClass],
    eff: RationalCone,
    nef: Optional[RationalCone] = None,
) -> List[str]:
    """
    Independently re-check the five defining conditions of a Zariski pair.

    Args:
        D: The decomposed class
        pair: Candidate decomposition
        curves: Candidate curve list
        eff: Pseudo-effective cone
        nef: Nef cone (defaults to the dual of eff)

    Returns:
        Names of the failed checks (empty when the pair is valid)
    """
    nef = nef or dual_cone(eff)
    P = pair.positive
    failures = []
    if not contains(nef, P) or any(pairing(P, c) < 0 for c in curves):
        failures.append("positive part not nef")
    if any(coefficient <= 0 for _, coefficient in pair.support):
        failures.append("non-positive support coefficient")
    gram = [[pairing(a, b) for b, _ in pair.support] for a, _ in pair.support]
    if gram and not is_negative_definite(gram):
        failures.append("support Gram matrix not negative definite")
    if any(pairing(P, curve) != 0 for curve, _ in pair.support):
        failures.append("positive part not orthogonal to the support")
    if P + pair.negative != D:
        failures.append("P + N does not reconstruct D")
    return failures


def zariski_decomposition(
    D: NumClass,
    curves: Sequence[NumClass],
    eff: RationalCone,
    nef: Optional[RationalCone] = None,
) -> ZariskiPair:
    """
    Zariski decomposition by support growth over a candidate curve list.

    Each round adds every candidate curve C with P·C < 0 to the support and
    solves (D − Σ aᵢCᵢ)·Cⱼ = 0 exactly. The loop ends when P meets every
    candidate non-negatively; P must then lie in the nef cone.

    Args:
        D: Pseudo-effective class
        curves: Integral candidate curves (mixed signs allowed)
        eff: Pseudo-effective cone
        nef: Nef cone (defaults to the dual of eff)

    Returns:
        ZariskiPair with the support sorted by curve coordinates
    """
    lattice = same_lattice(D, eff.lattice.zero(), *curves)
    lattice.require_hyperbolic()
    if not contains(eff, D):
        raise PreconditionError("divisor not pseudo-effective")
    nef = nef or dual_cone(eff)
    candidates = _dedupe_curves(curves)

    support: List[NumClass] = []
    coefficients: Tuple[Fraction, ...] = ()
    positive = D
    rounds = 0
    while True:
        negatives = [c for c in candidates if c not in support and pairing(positive, c) < 0]
        if not negatives:
            break
        rounds += 1
        support.extend(negatives)
        gram = [[pairing(a, b) for b in support] for a in support]
        if not is_negative_definite(gram):
            raise PreconditionError("inconsistent curve data")
        coefficients = solve(gram, [pairing(D, c) for c in support])
        if any(a <= 0 for a in coefficients):
            raise PreconditionError("candidate list not irreducible-consistent")
        positive = D
        for curve, a in zip(support, coefficients):
            positive = positive - curve * a
        logger.debug("zariski round %d: support size %d", rounds, len(support))

    if not contains(nef, positive):
        raise PreconditionError("candidate list insufficient")

    pair = ZariskiPair(
        positive=positive,
        support=tuple(sorted(zip(support, coefficients), key=lambda item: item[0].coords)),
    )
    failures = verify_zariski_pair(D, pair, candidates, eff, nef)
    if failures:
        raise InvariantViolation(f"Zariski pair fails re-verification: {failures}")
    return pair


class NefVerdict(NamedTuple):
    label: str
    decomposition: ZariskiPair


def nef_from_zero_square(
    D: NumClass,
    a: NumClass,
    curves: Sequence[NumClass],
    eff: RationalCone,
    mov: Optional[RationalCone] = None,
) -> NefVerdict:
    """
    A pseudo-effective square-zero class orthogonal to a nonzero movable class is nef.

    Runs the Zariski decomposition; a nonzero negative part contradicts the
    hypotheses and is reported as an input-consistency counterexample.

    Args:
        D: Pseudo-effective class with D² = 0
        a: Nonzero movable class with a·D = 0
        curves: Candidate curves
        eff: Pseudo-effective cone
        mov: Movable cone (defaults to the dual of eff)

    Returns:
        NefVerdict("nef" | "counterexample-to-input-consistency", decomposition)
    """
    same_lattice(D, a)
    mov = mov or dual_cone(eff)
    if not contains(eff, D):
        raise PreconditionError("divisor not pseudo-effective")
    if square(D) != 0:
        raise PreconditionError(f"D² = {square(D)} is not zero")
    if a.is_zero():
        raise PreconditionError("polarization must be nonzero")
    if not contains(mov, a):
        raise PreconditionError("polarization not movable")
    if pairing(a, D) != 0:
        raise PreconditionError("α·D is not zero")

    pair = zariski_decomposition(D, curves, eff)
    label = VERDICT_NEF if not pair.support else VERDICT_NEF_COUNTEREXAMPLE
    return NefVerdict(label, pair)


# ============================================================================
# PSEUDO-EFFECTIVITY
# ============================================================================

class EffectivityVerdict(NamedTuple):
    label: str
    witness: Optional[NumClass] = None


def effectivity_classifier(D: NumClass, nef: RationalCone, eff: RationalCone) -> EffectivityVerdict:
    """
    Decide whether D^⊥ meets the ample cone, else which of ±D is pseudo-effective.

    Args:
        D: Nonzero class
        nef: Full-dimensional nef cone (its interior is the ample cone)
        eff: Pseudo-effective cone

    Returns:
        EffectivityVerdict with an integral ample witness H (H·D = 0) or the sign
    """
    lattice = same_lattice(D, nef.lattice.zero(), eff.lattice.zero())
    if D.is_zero():
        raise PreconditionError("degenerate class: D = 0")
    if not nef.is_full_dimensional():
        raise PreconditionError("cone not full-dimensional")

    functionals = [mat_vec(lattice.gram, f.coords) for f in nef.facets]
    orthogonal = mat_vec(lattice.gram, D.coords)
    point = strict_interior_point(functionals, [orthogonal], lattice.rank)
    if point is not None:
        witness = lattice.make(primitive_integer(point))
        return EffectivityVerdict(EFFECTIVITY_AMPLE_ORTHOGONAL, witness)

    sign = pairing(D, interior_point(nef))
    if sign == 0:
        raise InvariantViolation("interior point is orthogonal to D after an infeasible LP")
    oriented = D if sign > 0 else -D
    if not contains(eff, oriented):
        raise PreconditionError("nef and eff cones are inconsistent")
    return EffectivityVerdict(EFFECTIVITY_POSITIVE if sign > 0 else EFFECTIVITY_NEGATIVE)


# ============================================================================
# BOGOMOLOV-GIESEKER AND FLATNESS
# ============================================================================

class BGIVerdict(NamedTuple):
    label: str
    discriminant: Fraction
    semistable: bool
    equality: bool


def bgi_verdict(
    E: SheafClass, fam: SubsheafFamily, a: NumClass, mov: Optional[RationalCone] = None
) -> BGIVerdict:
    """
    Check Δ(E) ≥ 0 for a family that is semistable at a nonzero movable α.

    A semistable family with Δ < 0 cannot come from a geometric sheaf, so the
    family is reported as incomplete or non-geometric.
    """
    if E != fam.top:
        raise PreconditionError("sheaf class differs from the family top")
    if a.is_zero():
        raise PreconditionError("polarization must be nonzero")
    semistable = is_semistable(fam, a, mov)
    delta = bg_discriminant(E)
    label = VERDICT_FAMILY_INCOMPLETE if semistable and delta < 0 else VERDICT_CONSISTENT
    if label == VERDICT_FAMILY_INCOMPLETE:
        logger.warning("semistable family with Δ = %s < 0", delta)
    return BGIVerdict(label, delta, semistable, delta == 0)


@dataclass(frozen=True)
class FlatnessVerdict:
    label: str
    certified: bool
    derived: Dict[str, object] = field(default_factory=dict)


def flatness_surface(E: SheafClass, fam: SubsheafFamily, a: NumClass) -> FlatnessVerdict:
    """
    Numeric flatness certificate on a surface.

    Checks c1·α = 0, c1² − c2 = 0, α² > 0 and semistability in that order and
    names the first failure. On success Δ ≥ 0 is cross-checked, and the Hodge
    bound then forces c1² = c2 = 0 and c1 = 0.
    """
    same_lattice(E.c1, a)
    if E != fam.top:
        raise PreconditionError("sheaf class differs from the family top")
    c1_alpha = pairing(E.c1, a)
    c1_sq = square(E.c1)
    alpha_sq = square(a)
    if c1_alpha != 0:
        return FlatnessVerdict("not certified: c1·α ≠ 0", False)
    if c1_sq - E.c2 != 0:
        return FlatnessVerdict("not certified: c1² − c2 ≠ 0", False)
    if alpha_sq == 0:
        return FlatnessVerdict("not certified: α² = 0", False)
    if alpha_sq < 0:
        return FlatnessVerdict("not certified: α² < 0", False)
    if not is_semistable(fam, a):
        return FlatnessVerdict("not certified: not semistable", False)

    delta = bg_discriminant(E)
    if delta < 0:
        return FlatnessVerdict(VERDICT_INCONSISTENT_FAMILY, False, {"discriminant": delta})

    certificate = hodge_bound(E.c1, a)
    if certificate.value != 0:
        raise InvariantViolation("c1² = c2 with Δ ≥ 0 and c1² < 0 is contradictory")
    return FlatnessVerdict(
        VERDICT_FLAT,
        True,
        {"c1_squared": certificate.value, "c2": E.c2, "c1_zero": certificate.is_zero_class},
    )


@dataclass(frozen=True)
class ProjFlatnessVerdict:
    label: str
    certified: bool
    branch: Optional[str] = None
    details: Dict[str, object] = field(default_factory=dict)


def proj_flatness_surface(
    E: SheafClass,
    fam: SubsheafFamily,
    a: NumClass,
    nef: RationalCone,
    eff: RationalCone,
    curves: Sequence[NumClass] = (),
    mov: Optional[RationalCone] = None,
) -> ProjFlatnessVerdict:
    """
    Projective flatness from Δ = 0 for a stable sheaf, plus the nefness branch.

    When additionally c1·α = 0 and c1² = 0, the pseudo-effectivity trichotomy on
    c1 decides between c1 = 0 and nefness of E or of its dual.

    Args:
        E: The sheaf class (the family top)
        fam: Family stable at α
        a: Nonzero movable class
        nef: Nef cone
        eff: Pseudo-effective cone
        curves: Candidate curves for the Zariski step
        mov: Movable cone (defaults to nef)

    Returns:
        ProjFlatnessVerdict
    """
    if E != fam.top:
        raise PreconditionError("sheaf class differs from the family top")
    if a.is_zero():
        raise PreconditionError("polarization must be nonzero")
    mov = mov or nef
    if not is_stable(fam, a, mov):
        raise PreconditionError("E is not stable at α")

    delta = bg_discriminant(E)
    if delta != 0:
        return ProjFlatnessVerdict(VERDICT_EQUALITY_FAILS, False, details={"discriminant": delta})

    c1 = E.c1
    if pairing(c1, a) != 0 or square(c1) != 0:
        return ProjFlatnessVerdict(VERDICT_PROJ_FLAT, True)
    if c1.is_zero():
        return ProjFlatnessVerdict(VERDICT_PROJ_FLAT, True, branch=VERDICT_FLAT_FORCED)

    verdict = effectivity_classifier(c1, nef, eff)
    if verdict.label == EFFECTIVITY_AMPLE_ORTHOGONAL:
        return ProjFlatnessVerdict(
            VERDICT_PROJ_FLAT, True, branch=VERDICT_FLAT_FORCED, details={"witness": verdict.witness}
        )
    oriented = c1 if verdict.label == EFFECTIVITY_POSITIVE else -c1
    nef_verdict = nef_from_zero_square(oriented, a, curves, eff, mov)
    if nef_verdict.label != VERDICT_NEF:
        branch = nef_verdict.label
    else:
        branch = VERDICT_E_NEF if verdict.label == EFFECTIVITY_POSITIVE else VERDICT_DUAL_NEF
    return ProjFlatnessVerdict(VERDICT_PROJ_FLAT, True, branch=branch, details={"effectivity": verdict.label})


# ============================================================================
# HIGHER-DIMENSIONAL GATES
# ============================================================================

class LambdaLocus(NamedTuple):
    """Set of λ with c1sqH − λ·c2H = 0: "none", "single" (value) or "all"."""

    kind: str
    value: Optional[Fraction]
    upper: Optional[Fraction]
    in_range: bool


def _admissible_upper(rank: int) -> Optional[Fraction]:
    return None if rank == 1 else Fraction(2 * rank, rank - 1)


def flatness_coefficient_locus(rank: int, c1sqH, c2H) -> LambdaLocus:
    """
    Exact set of λ for which c1sqH − λ·c2H vanishes, with the range (0, 2r/(r − 1)).

    Args:
        rank: Sheaf rank r ≥ 1 (r = 1 leaves the range unbounded)
        c1sqH: c1²·H^{n−2}
        c2H: c2·H^{n−2}

    Returns:
        LambdaLocus; in_range tells whether some admissible λ lies in the locus
    """
    if rank < 1:
        raise PreconditionError("rank must be positive")
    c1sqH, c2H = Fraction(c1sqH), Fraction(c2H)
    upper = _admissible_upper(rank)
    if c2H != 0:
        value = c1sqH / c2H
        in_range = value > 0 and (upper is None or value < upper)
        return LambdaLocus("single", value, upper, in_range)
    if c1sqH == 0:
        return LambdaLocus("all", None, upper, True)
    return LambdaLocus("none", None, upper, False)


@dataclass(frozen=True)
class GateVerdict:
    label: str
    failures: Tuple[str, ...] = ()
    details: Dict[str, object] = field(default_factory=dict)


def flatness_higher(n: int, c1H, c1sqH, c2H, rank: Optional[int] = None) -> GateVerdict:
    """
    Numeric flatness gate in dimension n from precomputed intersection numbers.

    Args:
        n: Dimension, at least 2
        c1H: c1·H^{n−1}
        c1sqH: c1²·H^{n−2} (on the chosen resolution)
        c2H: c2·H^{n−2}
        rank: Optional rank; adds the λ ∈ {1, 2} vanishing checks

    Returns:
        GateVerdict "gate-passed" or "gate-failed" with the failed equalities
    """
    if n < 2:
        raise PreconditionError("dimension must be at least 2")
    c1H, c1sqH, c2H = Fraction(c1H), Fraction(c1sqH), Fraction(c2H)
    failures = []
    if c1H != 0:
        failures.append("c1·H^(n-1) ≠ 0")
    if c1sqH - c2H != 0:
        failures.append("(c1² − c2)·H^(n-2) ≠ 0")
    details: Dict[str, object] = {}
    if rank is not None:
        details["lambda_vanishes"] = {lam: c1sqH - lam * c2H == 0 for lam in (1, 2)}
        details["locus"] = flatness_coefficient_locus(rank, c1sqH, c2H)
    label = VERDICT_GATE_PASSED if not failures else "gate-failed"
    return GateVerdict(label, tuple(failures), details)


def torus_quotient_gate(n: int, c2H, kx_numerically_trivial: bool) -> GateVerdict:
    """
    Numeric hypotheses of the torus-quotient characterization.

    Args:
        n: Dimension, at least 2
        c2H: c2(X̃)·H^{n−2}
        kx_numerically_trivial: Whether K_X ≡ 0

    Returns:
        GateVerdict "hypotheses-met" or "hypotheses-not-met"
    """
    if n < 2:
        raise PreconditionError("dimension must be at least 2")
    failures = []
    if Fraction(c2H) != 0:
        failures.append("c2·H^(n-2) ≠ 0")
    if not kx_numerically_trivial:
        failures.append("K_X not numerically trivial")
    if failures:
        return GateVerdict("hypotheses-not-met", tuple(failures))
    return GateVerdict(
        VERDICT_HYPOTHESES_MET,
        details={"consequence": "X admits a quasi-étale cover by an Abelian variety"},
    )
