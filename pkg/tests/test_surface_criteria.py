"""Tests for surface_criteria: Zariski, effectivity, BG and the flatness gates."""

import random
from fractions import Fraction

import pytest
from strategies import blowup_model, effective_combination, rational

from movstab.chern_calculus import SheafClass, SplitBundle
from movstab.cone_engine import cone_from_generators, contains, dual_cone
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
    VERDICT_PROJ_FLAT,
)
from movstab.errors import LatticeError, PreconditionError
from movstab.lattice_core import pairing
from movstab.stability_engine import SubsheafFamily, split_family
from movstab.surface_criteria import (
    ZariskiPair,
    bgi_verdict,
    effectivity_classifier,
    flatness_coefficient_locus,
    flatness_higher,
    flatness_surface,
    nef_from_zero_square,
    proj_flatness_surface,
    torus_quotient_gate,
    verify_zariski_pair,
    zariski_decomposition,
)


@pytest.fixture
def blowup_curves(blowup):
    return [blowup.make([0, 1]), blowup.make([1, -1])]


def _bare(E):
    return SubsheafFamily(top=E)


# ============================================================================
# ZARISKI DECOMPOSITION
# ============================================================================


def test_zariski_contracts_the_exceptional_curve(blowup, blowup_eff, blowup_curves):
    pair = zariski_decomposition(blowup.make([2, 1]), blowup_curves, blowup_eff)
    assert pair.positive == blowup.make([2, 0])
    assert [(c.coords, a) for c, a in pair.support] == [((0, 1), 1)]
    assert pair.negative == blowup.make([0, 1])


def test_zariski_second_example(blowup, blowup_eff, blowup_curves):
    pair = zariski_decomposition(blowup.make([1, 1]), blowup_curves, blowup_eff)
    assert pair.positive == blowup.make([1, 0])


def test_zariski_of_nef_class_is_trivial(blowup, blowup_eff, blowup_curves):
    pair = zariski_decomposition(blowup.make([1, 0]), blowup_curves, blowup_eff)
    assert pair.positive == blowup.make([1, 0])
    assert pair.support == ()


def test_zariski_errors(blowup, blowup_eff, blowup_curves):
    with pytest.raises(PreconditionError, match="not pseudo-effective"):
        zariski_decomposition(blowup.make([0, -1]), blowup_curves, blowup_eff)
    with pytest.raises(PreconditionError, match="candidate list insufficient"):
        zariski_decomposition(blowup.make([2, 1]), [], blowup_eff)
    with pytest.raises(PreconditionError, match="inconsistent curve data"):
        zariski_decomposition(blowup.make([2, 1]), blowup_curves + [blowup.make([1, 3])], blowup_eff)
    with pytest.raises(LatticeError, match="non-integer"):
        zariski_decomposition(blowup.make([2, 1]), [blowup.make([Fraction(1, 2), 0])], blowup_eff)


def test_verify_names_failed_conditions(blowup, blowup_eff, blowup_curves):
    D = blowup.make([2, 1])
    bogus = ZariskiPair(positive=D, support=((blowup.make([0, 1]), Fraction(-1)),))
    failures = verify_zariski_pair(D, bogus, blowup_curves, blowup_eff)
    assert "positive part not nef" in failures
    assert "non-positive support coefficient" in failures
    assert "positive part not orthogonal to the support" in failures
    assert "P + N does not reconstruct D" in failures
    assert "support Gram matrix not negative definite" not in failures


def test_zariski_on_random_blowups():
    rng = random.Random(13)
    for _ in range(100):
        lattice, eff, curves = blowup_model(rng, rng.randint(1, 4))
        nef = dual_cone(eff)
        D = effective_combination(rng, curves)
        pair = zariski_decomposition(D, curves, eff, nef)
        assert verify_zariski_pair(D, pair, curves, eff, nef) == []
        assert contains(nef, pair.positive)

        shuffled = list(curves)
        rng.shuffle(shuffled)
        assert zariski_decomposition(D, shuffled, eff, nef) == pair

        again = zariski_decomposition(pair.positive, curves, eff, nef)
        assert again.positive == pair.positive
        assert again.support == ()


# ============================================================================
# NEFNESS AND EFFECTIVITY
# ============================================================================


def test_square_zero_class_is_nef(blowup, blowup_eff, blowup_curves):
    D = blowup.make([1, -1])
    verdict = nef_from_zero_square(D, blowup.make([1, -1]), blowup_curves, blowup_eff)
    assert verdict.label == VERDICT_NEF
    assert verdict.decomposition.support == ()


def test_nef_from_zero_square_preconditions(blowup, blowup_eff, blowup_curves):
    with pytest.raises(PreconditionError, match="not zero"):
        nef_from_zero_square(blowup.make([1, 0]), blowup.make([1, 0]), blowup_curves, blowup_eff)
    with pytest.raises(PreconditionError, match="nonzero"):
        nef_from_zero_square(blowup.make([1, -1]), blowup.zero(), blowup_curves, blowup_eff)
    with pytest.raises(PreconditionError, match="α·D"):
        nef_from_zero_square(blowup.make([1, -1]), blowup.make([1, 0]), blowup_curves, blowup_eff)
    with pytest.raises(PreconditionError, match="not movable"):
        nef_from_zero_square(blowup.make([1, -1]), blowup.make([-1, 1]), blowup_curves, blowup_eff)


def test_effectivity_ample_orthogonal(blowup, blowup_eff, blowup_nef):
    verdict = effectivity_classifier(blowup.make([1, -2]), blowup_nef, blowup_eff)
    assert verdict.label == EFFECTIVITY_AMPLE_ORTHOGONAL
    assert verdict.witness == blowup.make([2, -1])
    assert pairing(verdict.witness, blowup.make([1, -2])) == 0


def test_effectivity_signs(blowup, blowup_eff, blowup_nef):
    assert effectivity_classifier(blowup.make([0, 1]), blowup_nef, blowup_eff).label == EFFECTIVITY_POSITIVE
    verdict = effectivity_classifier(blowup.make([0, -1]), blowup_nef, blowup_eff)
    assert verdict.label == EFFECTIVITY_NEGATIVE
    assert verdict.witness is None


def test_effectivity_trichotomy_on_random_blowups():
    rng = random.Random(31)
    for _ in range(100):
        lattice, eff, curves = blowup_model(rng, rng.randint(1, 3))
        nef = dual_cone(eff)
        D = lattice.make([rng.randint(-3, 3) for _ in range(lattice.rank)])
        if D.is_zero():
            continue
        values = [pairing(D, g) for g in nef.generators]
        verdict = effectivity_classifier(D, nef, eff)
        if min(values) < 0 < max(values):
            assert verdict.label == EFFECTIVITY_AMPLE_ORTHOGONAL
            assert pairing(verdict.witness, D) == 0
            assert contains(nef, verdict.witness, "interior")
        elif min(values) >= 0:
            assert verdict.label == EFFECTIVITY_POSITIVE
            assert contains(eff, D) and verdict.witness is None
        else:
            assert verdict.label == EFFECTIVITY_NEGATIVE
            assert contains(eff, -D) and verdict.witness is None


def test_effectivity_errors(blowup, blowup_eff, blowup_nef):
    with pytest.raises(PreconditionError, match="D = 0"):
        effectivity_classifier(blowup.zero(), blowup_nef, blowup_eff)
    ray = cone_from_generators([blowup.make([0, 1])])
    with pytest.raises(PreconditionError, match="not full-dimensional"):
        effectivity_classifier(blowup.make([0, 1]), ray, blowup_eff)
    with pytest.raises(PreconditionError, match="inconsistent"):
        effectivity_classifier(blowup.make([1, -1]), blowup_nef, ray)


# ============================================================================
# BOGOMOLOV-GIESEKER
# ============================================================================


def test_bgi_on_ruled_counterexample(p1xp1):
    fam = split_family(SplitBundle((p1xp1.make([1, 0]), p1xp1.make([-1, 0]))))
    verdict = bgi_verdict(fam.top, fam, p1xp1.make([1, 0]))
    assert verdict.label == VERDICT_CONSISTENT
    assert verdict.discriminant == 0
    assert verdict.semistable and verdict.equality


def test_bgi_on_running_family(p1xp1, running_family):
    verdict = bgi_verdict(running_family.top, running_family, p1xp1.make([1, 1]))
    assert verdict == (VERDICT_CONSISTENT, 2, True, False)


def test_bgi_flags_incomplete_family(p1xp1):
    E = SheafClass(2, p1xp1.make([1, -1]), -2)
    verdict = bgi_verdict(E, _bare(E), p1xp1.make([1, 1]))
    assert verdict.label == VERDICT_FAMILY_INCOMPLETE
    assert verdict.discriminant == -6


def test_bgi_preconditions(p1xp1, running_family):
    with pytest.raises(PreconditionError, match="differs"):
        bgi_verdict(SheafClass(1, p1xp1.zero()), running_family, p1xp1.make([1, 1]))
    with pytest.raises(PreconditionError, match="nonzero"):
        bgi_verdict(running_family.top, running_family, p1xp1.zero())


# ============================================================================
# FLATNESS
# ============================================================================


def test_trivial_bundle_is_flat(p1xp1):
    fam = split_family(SplitBundle((p1xp1.zero(), p1xp1.zero())))
    verdict = flatness_surface(fam.top, fam, p1xp1.make([1, 1]))
    assert verdict.label == VERDICT_FLAT
    assert verdict.certified
    assert verdict.derived["c1_zero"]


def test_negative_discriminant_is_inconsistent(p1xp1):
    E = SheafClass(2, p1xp1.make([1, -1]), -2)
    verdict = flatness_surface(E, _bare(E), p1xp1.make([1, 1]))
    assert verdict.label == VERDICT_INCONSISTENT_FAMILY
    assert verdict.derived == {"discriminant": -6}


def test_flatness_names_first_failure(p1xp1, blowup, running_family):
    ruled = split_family(SplitBundle((p1xp1.make([1, 0]), p1xp1.make([-1, 0]))))
    assert flatness_surface(ruled.top, ruled, p1xp1.make([1, 0])).label == "not certified: α² = 0"
    assert flatness_surface(ruled.top, ruled, p1xp1.make([1, 1])).label == "not certified: not semistable"
    assert (
        flatness_surface(running_family.top, running_family, p1xp1.make([1, 1])).label
        == "not certified: c1·α ≠ 0"
    )
    E = SheafClass(1, blowup.make([1, 0]), 1)
    assert flatness_surface(E, _bare(E), blowup.make([0, 1])).label == "not certified: α² < 0"
    F = SheafClass(2, p1xp1.make([1, -1]), 0)
    assert flatness_surface(F, _bare(F), p1xp1.make([1, 1])).label == "not certified: c1² − c2 ≠ 0"


def test_flatness_needs_the_family_top(p1xp1, running_family):
    trivial = SheafClass(running_family.top.rank, p1xp1.zero(), 0)
    with pytest.raises(PreconditionError, match="differs from the family top"):
        flatness_surface(trivial, running_family, p1xp1.make([1, 1]))


def test_projective_flatness_with_nef_branch(p1xp1, quadrant):
    E = SheafClass(2, p1xp1.make([1, 0]), 0)
    verdict = proj_flatness_surface(E, _bare(E), p1xp1.make([1, 0]), quadrant, quadrant)
    assert verdict.label == VERDICT_PROJ_FLAT
    assert verdict.branch == VERDICT_E_NEF
    assert verdict.details == {"effectivity": EFFECTIVITY_POSITIVE}


def test_projective_flatness_with_dual_branch(p1xp1, quadrant):
    E = SheafClass(2, p1xp1.make([-1, 0]), 0)
    verdict = proj_flatness_surface(E, _bare(E), p1xp1.make([1, 0]), quadrant, quadrant)
    assert verdict.branch == VERDICT_DUAL_NEF


def test_projective_flatness_other_branches(p1xp1, quadrant):
    trivial = SheafClass(2, p1xp1.zero(), 0)
    verdict = proj_flatness_surface(trivial, _bare(trivial), p1xp1.make([1, 1]), quadrant, quadrant)
    assert verdict.branch == VERDICT_FLAT_FORCED

    E = SheafClass(2, p1xp1.make([1, 1]), Fraction(1, 2))
    verdict = proj_flatness_surface(E, _bare(E), p1xp1.make([1, 1]), quadrant, quadrant)
    assert verdict.certified and verdict.branch is None


def test_projective_flatness_equality_fails(p1xp1, quadrant, running_top):
    verdict = proj_flatness_surface(running_top, _bare(running_top), p1xp1.make([1, 1]), quadrant, quadrant)
    assert verdict.label == VERDICT_EQUALITY_FAILS
    assert not verdict.certified
    assert verdict.details == {"discriminant": 2}


def test_projective_flatness_needs_stability(p1xp1, quadrant, running_family):
    with pytest.raises(PreconditionError, match="not stable"):
        proj_flatness_surface(running_family.top, running_family, p1xp1.make([1, 1]), quadrant, quadrant)


# ============================================================================
# HIGHER-DIMENSIONAL GATES
# ============================================================================


def test_flatness_gate_passes():
    verdict = flatness_higher(3, 0, 2, 2, rank=2)
    assert verdict.label == VERDICT_GATE_PASSED
    assert verdict.failures == ()
    assert verdict.details["lambda_vanishes"] == {1: True, 2: False}
    locus = verdict.details["locus"]
    assert (locus.kind, locus.value, locus.upper, locus.in_range) == ("single", 1, 4, True)


def test_flatness_gate_fails():
    verdict = flatness_higher(3, 1, 2, 1)
    assert verdict.label == "gate-failed"
    assert verdict.failures == ("c1·H^(n-1) ≠ 0", "(c1² − c2)·H^(n-2) ≠ 0")
    assert verdict.details == {}
    with pytest.raises(PreconditionError):
        flatness_higher(1, 0, 0, 0)


def test_torus_quotient_gate():
    assert torus_quotient_gate(3, 0, True).label == VERDICT_HYPOTHESES_MET
    verdict = torus_quotient_gate(3, 1, False)
    assert verdict.label == "hypotheses-not-met"
    assert verdict.failures == ("c2·H^(n-2) ≠ 0", "K_X not numerically trivial")


def test_coefficient_locus_cases():
    assert flatness_coefficient_locus(1, 3, 1) == ("single", 3, None, True)
    assert flatness_coefficient_locus(2, 0, 0).kind == "all"
    assert flatness_coefficient_locus(2, 1, 0) == ("none", None, 4, False)
    assert not flatness_coefficient_locus(3, -1, 1).in_range
    with pytest.raises(PreconditionError):
        flatness_coefficient_locus(0, 1, 1)


def _bogomolov_input(rng):
    """(rank, c1²·H, c2·H) with c1²·H ≤ 0 and 2r·c2 − (r − 1)·c1² ≥ 0."""
    rank = rng.randint(1, 5)
    c1sq = Fraction(0) if rng.random() < 0.25 else -abs(rational(rng))
    lowest_c2 = Fraction(rank - 1, 2 * rank) * c1sq
    roll = rng.random()
    if roll < 0.25:
        c2 = lowest_c2
    elif roll < 0.4:
        c2 = Fraction(0) if lowest_c2 <= 0 else lowest_c2
    else:
        c2 = lowest_c2 + abs(rational(rng))
    return rank, c1sq, c2


def test_coefficient_equivalence_under_bogomolov():
    rng = random.Random(29)
    seen = set()
    for _ in range(100):
        rank, c1sq, c2 = _bogomolov_input(rng)
        assert 2 * rank * c2 - (rank - 1) * c1sq >= 0
        locus = flatness_coefficient_locus(rank, c1sq, c2)
        seen.add(locus.kind)
        upper = Fraction(2 * rank, rank - 1) if rank > 1 else Fraction(10)
        samples = [upper * Fraction(k, 7) for k in range(1, 7)]
        vanishing = [c1sq - lam * c2 == 0 for lam in samples]
        # one admissible λ with vanishing coefficient forces all of them
        assert all(vanishing) or not any(vanishing)
        assert locus.in_range == all(vanishing)
        assert locus.in_range == (locus.kind == "all")
        if locus.kind == "single":
            assert c1sq - locus.value * c2 == 0
    assert {"all", "single"} <= seen


def test_coefficient_equivalence_needs_bogomolov():
    # Δ = 2·2·(−1) − 1·(−1) < 0: λ = 1 alone makes the coefficient vanish
    locus = flatness_coefficient_locus(2, -1, -1)
    assert locus == ("single", 1, 4, True)
