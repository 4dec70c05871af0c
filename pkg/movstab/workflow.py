"""
workflow.py - Query dispatch and the bundle runner.

Loads a ProblemBundle, executes its queries in order and collects one report
entry per query. A failing query is recorded with its field path and the run
continues; the report's exit code is the most severe one seen.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

from movstab.bundle import STANDALONE_COMMANDS, ProblemBundle, Query, load_bundle, parse_query
from movstab.chern_calculus import (
    bg_discriminant,
    determinant_class,
    dual_class,
    sym_split,
    tensor_class,
    whitney_extension,
)
from movstab.config import EXIT_OK, VERDICT_FAMILY_INCOMPLETE, get_exit_code
from movstab.cone_engine import contains, dual_cone
from movstab.errors import MovstabError, PreconditionError, SchemaError
from movstab.lattice_core import cartier_index, certify_signature, hodge_bound, pairing
from movstab.report import Report, ReportEntry, to_jsonable
from movstab.stability_engine import (
    SubsheafFamily,
    chamber_signature,
    destabilizer_filter,
    hn_filtration,
    hom_vanishes,
    is_semistable,
    is_stable,
    jh_filtration,
    mu_max,
    mu_max_sc,
    mu_min_quotient,
    openness_epsilon,
    segment_stability,
    slope,
    stabilizing_cone,
    wall_hyperplanes,
)
from movstab.surface_criteria import (
    bgi_verdict,
    effectivity_classifier,
    flatness_higher,
    flatness_surface,
    nef_from_zero_square,
    proj_flatness_surface,
    torus_quotient_gate,
    zariski_decomposition,
)

logger = logging.getLogger(__name__)

Handler = Callable[[Optional[ProblemBundle], Dict[str, Any], int], Any]


def _family(bundle: ProblemBundle) -> SubsheafFamily:
    if bundle.family is None:
        raise PreconditionError("bundle has no sheaf")
    return bundle.family


def _witness(fam: SubsheafFamily, index: int) -> Dict[str, Any]:
    return {"index": "top" if index == fam.top_index else index, "class": fam.class_of(index)}


# ============================================================================
# LATTICE AND CONE QUERIES
# ============================================================================

def _pairing(bundle, args, workers):
    return {"value": pairing(args["x"], args["y"])}


def _signature(bundle, args, workers):
    return {"signature": certify_signature(bundle.lattice), "hyperbolic": bundle.lattice.is_hyperbolic()}


def _hodge(bundle, args, workers):
    return hodge_bound(args["D"], args["alpha"])


def _cartier_index(bundle, args, workers):
    return {"m": cartier_index(args["ambient"], args["sub"])}


def _cone(bundle, args, workers):
    cone = bundle.cone(args["which"])
    if args.get("dualize"):
        cone = dual_cone(cone)
    result = {"cone": cone, "full_dimensional": cone.is_full_dimensional()}
    if "x" in args:
        result["contains"] = contains(cone, args["x"], args.get("mode", "closed"))
    return result


# ============================================================================
# STABILITY QUERIES
# ============================================================================

def _slope(bundle, args, workers):
    return {"value": slope(_family(bundle).top, args["alpha"])}


def _mu_max(bundle, args, workers):
    fam = _family(bundle)
    result = mu_max(fam, args["alpha"], bundle.mov)
    return {"value": result.value, "witness": _witness(fam, result.witness)}


def _mu_max_sc(bundle, args, workers):
    fam = _family(bundle)
    result = mu_max_sc(fam, args["alpha"], bundle.mov)
    return {"value": result.value, "witness": _witness(fam, result.witness)}


def _stability(bundle, args, workers):
    fam = _family(bundle)
    return {
        "slope": slope(fam.top, args["alpha"]),
        "semistable": is_semistable(fam, args["alpha"], bundle.mov),
        "stable": is_stable(fam, args["alpha"], bundle.mov),
    }


def _destabilizers(bundle, args, workers):
    return {"members": destabilizer_filter(_family(bundle), args["beta"], args["c"], bundle.mov)}


def _hn(bundle, args, workers):
    fam = _family(bundle)
    filtration = hn_filtration(fam, args["alpha"], bundle.mov)
    return {"filtration": filtration, "top_index": fam.top_index, "mu_min": mu_min_quotient(filtration)}


def _jh(bundle, args, workers):
    fam = _family(bundle)
    return {"filtration": jh_filtration(fam, args["alpha"], bundle.mov), "top_index": fam.top_index}


def _openness(bundle, args, workers):
    return {"epsilon": openness_epsilon(_family(bundle), args["alpha"], args["beta"], bundle.mov)}


def _segment(bundle, args, workers):
    return segment_stability(_family(bundle), args["from"], args["to"], bundle.mov, workers)


def _walls(bundle, args, workers):
    return wall_hyperplanes(_family(bundle))


def _stabilizing_cone(bundle, args, workers):
    return {"cone": stabilizing_cone(_family(bundle), bundle.mov)}


def _chamber(bundle, args, workers):
    fam = _family(bundle)
    return {
        "members": fam.strict_members(),
        "signature": chamber_signature(fam, args["alpha"], bundle.mov),
    }


def _hom(bundle, args, workers):
    return hom_vanishes(args["source"], _family(bundle), args["alpha"], bundle.mov)


# ============================================================================
# CHERN CALCULUS QUERIES
# ============================================================================

def _tensor(bundle, args, workers):
    E = _family(bundle).top
    product = tensor_class(E, args["with"])
    result: Dict[str, Any] = {"class": product}
    if "alpha" in args:
        a = args["alpha"]
        result["slope"] = slope(product, a)
        result["slope_sum"] = slope(E, a) + slope(args["with"], a)
    return result


def _dual(bundle, args, workers):
    E = _family(bundle).top
    return {"class": dual_class(E), "determinant": determinant_class(E)}


def _whitney(bundle, args, workers):
    return {"class": whitney_extension(args["subsheaf"], args["quotient"])}


def _discriminant(bundle, args, workers):
    return {"value": bg_discriminant(_family(bundle).top)}


def _sym(bundle, args, workers):
    if bundle.split is None:
        raise PreconditionError("sym needs a sheaf given by 'split'")
    power = sym_split(bundle.split, args["m"])
    return {"summands": list(power.summands), "class": power.sheaf_class()}


# ============================================================================
# SURFACE CRITERIA QUERIES
# ============================================================================

def _zariski(bundle, args, workers):
    curves = args.get("curves", bundle.curves)
    pair = zariski_decomposition(args["D"], curves, bundle.eff, bundle.nef)
    return {
        "positive": pair.positive,
        "negative": pair.negative,
        "support": [{"curve": curve, "coefficient": a} for curve, a in pair.support],
    }


def _nef_zero(bundle, args, workers):
    verdict = nef_from_zero_square(args["D"], args["alpha"], bundle.curves, bundle.eff, bundle.mov)
    return {"label": verdict.label, "negative": verdict.decomposition.negative}


def _effectivity(bundle, args, workers):
    return effectivity_classifier(args["D"], bundle.nef, bundle.eff)


def _bgi(bundle, args, workers):
    fam = _family(bundle)
    return bgi_verdict(fam.top, fam, args["alpha"], bundle.mov)


def _flat(bundle, args, workers):
    fam = _family(bundle)
    return flatness_surface(fam.top, fam, args["alpha"])


def _projflat(bundle, args, workers):
    fam = _family(bundle)
    return proj_flatness_surface(
        fam.top, fam, args["alpha"], bundle.nef, bundle.eff, bundle.curves, bundle.mov
    )


def _flat_higher(bundle, args, workers):
    return flatness_higher(args["n"], args["c1H"], args["c1sqH"], args["c2H"], args.get("rank"))


def _torus_gate(bundle, args, workers):
    return torus_quotient_gate(args["n"], args["c2H"], args["kx_trivial"])


HANDLERS: Dict[str, Handler] = {
    "pairing": _pairing,
    "signature": _signature,
    "hodge": _hodge,
    "cartier_index": _cartier_index,
    "cone": _cone,
    "slope": _slope,
    "mu_max": _mu_max,
    "mu_max_sc": _mu_max_sc,
    "stability": _stability,
    "destabilizers": _destabilizers,
    "hn": _hn,
    "jh": _jh,
    "openness": _openness,
    "segment": _segment,
    "walls": _walls,
    "stabilizing_cone": _stabilizing_cone,
    "chamber": _chamber,
    "tensor": _tensor,
    "dual": _dual,
    "whitney": _whitney,
    "discriminant": _discriminant,
    "sym": _sym,
    "hom": _hom,
    "zariski": _zariski,
    "nef_zero": _nef_zero,
    "effectivity": _effectivity,
    "bgi": _bgi,
    "flat": _flat,
    "projflat": _projflat,
    "flat_higher": _flat_higher,
    "torus_gate": _torus_gate,
}


def _warnings(query: Query, result: Any) -> List[str]:
    """Report-level warnings derived from the query and its result."""
    warnings = []
    for key in ("alpha", "beta", "from", "to"):
        value = query.args.get(key)
        if value is not None and hasattr(value, "is_zero") and value.is_zero():
            warnings.append(f"{key} is zero: every family is semistable there")
    filtration = result.get("filtration") if isinstance(result, dict) else None
    for tie in getattr(filtration, "ties", ()):
        warnings.append(f"HN step tie between members {list(tie)}")
    if getattr(result, "label", None) == VERDICT_FAMILY_INCOMPLETE:
        warnings.append("semistable family violates Δ ≥ 0: family incomplete or non-geometric")
    return warnings


def _error(error: BaseException, path: str) -> Dict[str, Any]:
    if isinstance(error, MovstabError):
        return {"type": type(error).__name__, "message": error.message, "path": error.path or path}
    return {"type": type(error).__name__, "message": str(error), "path": path}


def execute_query(bundle: Optional[ProblemBundle], query: Query, workers: int = 1) -> ReportEntry:
    """
    Run one query and capture its outcome.

    Args:
        bundle: The parsed bundle (None for standalone numeric queries)
        query: The query
        workers: Thread count for member-parallel evaluation

    Returns:
        ReportEntry with a result or an error record
    """
    entry = ReportEntry(index=query.index, cmd=query.cmd, query=query.raw)
    try:
        result = HANDLERS[query.cmd](bundle, query.args, workers)
        entry.result = to_jsonable(result)
        entry.warnings = _warnings(query, result)
    except MovstabError as e:
        entry.status = "error"
        entry.result = None
        entry.error = _error(e, query.path)
        entry.exit_code = get_exit_code(e)
        logger.warning("%s failed: %s", query.path, e)
    except Exception as e:
        # Anything that is not a MovstabError is an internal failure (exit 4).
        entry.status = "error"
        entry.result = None
        entry.error = _error(e, query.path)
        entry.exit_code = get_exit_code(e)
        logger.error("%s raised %s", query.path, type(e).__name__, exc_info=True)
    return entry


# ============================================================================
# RUNNERS
# ============================================================================

class BundleRunner:
    """Loads one bundle file and executes its queries in order."""

    def __init__(
        self,
        bundle_file: str,
        only: Optional[str] = None,
        workers: int = 1,
        queries: Optional[Sequence[Dict[str, Any]]] = None,
    ):
        """
        Initialize the runner.

        Args:
            bundle_file: Path to bundle.json
            only: Run only queries with this command
            workers: Thread count for member-parallel evaluation
            queries: Replacement query list (single-command CLI forms)
        """
        self.bundle_file = str(bundle_file)
        self.only = only
        self.workers = max(1, workers)
        self.queries = queries

    def load(self, report: Report) -> Optional[ProblemBundle]:
        try:
            bundle = load_bundle(self.bundle_file, self.queries)
        except Exception as e:
            report.errors.append(_error(e, "$"))
            report.exit_code = get_exit_code(e)
            logger.error("%s: %s", self.bundle_file, e)
            return None
        report.bundle = bundle.name
        return bundle

    def validate(self) -> Report:
        """Parse the bundle without running queries."""
        report = Report(bundle=self.bundle_file)
        bundle = self.load(report)
        if bundle is not None:
            fam = bundle.family
            report.summary = {
                "rank": bundle.lattice.rank,
                "signature": certify_signature(bundle.lattice),
                "members": len(fam.members) if fam else 0,
                "curves": len(bundle.curves),
                "queries": len(bundle.queries),
            }
            report.summary = to_jsonable(report.summary)
        return report

    def run(self) -> Report:
        """Execute every (selected) query and return the report."""
        report = Report(bundle=self.bundle_file)
        bundle = self.load(report)
        if bundle is None:
            return report

        queries = [q for q in bundle.queries if self.only is None or q.cmd == self.only]
        total = len(queries)
        for i, query in enumerate(queries, 1):
            logger.info("[%d/%d] %s", i, total, query.cmd)
            report.add(execute_query(bundle, query, self.workers))
        return report


def run_bundle(
    bundle_file: str,
    only: Optional[str] = None,
    workers: int = 1,
    queries: Optional[Sequence[Dict[str, Any]]] = None,
) -> Report:
    """Run one bundle file and return its report."""
    return BundleRunner(bundle_file, only=only, workers=workers, queries=queries).run()


def run_bundles(bundle_files: Sequence[str], workers: int = 1, only: Optional[str] = None) -> List[Report]:
    """
    Run independent bundles on a thread pool.

    Args:
        bundle_files: Paths to bundle files
        workers: Pool size (also passed down for member-parallel work)
        only: Optional command filter

    Returns:
        Reports in input order
    """
    if workers <= 1 or len(bundle_files) <= 1:
        return [run_bundle(path, only=only, workers=workers) for path in bundle_files]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda path: run_bundle(path, only=only, workers=workers), bundle_files))


def validate_bundle(bundle_file: str) -> Report:
    """Parse a bundle and summarize it; exit code 0 when it is valid."""
    return BundleRunner(bundle_file).validate()


def run_standalone(query: Dict[str, Any]) -> Report:
    """Run one lattice-free numeric query (flat_higher, torus_gate)."""
    report = Report(bundle="standalone")
    try:
        if query.get("cmd") not in STANDALONE_COMMANDS:
            raise SchemaError(f"{query.get('cmd')!r} needs a bundle", "$.queries[0].cmd")
        parsed = parse_query(query, 0, None)
    except MovstabError as e:
        report.errors.append(_error(e, "$.queries[0]"))
        report.exit_code = get_exit_code(e)
        return report
    report.add(execute_query(None, parsed))
    return report


def overall_exit_code(reports: Sequence[Report]) -> int:
    return max((r.exit_code for r in reports), default=EXIT_OK)
