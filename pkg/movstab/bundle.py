"""
bundle.py - ProblemBundle codec.

A bundle is one JSON file carrying a lattice, its cones, a sheaf class with
its destabilizer family, a candidate curve list and an ordered list of
queries. Every parse error is a SchemaError naming the JSON field path.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from movstab.chern_calculus import SheafClass, SplitBundle
from movstab.cone_engine import RationalCone, cone_from_facets, cone_from_generators, dual_cone
from movstab.config import DEFAULT_CONFIG
from movstab.errors import SchemaError
from movstab.lattice_core import NSLattice, NumClass
from movstab.stability_engine import SubsheafFamily, split_family
from movstab.utils import load_json, parse_rational, parse_vector

logger = logging.getLogger(__name__)

# ============================================================================
# QUERY TABLE
# ============================================================================

# Field name -> kind. Kinds: class, classes, rational, int, bool, str, sheaf, family.
FIELD_KINDS: Dict[str, str] = {
    "x": "class",
    "y": "class",
    "D": "class",
    "alpha": "class",
    "beta": "class",
    "from": "class",
    "to": "class",
    "ambient": "classes",
    "sub": "classes",
    "curves": "classes",
    "c": "rational",
    "t": "rational",
    "c1H": "rational",
    "c1sqH": "rational",
    "c2H": "rational",
    "m": "int",
    "n": "int",
    "rank": "int",
    "kx_trivial": "bool",
    "dualize": "bool",
    "which": "str",
    "mode": "str",
    "with": "sheaf",
    "subsheaf": "sheaf",
    "quotient": "sheaf",
    "source": "family",
}

# Command -> (required fields, optional fields).
COMMANDS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "pairing": (("x", "y"), ()),
    "signature": ((), ()),
    "hodge": (("D", "alpha"), ()),
    "cartier_index": (("ambient", "sub"), ()),
    "cone": (("which",), ("x", "mode", "dualize")),
    "slope": (("alpha",), ()),
    "mu_max": (("alpha",), ()),
    "mu_max_sc": (("alpha",), ()),
    "stability": (("alpha",), ()),
    "destabilizers": (("beta", "c"), ()),
    "hn": (("alpha",), ()),
    "jh": (("alpha",), ()),
    "openness": (("alpha", "beta"), ()),
    "segment": (("from", "to"), ()),
    "walls": ((), ()),
    "stabilizing_cone": ((), ()),
    "chamber": (("alpha",), ()),
    "tensor": (("with",), ("alpha",)),
    "dual": ((), ()),
    "whitney": (("subsheaf", "quotient"), ()),
    "discriminant": ((), ()),
    "sym": (("m",), ()),
    "hom": (("source", "alpha"), ()),
    "zariski": (("D",), ("curves",)),
    "nef_zero": (("D", "alpha"), ()),
    "effectivity": (("D",), ()),
    "bgi": (("alpha",), ()),
    "flat": (("alpha",), ()),
    "projflat": (("alpha",), ()),
    "flat_higher": (("n", "c1H", "c1sqH", "c2H"), ("rank",)),
    "torus_gate": (("n", "c2H", "kx_trivial"), ()),
}

# Commands that need no lattice at all.
STANDALONE_COMMANDS = ("flat_higher", "torus_gate")

CONE_NAMES = ("eff", "mov", "nef")


@dataclass(frozen=True)
class Query:
    """One parsed query: its position, command and typed arguments."""

    index: int
    cmd: str
    args: Dict[str, Any] = field(default_factory=dict)
    raw: Dict[str, Any] = field(default_factory=dict)

    @property
    def path(self) -> str:
        return f"$.queries[{self.index}]"


@dataclass(frozen=True)
class ProblemBundle:
    """Everything one bundle file describes, fully parsed."""

    name: str
    lattice: NSLattice
    eff: RationalCone
    mov: RationalCone
    nef: RationalCone
    sheaf: Optional[SheafClass] = None
    family: Optional[SubsheafFamily] = None
    split: Optional[SplitBundle] = None
    curves: Tuple[NumClass, ...] = ()
    queries: Tuple[Query, ...] = ()

    def cone(self, which: str) -> RationalCone:
        return {"eff": self.eff, "mov": self.mov, "nef": self.nef}[which]


# ============================================================================
# FIELD PARSERS
# ============================================================================

def _require(obj: Dict[str, Any], key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path)
    return obj[key]


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {value!r}", path)
    return value


def parse_lattice(obj: Dict[str, Any], path: str = "$.lattice", name: str = "NS") -> NSLattice:
    """
    Parse {"rank": int, "gram": [[...]], "basis": [...]}.

    Args:
        obj: Lattice JSON object
        path: JSON path of the object
        name: Lattice name used in messages

    Returns:
        NSLattice (degenerate or non-symmetric grams raise LatticeError)
    """
    rank = _int(_require(obj, "rank", path), f"{path}.rank")
    rows = _require(obj, "gram", path)
    if not isinstance(rows, list) or len(rows) != rank:
        raise SchemaError(f"gram must have {rank} rows", f"{path}.gram")
    gram = [parse_vector(row, f"{path}.gram[{i}]", rank) for i, row in enumerate(rows)]
    labels = obj.get("basis", [])
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise SchemaError("basis must be a list of strings", f"{path}.basis")
    if labels and len(labels) != rank:
        raise SchemaError(f"expected {rank} basis labels", f"{path}.basis")
    return NSLattice(gram=gram, basis_labels=tuple(labels), name=name)


def parse_class(values: Any, lattice: NSLattice, path: str) -> NumClass:
    return lattice.make(parse_vector(values, path, lattice.rank))


def parse_classes(values: Any, lattice: NSLattice, path: str) -> List[NumClass]:
    if not isinstance(values, list):
        raise SchemaError("expected a list of classes", path)
    return [parse_class(v, lattice, f"{path}[{i}]") for i, v in enumerate(values)]


def parse_cone(obj: Any, lattice: NSLattice, path: str) -> RationalCone:
    """Parse {"generators": [...]} or {"facets": [...]}."""
    if not isinstance(obj, dict):
        raise SchemaError("expected a cone object", path)
    if "generators" in obj:
        gens = parse_classes(obj["generators"], lattice, f"{path}.generators")
        if not gens:
            raise SchemaError("a cone needs at least one generator", f"{path}.generators")
        return cone_from_generators(gens)
    if "facets" in obj:
        facets = parse_classes(obj["facets"], lattice, f"{path}.facets")
        return cone_from_facets(facets, lattice)
    raise SchemaError("cone needs 'generators' or 'facets'", path)


def parse_sheaf(obj: Any, lattice: NSLattice, path: str) -> Tuple[SheafClass, Optional[SplitBundle]]:
    """
    Parse {"rank", "c1", "c2"} or {"split": [L1, L2, ...]}.

    Returns:
        (sheaf class, split bundle or None)
    """
    if not isinstance(obj, dict):
        raise SchemaError("expected a sheaf object", path)
    if "split" in obj:
        summands = parse_classes(obj["split"], lattice, f"{path}.split")
        if not summands:
            raise SchemaError("split bundle needs at least one summand", f"{path}.split")
        split = SplitBundle(tuple(summands))
        return split.sheaf_class(), split
    rank = _int(_require(obj, "rank", path), f"{path}.rank")
    if rank < 1:
        raise SchemaError("rank must be positive", f"{path}.rank")
    c1 = parse_class(_require(obj, "c1", path), lattice, f"{path}.c1")
    c2 = parse_rational(obj.get("c2", 0), f"{path}.c2")
    return SheafClass(rank, c1, c2), None


def _node(value: Any, top_index: int, path: str) -> int:
    if value == "top":
        return top_index
    return _int(value, path)


def parse_family(
    obj: Any,
    top: SheafClass,
    lattice: NSLattice,
    path: str,
    split: Optional[SplitBundle] = None,
) -> SubsheafFamily:
    """
    Parse {"members": [...], "contains": [[i, j], ...], "saturated": bool}.

    "top" may replace j in an edge. The string "split" builds the family of
    partial direct sums of the sheaf's split description.
    """
    if obj == "split":
        if split is None:
            raise SchemaError("family 'split' needs a sheaf given by 'split'", path)
        return split_family(split)
    if not isinstance(obj, dict):
        raise SchemaError("expected a family object", path)
    members_raw = obj.get("members", [])
    if not isinstance(members_raw, list):
        raise SchemaError("members must be a list", f"{path}.members")
    members = [parse_sheaf(m, lattice, f"{path}.members[{i}]")[0] for i, m in enumerate(members_raw)]
    top_index = len(members)

    contains = None
    if "contains" in obj:
        edges_raw = obj["contains"]
        if not isinstance(edges_raw, list):
            raise SchemaError("contains must be a list of pairs", f"{path}.contains")
        contains = []
        for k, edge in enumerate(edges_raw):
            edge_path = f"{path}.contains[{k}]"
            if not isinstance(edge, list) or len(edge) != 2:
                raise SchemaError("edge must be a pair [i, j]", edge_path)
            contains.append(
                (_node(edge[0], top_index, f"{edge_path}[0]"), _node(edge[1], top_index, f"{edge_path}[1]"))
            )
        contains = tuple(contains)

    saturated = obj.get("saturated", False)
    if not isinstance(saturated, bool):
        raise SchemaError("saturated must be a boolean", f"{path}.saturated")
    return SubsheafFamily(top=top, members=tuple(members), contains=contains, saturated=saturated)


def parse_query(obj: Any, index: int, lattice: Optional[NSLattice]) -> Query:
    """
    Parse and type-check one query record against the command table.

    Args:
        obj: {"cmd": name, ...fields}
        index: Position in the queries list
        lattice: Bundle lattice (None for standalone numeric queries)

    Returns:
        Query with typed arguments
    """
    path = f"$.queries[{index}]"
    cmd = _require(obj, "cmd", path)
    if cmd not in COMMANDS:
        raise SchemaError(f"unknown command {cmd!r}", f"{path}.cmd")
    required, optional = COMMANDS[cmd]
    args: Dict[str, Any] = {}
    for key in required + optional:
        if key not in obj:
            if key in required:
                raise SchemaError(f"missing field {key!r} for {cmd}", path)
            continue
        args[key] = _parse_field(key, obj[key], lattice, f"{path}.{key}")
    if "which" in args and args["which"] not in CONE_NAMES:
        raise SchemaError(f"which must be one of {CONE_NAMES}", f"{path}.which")
    if "mode" in args and args["mode"] not in ("closed", "interior"):
        raise SchemaError("mode must be 'closed' or 'interior'", f"{path}.mode")
    return Query(index=index, cmd=cmd, args=args, raw=dict(obj))


def _parse_field(key: str, value: Any, lattice: Optional[NSLattice], path: str) -> Any:
    kind = FIELD_KINDS[key]
    if kind in ("class", "classes", "sheaf", "family") and lattice is None:
        raise SchemaError(f"field {key!r} needs a lattice", path)
    if kind == "class":
        return parse_class(value, lattice, path)
    if kind == "classes":
        return parse_classes(value, lattice, path)
    if kind == "rational":
        return parse_rational(value, path)
    if kind == "int":
        return _int(value, path)
    if kind == "bool":
        if not isinstance(value, bool):
            raise SchemaError("expected a boolean", path)
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise SchemaError("expected a string", path)
        return value
    if kind == "sheaf":
        return parse_sheaf(value, lattice, path)[0]
    # family: {"top": sheaf, "members": [...], "contains": [...]}
    top, split = parse_sheaf(_require(value, "top", path), lattice, f"{path}.top")
    return parse_family(value, top, lattice, path, split)


# ============================================================================
# BUNDLES
# ============================================================================

def parse_bundle(data: Any, queries: Optional[Sequence[Dict[str, Any]]] = None) -> ProblemBundle:
    """
    Parse a bundle document.

    Args:
        data: Decoded JSON document
        queries: Optional replacement query list (used by single-command CLI forms)

    Returns:
        ProblemBundle
    """
    if not isinstance(data, dict):
        raise SchemaError("bundle must be a JSON object", "$")
    schema = _require(data, "schema", "$")
    if schema != DEFAULT_CONFIG["schema_version"]:
        raise SchemaError(f"unsupported schema version {schema!r}", "$.schema")
    name = data.get("name", "bundle")
    if not isinstance(name, str):
        raise SchemaError("name must be a string", "$.name")

    lattice = parse_lattice(_require(data, "lattice", "$"), name=name)
    eff = parse_cone(_require(data, "eff_cone", "$"), lattice, "$.eff_cone")
    mov = parse_cone(data["mov_cone"], lattice, "$.mov_cone") if "mov_cone" in data else dual_cone(eff)
    nef = parse_cone(data["nef_cone"], lattice, "$.nef_cone") if "nef_cone" in data else mov

    sheaf = split = family = None
    if "sheaf" in data:
        sheaf, split = parse_sheaf(data["sheaf"], lattice, "$.sheaf")
        family = parse_family(data.get("family", {}), sheaf, lattice, "$.family", split)
    elif "family" in data:
        raise SchemaError("family given without a sheaf", "$.family")

    curves = tuple(parse_classes(data.get("curves", []), lattice, "$.curves"))

    raw_queries = data.get("queries", []) if queries is None else list(queries)
    if not isinstance(raw_queries, list):
        raise SchemaError("queries must be a list", "$.queries")
    parsed = tuple(parse_query(q, i, lattice) for i, q in enumerate(raw_queries))

    logger.debug("bundle %s: rank %d, %d queries", name, lattice.rank, len(parsed))
    return ProblemBundle(
        name=name,
        lattice=lattice,
        eff=eff,
        mov=mov,
        nef=nef,
        sheaf=sheaf,
        family=family,
        split=split,
        curves=curves,
        queries=parsed,
    )


def load_bundle(bundle_file: str, queries: Optional[Sequence[Dict[str, Any]]] = None) -> ProblemBundle:
    """
    Load and parse a bundle file.

    Args:
        bundle_file: Path to bundle.json
        queries: Optional replacement query list

    Returns:
        ProblemBundle
    """
    return parse_bundle(load_json(bundle_file), queries)


def load_curves(curves_file: str) -> List[Any]:
    """
    Load a candidate curve list for the zariski command.

    The file holds either a JSON list of classes or an object with a "curves"
    list (so a bundle file can be reused). The classes are parsed later,
    against the lattice of the bundle the query runs on.

    Args:
        curves_file: Path to the JSON file

    Returns:
        Raw coordinate lists
    """
    data = load_json(curves_file)
    if isinstance(data, dict):
        data = _require(data, "curves", "$")
    if not isinstance(data, list):
        raise SchemaError(f"{curves_file}: curves must be a list of classes", "$")
    return data
