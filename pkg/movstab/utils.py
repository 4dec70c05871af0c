"""
utils.py - Shared utilities for the movstab toolkit.

Provides exact rational parsing/formatting, small exact matrix helpers backed by
sympy, and JSON file loading.
"""

import json
import math
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import sympy

from movstab.errors import SchemaError

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: Any, path: str = "$") -> Fraction:
    """
    Parse an exact rational from JSON-style input.

    Args:
        value: An int, a Fraction, or a string "p/q" / "p" with q > 0
        path: JSON field path used in error messages

    Returns:
        The value as a Fraction
    """
    if isinstance(value, bool):
        raise SchemaError("expected a rational, got a boolean", path)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise SchemaError(f"malformed rational {value!r}", path)
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) is not None else 1
        if denominator == 0:
            raise SchemaError(f"zero denominator in {value!r}", path)
        return Fraction(numerator, denominator)
    # Floats are refused on purpose: every wall location is equality-sensitive.
    raise SchemaError(f"expected a rational, got {type(value).__name__}", path)


def format_rational(value: Fraction) -> str:
    """
    Format a rational as "p/q" (or "p" for integers).

    Args:
        value: The rational

    Returns:
        Canonical string form with q > 0 and gcd(p, q) = 1
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_vector(values: Any, path: str = "$", length: Optional[int] = None) -> Vector:
    """
    Parse a list of rationals.

    Args:
        values: JSON list (or a comma-separated string such as "1,1/2")
        path: JSON field path used in error messages
        length: Required length, if known

    Returns:
        Tuple of Fractions
    """
    if isinstance(values, str):
        stripped = values.strip().strip("[]()")
        values = [part for part in stripped.split(",") if part.strip()]
    if not isinstance(values, (list, tuple)):
        raise SchemaError("expected a list of rationals", path)
    vector = tuple(parse_rational(v, f"{path}[{i}]") for i, v in enumerate(values))
    if length is not None and len(vector) != length:
        raise SchemaError(f"expected {length} coordinates, got {len(vector)}", path)
    return vector


def load_json(json_file: str) -> dict:
    """
    Load and parse a JSON file.

    Args:
        json_file: Path to the JSON file

    Returns:
        Parsed JSON as a dictionary
    """
    try:
        with open(json_file, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno})", "$") from e
    except OSError as e:
        raise SchemaError(f"cannot read {json_file}: {e.strerror}", "$") from e


def ensure_dir(path: Path) -> Path:
    """
    Create a directory if it doesn't exist.

    Args:
        path: Path to the directory

    Returns:
        The path object
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


# ============================================================================
# EXACT LINEAR ALGEBRA
# ============================================================================

def to_fraction(value: Any) -> Fraction:
    """Convert a sympy Rational/Integer (or int) into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def to_sympy(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> sympy.Matrix:
    """Build a sympy Matrix of Rationals from nested Fractions."""
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix(
        [[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, row)] for row in rows]
    )


def from_sympy(matrix: sympy.Matrix) -> Matrix:
    """Convert a sympy Matrix into nested Fraction tuples."""
    return tuple(
        tuple(to_fraction(matrix[i, j]) for j in range(matrix.cols)) for i in range(matrix.rows)
    )


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """Exact Euclidean dot product."""
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def mat_vec(matrix: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> Vector:
    """Matrix-vector product."""
    return tuple(dot(row, vector) for row in matrix)


def transpose(matrix: Sequence[Sequence[Fraction]]) -> Matrix:
    """Transpose of a rectangular matrix."""
    return tuple(zip(*matrix)) if matrix else ()


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    """Matrix product."""
    columns = transpose(b)
    return tuple(tuple(dot(row, col) for col in columns) for row in a)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """
    Exact basis of {x : rows · x = 0}.

    Args:
        rows: Constraint rows (may be empty)
        ncols: Ambient dimension

    Returns:
        List of basis vectors (empty if only the zero vector)
    """
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    basis = to_sympy(rows).nullspace()
    return [tuple(to_fraction(v) for v in vec) for vec in basis]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a matrix given by rows."""
    if not rows:
        return 0
    return to_sympy(rows).rank()


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector:
    """Solve the square nonsingular system matrix · x = rhs exactly."""
    solution = to_sympy(matrix).LUsolve(to_sympy([[v] for v in rhs]))
    return tuple(to_fraction(solution[i, 0]) for i in range(solution.rows))


def inverse(matrix: Sequence[Sequence[Fraction]]) -> Matrix:
    """Exact inverse of a nonsingular square matrix."""
    return from_sympy(to_sympy(matrix).inv())


def primitive_integer(vector: Sequence[Fraction]) -> Tuple[int, ...]:
    """
    Scale a rational vector by a positive factor to a primitive integer vector.

    Args:
        vector: Rational coordinates (the zero vector is returned as zeros)

    Returns:
        Integer tuple with gcd 1 pointing in the same direction
    """
    fractions = [Fraction(v) for v in vector]
    denominator_lcm = 1
    for value in fractions:
        denominator_lcm = denominator_lcm * value.denominator // math.gcd(denominator_lcm, value.denominator)
    integers = [int(value * denominator_lcm) for value in fractions]
    divisor = 0
    for value in integers:
        divisor = math.gcd(divisor, value)
    if divisor == 0:
        return tuple(integers)
    return tuple(value // divisor for value in integers)


def is_integral(vector: Sequence[Fraction]) -> bool:
    """Check that every coordinate is an integer."""
    return all(Fraction(v).denominator == 1 for v in vector)
