"""Instance files: JSON schema, canonical serialization and generators.

Schema:
    {"name": str?, "description": str?, "d1": int, "d2": int,
     "A": [[int]], "B": [[int]], "b": [int],
     "objective": [{"exponents": [int, ...], "coefficient": "p/q"}, ...]}

Integers are JSON numbers up to 64 bits and decimal strings beyond;
rational coefficients are always strings.  Serialization is canonical
(fixed key order, lex-sorted terms), so generate -> parse -> serialize
round-trips byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Polynomial
from .polytopes import Polytope

_INT64 = 2**63


@dataclass(frozen=True)
class Instance:
    polytope: Polytope
    objective: Polynomial
    name: str | None = None
    description: str | None = None


def _encode_int(value: int):
    return value if -_INT64 < value < _INT64 else str(value)


def _decode_int(value, field: str) -> int:
    if isinstance(value, bool):
        raise ValueError(f"{field}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError as exc:
            raise ValueError(f"{field}: {value!r} is not a decimal integer") from exc
    raise ValueError(f"{field}: expected an integer, got {type(value).__name__}")


def _decode_matrix(rows, width: int, field: str) -> list[list[int]]:
    if not isinstance(rows, list):
        raise ValueError(f"{field}: expected a list of rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise ValueError(f"{field} row {i}: expected {width} entries")
        out.append([_decode_int(v, f"{field}[{i}][{j}]") for j, v in enumerate(row)])
    return out


def instance_to_json(instance: Instance) -> dict:
    P = instance.polytope
    payload: dict = {}
    if instance.name is not None:
        payload["name"] = instance.name
    if instance.description is not None:
        payload["description"] = instance.description
    payload["d1"] = P.d1
    payload["d2"] = P.d2
    payload["A"] = [[_encode_int(v) for v in row] for row in P.A]
    payload["B"] = [[_encode_int(v) for v in row] for row in P.B]
    payload["b"] = [_encode_int(v) for v in P.b]
    payload["objective"] = instance.objective.to_terms()
    return payload


def instance_from_json(payload: dict) -> Instance:
    if not isinstance(payload, dict):
        raise ValueError("instance file must contain a JSON object")
    for key in ("d1", "d2", "A", "B", "b", "objective"):
        if key not in payload:
            raise ValueError(f"missing required field {key!r}")
    d1 = _decode_int(payload["d1"], "d1")
    d2 = _decode_int(payload["d2"], "d2")
    if d1 < 0 or d2 < 0 or d1 + d2 == 0:
        raise ValueError("d1 and d2 must be non-negative with d1 + d2 >= 1")
    if not isinstance(payload["b"], list):
        raise ValueError("b: expected a list")
    b = [_decode_int(v, f"b[{i}]") for i, v in enumerate(payload["b"])]
    A = _decode_matrix(payload["A"], d1, "A")
    B = _decode_matrix(payload["B"], d2, "B")
    if len(A) != len(b) or len(B) != len(b):
        raise ValueError("A, B and b must have the same number of rows")
    if not isinstance(payload["objective"], list):
        raise ValueError("objective: expected a list of terms")
    for i, term in enumerate(payload["objective"]):
        if not isinstance(term, dict) or "exponents" not in term or "coefficient" not in term:
            raise ValueError(f"objective term {i}: expected exponents and coefficient")
        if len(term["exponents"]) != d1 + d2:
            raise ValueError(f"objective term {i}: expected {d1 + d2} exponents")
    objective = Polynomial.from_terms(d1 + d2, payload["objective"])
    name = payload.get("name")
    description = payload.get("description")
    if name is not None and not isinstance(name, str):
        raise ValueError("name must be a string")
    if description is not None and not isinstance(description, str):
        raise ValueError("description must be a string")
    return Instance(Polytope(d1, d2, A, B, b), objective, name, description)


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_json(instance), indent=2) + "\n"


def loads_instance(text: str) -> Instance:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return instance_from_json(payload)


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        return loads_instance(handle.read())


# -- generators ------------------------------------------------------------------


def generate_parity() -> Instance:
    """Triangle with one continuous and one 0/1 variable and objective 2z - x.

    The feasible set is the segment {(x, 0) : 0 <= x <= 1} plus the single
    point (1/2, 1); grid optima alternate between the two as the grid
    denominator's parity changes, which makes this the standard stress
    test for grid refinement.
    """
    polytope = Polytope(
        1,
        1,
        A=[[-2], [2], [-1], [0], [0]],
        B=[[1], [1], [0], [1], [-1]],
        b=[0, 2, 0, 1, 0],
    )
    objective = Polynomial(2, {(1, 0): Fraction(-1), (0, 1): Fraction(2)})
    return Instance(
        polytope,
        objective,
        name="parity",
        description="grid optima alternate with the parity of the grid denominator",
    )


def generate_an1(a: int, b: int, c: int) -> Instance:
    """Quadratic-residue rectangle: maximize -(x^2 - a - b y)^2 over a box.

    The maximum is 0 exactly when some integer 1 <= x <= c - 1 satisfies
    x^2 = a modulo b; a sign-indefinite family for the range-relative
    scheme.  The y bounds (1 - a)/b and ((c-1)^2 - a)/b are kept exact by
    scaling those rows by b.
    """
    if a < 1 or b < 1 or c < 1:
        raise ValueError("an1 parameters must be positive integers")
    polytope = Polytope(
        0,
        2,
        A=[[], [], [], []],
        B=[[1, 0], [-1, 0], [0, b], [0, -b]],
        b=[c - 1, -1, (c - 1) ** 2 - a, a - 1],
    )
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    inner = x * x - Fraction(a) - Fraction(b) * y
    objective = -(inner * inner)
    return Instance(
        polytope,
        objective,
        name=f"an1-{a}-{b}-{c}",
        description="maximum is 0 iff some x in [1, c-1] solves x^2 = a (mod b)",
    )
