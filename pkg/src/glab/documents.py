"""Self-describing exact documents: parsing, validation, canonical emission.

One text format for every input and report: JSON whose numeric leaves are
all strings ("3", "-1/2"), so no precision is lost anywhere. A top-level
"kind" field discriminates fan, ring_spec, curve_model, group_action and
job documents. Emission is canonical (sorted keys, fixed indentation,
canonically ordered arrays), which makes reports byte-reproducible.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exactgeom import Cone
from .curves import CurveDivisor, CurveModel, JacobianGroup
from .conedomain import LatticeGroupAction
from .toric import Fan, FanValidationError, NonCompleteFanError, NonSimplicialFanError, ToricModel, build_model
from .chambers import RingSpec

KINDS = ("fan", "ring_spec", "curve_model", "group_action", "job")


class SchemaViolation(ValueError):
    """Document does not match the schema; carries (path, message) pairs."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.violations))


class SemanticViolation(ValueError):
    """Well-formed document with geometrically invalid content."""


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------

def parse_rational(value, path, violations) -> Fraction | None:
    if not isinstance(value, str):
        violations.append((path, "numbers must be strings like '3' or '-1/2'"))
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        violations.append((path, f"not a rational number: {value!r}"))
        return None


def parse_integer(value, path, violations) -> int | None:
    q = parse_rational(value, path, violations)
    if q is None:
        return None
    if q.denominator != 1:
        violations.append((path, f"expected an integer, got {value!r}"))
        return None
    return int(q)


def rational_str(x) -> str:
    return str(Fraction(x))


def vector_doc(v) -> list:
    return [rational_str(x) for x in v]


def matrix_doc(rows) -> list:
    return [vector_doc(r) for r in rows]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation([("$", f"invalid JSON: {e.msg} at line {e.lineno}")])
    if not isinstance(doc, dict):
        raise SchemaViolation([("$", "document must be an object")])
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaViolation([("$.kind", f"kind must be one of {KINDS}")])
    return doc


def parse_input(doc: dict):
    """Dispatch a validated document to the matching in-memory object."""
    kind = doc.get("kind")
    if kind == "fan":
        return parse_fan(doc)
    if kind == "ring_spec":
        return parse_ring_spec(doc)
    if kind == "curve_model":
        return parse_curve_model(doc)
    if kind == "group_action":
        return parse_group_action(doc)
    raise SchemaViolation([("$.kind", f"cannot parse documents of kind {kind!r}")])


def _require(doc, field, typ, path, violations):
    if field not in doc:
        violations.append((f"{path}.{field}", "missing required field"))
        return None
    val = doc[field]
    if typ is not None and not isinstance(val, typ):
        violations.append((f"{path}.{field}", f"expected {typ.__name__}"))
        return None
    return val


def _parse_int_vector(value, path, violations, length=None):
    if not isinstance(value, list):
        violations.append((path, "expected an array"))
        return None
    out = []
    for i, x in enumerate(value):
        n = parse_integer(x, f"{path}[{i}]", violations)
        if n is None:
            return None
        out.append(n)
    if length is not None and len(out) != length:
        violations.append((path, f"expected length {length}"))
        return None
    return tuple(out)


def parse_fan(doc, path="$") -> Fan:
    violations = []
    rank = None
    rank_raw = _require(doc, "ambient_rank", str, path, violations)
    if rank_raw is not None:
        rank = parse_integer(rank_raw, f"{path}.ambient_rank", violations)
    rays_raw = _require(doc, "rays", list, path, violations)
    cones_raw = _require(doc, "max_cones", list, path, violations)
    rays = []
    if rays_raw is not None and rank is not None:
        for i, r in enumerate(rays_raw):
            v = _parse_int_vector(r, f"{path}.rays[{i}]", violations, rank)
            if v is not None:
                rays.append(v)
    cones = []
    if cones_raw is not None:
        for i, c in enumerate(cones_raw):
            v = _parse_int_vector(c, f"{path}.max_cones[{i}]", violations)
            if v is not None:
                cones.append(v)
    if violations:
        raise SchemaViolation(violations)
    try:
        return Fan.make(rank, rays, cones)
    except FanValidationError as e:
        raise SemanticViolation(str(e))


def parse_ring_spec(doc, path="$") -> RingSpec:
    violations = []
    fan_doc = _require(doc, "fan", dict, path, violations)
    divisors_raw = _require(doc, "divisors", list, path, violations)
    if violations:
        raise SchemaViolation(violations)
    fan = parse_fan(fan_doc, f"{path}.fan")
    try:
        model = build_model(fan)
    except (NonCompleteFanError, NonSimplicialFanError) as e:
        raise SemanticViolation(str(e))
    divisors = []
    for i, row in enumerate(divisors_raw):
        if not isinstance(row, list):
            violations.append((f"{path}.divisors[{i}]", "expected an array"))
            continue
        coeffs = []
        for j, x in enumerate(row):
            q = parse_rational(x, f"{path}.divisors[{i}][{j}]", violations)
            if q is not None:
                coeffs.append(q)
        if len(coeffs) == len(row):
            if len(coeffs) != model.n_rays:
                violations.append((f"{path}.divisors[{i}]", "one coefficient per ray required"))
            else:
                divisors.append(model.divisor(coeffs))
    if violations:
        raise SchemaViolation(violations)
    if not divisors:
        raise SemanticViolation("ring spec needs at least one divisor")
    return RingSpec.make(model, divisors)


def parse_curve_model(doc, path="$"):
    violations = []
    genus_raw = _require(doc, "genus", str, path, violations)
    jac_doc = _require(doc, "jacobian", dict, path, violations)
    pts_doc = _require(doc, "points", dict, path, violations)
    genus = parse_integer(genus_raw, f"{path}.genus", violations) if genus_raw is not None else None
    jac = None
    if jac_doc is not None:
        fr_raw = _require(jac_doc, "free_rank", str, f"{path}.jacobian", violations)
        to_raw = _require(jac_doc, "torsion_orders", list, f"{path}.jacobian", violations)
        fr = parse_integer(fr_raw, f"{path}.jacobian.free_rank", violations) if fr_raw is not None else None
        orders = []
        if to_raw is not None:
            for i, t in enumerate(to_raw):
                o = parse_integer(t, f"{path}.jacobian.torsion_orders[{i}]", violations)
                if o is not None:
                    orders.append(o)
        if fr is not None and to_raw is not None:
            try:
                jac = JacobianGroup(fr, tuple(orders))
            except ValueError as e:
                raise SemanticViolation(str(e))
    points = {}
    if pts_doc is not None and jac is not None:
        for name, pt in sorted(pts_doc.items()):
            ppath = f"{path}.points.{name}"
            if not isinstance(pt, dict):
                violations.append((ppath, "expected an object with 'free' and 'torsion'"))
                continue
            free = _parse_int_vector(pt.get("free", []), f"{ppath}.free", violations)
            tors = _parse_int_vector(pt.get("torsion", []), f"{ppath}.torsion", violations)
            if free is None or tors is None:
                continue
            try:
                points[name] = jac.element(free, tors)
            except ValueError as e:
                raise SemanticViolation(f"{ppath}: {e}")
    if violations:
        raise SchemaViolation(violations)
    try:
        model = CurveModel.make(genus, jac, points)
    except ValueError as e:
        raise SemanticViolation(str(e))
    divisors = {}
    div_doc = doc.get("divisors", {})
    if not isinstance(div_doc, dict):
        raise SchemaViolation([(f"{path}.divisors", "expected an object")])
    for name, mults in sorted(div_doc.items()):
        dpath = f"{path}.divisors.{name}"
        if not isinstance(mults, dict):
            violations.append((dpath, "expected an object of point multiplicities"))
            continue
        parsed = {}
        for pt, m in sorted(mults.items()):
            q = parse_rational(m, f"{dpath}.{pt}", violations)
            if q is not None:
                parsed[pt] = q
        try:
            divisors[name] = model.divisor(parsed)
        except KeyError as e:
            raise SemanticViolation(f"{dpath}: unknown point {e}")
    if violations:
        raise SchemaViolation(violations)
    return model, divisors


def parse_group_action(doc, path="$"):
    violations = []
    rank_raw = _require(doc, "rank", str, path, violations)
    gens_raw = _require(doc, "generators", list, path, violations)
    rays_raw = _require(doc, "cone_rays", list, path, violations)
    rank = parse_integer(rank_raw, f"{path}.rank", violations) if rank_raw is not None else None
    gens = []
    if gens_raw is not None and rank is not None:
        for i, g in enumerate(gens_raw):
            if not isinstance(g, list):
                violations.append((f"{path}.generators[{i}]", "expected a matrix"))
                continue
            rows = []
            for j, row in enumerate(g):
                v = _parse_int_vector(row, f"{path}.generators[{i}][{j}]", violations, rank)
                if v is not None:
                    rows.append(v)
            if len(rows) == len(g):
                gens.append(rows)
    rays = []
    if rays_raw is not None and rank is not None:
        for i, r in enumerate(rays_raw):
            v = _parse_int_vector(r, f"{path}.cone_rays[{i}]", violations, rank)
            if v is not None:
                rays.append(v)
    if violations:
        raise SchemaViolation(violations)
    if not rays:
        raise SemanticViolation("group action needs a nonempty cone")
    from .conedomain import GeneratorNotUnimodularError

    try:
        action = LatticeGroupAction.make(rank, gens)
    except GeneratorNotUnimodularError as e:
        raise SemanticViolation(str(e))
    cone = Cone.from_rays(rays, ambient_dim=rank)
    return action, cone


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def cone_doc(cone: Cone) -> dict:
    return {
        "ambient_dim": str(cone.ambient_dim),
        "rays": matrix_doc(cone.rays),
        "lineality": matrix_doc(cone.lineality),
        "facets": matrix_doc(cone.facets),
        "equations": matrix_doc(cone.equations),
        "dim": str(cone.dim),
        "lineality_dim": str(cone.lineality_dim),
    }


def fan_doc(fan: Fan) -> dict:
    c = fan.canonical()
    return {
        "kind": "fan",
        "ambient_rank": str(c.ambient_rank),
        "rays": matrix_doc(c.rays),
        "max_cones": [[str(i) for i in cone] for cone in c.max_cones],
    }


def dump_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
