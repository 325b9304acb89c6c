"""Batch front end: one job per invocation, canonical machine-readable reports.

Exit codes: 0 success, 2 schema violation, 3 semantic violation (valid
document, invalid geometry), 4 computation error. Reports embed the full
certificate data (cones, fans, linear forms, half-spaces) so every answer
can be re-checked from the report alone; identical input and seed produce
byte-identical reports.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .exactgeom import Cone, dot, vec
from .documents import (
    SchemaViolation,
    SemanticViolation,
    cone_doc,
    dump_document,
    fan_doc,
    load_document,
    matrix_doc,
    parse_curve_model,
    parse_fan,
    parse_group_action,
    parse_ring_spec,
    rational_str,
    vector_doc,
)
from .toric import NotEffectiveError, ToricDivisor, build_model, h0 as toric_h0
from .chambers import (
    KappaInsideError,
    NoBigClassError,
    chamber_decomposition,
    nef_slice,
    segment_entry_parameter,
    support_cone,
    visible_boundary,
)
from .curves import UnsupportedClassShapeError, bigraded_support, is_gen_numeric_class, ruled_surface_slice_dims, twisted_slice_ring_fg
from .conedomain import (
    GeneratorNotPreservingConeError,
    GroupCapExceededError,
    domain_volume_fraction,
    enumerate_group,
    fundamental_domain,
    verify_tiling,
)
from .mmp import (
    TargetOutsideSupportError,
    SupportLacksAmpleError,
    classify_wall,
    picard_rank_ledger,
    pushforward_coeffs,
    run_walk,
    section_preservation_check,
)

COMMANDS = (
    "support",
    "chambers",
    "mmp",
    "curve-ring",
    "gen-check",
    "fundamental-domain",
    "visible-boundary",
    "h0",
)

COMPUTATION_ERRORS = (
    NotEffectiveError,
    NoBigClassError,
    KappaInsideError,
    TargetOutsideSupportError,
    SupportLacksAmpleError,
    GeneratorNotPreservingConeError,
    GroupCapExceededError,
    UnsupportedClassShapeError,
    ValueError,
)


@dataclass(frozen=True)
class JobSpec:
    command: str
    input_path: str
    output_path: str | None
    seed: int = 0
    params: tuple = ()

    def param(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default


def _parse_class_vector(text, what):
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise SchemaViolation([(f"--{what}", f"expected comma-separated rationals, got {text!r}")])


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def _cmd_support(doc, job):
    spec = parse_ring_spec(doc)
    sc = support_cone(spec)
    return {
        "support": cone_doc(sc.cone),
        "class_support": cone_doc(sc.class_cone),
        "contains_big": sc.contains_big,
        "contains_ample": sc.contains_ample,
    }


def _cmd_chambers(doc, job):
    spec = parse_ring_spec(doc)
    cx = chamber_decomposition(spec)
    chambers = []
    for ch in cx.chambers:
        chambers.append({
            "cone": cone_doc(ch.cone),
            "linear_forms": matrix_doc(ch.linear_forms),
            "model_id": ch.model_id,
            "model_fan": fan_doc(ch.model_fan),
            "proj_multiple": str(ch.proj_multiple),
            "dropped_rank": str(ch.dropped_rank),
        })
    walls = []
    for w in cx.walls:
        i, j = w.chambers
        kind = classify_wall(spec, w.cone, cx.chambers[i], cx.chambers[j])
        walls.append({
            "cone": cone_doc(w.cone),
            "chambers": [str(i), str(j)],
            "kind": kind,
        })
    return {
        "support": cone_doc(cx.support.cone),
        "class_support": cone_doc(cx.support.class_cone),
        "chambers": chambers,
        "walls": walls,
    }


def _cmd_mmp(doc, job):
    spec = parse_ring_spec(doc)
    target_raw = job.param("target")
    if target_raw is None:
        raise SchemaViolation([("--target", "mmp requires a target class")])
    target = _parse_class_vector(target_raw, "target")
    trace = run_walk(spec, target)
    crossings = []
    for c in trace.crossings:
        crossings.append({
            "wall": cone_doc(c.wall),
            "from_model": c.from_chamber,
            "to_model": c.to_chamber,
            "kind": c.kind,
        })
    result = {
        "target": vector_doc(target),
        "status": trace.status,
        "crossings": crossings,
        "start_fan": fan_doc(trace.start_fan),
        "final_fan": fan_doc(trace.final_fan),
        "picard_ranks": [str(r) for r in picard_rank_ledger(trace)],
    }
    if trace.final_wall is not None:
        result["final_wall"] = cone_doc(trace.final_wall)
    k_max = job.param("kmax")
    if k_max is not None and trace.status == "minimal_model":
        if all(Fraction(t).denominator == 1 for t in target):
            model = spec.model
            D = model.divisor_with_class(target)
            push = pushforward_coeffs(model, D, trace.final_fan)
            preserved = section_preservation_check(spec, trace, target, k_max)
            result["section_check"] = {
                "k_max": str(k_max),
                "preserved": preserved,
                "start_dims": [str(toric_h0(model, D.scale(k))) for k in range(1, k_max + 1)],
                "final_dims": [str(toric_h0(push.model, push.scale(k))) for k in range(1, k_max + 1)],
                "pushforward": vector_doc(push.coeffs),
            }
    return result


def _cmd_curve_ring(doc, job):
    model, divisors = parse_curve_model(doc)
    dname = job.param("d", "D")
    aname = job.param("a", "A")
    for name in (dname, aname):
        if name not in divisors:
            raise SchemaViolation([("$.divisors", f"missing divisor {name!r}")])
    box = job.param("box", 12)
    k_max = job.param("kmax", min(box, 8))
    sup = bigraded_support(model, divisors[dname], divisors[aname], box)
    dims = ruled_surface_slice_dims(model, divisors[dname], divisors[aname], k_max)
    return {
        "box": str(box),
        "support_pairs": [[str(i), str(j)] for i, j in sup.pairs],
        "finitely_generated": sup.finitely_generated,
        "witness": sup.witness,
        "slice_dims": [str(d) for d in dims],
    }


def _cmd_gen_check(doc, job):
    model, divisors = parse_curve_model(doc)
    dname = job.param("d", "D")
    aname = job.param("a", "A")
    for name in (dname, aname):
        if name not in divisors:
            raise SchemaViolation([("$.divisors", f"missing divisor {name!r}")])
    D, A = divisors[dname], divisors[aname]
    xi = job.param("xi", 1)
    base_name = job.param("base")
    base = divisors[base_name] if base_name else None
    if base_name and base_name not in divisors:
        raise SchemaViolation([("$.divisors", f"missing divisor {base_name!r}")])
    verdict = is_gen_numeric_class(model, D, A, xi_power=xi, base=base)
    result = {
        "is_gen": verdict.is_gen,
        "explanation": verdict.explanation,
        "xi_power": str(xi),
    }
    twist_name = job.param("twist")
    if twist_name is not None:
        if twist_name not in divisors:
            raise SchemaViolation([("$.divisors", f"missing divisor {twist_name!r}")])
        k_max = job.param("kmax", 8)
        tw = twisted_slice_ring_fg(model, D, A, divisors[twist_name], k_max)
        result["twisted"] = {
            "twist": twist_name,
            "finitely_generated": tw.finitely_generated,
            "explanation": tw.explanation,
            "slice_dims": [str(d) for d in tw.slice_dims],
        }
    return result


def _cmd_fundamental_domain(doc, job):
    action, cone = parse_group_action(doc)
    fd = fundamental_domain(cone, action)
    group = enumerate_group(action, cone)
    samples = job.param("samples", 100)
    report = verify_tiling(fd, action, cone, samples, seed=job.seed)
    result = {
        "cone": cone_doc(cone),
        "group_order": str(fd.group_order),
        "basepoint": vector_doc(fd.basepoint),
        "gram": matrix_doc(fd.gram),
        "domain": cone_doc(fd.domain),
        "tiling": {
            "samples": str(report.samples),
            "covering_failures": len(report.covering_failures),
            "overlap_witnesses": len(report.overlap_witnesses),
            "disjoint_pairs_checked": str(report.disjoint_pairs_checked),
            "ok": report.ok,
        },
    }
    if cone.ambient_dim <= 3:
        result["volume_fraction"] = rational_str(domain_volume_fraction(fd, cone, group))
    return result


def _cmd_visible_boundary(doc, job):
    spec = parse_ring_spec(doc)
    kappa_raw = job.param("kappa")
    if kappa_raw is None:
        raise SchemaViolation([("--kappa", "visible-boundary requires a viewpoint class")])
    kappa = _parse_class_vector(kappa_raw, "kappa")
    cone = nef_slice(spec)
    facets = visible_boundary(cone, kappa)
    out = []
    for vf in facets:
        bary = vf.facet.interior_point()
        t = segment_entry_parameter(cone, kappa, bary)
        out.append({
            "normal": vector_doc(vf.normal),
            "facet": cone_doc(vf.facet),
            "barycenter": vector_doc(bary),
            "segment_entry": rational_str(t),
        })
    return {
        "cone": cone_doc(cone),
        "kappa": vector_doc(kappa),
        "visible_facets": out,
    }


def _cmd_h0(doc, job):
    fan = parse_fan(doc)
    from .documents import SemanticViolation
    from .toric import NonCompleteFanError, NonSimplicialFanError

    try:
        model = build_model(fan)
    except (NonCompleteFanError, NonSimplicialFanError) as e:
        raise SemanticViolation(str(e))
    div_raw = job.param("divisor")
    if div_raw is None:
        raise SchemaViolation([("--divisor", "h0 requires divisor coefficients")])
    coeffs = _parse_class_vector(div_raw, "divisor")
    if len(coeffs) != model.n_rays:
        raise SchemaViolation([("--divisor", "one coefficient per ray required")])
    D = model.divisor(coeffs)
    from .toric import section_polytope
    from .exactgeom import lattice_points

    value = toric_h0(model, D)
    P = section_polytope(model, D.floor())
    pts = lattice_points(P.polyhedron)
    return {
        "divisor": vector_doc(coeffs),
        "h0": str(value),
        "lattice_points": matrix_doc(pts),
        "class": vector_doc(D.class_vector()),
    }


HANDLERS = {
    "support": (_cmd_support, "ring_spec"),
    "chambers": (_cmd_chambers, "ring_spec"),
    "mmp": (_cmd_mmp, "ring_spec"),
    "curve-ring": (_cmd_curve_ring, "curve_model"),
    "gen-check": (_cmd_gen_check, "curve_model"),
    "fundamental-domain": (_cmd_fundamental_domain, "group_action"),
    "visible-boundary": (_cmd_visible_boundary, "ring_spec"),
    "h0": (_cmd_h0, "fan"),
}


def run_job(job: JobSpec, input_text: str):
    """Dispatch a job; returns (report_text, exit_code)."""
    digest = hashlib.sha256(input_text.encode()).hexdigest()
    base = {
        "kind": "report",
        "tool": "glab",
        "version": __version__,
        "command": job.command,
        "seed": str(job.seed),
        "input_digest": f"sha256:{digest}",
        "parameters": {k: str(v) for k, v in sorted(job.params)},
    }
    try:
        doc = load_document(input_text)
        handler, expected_kind = HANDLERS[job.command]
        if doc.get("kind") != expected_kind:
            raise SchemaViolation(
                [("$.kind", f"command {job.command} expects a {expected_kind} document")]
            )
        result = handler(doc, job)
    except SchemaViolation as e:
        base["error"] = {
            "type": "schema_violation",
            "violations": [{"path": p, "message": m} for p, m in e.violations],
        }
        return dump_document(base), 2
    except SemanticViolation as e:
        base["error"] = {"type": "semantic_violation", "message": str(e)}
        return dump_document(base), 3
    except COMPUTATION_ERRORS as e:
        base["error"] = {"type": type(e).__name__, "message": str(e)}
        return dump_document(base), 4
    base["result"] = result
    return dump_document(base), 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="glab",
        description="Exact-arithmetic cone geography: support cones, chambers, "
        "minimal-model walks, curve ring verdicts, fundamental domains.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="input document path")
    p.add_argument("--output", help="report path (stdout when omitted)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--box", type=int, help="box bound for curve-ring enumeration")
    p.add_argument("--kmax", type=int, help="slice/section check bound")
    p.add_argument("--samples", type=int, help="tiling sample count")
    p.add_argument("--target", help="mmp target class, comma-separated rationals")
    p.add_argument("--kappa", help="visible-boundary viewpoint class")
    p.add_argument("--divisor", help="h0 divisor coefficients")
    p.add_argument("--xi", type=int, help="gen-check power of the tautological class")
    p.add_argument("--base", help="gen-check base divisor name")
    p.add_argument("--twist", help="gen-check twist divisor name")
    p.add_argument("--d", help="curve divisor name for the first grading (default D)")
    p.add_argument("--a", help="curve divisor name for the second grading (default A)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = []
    for key in ("box", "kmax", "samples", "target", "kappa", "divisor", "xi", "base", "twist", "d", "a"):
        val = getattr(args, key)
        if val is not None:
            params.append((key, val))
    job = JobSpec(
        command=args.command,
        input_path=args.input,
        output_path=args.output,
        seed=args.seed,
        params=tuple(sorted(params)),
    )
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"glab: cannot read input: {e}", file=sys.stderr)
        return 2
    report, code = run_job(job, text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
