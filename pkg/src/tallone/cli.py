"""Command-line interface.

Exit status: 0 on success or a positive verdict, 1 on a negative verdict,
2 on unreadable or invalid input.  Output files are only written when the
command gets past input validation.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .errors import InputError, TalloneError
from .model import (
    NotTall,
    complementary_circle,
    defining_exponents,
    dh_truncation,
    is_center_exceptional,
    is_tall,
    moment_cone,
    validate,
)
from .painting import UnsupportedTopology, compare_records, painting_invariant
from .polyhedra import is_delzant_polytope, vertex_cone_report
from .serialize import (
    SCHEMA_VERSION,
    dumps,
    loads,
    rat,
    read_model,
    read_pwaffine,
    read_polyhedron,
    read_record,
    read_skeleton,
    read_truncation,
    write_point,
    write_polyhedron,
    write_pwaffine,
    write_report,
    write_skeleton,
)
from .skeleton import betti, check_delta_compat, check_rho_compat, checkpoints
from .skeleton import validate as validate_skeleton
from .toricproj import DisconnectedStabilizer, NotDelzant, build_projection


class Usage(InputError):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise Usage(f"{path}: {e.strerror}") from None
    return loads(text, path)


def cmd_check_polytope(args) -> tuple[int, dict]:
    p = read_polyhedron(_load(args.polytope))
    if p.is_empty or not p.is_bounded:
        return 1, {"delzant": False, "bounded": not p.is_empty and p.is_bounded,
                   "reason": "empty" if p.is_empty else "unbounded"}
    report = vertex_cone_report(p)
    ok = is_delzant_polytope(p)
    return (0 if ok else 1), {
        "delzant": ok, "bounded": True, "full_dimensional": p.is_full_dimensional,
        "vertex_cones": [{"vertex": write_point(r["vertex"]), "edges": [list(e) for e in r["rays"]],
                          "delzant": r["delzant"]} for r in report]}


def cmd_analyze_model(args) -> tuple[int, dict]:
    m = read_model(_load(args.model))
    rep = validate(m, strict=False)
    out: dict = {"valid": rep.ok, "subtorus_primitive": rep.subtorus_primitive,
                 "subtorus_index": rep.subtorus_index, "weights_faithful": rep.weights_faithful,
                 "weight_invariant_factors": list(rep.weight_invariant_factors),
                 "messages": list(rep.messages)}
    if not rep.ok:
        return 1, out
    tall = is_tall(m)
    out["tall"] = tall
    out["center_exceptional"] = is_center_exceptional(m)
    out["moment_cone"] = write_polyhedron(moment_cone(m))
    if tall:
        out["xi"] = list(defining_exponents(m))
        out["j"] = list(complementary_circle(m))
    return (0 if tall else 1), out


def cmd_truncate_dh(args) -> tuple[int, dict]:
    m = read_model(_load(args.model))
    spec = read_truncation(_load(args.spec))
    validate(m)
    try:
        f = dh_truncation(m, spec)
    except NotTall as e:
        return 1, {"error": "NotTall", "message": str(e)}
    return 0, write_pwaffine(f)


def _skeleton_summary(skel) -> list[str]:
    lines = []
    for i, c in enumerate(skel.cells):
        img = c.image()
        verts = ", ".join("(" + ", ".join(rat(x) for x in v) + ")" for v in img.vrep.vertices)
        kind = {0: "point", 1: "segment", 2: "polygon"}.get(img.dimension, f"{img.dimension}-cell")
        lines.append(f"  cell {i}: {kind} with vertices {verts}; weights {list(c.label.weights)}")
    return lines


def cmd_project(args) -> tuple[int, dict | str]:
    p = read_polyhedron(_load(args.polytope))
    try:
        b = build_projection(p)
    except NotDelzant as e:
        print(f"tallone: {e}", file=sys.stderr)
        for r in vertex_cone_report(p):
            if not r["delzant"]:
                print(f"  non-Delzant vertex {write_point(r['vertex'])}", file=sys.stderr)
        return 1, {"error": "NotDelzant", "message": str(e)}
    except DisconnectedStabilizer as e:
        print(f"tallone: {e}", file=sys.stderr)
        return 1, {"error": "DisconnectedStabilizer", "message": str(e)}
    try:
        bet = list(betti(b.skeleton))
    except TalloneError:
        bet = None
    out = {"delta": write_polyhedron(b.delta), "tall": b.tall, "genus": b.genus,
           "rho": write_pwaffine(b.rho), "skeleton": write_skeleton(b.skeleton), "betti": bet}
    code = 0 if b.tall else 1
    if args.report:
        lines = [f"tall: {'yes' if b.tall else 'no'}",
                 "moment image: " + "; ".join(
                     f"{list(a)}.x >= {rat(c)}" for a, c in b.delta.inequalities),
                 f"skeleton: {len(b.skeleton.cells)} cells, betti numbers {bet}"]
        lines += _skeleton_summary(b.skeleton)
        lines.append(f"genus: {b.genus}")
        return code, "\n".join(lines) + "\n"
    return code, out


def cmd_check_compat(args) -> tuple[int, dict]:
    d = _load(args.bundle)
    if not isinstance(d, dict):
        raise Usage("bundle must be a JSON object")
    allowed = {"delta", "skeleton", "rho", "tall", "genus", "betti"}
    extra = d.keys() - allowed
    if extra:
        raise Usage(f"$: unknown field(s) {sorted(extra)}")
    if "delta" not in d or "skeleton" not in d:
        raise Usage("$: bundle needs \"delta\" and \"skeleton\"")
    delta = read_polyhedron(d["delta"], "$.delta")
    skel = read_skeleton(d["skeleton"], "$.skeleton")
    rho = read_pwaffine(d["rho"], "$.rho") if d.get("rho") is not None else None
    validate_skeleton(skel)
    out = {"delta": write_report(check_delta_compat(skel, delta))}
    ok = out["delta"]["passed"]
    if rho is not None:
        out["rho"] = write_report(check_rho_compat(skel, delta, rho))
        ok = ok and out["rho"]["passed"]
    if args.checkpoints:
        out["checkpoints"] = {"delta": [write_point(x) for x in checkpoints(skel, delta)]}
        if rho is not None:
            out["checkpoints"]["rho"] = [write_point(x)
                                         for x in checkpoints(skel, delta, True, rho)]
    out["passed"] = ok
    return (0 if ok else 1), out


def cmd_compare(args) -> tuple[int, dict]:
    r1 = read_record(_load(args.first))
    r2 = read_record(_load(args.second))
    v = compare_records(r1, r2)
    out = {"verdict": v.verdict, "delta_equal": v.delta_equal, "rho_equal": v.rho_equal,
           "genus_equal": v.genus_equal, "painting_equal": v.painting_equal,
           "equivalence": "homology-level"}
    if v.message:
        out["message"] = v.message
    for name, r in (("first", r1), ("second", r2)):
        try:
            inv = painting_invariant(r.painting)
            out[f"{name}_painting_invariant"] = {"kind": inv.kind, "value": inv.value}
        except UnsupportedTopology as e:
            out[f"{name}_painting_invariant"] = {"kind": "unsupported", "betti": list(e.betti or ())}
    return (0 if v.verdict == "IsomorphicData" else 1), out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tallone", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version",
                    version=f"tallone {__version__} (schema {SCHEMA_VERSION})")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-o", "--output", help="write the result here instead of stdout")
        p.set_defaults(func=fn)
        return p

    p = add("check-polytope", cmd_check_polytope, "Delzant test with per-vertex diagnostics")
    p.add_argument("polytope")
    p = add("analyze-model", cmd_analyze_model, "validity, tallness, xi, j and moment cone")
    p.add_argument("model")
    p = add("truncate-dh", cmd_truncate_dh, "DH function of a truncated local model")
    p.add_argument("model")
    p.add_argument("spec")
    p = add("project", cmd_project, "complexity-one data of a toric projection")
    p.add_argument("polytope")
    p.add_argument("--report", action="store_true", help="human-readable summary")
    p = add("check-compat", cmd_check_compat, "compatibility of skeleton, image and DH function")
    p.add_argument("bundle")
    p.add_argument("--checkpoints", action="store_true", help="include the checkpoint set")
    p = add("compare", cmd_compare, "compare two classification records")
    p.add_argument("first")
    p.add_argument("second")
    return ap


def _emit(result, path: str | None) -> None:
    text = result if isinstance(result, str) else dumps(result)
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".tallone-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, result = args.func(args)
    except InputError as e:
        print(f"tallone: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    _emit(result, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
