"""Canonical JSON for every data type.

Rationals are written as ``"p/q"`` strings (``"p"`` when integral), keys are
sorted and no floats are ever produced.  Readers reject unknown fields and
report the path of the offending value.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import InputError
from .exactla import LatticeBasis
from .model import ComplexityOneModel, TruncationSpec
from .painting import ClassificationRecord, PaintingData
from .polyhedra import HPolyhedron
from .pwaffine import AffineCell, PiecewiseAffineFn
from .skeleton import CompatReport, Incidence, SkeletonCell, SkeletonComplex

SCHEMA_VERSION = "1"


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}") from None


def rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- readers ------------------------------------------------------------------


def _obj(d, path: str, required: set, optional: set = frozenset()) -> dict:
    if not isinstance(d, dict):
        raise SchemaError(f"{path}: expected an object")
    missing = required - d.keys()
    if missing:
        raise SchemaError(f"{path}: missing field(s) {sorted(missing)}")
    extra = d.keys() - required - set(optional)
    if extra:
        raise SchemaError(f"{path}: unknown field(s) {sorted(extra)}")
    return d


def _list(d, path: str) -> list:
    if not isinstance(d, list):
        raise SchemaError(f"{path}: expected an array")
    return d


def _int(x, path: str) -> int:
    if isinstance(x, bool):
        raise SchemaError(f"{path}: expected an integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise SchemaError(f"{path}: expected an integer")


def _count(x, path: str) -> int:
    v = _int(x, path)
    if v < 0:
        raise SchemaError(f"{path}: expected a nonnegative integer")
    return v


def _rat(x, path: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SchemaError(f"{path}: expected a rational string like \"p/q\"")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"{path}: expected a rational string like \"p/q\"")


def _ints(x, path: str, length: int | None = None) -> list[int]:
    vals = [_int(v, f"{path}[{i}]") for i, v in enumerate(_list(x, path))]
    if length is not None and len(vals) != length:
        raise SchemaError(f"{path}: expected {length} entries, got {len(vals)}")
    return vals


def _rats(x, path: str, length: int | None = None) -> list[Fraction]:
    vals = [_rat(v, f"{path}[{i}]") for i, v in enumerate(_list(x, path))]
    if length is not None and len(vals) != length:
        raise SchemaError(f"{path}: expected {length} entries, got {len(vals)}")
    return vals


def _matrix(x, path: str, cols: int | None = None) -> list[list[int]]:
    return [_ints(r, f"{path}[{i}]", cols) for i, r in enumerate(_list(x, path))]


def read_polyhedron(d, path: str = "$") -> HPolyhedron:
    _obj(d, path, {"dim", "ineqs"}, {"eqs"})
    n = _count(d["dim"], f"{path}.dim")

    def rows(key):
        out = []
        for i, r in enumerate(_list(d.get(key, []), f"{path}.{key}")):
            p = f"{path}.{key}[{i}]"
            _obj(r, p, {"a", "b"})
            a = _ints(r["a"], f"{p}.a", n)
            if not any(a):
                raise SchemaError(f"{p}.a: normal must be nonzero")
            out.append((tuple(a), _rat(r["b"], f"{p}.b")))
        return tuple(out)

    return HPolyhedron(n, rows("ineqs"), rows("eqs"))


def read_pwaffine(d, path: str = "$") -> PiecewiseAffineFn:
    _obj(d, path, {"dim", "cells"}, {"domain"})
    n = _count(d["dim"], f"{path}.dim")
    cells = []
    for i, c in enumerate(_list(d["cells"], f"{path}.cells")):
        p = f"{path}.cells[{i}]"
        _obj(c, p, {"carrier", "slope", "const"})
        car = read_polyhedron(c["carrier"], f"{p}.carrier")
        if car.dim != n:
            raise SchemaError(f"{p}.carrier: dimension differs from {n}")
        cells.append(AffineCell(car, tuple(_rats(c["slope"], f"{p}.slope", n)),
                                _rat(c["const"], f"{p}.const")))
    if "domain" in d:
        domain = read_polyhedron(d["domain"], f"{path}.domain")
    else:
        pts, rays, lin = [], [], []
        for c in cells:
            v = c.carrier.vrep
            pts += v.vertices
            rays += v.rays
            lin += v.lineality
        if not pts:
            raise SchemaError(f"{path}.cells: at least one nonempty cell is required")
        domain = HPolyhedron.from_generators(n, pts, rays, lin)
    return PiecewiseAffineFn(n, tuple(cells), domain)


def read_model(d, path: str = "$", with_base: bool = True) -> ComplexityOneModel:
    _obj(d, path, {"rank", "subtorus", "weights"}, {"base"} if with_base else set())
    n = _count(d["rank"], f"{path}.rank")
    sub = _matrix(d["subtorus"], f"{path}.subtorus", n)
    h = len(sub)
    weights = _matrix(d["weights"], f"{path}.weights", h)
    if len(weights) != h + 1:
        raise SchemaError(f"{path}.weights: expected {h + 1} weights, got {len(weights)}")
    base = _rats(d["base"], f"{path}.base", n) if d.get("base") is not None else None
    try:
        lat = LatticeBasis.from_vectors(sub, n)
    except ValueError as e:
        raise SchemaError(f"{path}.subtorus: {e}") from None
    return ComplexityOneModel(n, lat, tuple(tuple(w) for w in weights), base)


def read_truncation(d, path: str = "$") -> TruncationSpec:
    _obj(d, path, {"j", "kappa"})
    return TruncationSpec(tuple(_ints(d["j"], f"{path}.j")), _rat(d["kappa"], f"{path}.kappa"))


def read_skeleton(d, path: str = "$") -> SkeletonComplex:
    _obj(d, path, {"rank", "cells"}, {"incidences"})
    n = _count(d["rank"], f"{path}.rank")
    cells = []
    for i, c in enumerate(_list(d["cells"], f"{path}.cells")):
        p = f"{path}.cells[{i}]"
        _obj(c, p, {"carrier", "pi_linear", "pi_offset", "label"})
        car = read_polyhedron(c["carrier"], f"{p}.carrier")
        lin = _matrix(c["pi_linear"], f"{p}.pi_linear", car.dim)
        if len(lin) != n:
            raise SchemaError(f"{p}.pi_linear: expected {n} rows")
        off = _rats(c["pi_offset"], f"{p}.pi_offset", n)
        label = read_model(c["label"], f"{p}.label", with_base=False)
        cells.append(SkeletonCell(car, tuple(map(tuple, lin)), tuple(off), label))
    incs = []
    for i, r in enumerate(_list(d.get("incidences", []), f"{path}.incidences")):
        p = f"{path}.incidences[{i}]"
        _obj(r, p, {"cell", "face", "target"})
        incs.append(Incidence(_count(r["cell"], f"{p}.cell"), tuple(_ints(r["face"], f"{p}.face")),
                              _count(r["target"], f"{p}.target")))
    return SkeletonComplex(n, tuple(cells), tuple(incs))


def read_painting(d, path: str = "$", skeleton: SkeletonComplex | None = None) -> PaintingData:
    _obj(d, path, {"genus"}, {"h1_map", "degree", "topology"})
    g = _count(d["genus"], f"{path}.genus")
    h1 = d.get("h1_map")
    h1 = tuple(map(tuple, _matrix(h1, f"{path}.h1_map"))) if h1 is not None else None
    if h1 is not None and len(h1) != 2 * g:
        raise SchemaError(f"{path}.h1_map: expected {2 * g} rows")
    deg = _int(d["degree"], f"{path}.degree") if d.get("degree") is not None else None
    topo = d.get("topology")
    topo = tuple(_ints(topo, f"{path}.topology", 3)) if topo is not None else None
    if skeleton is None and topo is None:
        raise SchemaError(f"{path}: a painting without a skeleton needs \"topology\"")
    return PaintingData(skeleton, g, h1, deg, topo)


def read_record(d, path: str = "$") -> ClassificationRecord:
    _obj(d, path, {"delta", "rho", "genus", "painting"}, {"skeleton"})
    delta = read_polyhedron(d["delta"], f"{path}.delta")
    rho = read_pwaffine(d["rho"], f"{path}.rho")
    g = _count(d["genus"], f"{path}.genus")
    skel = read_skeleton(d["skeleton"], f"{path}.skeleton") if d.get("skeleton") is not None else None
    paint = read_painting(d["painting"], f"{path}.painting", skel)
    if paint.genus != g:
        raise SchemaError(f"{path}.painting.genus: differs from the record genus")
    return ClassificationRecord(delta, rho, g, paint)


# -- writers ------------------------------------------------------------------


def write_polyhedron(p: HPolyhedron) -> dict:
    out = {"dim": p.dim, "ineqs": [{"a": list(a), "b": rat(b)} for a, b in p.inequalities]}
    if p.equalities:
        out["eqs"] = [{"a": list(a), "b": rat(b)} for a, b in p.equalities]
    return out


def write_pwaffine(f: PiecewiseAffineFn) -> dict:
    return {"dim": f.ambient_dim,
            "cells": [{"carrier": write_polyhedron(c.carrier), "slope": [rat(s) for s in c.slope],
                       "const": rat(c.constant)} for c in f.cells],
            "domain": write_polyhedron(f.domain)}


def write_model(m: ComplexityOneModel) -> dict:
    out = {"rank": m.rank, "subtorus": [list(v) for v in m.subtorus.vectors()],
           "weights": [list(w) for w in m.weights]}
    if m.base_point is not None:
        out["base"] = [rat(x) for x in m.base_point]
    return out


def write_skeleton(s: SkeletonComplex) -> dict:
    return {"rank": s.rank,
            "cells": [{"carrier": write_polyhedron(c.carrier),
                       "pi_linear": [list(r) for r in c.pi_linear],
                       "pi_offset": [rat(x) for x in c.pi_offset],
                       "label": write_model(c.label)} for c in s.cells],
            "incidences": [{"cell": i.cell, "face": list(i.face), "target": i.target}
                           for i in s.incidences]}


def write_point(p) -> list[str]:
    return [rat(x) for x in p]


def write_report(r: CompatReport) -> dict:
    recs = []
    for rec in r.records:
        item = {"point": write_point(rec.point), "cells": list(rec.cells), "passed": rec.passed}
        det = {}
        for k, v in rec.detail.items():
            if isinstance(v, HPolyhedron):
                det[k] = write_polyhedron(v)
            elif isinstance(v, tuple):
                det[k] = [rat(x) for x in v]
            elif isinstance(v, Fraction):
                det[k] = rat(v)
            elif v is None:
                det[k] = None
            else:
                det[k] = v
        if det:
            item["detail"] = det
        recs.append(item)
    return {"kind": r.kind, "passed": r.passed, "records": recs}


def write_painting(p: PaintingData) -> dict:
    out: dict = {"genus": p.genus}
    if p.h1_map is not None:
        out["h1_map"] = [list(r) for r in p.h1_map]
    if p.degree is not None:
        out["degree"] = p.degree
    if p.topology is not None:
        out["topology"] = list(p.topology)
    return out


def write_record(r: ClassificationRecord) -> dict:
    out = {"delta": write_polyhedron(r.delta), "rho": write_pwaffine(r.rho), "genus": r.genus,
           "painting": write_painting(r.painting)}
    if r.painting.skeleton is not None:
        out["skeleton"] = write_skeleton(r.painting.skeleton)
    return out
