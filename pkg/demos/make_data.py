"""Write the JSON inputs used by the command-line walkthrough in the README."""
from pathlib import Path

from tallone.constructions import cube, example_6d
from tallone.serialize import dumps, write_polyhedron
from tallone.toricproj import build_projection

out = Path(__file__).parent / "data"
out.mkdir(exist_ok=True)


def save(name, obj):
    (out / name).write_text(dumps(obj))
    print("wrote", out / name)


save("cube.json", write_polyhedron(cube(3)))
save("six_d.json", write_polyhedron(example_6d()))
save("not_delzant.json", {"dim": 2, "ineqs": [
    {"a": [1, 0], "b": "0"}, {"a": [0, 1], "b": "0"}, {"a": [-1, -2], "b": "-2"}]})
save("circle_model.json", {"rank": 1, "subtorus": [[1]], "weights": [[1], [-1]]})
save("truncation.json", {"j": [1, 0], "kappa": "1"})

b = build_projection(example_6d())
rho = {"dim": 2, "cells": [{"carrier": write_polyhedron(c.carrier),
                            "slope": [str(s) for s in c.slope],
                            "const": str(c.constant)} for c in b.rho.cells],
       "domain": write_polyhedron(b.rho.domain)}


def record(h1):
    return {"delta": write_polyhedron(b.delta), "rho": rho, "genus": 1,
            "painting": {"genus": 1, "h1_map": [[h1[0]], [h1[1]]], "topology": [1, 1, 0]}}


save("record_a.json", record((1, 0)))
save("record_b.json", record((3, 5)))
save("record_c.json", record((2, 4)))
