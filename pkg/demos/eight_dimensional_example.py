"""The eight-dimensional example, whose skeleton is a sphere.

The frustum ``{|x| <= z, |y_1| <= z, |y_2| <= z}`` is not simple: four
facets meet along the edges where ``|y_1| = |y_2| = z = 2``.  Cutting those
edges off keeps the projected image and gives a Delzant polytope.  The
resulting skeleton is homotopy equivalent to a 2-sphere, and paintings of
it into a sphere are classified by their degree.
"""
import time
from collections import Counter

from tallone.constructions import example_8d
from tallone.painting import PaintingData, painting_invariant
from tallone.polyhedra import is_delzant_polytope, volume
from tallone.pwaffine import integrate
from tallone.skeleton import betti, check_delta_compat, check_rho_compat
from tallone.toricproj import build_projection

raw = example_8d(2, resolve=False)
print("uncut frustum is Delzant:", is_delzant_polytope(raw))

p = example_8d(2)
print(f"cut polytope: {len(p.vrep.vertices)} vertices, Delzant {is_delzant_polytope(p)}")

t = time.perf_counter()
bundle = build_projection(p)
print(f"projection built in {time.perf_counter() - t:.1f} s, tall: {bundle.tall}")
print("moment image vertices:", len(bundle.delta.vrep.vertices))

skel = bundle.skeleton
dims = Counter(skel.cell_dim(i) for i in range(len(skel.cells)))
print("skeleton cells by dimension:", dict(sorted(dims.items())))
print("betti numbers:", betti(skel))

t = time.perf_counter()
ok = check_delta_compat(skel, bundle.delta).passed and \
    check_rho_compat(skel, bundle.delta, bundle.rho).passed
print(f"compatible: {ok} ({time.perf_counter() - t:.1f} s)")
print("mass conserved:", integrate(bundle.rho) == volume(p))

for d in (-2, 0, 1, 5):
    print(f"degree {d} painting -> invariant",
          painting_invariant(PaintingData.sphere(d, 0, skel)).value)
