"""A six-dimensional tall complexity one space, from a toric one.

Start from the polytope

    {(x, y, z) in [-3, 3] x [-2, 2] x [1, 4] : |x| <= z, |y| <= z}

and forget the circle acting on the last coordinate.  What is left is a
2-torus action with two-dimensional reduced spaces.  This script computes
the moment image, the skeleton of exceptional orbits and the
Duistermaat-Heckman function, and then checks that they fit together.
"""
from fractions import Fraction

from tallone.constructions import example_6d
from tallone.model import defining_exponents
from tallone.painting import PaintingData, painting_invariant
from tallone.polyhedra import volume
from tallone.pwaffine import integrate
from tallone.serialize import rat
from tallone.skeleton import betti, check_delta_compat, check_rho_compat, fiber
from tallone.toricproj import build_projection


def show(point):
    return "(" + ", ".join(rat(x) for x in point) + ")"


p = example_6d()
print(f"polytope: {len(p.vrep.vertices)} vertices, volume {volume(p)}")

bundle = build_projection(p)
print("tall:", bundle.tall)
print("moment image:", [show(v) for v in sorted(bundle.delta.vrep.vertices)])

# The skeleton is a square with a whisker at each corner.
skel = bundle.skeleton
for i, cell in enumerate(skel.cells):
    ends = sorted(cell.image().vrep.vertices)
    print(f"  cell {i:2d}: {' -- '.join(show(v) for v in ends):28s}"
          f" weights {list(cell.label.weights)}")
print("betti numbers:", betti(skel))

# Over a corner of the square three strata meet in a single orbit.
corner = fiber(skel, (1, 1))
print("fiber over (1, 1):", [(f.cell, show(f.point)) for f in corner])
print("exponents there:", defining_exponents(corner[0].label))

# The DH function is the length of the vertical fibre.
for x in [(0, 0), (2, 0), (3, 2), (Fraction(3, 2), Fraction(-1, 2))]:
    print(f"rho{show(x)} = {rat(bundle.rho(x))}")
print("total mass:", integrate(bundle.rho), "= volume of the polytope")

print("image compatible:", check_delta_compat(skel, bundle.delta).passed)
print("DH compatible:   ", check_rho_compat(skel, bundle.delta, bundle.rho).passed)

# Paintings into a torus are classified by the gcd of the loop's class.
for image in [(1, 0), (2, 4), (3, 5), (0, 0)]:
    inv = painting_invariant(PaintingData.loop(1, image, skel))
    print(f"painting of the loop onto {image} in H_1(T^2): class {inv.value}")
print("into a sphere:", painting_invariant(PaintingData.loop(0, (), skel)).kind)
