"""Local models and the DH functions of their truncations.

The simplest tall model: the circle acting on C^2 with weights 1 and -1.
The truncation by the first coordinate has DH function 1 - max(beta, 0),
and changing the complementary circle changes it by an integral affine
function.
"""
import random
from fractions import Fraction

from tallone.constructions import random_tall_model
from tallone.model import (
    ComplexityOneModel,
    TruncationSpec,
    complementary_circle,
    defining_exponents,
    dh_truncation,
    g_lattices,
    moment_cone,
    sigma_section,
)
from tallone.polyhedra import is_delzant_cone
from tallone.pwaffine import combine, is_integral_affine_near

m = ComplexityOneModel.build(1, [(1,)], [(1,), (-1,)])
print("exponents:", defining_exponents(m), " circle:", complementary_circle(m))

sig = sigma_section(m)
for b in (-2, 0, 1):
    print(f"sigma({b}) = {sig((b,))}")

rho = dh_truncation(m, TruncationSpec((1, 0), 1))
other = dh_truncation(m, TruncationSpec((0, 1), 1))
for b in (-2, -1, 0, Fraction(1, 2), 1):
    print(f"beta = {str(b):>4}: rho = {rho((b,))}, other circle = {other((b,))}")
germ = is_integral_affine_near(combine(rho, other, 1, -1), (0,))
print("difference near 0:", germ)

# The same statements on a random model of higher rank.
rng = random.Random(5)
m = random_tall_model(rng)
print("\nrandom model: rank", m.rank, "subtorus", m.subtorus.vectors(), "weights", m.weights)
print("moment cone Delzant:", is_delzant_cone(moment_cone(m), m.alpha))
j = complementary_circle(m)
j2 = tuple(a + b for a, b in zip(j, g_lattices(m).i_t([1] * m.rank)))
diff = combine(dh_truncation(m, TruncationSpec(j, 2)), dh_truncation(m, TruncationSpec(j2, 1)), 1, -1)
print("difference of truncations near alpha:", is_integral_affine_near(diff, m.alpha))
