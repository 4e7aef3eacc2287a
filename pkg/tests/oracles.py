"""Independent reference computations.

Nothing here imports the package; every oracle uses brute force or a
direct formula so that agreement with the library means something.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from math import gcd


def _solve_square(a, b):
    """Gauss-Jordan over the rationals; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def brute_vertices(ineqs, dim):
    """Vertices of ``{x : a.x >= b}`` from all ``dim``-subsets of constraints."""
    out = set()
    for rows in itertools.combinations(ineqs, dim):
        x = _solve_square([a for a, _ in rows], [b for _, b in rows])
        if x is None:
            continue
        if all(sum(ai * xi for ai, xi in zip(a, x)) >= b for a, b in ineqs):
            out.add(x)
    return out


def leibniz_det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for k in range(i + 1, n) if perm[i] > perm[k])
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += -prod if inv % 2 else prod
    return total


def determinantal_divisors(m):
    """``d_k`` = gcd of all ``k x k`` minors, for k up to the rank."""
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = gcd(g, leibniz_det([[m[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_oracle(m):
    d = determinantal_divisors(m)
    return [d[0]] + [d[i] // d[i - 1] for i in range(1, len(d))] if d else []


def small_lattice_points_in_span(gens, ambient, bound):
    """Integer points with entries in ``[-bound, bound]`` lying in the rational span."""
    r = rank_q(gens)
    pts = []
    for v in itertools.product(range(-bound, bound + 1), repeat=ambient):
        if rank_q(list(gens) + [list(v)]) == r:
            pts.append(v)
    return pts


def rank_q(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rk, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][c]:
                f = m[i][c] / m[rk][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


def fiber_interval(ineqs, point):
    """Length of ``{z : (point, z) satisfies every a.x >= b}``."""
    lo, hi = None, None
    for a, b in ineqs:
        rest = sum(Fraction(ai) * xi for ai, xi in zip(a[:-1], point))
        c = a[-1]
        if c == 0:
            if rest < b:
                return Fraction(0)
            continue
        bound = (Fraction(b) - rest) / c
        if c > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is None or hi is None:
        raise ValueError("unbounded fiber")
    return max(Fraction(0), hi - lo)


def monte_carlo_dh(betas, samples=10**6, half_width=0.025, seed=20240):
    """DH density of ``beta = pi|z0|^2 - pi|z1|^2`` on ``{pi|z0|^2 <= 1}``.

    ``z0`` and ``z1`` are drawn uniformly from discs of symplectic area 1
    and 3 by rejection from squares; the density is a windowed histogram
    estimate scaled by the sampled volume.  Valid for ``beta >= -2``.
    """
    import numpy as np

    rng = np.random.default_rng(seed)

    def disc(area, n):
        r = np.sqrt(area / np.pi)
        pts = np.empty((0, 2))
        while len(pts) < n:
            cand = rng.uniform(-r, r, size=(2 * n, 2))
            keep = cand[(cand ** 2).sum(axis=1) <= r * r]
            pts = np.vstack([pts, keep])
        return pts[:n]

    area0, area1 = 1.0, 3.0
    z0 = disc(area0, samples)
    z1 = disc(area1, samples)
    beta = np.pi * (z0 ** 2).sum(axis=1) - np.pi * (z1 ** 2).sum(axis=1)
    volume = area0 * area1
    out = {}
    for b in betas:
        hits = np.count_nonzero(np.abs(beta - float(b)) <= half_width)
        out[b] = hits / samples * volume / (2 * half_width)
    return out


_SL2 = (((0, -1), (1, 0)), ((0, 1), (-1, 0)), ((1, 1), (0, 1)), ((1, -1), (0, 1)))


def sl2_orbit_invariant(p, q, depth=8):
    """Smallest ``|a|`` with ``(a, 0)`` reachable from ``(p, q)`` by at most
    ``depth`` generators of SL(2, Z); None if none is reached."""
    seen = {(p, q)}
    frontier = deque([((p, q), 0)])
    best = None
    while frontier:
        (a, b), d = frontier.popleft()
        if b == 0:
            best = abs(a) if best is None else min(best, abs(a))
        if d == depth:
            continue
        for g in _SL2:
            w = (g[0][0] * a + g[0][1] * b, g[1][0] * a + g[1][1] * b)
            if w not in seen:
                seen.add(w)
                frontier.append((w, d + 1))
    return best


def sl2_orbit(v, depth):
    seen = {tuple(v)}
    frontier = [tuple(v)]
    for _ in range(depth):
        nxt = []
        for a, b in frontier:
            for g in _SL2:
                w = (g[0][0] * a + g[0][1] * b, g[1][0] * a + g[1][1] * b)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def ext_gcd_pairing(xi):
    """Integer ``j`` with ``xi . j = 1`` by iterated extended gcd, or None."""
    g, coeffs = 0, []
    for x in xi:
        # maintain g = sum coeffs * xi
        if g == 0:
            g, coeffs = abs(x), [0] * len(coeffs) + [-1 if x < 0 else 1 if x else 0]
            continue
        a, b = g, x
        s0, s1, t0, t1 = 1, 0, 0, 1
        while b:
            qt = a // b
            a, b = b, a - qt * b
            s0, s1 = s1, s0 - qt * s1
            t0, t1 = t1, t0 - qt * t1
        if a < 0:
            a, s0, t0 = -a, -s0, -t0
        coeffs = [c * s0 for c in coeffs] + [t0]
        g = a
    return tuple(coeffs) if g == 1 else None


def shoelace_hull_area(points):
    """Area of the convex hull of planar points (monotone chain + shoelace)."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    if len(pts) < 3:
        return Fraction(0)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    s = sum(hull[i][0] * hull[i - 1][1] - hull[i - 1][0] * hull[i][1] for i in range(len(hull)))
    return abs(Fraction(s)) / 2
