"""Independent planar oracle for the frozen reference values.

Regenerates crates/core/tests/fixtures/derived.json using only exact
fractions and brute-force 2-D geometry (monotone chains, enumeration of
line intersections). Nothing here calls into the Rust library.

    python3 python/derive_fixtures.py
"""

import itertools
import json
import math
from fractions import Fraction as F
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/derived.json"


def fmt(x):
    if x is None:
        return "inf"
    x = F(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def vertices(points):
    """Minimal vertices of conv(points) + R_+^2: the strictly convex lower-left chain."""
    pts = sorted({(F(x), F(y)) for x, y in points})
    if not pts:
        return []
    # Keep only points not weakly dominated by a point to their left.
    stair = []
    for p in pts:
        if not stair or p[1] < stair[-1][1]:
            stair.append(p)
    chain = []
    for p in stair:
        while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    return chain


def minkowski(a, b):
    return vertices([(x[0] + y[0], x[1] + y[1]) for x in a for y in b])


def covol(vs):
    if not vs or vs[0][0] != 0 or vs[-1][1] != 0:
        return None
    return sum((x1 - x0) * (y0 + y1) / 2 for (x0, y0), (x1, y1) in zip(vs, vs[1:]))


def primitive(a, b, c):
    scale = F(math.lcm(a.denominator, b.denominator, c.denominator))
    a, b, c = a * scale, b * scale, c * scale
    g = math.gcd(int(a), int(b), int(c))
    return ([fmt(a / g), fmt(b / g)], fmt(c / g))


def facets(vs):
    """Lower-chain edges plus the vertical and horizontal walls with nonzero offset."""
    out = []
    for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
        a, b = y0 - y1, x1 - x0
        out.append(primitive(a, b, a * x0 + b * y0))
    if vs[0][0] > 0:
        out.append(primitive(F(1), F(0), vs[0][0]))
    if vs[-1][1] > 0:
        out.append(primitive(F(0), F(1), vs[-1][1]))
    return sorted(out, key=lambda f: ([F(x) for x in f[0]], F(f[1])))


def member(vs, p):
    x, y = map(F, p)
    if not vs:
        return False
    if x >= vs[-1][0] and y >= vs[-1][1]:
        return True
    if x < vs[0][0]:
        return False
    for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
        if x0 <= x <= x1:
            return y >= y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    return y >= vs[-1][1]


def nu(vs, a):
    return min(a[0] * v[0] + a[1] * v[1] for v in vs)


def lam(vs):
    """max over a on the simplex of min_v <a, v>; the optimum sits at a breakpoint."""
    candidates = {F(0), F(1)}
    for u, v in itertools.combinations(vs, 2):
        # s*u0 + (1-s)*u1 == s*v0 + (1-s)*v1
        den = (u[0] - u[1]) - (v[0] - v[1])
        if den != 0:
            s = (v[1] - u[1]) / den
            if 0 <= s <= 1:
                candidates.add(s)
    return max(nu(vs, (s, 1 - s)) for s in candidates)


def sigma(u, psi):
    """min over A_psi = {a >= 0 : <a, w> >= 1} of min_J <a, J>, by vertex enumeration."""
    lines = [((w[0], w[1]), F(1)) for w in psi] + [((F(1), F(0)), F(0)), ((F(0), F(1)), F(0))]
    corners = []
    for (n1, c1), (n2, c2) in itertools.combinations(lines, 2):
        det = n1[0] * n2[1] - n1[1] * n2[0]
        if det == 0:
            continue
        a = ((c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det)
        if a[0] >= 0 and a[1] >= 0 and all(w[0] * a[0] + w[1] * a[1] >= 1 for w in psi):
            corners.append(a)
    return min(nu(u, a) for a in corners)


def pts(*ps):
    return [(F(x), F(y)) for x, y in ps]


def vlist(vs):
    return [[fmt(x), fmt(y)] for x, y in vs]


def main():
    cases = {}
    for name, support in {
        "three_vertices": pts((2, 0), (0, 3), (1, 1)),
        "dominated_axis": pts((1, 0), (2, 0)),
        "origin": pts((0, 0), (5, 7)),
        "slack_point": pts((1, 0), (0, 1), (1, 1)),
        "off_axis": pts((2, 1), (1, 2)),
        "diagonal_pair": pts((2, 0), (0, 3)),
        "simplex": pts((1, 0), (0, 1)),
    }.items():
        vs = vertices(support)
        cases[name] = {
            "support": vlist(support),
            "vertices": vlist(vs),
            "facets": facets(vs) if vs and vs != [(0, 0)] else [],
            "covol": fmt(covol(vs)),
            "nu_unit": fmt(nu(vs, (1, 1))),
            "lambda": fmt(lam(vs)),
        }
    s = pts((1, 0), (0, 1))
    cases["simplex"]["member_quarter"] = member(s, (F(1, 4), F(1, 4)))
    cases["simplex"]["support_value_m1_m2"] = fmt(max(-v[0] - 2 * v[1] for v in s))
    cases["product_reduced"] = vlist(minkowski(s, pts((2, 0), (0, 2))))

    a = F(1, 2), F(1)
    weight_poly = vertices([(1 / a[0], 0), (0, 1 / a[1])])
    cases["directional_weight_half_one"] = vlist(weight_poly)
    cases["sigma_x1_vs_maximal"] = fmt(sigma(pts((1, 0)), s))
    cases["sigma_diagonal_pair_vs_phi_1_2"] = fmt(sigma(pts((2, 0), (0, 3)), vertices(pts((1, 0), (0, F(1, 2))))))
    dp = vertices(pts((2, 0), (0, 3)))
    cases["weighted_lelong_1_2"] = fmt(nu(dp, (1, 2)) / (1 * 2))

    a1 = vertices(s)
    a2 = vertices([(2 * x, 2 * y) for x, y in s])
    terms = [covol(a1), covol(a2), covol(minkowski(a1, a2))]
    cases["mixed_simplex_doubled"] = {
        "covol_a1": fmt(terms[0]),
        "covol_a2": fmt(terms[1]),
        "covol_sum": fmt(terms[2]),
        "mixed": fmt((terms[2] - terms[0] - terms[1]) / 2),
    }
    cases["lct_monomial"] = {
        f"{p},{q}": fmt(1 / lam(vertices(pts((p, 0), (0, q))))) for p in range(1, 7) for q in range(1, 7)
    }
    cases["kushnirenko_monomial"] = {
        f"{p},{q}": fmt(2 * covol(vertices(pts((p, 0), (0, q))))) for p in range(1, 10) for q in range(1, 10)
    }
    cases["strict_kushnirenko"] = fmt(2 * covol(vertices(pts((1, 0), (0, 1), (2, 0)))))
    cases["multiplicity_x1x2sq_x1sqx2"] = fmt(abs(1 * 1 - 2 * 2))
    cases["grid_lambda_2_3_k5"] = fmt(
        max(nu(dp, (F(i, 5), F(5 - i, 5))) for i in range(6))
    )
    cases["dequant_limits"] = {
        "x1+x2 at (-1,-2)": fmt(max(-1, -2)),
        "x1^2+3x2^3 at (-1,-1)": fmt(max(-2, -3)),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(cases, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
