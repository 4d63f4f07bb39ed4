"""Regenerate the exact constants in oracle_values.py by symbolic integration.

Run and compare: python tests/make_oracle_values.py
"""

import sympy as sp

x, y, r = sp.symbols("x y r")


def area(expr):
    return sp.integrate(sp.integrate(expr, (x, 0, 1)), (y, 0, 1))


def main():
    v = (x * (1 - x)) ** 2 * (y * (1 - y)) ** 2
    vx, vy, vxy = sp.diff(v, x), sp.diff(v, y), sp.diff(v, x, y)
    lap = sp.diff(v, x, 2) + sp.diff(v, y, 2)
    i_v = area(vx * vy * vxy)
    h2 = area(lap**2)
    w14 = area((vx**2 + vy**2) ** 2)
    print("BUMP_INTEGRAL  =", area(v))
    print("BUMP_L2_SQ     =", area(v**2))
    print("BUMP_H2_SQ     =", h2)
    print("BUMP_I         =", i_v)
    print("BUMP_W14       =", w14)
    print("BUMP_J         =", sp.Rational(1, 2) * h2 - i_v)
    print("BUMP_RAY_PEAK  =", sp.nsimplify(h2**3 / (54 * i_v**2)))
    print("BUMP_HOLDER_GAP=", float(sp.Rational(1, 4) * sp.sqrt(h2 * w14) - i_v))

    s = sp.sin(sp.pi * x) * sp.sin(sp.pi * y)
    sx, sy, sxy = sp.diff(s, x), sp.diff(s, y), sp.diff(s, x, y)
    slap = sp.diff(s, x, 2) + sp.diff(s, y, 2)
    print("SINE_I         =", sp.nsimplify(area(sx * sy * sxy)))
    print("SINE_H2_SQ     =", sp.nsimplify(area(slap**2)))
    print("SINE_GRADSQ_GAP=", sp.nsimplify(
        area(sx * sy * sxy) + sp.Rational(1, 4) * area(slap * (sx**2 + sy**2))))
    print("SINE_PAIRING_GAP (expect 0) =", sp.nsimplify(
        area(s * (sp.diff(s, x, 2) * sp.diff(s, y, 2) - sxy**2)) - 3 * area(sx * sy * sxy)))

    w = sp.Rational(4, 5) * r**5 - sp.Rational(9, 4) * r**4 + sp.Rational(5, 2) * r**2
    print("PHI_PARABOLA   =", sp.integrate(w * sp.diff(1 - r**2, r), (r, 0, 1)))
    prof = 2 * (1 - r**2) + (1 - r**2) ** 2
    print("PHI_HINGED_PROFILE =", sp.integrate(w * sp.diff(prof, r), (r, 0, 1)))


if __name__ == "__main__":
    main()
