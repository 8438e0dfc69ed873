#!/usr/bin/env python3
"""Walk the deformation pipeline on the nilpotent example and print every
intermediate object: the contraction, the twisted transitions over the dual
numbers, a primitive for the class, and the order-2 composite check.

Usage: python scripts/deformation_tour.py [DEGREE]
"""

import sys
from fractions import Fraction

from lamconn import (
    build_deformation,
    constant_deformation,
    deformations_equivalent,
    gradedness_check,
    integrability_check,
    is_hyper_coboundary,
    ks_cocycle,
    monomial_tangent,
    p1_nilpotent,
)
from lamconn.matrices import mat_str


def main() -> int:
    degree = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    h = p1_nilpotent()
    chi = monomial_tangent(h.cover, Fraction(1), degree)
    print(f"tangent cocycle: u^{degree} d/du on the overlap")

    c = ks_cocycle(h, chi)
    print("contraction s_uv =", mat_str(c.s[("u", "v")]))

    d = build_deformation(h, c)
    print("deformed transition ghat_uv =", mat_str(d.data.bundle.transitions[("u", "v")]))

    u = is_hyper_coboundary(c, h)
    print("primitive u_u =", mat_str(u["u"]), " u_v =", mat_str(u["v"]))

    w = deformations_equivalent(d, constant_deformation(h))
    print("equivalent to the constant deformation:", w is not None)

    print("graded (t = 2):", gradedness_check(h, chi, Fraction(2)))

    chi2 = monomial_tangent(h.cover, Fraction(1), degree + 1)
    print("order-2 composites commute:", integrability_check(h, chi, chi2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
