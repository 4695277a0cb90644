#!/usr/bin/env python3
"""Harmonic-space dimensions, Gegenbauer polynomials, and the zonal inner product.

Walks through the closed forms the rest of the package is built on and checks
the exact zonal inner-product formula against brute-force Monte Carlo.
"""

import math

import numpy as np

from spherediv import (
    GegenbauerTable,
    dim_harmonic,
    sphere_area,
    uniform_sphere,
    zonal_inner_product,
)

# Dimensions of the degree-n harmonic spaces.  For d = 3 these are the
# familiar 2n + 1; on the circle every degree >= 1 is two-dimensional.
print("N_n for d = 2..5, n = 0..6")
for d in range(2, 6):
    print(f"  d={d}:", [dim_harmonic(d, n) for n in range(7)])

print("\nsphere areas:", [round(sphere_area(d), 6) for d in (2, 3, 4)],
      "(2*pi, 4*pi, 2*pi^2)")

# The normalized Gegenbauer family: value 1 at t = 1, bounded by 1 on [-1, 1].
# d = 3 gives Legendre; d = 2 the Chebyshev limit cos(n arccos t).
table3 = GegenbauerTable(3, 6)
table2 = GegenbauerTable(2, 6)
print("\nLegendre P_2(0) =", table3.eval(2, 0.0), "(exactly -1/2)")
theta = 0.7
print("circle P_4(cos t) - cos(4t) =",
      abs(table2.eval(4, math.cos(theta)) - math.cos(4 * theta)))

# Funk-Hecke in the form used everywhere here: the inner product of two
# zonal functions is (sigma_d / N_n) * P_n(u . v).  Check by Monte Carlo.
rng = np.random.default_rng(1)
d, n = 3, 4
u, v = uniform_sphere(d, 2, rng)
pts = uniform_sphere(d, 500_000, rng)
prods = table3.eval(n, pts @ u) * table3.eval(n, pts @ v)
estimate = sphere_area(d) * prods.mean()
stderr = sphere_area(d) * prods.std(ddof=1) / math.sqrt(len(pts))
exact = zonal_inner_product(d, n, u, v)
print(f"\n<P_{n}^u, P_{n}^v>: exact {exact:+.6f}, Monte Carlo {estimate:+.6f} "
      f"(+- {stderr:.6f}, {abs(estimate - exact) / stderr:.2f} standard errors)")
