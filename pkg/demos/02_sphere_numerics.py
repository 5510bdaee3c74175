"""
Energy, degree and tension on a two-chart grid
==============================================

Maps S^2 -> CP^2 are sampled on two stereographic charts glued by a
smooth partition of unity.  The quadrature integrates the sphere's area
exactly, and fourth-order finite differences supply the derivatives.
"""
import numpy as np

from harmcp2.algebra import Vec3
from harmcp2.curves import make_curve
from harmcp2.geometry import energy_split, tension_residual
from harmcp2.grid import build_grid
from harmcp2.sampled import map_from_curve, sample_map

conic = make_curve(Vec3.uni([1], [0, 1], [0, 0, 1]))
line = make_curve(Vec3.uni([1], [0, 1], [0]))

g = build_grid(32)
print("area of S^2 / 4pi:", g.integrate(np.ones(g.shape)) / (4 * np.pi))

# a projective line has energy 4pi and degree 1; its conjugate has degree -1
for name, m in (
    ("line", map_from_curve(line, g)),
    ("conjugate line", sample_map(lambda z, ch: np.stack([np.ones_like(z), np.conj(z), 0 * z], -1), g)),
    ("G'(conic)", map_from_curve(conic, g, "gauss-prime")),
):
    s = energy_split(m)
    print(f"{name:>15}: E/4pi = {s.energy / (4 * np.pi):.5f}, degree = {s.degree:+.5f}")

# G'(conic) is harmonic: the sampled tension shrinks like h^4
prev = None
for N in (32, 48, 64, 96):
    r = tension_residual(map_from_curve(conic, build_grid(N), "gauss-prime"))
    order = "" if prev is None else f"  observed order {np.log(prev[1] / r) / np.log(N / prev[0]):.2f}"
    print(f"N = {N:3d}: sup |tau| = {r:.3e}{order}")
    prev = (N, r)
