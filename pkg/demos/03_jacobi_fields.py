"""
Jacobi fields from deformations of the curve
============================================

Moving the coefficients of F moves G'([F]) through harmonic maps, so the
velocity is a Jacobi field.  Counting independent ones gives the
nullity; pulling a field back to the curve, integrating it exactly and
pushing it forward again closes the loop.
"""
import numpy as np

from harmcp2.algebra import Vec3
from harmcp2.checks import direction_fields
from harmcp2.curves import make_curve
from harmcp2.deform import LinearFamily
from harmcp2.geometry import jacobi_residual
from harmcp2.grid import build_grid
from harmcp2.pipeline import (
    coefficient_directions,
    killing_bump_field,
    nullity_rank,
    pipeline_roundtrip,
    push_dG,
)
from harmcp2.sampled import map_from_curve

conic = make_curve(Vec3.uni([1], [0, 1], [0, 0, 1]))
g = build_grid(32)
m = map_from_curve(conic, g, "gauss-prime")

# one pushed coefficient direction vs. a generic smooth field
v = push_dG(LinearFamily(conic.F, Vec3.uni([0], [0, 1], [0])), g)
print("Jacobi residual, pushed field :", jacobi_residual(m, v))
print("Jacobi residual, bump field   :", jacobi_residual(m, killing_bump_field(m)))

# all 16 real directions (complex rescaling of F removed)
fields = direction_fields(conic, g)
rep = nullity_rank(m, fields)
s = np.array(rep.singular_values)
print(f"rank {rep.rank} of {len(fields)}; singular values {s.min() / s.max():.3f} .. 1 (relative)")

# push -> pull -> integrate -> push
for name, dF in coefficient_directions(conic.F)[:3]:
    r = pipeline_roundtrip(conic, dF, g)
    print(f"round trip {name:>10}: discrepancy {r.discrepancy:.2e}, fit residual {r.fit_residual:.1e}")
