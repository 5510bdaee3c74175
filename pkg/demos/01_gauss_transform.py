"""
Gauss transforms of rational curves, exactly
============================================

A full rational curve f = [F] in CP^2 has two companions: the harmonic
map phi = G'(f), spanned by the part of F' orthogonal to F, and the
antiholomorphic curve g orthogonal to both.  Everything below is exact
arithmetic over the Gaussian rationals.
"""
from harmcp2.algebra import Vec3, herm_pair
from harmcp2.curves import make_curve, plucker_invariants
from harmcp2.gauss import g_curve, gauss_prime_rep, verify_identities

# the conic (1, z, z^2) and a cubic with a cusp at infinity
conic = make_curve(Vec3.uni([1], [0, 1], [0, 0, 1]))
cubic = make_curve(Vec3.uni([1], [0, 1], [0, 0, 0, 1]))

for name, f in (("conic", conic), ("cubic", cubic)):
    d, E, kp, rp = plucker_invariants(f)
    print(f"{name}: k={f.k} r={f.r}  ->  deg phi={d}, energy/4pi={E}, k'={kp}, r'={rp}")

# phi is a vector of polynomials in z and zbar
phi = gauss_prime_rep(conic)
for i, c in enumerate(phi):
    print(f"phi_{i} = {c}")

# the three lines are mutually orthogonal at every point
F = conic.F
g = g_curve(conic)
print("<phi, F> == 0:", herm_pair(phi, F).is_zero())
print("<g, F>   == 0:", herm_pair(g, F).is_zero())
print("<g, phi> == 0:", herm_pair(g, phi).is_zero())

# the full battery: harmonicity, isotropy, adjointness, inversion...
results = verify_identities(cubic, workers=4)
width = max(map(len, results))
for name, ok in results.items():
    print(f"  {name:<{width}}  {'zero' if ok else 'NONZERO'}")
