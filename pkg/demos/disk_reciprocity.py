"""Reciprocity on the unit disk, solved mode by mode.

Run from the repository root:  python demos/disk_reciprocity.py
"""

import math

import numpy as np

from biharmonic_scattering import harness, mie_disk as md

# A plate obstacle of radius 1 with index n = 4 + i, probed at k = 2.  Each
# Fourier mode gives a 4 x 4 system for the outgoing (a, b) and interior
# (c, d) coefficients; |l| <= 10 is plenty here.
problem = md.DiskProblem(k=2.0, n=4 + 1j)
sol = md.solve_modes(problem)
print("largest mode residual:", sol.residuals.max())
print("|a_l| for l = 0..10:", np.array2string(np.abs(sol.a[10:]), precision=2))

# The far-field pattern only depends on theta - phi, so swapping the roles of
# source and receiver directions (with a half turn) must give the same value.
pairs = [(math.pi / 2, math.pi), (math.pi / 3, math.pi / 2), (math.sqrt(math.pi), math.pi / 2), (1.0, 0.5)]
print("\n  (theta, phi)        u_inf(theta, phi)          u_inf(phi + pi, theta + pi)")
for theta, phi in pairs:
    a = md.far_field(sol, theta, phi)
    b = md.far_field(sol, phi + math.pi, theta + math.pi)
    print(f"  ({theta:.4f}, {phi:.4f})  {a:.6f}  {b:.6f}")

# Same check with point sources on the circle of radius 2: the scattered
# field at x from a source at z equals the one at z from a source at x.
psol = md.solve_modes(md.DiskProblem(2.0, 4 + 1j, md.PointSource()))
print("\n  (theta, phi)        u_s(theta, phi)            u_s(phi, theta)")
for theta, phi in pairs:
    a = md.near_field_point_source(psol, theta, phi)
    b = md.near_field_point_source(psol, phi, theta)
    print(f"  ({theta:.4f}, {phi:.4f})  {a:.6f}  {b:.6f}")

# Whole 64 x 64 matrices, absorbing and lossless cases.
rows = [(2.0, 4 + 1j), (2.0, 4.0), (math.pi, 16 + 0.5j), (math.pi, 16.0), (4.0, 2 + 2j), (4.0, 2.0)]
print("\n  k       n            ||F1 - F2||_2   ||N1 - N2||_2")
for k, n in rows:
    F1, F2 = harness.farfield_matrices(k, n)
    N1, N2 = harness.nearfield_matrices_disk(k, n)
    print(f"  {k:.4f}  {complex(n)!s:12} {harness.spectral_norm(F1 - F2):.3e}       {harness.spectral_norm(N1 - N2):.3e}")

# The near-field pair is symmetric to rounding because the series for
# u_s(theta, phi) is a function of cos(l (theta - phi)) only; the far-field
# pair compares two separately rounded sums and lands near 1e-13.
