"""How fast the boundary-integral solver converges.

Run from the repository root:  python demos/convergence.py
"""

import numpy as np

from biharmonic_scattering import mie_disk as md
from biharmonic_scattering.bie import curves, system

# 1. The unit disk has a separated-variables solution, so the BIE error can
#    be measured directly.  Point source at (2, 0), probes on r = 1.5.
th = 2 * np.pi * np.arange(32) / 32
probes = 1.5 * np.column_stack([np.cos(th), np.sin(th)])
exact = md.field_at(md.solve_modes(md.DiskProblem(2.0, 4 + 1j, md.PointSource(), L=40)), 1.5, th)
mat = system.MaterialPair.from_index(2.0, 4 + 1j)
print("disk, k = 2, n = 4 + i")
for N in (16, 32, 64, 128, 256):
    nodes = curves.circle().discretize(N)
    dens = system.solve_point_source(mat, nodes, [2.0, 0.0])
    err = np.abs(system.evaluate_fields(dens, mat, nodes, probes) - exact).max() / np.abs(exact).max()
    print(f"  N = {N:4d}   relative error {err:.2e}")

# 2. On the kite there is no closed form; compare against a finer run.
#    tau_- = 5, tau_+ = 15, source at (-3, 0), receivers on r = 3.
mat = system.MaterialPair(5.0, 15.0)
receivers = 3.0 * np.column_stack([np.cos(th), np.sin(th)])[1:]


def scattered(N):
    nodes = curves.kite().discretize(N)
    dens = system.solve_point_source(mat, nodes, [-3.0, 0.0])
    return system.evaluate_fields(dens, mat, nodes, receivers)


ref = scattered(1000)
print("\nkite, tau_- = 5, tau_+ = 15 (reference N = 1000)")
for N in (100, 200, 300, 400, 500):
    err = np.abs(scattered(N) - ref).max() / np.abs(ref).max()
    print(f"  N = {N:4d}   relative difference {err:.2e}")
