import numpy as np
import pytest

from biharmonic_scattering import harness, mie_disk as md
from biharmonic_scattering.bie import curves, system
from biharmonic_scattering.errors import PlacementError


def jacobi_singular_values(A, sweeps=60):
    """One-sided Jacobi: orthogonalise columns pairwise, singular values are column norms."""
    U = np.array(A, complex)
    n = U.shape[1]
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                a, b = np.vdot(U[:, p], U[:, p]).real, np.vdot(U[:, q], U[:, q]).real
                c = np.vdot(U[:, p], U[:, q])
                if abs(c) <= 1e-15 * np.sqrt(a * b):
                    continue
                off = max(off, abs(c) / np.sqrt(a * b))
                # Hermitian 2x2 eigenproblem [[a, c], [c*, b]].
                zeta = (b - a) / (2 * abs(c))
                t = np.sign(zeta) / (abs(zeta) + np.sqrt(1 + zeta**2)) if zeta != 0 else 1.0
                cs = 1 / np.sqrt(1 + t**2)
                sn = cs * t * c / abs(c)
                up = U[:, p].copy()
                U[:, p] = cs * up - np.conj(sn) * U[:, q]
                U[:, q] = sn * up + cs * U[:, q]
        if off < 1e-15:
            break
    return np.sort(np.linalg.norm(U, axis=0))[::-1]


def test_jacobi_oracle_sanity():
    A = np.diag([3.0, 1.0, 2.0])
    assert np.allclose(jacobi_singular_values(A), [3, 2, 1])


def test_spectral_norm_basic():
    assert harness.spectral_norm(np.eye(5)) == pytest.approx(1.0)
    u, v = np.array([1.0, 2j, 0.5]), np.array([1.0, -1.0])
    assert harness.spectral_norm(np.outer(u, v)) == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v))
    assert harness.spectral_norm(np.zeros((0, 0))) == 0.0


def test_spectral_norm_random_against_jacobi():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    assert harness.spectral_norm(A) == pytest.approx(jacobi_singular_values(A)[0], rel=1e-12)
    perm = rng.permutation(8)
    assert harness.spectral_norm(A[perm][:, perm[::-1]]) == pytest.approx(harness.spectral_norm(A), rel=1e-13)


def test_spectral_norm_rejects_non_finite():
    with pytest.raises(ValueError):
        harness.spectral_norm(np.array([[1.0, np.nan]]))


def test_angular_grid():
    assert np.allclose(harness.angular_grid(4), [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    with pytest.raises(ValueError):
        harness.angular_grid(0)


def test_farfield_single_angle():
    F1, F2 = harness.farfield_matrices(2.0, 4 + 1j, M=1)
    sol = md.solve_modes(md.DiskProblem(2.0, 4 + 1j))
    assert F1.entries[0, 0] == md.far_field(sol, 0.0, 0.0)
    assert F2.entries[0, 0] == pytest.approx(md.far_field(sol, np.pi, np.pi))
    assert F1.kind is harness.FieldKind.FAR_FIELD and F1.M == 1


def test_farfield_matrices_reciprocal():
    F1, F2 = harness.farfield_matrices(np.pi, 16, M=16)
    assert harness.spectral_norm(F1 - F2) < 1e-10
    assert np.allclose(F1.grid, harness.angular_grid(16))


def test_nearfield_disk_pair_is_transpose():
    N1, N2 = harness.nearfield_matrices_disk(2.0, 4 + 1j, M=8)
    assert np.array_equal(N2.entries, N1.entries.T)
    assert N1.radius == 2.0 and N1.metadata["L"] == 10


def test_kite_pair_and_placement():
    N1, N2 = harness.nearfield_matrices_kite(5.0, 15.0, M=4, N=100)
    assert np.array_equal(N2.entries, N1.entries.T)
    assert N1.metadata["curve"] == "kite" and N1.radius == 3.0
    with pytest.raises(PlacementError, match="angle 0.000000"):
        harness.nearfield_matrices_kite(5.0, 15.0, M=4, N=100, radius=1.0)


def test_kite_progress_callback():
    calls = []
    harness.nearfield_matrices_kite(5.0, 15.0, M=3, N=60, progress=lambda i, n: calls.append((i, n)))
    assert calls == [(1, 3), (2, 3), (3, 3)]


def test_curve_map_without_contrast_is_incident():
    spec = harness.CurveMapSpec(system.MaterialPair(2.0, 2.0), curves.kite(), md.PlaneWave(0.4), N=100)
    fmap = harness.field_map(spec, resolution=12)
    X, Y = np.meshgrid(fmap.x, fmap.y)
    inc = np.exp(2j * (X * np.cos(0.4) + Y * np.sin(0.4)))
    ok = np.isfinite(fmap.values)
    assert ok.sum() > 100 and fmap.inside[ok].any()
    assert np.abs(fmap.values[ok] - inc[ok]).max() < 1e-9


def test_curve_map_matches_direct_evaluation():
    mat = system.MaterialPair(4 + 0.5j, 2.0)
    z = np.array([-3.5, 0.2])
    spec = harness.CurveMapSpec(mat, curves.kite(), z, N=120)
    fmap = harness.field_map(spec, window=(-4, 4, -3, 3), resolution=(16, 12))
    assert fmap.values.shape == (12, 16)
    nodes = curves.kite().discretize(120)
    dens = system.TransmissionSolver(mat, nodes).solve(system.incident_traces_point_source(z, 2.0, nodes))
    rng = np.random.default_rng(3)
    X, Y = np.meshgrid(fmap.x, fmap.y)
    ext = np.argwhere(np.isfinite(fmap.values) & ~fmap.inside)
    for i, j in ext[rng.choice(len(ext), 10, replace=False)]:
        p = np.array([[X[i, j], Y[i, j]]])
        direct = system.evaluate_fields(dens, mat, nodes, p)[0] + md.fundamental_solution(2.0, np.hypot(*(p[0] - z)))
        assert fmap.values[i, j] == pytest.approx(direct, rel=1e-12, abs=1e-15)


def test_disk_map_continuous_and_regular_at_origin():
    spec = harness.DiskMapSpec(md.DiskProblem(2.0, 4 + 1j, md.PlaneWave(), L=30))
    fmap = harness.field_map(spec, window=(-1.5, 1.5, -1.5, 1.5), resolution=31)
    assert np.all(np.isfinite(fmap.values))
    assert fmap.inside[15, 15] and not fmap.inside[0, 0]
    # Neighbouring pixels across the interface differ only by the local slope.
    assert np.abs(np.diff(fmap.values, axis=1)).max() < 1.0
    assert np.array_equal(fmap.abs_real, np.abs(fmap.values.real))


def test_disk_map_point_source_pixel_is_nan():
    spec = harness.DiskMapSpec(md.DiskProblem(2.0, 4 + 1j, md.PointSource(0.0)))
    fmap = harness.field_map(spec, window=(0, 4, -2, 2), resolution=5)
    assert np.isnan(fmap.values[2, 2])
    assert np.isfinite(fmap.values).sum() == 24


def test_empty_window_rejected():
    spec = harness.DiskMapSpec(md.DiskProblem(2.0, 4 + 1j))
    with pytest.raises(ValueError):
        harness.field_map(spec, window=(1, 1, 0, 1), resolution=4)


# Writers.


def test_csv_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    A[0, 0] = complex(1e-300, -0.0)
    harness.write_matrix_csv(tmp_path / "a.csv", A)
    assert np.array_equal(harness.read_matrix_csv(tmp_path / "a.csv"), A)


def test_format_complex():
    assert harness.format_complex(1.5 - 2j) == "1.5-2.0j"
    assert harness.format_complex(0.1 + 0.2j) == "0.1+0.2j"
    assert complex(harness.format_complex(-3e-20 + 4e5j)) == -3e-20 + 4e5j


def test_json_encoding(tmp_path):
    import json

    payload = {"z": 1 + 2j, "a": np.array([[1j, 2]]), "r": np.float64(0.5), "t": (1, np.int64(2))}
    harness.write_json(tmp_path / "p.json", payload)
    back = json.loads((tmp_path / "p.json").read_text())
    assert back["z"] == {"re": 1.0, "im": 2.0}
    assert back["a"] == {"re": [[0.0, 2.0]], "im": [[1.0, 0.0]], "shape": [1, 2]}
    assert back["r"] == 0.5 and back["t"] == [1, 2]


def test_ppm_layout_and_colours(tmp_path):
    img = np.array([[-1.0, 0.0, np.nan], [2.0, 0.5, 1.0]])
    harness.write_ppm(tmp_path / "s.ppm", img)
    data = (tmp_path / "s.ppm").read_bytes()
    header = b"P6\n3 2\n255\n"
    assert data.startswith(header)
    pix = np.frombuffer(data[len(header):], np.uint8).reshape(2, 3, 3)
    # Top row of the picture is the last image row.
    assert tuple(pix[0, 0]) == (255, 0, 0)
    assert tuple(pix[1, 0]) == (128, 128, 255)
    assert tuple(pix[1, 1]) == (255, 255, 255)
    assert tuple(pix[1, 2]) == (128, 128, 128)
    harness.write_ppm(tmp_path / "u.ppm", np.abs(img), signed=False)
    pix = np.frombuffer((tmp_path / "u.ppm").read_bytes()[len(header):], np.uint8).reshape(2, 3, 3)
    assert tuple(pix[0, 0]) == (0, 0, 0) and tuple(pix[1, 1]) == (255, 255, 255)
