import json

import numpy as np
import pytest
from scipy import special

from biharmonic_scattering import bie
from biharmonic_scattering.bie import curves, operators as op


def circle_symbols(kappa, m):
    """Eigenvalues on the unit circle for the mode ``e^{i m t}`` (addition theorem)."""
    J, H = special.jv(m, kappa), special.hankel1(m, kappa)
    Jp, Hp = special.jvp(m, kappa), special.h1vp(m, kappa)
    return {
        "S": 0.5j * np.pi * J * H,
        "K": 0.25j * np.pi * kappa * (J * Hp + Jp * H),
        "T": 0.5j * np.pi * kappa**2 * Jp * Hp,
    }


@pytest.fixture(scope="module")
def unit_circle_nodes():
    return curves.circle().discretize(128)


@pytest.mark.parametrize("kappa", [3.0, 12j, 2.5 + 0.7j, 30j])
@pytest.mark.parametrize("m", [0, 1, 5, 17])
def test_circle_symbols(unit_circle_nodes, kappa, m):
    nodes = unit_circle_nodes
    mode = np.exp(1j * m * nodes.s)
    sym = circle_symbols(kappa, m)
    scale = max(abs(v) for v in sym.values())
    cases = {
        "S": op.single_layer(kappa, nodes),
        "K": op.double_layer(kappa, nodes),
        "K'": op.adjoint_double_layer(kappa, nodes),
        "T": op.hypersingular(kappa, nodes),
    }
    for name, A in cases.items():
        expected = sym[name.rstrip("'")]
        assert np.abs(A @ mode - expected * mode).max() <= 1e-9 * scale, name


def test_named_wrappers_pick_kernels(unit_circle_nodes):
    nodes, xi = unit_circle_nodes, 4.0
    mode = np.exp(3j * nodes.s)
    assert np.allclose(op.layer_matrix_V(xi, nodes) @ mode, circle_symbols(1j * xi, 3)["S"] * mode, atol=1e-11)
    assert np.allclose(op.layer_matrix_J(xi, nodes) @ mode, circle_symbols(1j * xi, 3)["K"] * mode, atol=1e-11)
    assert np.allclose(op.layer_matrix_K(xi, nodes) @ mode, circle_symbols(xi, 3)["K"] * mode, atol=1e-11)
    assert np.allclose(op.layer_matrix_W(xi, nodes) @ mode, circle_symbols(xi, 3)["T"] * mode, atol=1e-10)


@pytest.fixture(scope="module")
def kite_nodes():
    return curves.kite().discretize(128)


def test_single_layer_symmetric_without_oversampling(kite_nodes):
    assert op.oversampling(3.0, kite_nodes) == 1
    A = op.single_layer(3.0, kite_nodes) / kite_nodes.speed[None, :]
    assert np.abs(A - A.T).max() < 1e-13 * np.abs(A).max()


def test_double_layer_and_adjoint_are_transposes(kite_nodes):
    w = kite_nodes.speed[None, :]
    K = op.double_layer(3.0, kite_nodes) / w
    Kp = op.adjoint_double_layer(3.0, kite_nodes) / w
    assert np.abs(K - Kp.T).max() < 1e-13 * np.abs(K).max()


def test_gauss_row_sums(kite_nodes):
    rows = op.double_layer(1e-3, kite_nodes).sum(axis=1)
    assert np.abs(rows + 0.5).max() < 1e-2


def test_hypersingular_kills_constants_in_static_limit(kite_nodes):
    out = op.hypersingular(1e-3, kite_nodes) @ np.ones(kite_nodes.N)
    assert np.abs(out).max() < 1e-4


def _apply(builder, kappa, N, density):
    nodes = curves.kite().discretize(N)
    return builder(kappa, nodes) @ density(nodes.s)


@pytest.mark.parametrize("builder", [op.single_layer, op.double_layer, op.adjoint_double_layer, op.hypersingular])
@pytest.mark.parametrize("kappa", [3.0, 15j])
def test_self_convergence_on_kite(builder, kappa):
    density = lambda s: np.exp(np.cos(s)) * (1 + 0.5j * np.sin(2 * s))  # noqa: E731
    ref = _apply(builder, kappa, 512, density)
    errors = []
    for N in (128, 256):
        out = _apply(builder, kappa, N, density)
        errors.append(np.abs(out - ref[:: 512 // N]).max() / np.abs(ref).max())
    assert errors[1] < 1e-9
    # Decaying kernels sit at the rounding floor already at N = 128.
    assert errors[1] <= max(errors[0], 1e-10)


def test_result_independent_of_oversampling(monkeypatch, kite_nodes):
    kappa = 10j
    base_factor = op.oversampling(kappa, kite_nodes)
    base = [f(kappa, kite_nodes) for f in (op.single_layer, op.adjoint_double_layer)]
    monkeypatch.setattr(op, "RESOLUTION", op.RESOLUTION / 2.5)
    fresh = curves.kite().discretize(128)
    assert op.oversampling(kappa, fresh) > base_factor
    for A, f in zip(base, (op.single_layer, op.adjoint_double_layer)):
        B = f(kappa, fresh)
        assert np.abs(A - B).max() < 1e-9 * np.abs(A).max()


def test_potentials_match_mode_solution_off_curve():
    nodes = curves.circle().discretize(64)
    kappa, m = 2.0, 3
    mode = np.exp(1j * m * nodes.s)
    pts = np.array([[0.4 * np.cos(0.3), 0.4 * np.sin(0.3)], [2.5 * np.cos(1.1), 2.5 * np.sin(1.1)]])
    r, th = np.hypot(*pts.T), np.arctan2(pts[:, 1], pts[:, 0])
    inner = r < 1
    S_expected = 0.5j * np.pi * np.where(
        inner, special.jv(m, kappa * r) * special.hankel1(m, kappa), special.hankel1(m, kappa * r) * special.jv(m, kappa)
    ) * np.exp(1j * m * th)
    D_expected = 0.5j * np.pi * kappa * np.where(
        inner, special.jv(m, kappa * r) * special.h1vp(m, kappa), special.hankel1(m, kappa * r) * special.jvp(m, kappa)
    ) * np.exp(1j * m * th)
    assert np.allclose(op.single_layer_potential(kappa, nodes, mode, pts), S_expected, atol=1e-12)
    assert np.allclose(op.double_layer_potential(kappa, nodes, mode, pts), D_expected, atol=1e-12)


# Curves.


def test_interpolation_matrix_reproduces_trig_polynomials():
    N, Nf = 16, 48
    s, sf = 2 * np.pi * np.arange(N) / N, 2 * np.pi * np.arange(Nf) / Nf
    P = curves.interpolation_matrix(N, Nf)
    for m in range(-7, 8):
        assert np.allclose(P @ np.exp(1j * m * s), np.exp(1j * m * sf), atol=1e-13)
    assert np.allclose(P @ np.cos(8 * s), np.cos(8 * sf), atol=1e-13)
    assert not P.flags.writeable


def test_kite_geometry(kite_nodes):
    n = kite_nodes
    assert np.allclose(n.x[:, 0], [2.0, 0.0])
    assert np.allclose(n.normal[:, 0], [1.0, 0.0])
    # The right-hand tip at t = 0 and the notch at t = 1/2.
    assert np.allclose(n.x[:, n.N // 2], [0.0, 0.0], atol=1e-14)
    assert n.contains([[1.0, 0.0], [-0.2, 1.0]]).all()
    assert not n.contains([[-0.3, 0.0], [3.0, 0.0], [0.0, 2.5]]).any()


def test_outward_normal_and_length():
    nodes = curves.circle(2.0, center=(1.0, -1.0)).discretize(64)
    radial = (nodes.x - np.array([[1.0], [-1.0]])) / 2.0
    assert np.allclose(nodes.normal, radial)
    assert nodes.length == pytest.approx(4 * np.pi, rel=1e-13)
    assert np.allclose(nodes.curvature, 0.5)
    assert nodes.mesh_width == pytest.approx(4 * np.pi / 64)


def test_refine_matches_analytic_nodes(kite_nodes):
    fine = kite_nodes.refine(3)
    exact = curves.kite().discretize(3 * kite_nodes.N)
    assert np.allclose(fine.x, exact.x, atol=1e-12)
    assert np.allclose(fine.normal, exact.normal, atol=1e-12)
    assert kite_nodes.refine(3) is fine
    assert kite_nodes.refine(1) is kite_nodes


def test_distance():
    nodes = curves.circle().discretize(256)
    assert nodes.distance([[3.0, 0.0]])[0] == pytest.approx(2.0)


def test_save_load_roundtrip(tmp_path):
    path = tmp_path / "kite.json"
    curves.save_curve(curves.kite(), path, N=64)
    loaded = curves.load_curve(path)
    a, b = loaded.discretize(64), curves.kite().discretize(64)
    assert np.allclose(a.x, b.x) and np.allclose(a.normal, b.normal) and np.allclose(a.curvature, b.curvature)
    with pytest.raises(ValueError, match="sampled at 64"):
        loaded.discretize(128)
    curves.save_curve(loaded, tmp_path / "again.json")
    assert json.loads((tmp_path / "again.json").read_text())["name"] == "kite"


def test_load_builtin(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"name": "big", "parametrization": {"builtin": "circle", "args": {"radius": 2.0}}}))
    nodes = curves.load_curve(path).discretize(32)
    assert np.allclose(np.hypot(*nodes.x), 2.0)


@pytest.mark.parametrize(
    "payload",
    [
        {"parametrization": {"builtin": "star"}},
        {"parametrization": {"nodes": [[0, 1, 2]]}},
    ],
)
def test_load_errors(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ValueError):
        curves.load_curve(path)


def test_discretize_errors():
    with pytest.raises(ValueError):
        curves.kite().discretize(65)
    with pytest.raises(ValueError):
        curves.ParametricCurve("x", lambda t: t).discretize(8)
    with pytest.raises(ValueError):
        curves.save_curve(curves.kite(), "unused.json")


def test_package_exports():
    assert bie.kite is curves.kite and bie.layer_matrix_V is op.layer_matrix_V
