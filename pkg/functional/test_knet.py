import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cknet.module_utils.cklax import ck_L
from cknet.module_utils.cknet import DegenerateAngle
from cknet.module_utils.cknet import IncompatibleField
from cknet.module_utils.knet import half_tangent
from cknet.module_utils.knet import hirota_residual
from cknet.module_utils.knet import knet_integrate
from cknet.module_utils.knet import knet_lax_pair
from cknet.module_utils.knet import knet_quad_curvature
from cknet.module_utils.knet import knet_solve_h12
from cknet.module_utils.knet import knet_U
from cknet.module_utils.knet import knet_V
from cknet.module_utils.lattice import KnetField
from cknet.module_utils.quat import mul
from cknet.module_utils.quat import coefficients_from_matrix
from cknet.module_utils.validate import edge_constraint_residual
from cknet.module_utils.validate import gauss_curvature

phases = st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False)
angles = st.floats(min_value=0.2, max_value=1.4, allow_nan=False)
spectral = st.floats(min_value=-0.8, max_value=0.8, allow_nan=False)


def test_half_tangent_rejects_degenerate_angles():
    with pytest.raises(DegenerateAngle):
        half_tangent(0.0)
    with pytest.raises(DegenerateAngle):
        half_tangent(np.pi)
    assert isinstance(half_tangent(0.5), float)


@given(phases, phases, phases, angles, angles)
def test_hirota_solve(h, h1, h2, du, dv):
    h12 = knet_solve_h12(h, h1, h2, du, dv)
    T = half_tangent(du) * half_tangent(dv)
    residual = (np.exp(1j * (h12 + h)) - np.exp(1j * (h1 + h2))
                - T * (1 - np.exp(1j * (h + h1 + h12 + h2))))
    assert abs(residual) < 1e-12


@given(phases, phases, phases, angles, angles, spectral)
def test_knet_lax_pair_is_compatible(h, h1, h2, du, dv, t):
    h12 = knet_solve_h12(h, h1, h2, du, dv)
    pair = knet_lax_pair(h, h1, h2, du, dv, t)
    U2 = knet_U(h2, h12, du, t).mat
    V1 = knet_V(h1, h12, dv, t).mat
    left = mul(V1, pair.U)
    right = mul(U2, pair.V)
    npt.assert_allclose(left.coefficients, right.coefficients, atol=1e-10)


@given(phases, phases, phases, angles, spectral)
def test_ck_matrix_factors_into_knet_matrices(sigma, sigma1, eta, delta, t):
    """L(s -> s1; l) is V(l -> s1; -delta) U(s -> l; delta) entrywise."""
    product = mul(knet_V(eta, sigma1, -delta, t).mat, knet_U(sigma, eta, delta, t).mat)
    L = ck_L(np.exp(1j * sigma), np.exp(1j * sigma1), np.exp(1j * eta), delta, t).Lmat
    npt.assert_allclose(L.matrix, product.matrix, atol=1e-10)


def test_integrated_field_satisfies_hirota(make_knet_field):
    field = make_knet_field((6, 5))
    for l in range(4):
        for k in range(5):
            assert abs(hirota_residual(field, k, l)) < 1e-12


@pytest.mark.parametrize('t', [-0.5, 0.0, 0.3])
def test_knet_curvature_matches_geometry(make_knet_field, t):
    field = make_knet_field((8, 8))
    _, net = knet_integrate(field, t)
    horizontal, vertical = edge_constraint_residual(net)
    assert max(horizontal.max(), vertical.max()) < 1e-9
    for k, l in net.quads():
        expected = knet_quad_curvature(field.delta_u[k], field.delta_v[l], t)
        npt.assert_allclose(gauss_curvature(net, k, l), expected, rtol=1e-8)


def test_knet_curvature_formula_over_random_angles(make_knet_field, rng):
    for _ in range(50):
        field = make_knet_field((2, 2))
        t = rng.uniform(-0.8, 0.8)
        _, net = knet_integrate(field, t)
        expected = knet_quad_curvature(field.delta_u[0], field.delta_v[0], t)
        npt.assert_allclose(gauss_curvature(net, 0, 0), expected, rtol=1e-8)


def test_frame_derivative_matches_finite_difference(make_knet_field):
    field = make_knet_field((10, 10))
    t, step = 0.2, 1e-6
    frame, _ = knet_integrate(field, t)
    ahead, _ = knet_integrate(field, t + step)
    behind, _ = knet_integrate(field, t - step)
    difference = (ahead.phi - behind.phi) / (2 * step)
    scale = np.max(np.abs(frame.phi_dot))
    assert np.max(np.abs(difference - frame.phi_dot)) < 1e-7 * max(scale, 1.0)


def test_sym_net_at_origin(make_knet_field):
    frame, net = knet_integrate(make_knet_field((3, 3)), 0.4)
    npt.assert_allclose(net.f[0, 0], 0, atol=1e-15)
    npt.assert_allclose(net.n[0, 0], [0, 0, 1], atol=1e-15)
    npt.assert_allclose(coefficients_from_matrix(np.eye(2)), frame.phi[0, 0])


def test_perturbed_phase_breaks_hirota(make_knet_field):
    field = make_knet_field((3, 3))
    field.h[1, 1] += 0.1
    assert abs(hirota_residual(field, 0, 0)) > 1e-3
    with pytest.raises(IncompatibleField):
        knet_integrate(field, 0.0)


@pytest.mark.parametrize('delta', [0.4, 0.7, 1.2])
def test_zero_phase_edges_are_normal_cross_products(delta):
    """With h = 0 and opposite angles the edges are f1 - f = n1 x n and f2 - f = n x n2."""
    K, L = 5, 4
    _, net = knet_integrate(KnetField(np.zeros((K, L)), [delta] * (K - 1), [-delta] * (L - 1)), 0.0)
    f, n = net.f, net.n
    npt.assert_allclose(f[1:] - f[:-1], np.cross(n[1:], n[:-1]), atol=1e-12)
    npt.assert_allclose(f[:, 1:] - f[:, :-1], np.cross(n[:, :-1], n[:, 1:]), atol=1e-12)
    npt.assert_allclose(np.linalg.norm(f[1:] - f[:-1], axis=2), np.sin(delta), atol=1e-12)
