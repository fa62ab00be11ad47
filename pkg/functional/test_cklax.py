import numpy as np
import numpy.testing as npt
import pytest

from cknet.module_utils.cklax import CircularQuadData
from cknet.module_utils.cklax import ck_L
from cknet.module_utils.cklax import ck_evolve_quad
from cknet.module_utils.cklax import ck_integrate
from cknet.module_utils.cklax import ck_line_field
from cknet.module_utils.cklax import compatibility_residual
from cknet.module_utils.cklax import ck_fit_quad
from cknet.module_utils.cklax import ell_length
from cknet.module_utils.cklax import lax_matrix
from cknet.module_utils.cknet import DegenerateEvolution
from cknet.module_utils.cknet import IncompatibleField
from cknet.module_utils.cknet import NegativeRadicand
from cknet.module_utils.cknet import NonConcircular
from cknet.module_utils.knet import half_tangent
from cknet.module_utils.validate import circularity
from cknet.module_utils.validate import edge_constraint_residual
from cknet.module_utils.validate import gauss_curvature


def test_lax_matrix_at_trivial_data():
    mat, dmat, det, ddet = lax_matrix(1.0, 1.0, 1.0, half_tangent(0.3), 1.0)
    npt.assert_allclose(mat, 2 / np.sin(0.3) * np.eye(2), atol=1e-14)
    npt.assert_allclose(np.linalg.det(mat), det, rtol=1e-12)
    assert ddet == 0


def test_determinant_is_independent_of_data(rng):
    tan_half, lam = half_tangent(0.7), np.exp(0.4)
    for _ in range(20):
        s, s1, l = np.exp(1j * rng.uniform(-np.pi, np.pi, size=3))
        mat, _, det, _ = lax_matrix(s, s1, l, tan_half, lam)
        npt.assert_allclose(np.linalg.det(mat), det, rtol=1e-12)


def test_evolution_is_compatible(rng):
    """1000 random unimodular quads stay unimodular and satisfy M1 L = L2 M."""
    checked = 0
    while checked < 1000:
        s, s1, s2, l, m = np.exp(1j * rng.uniform(-np.pi, np.pi, size=5))
        delta1, delta2 = rng.uniform(0.2, 0.7), rng.uniform(0.9, 1.4)
        try:
            l2, m1, s12 = ck_evolve_quad(s, s1, s2, l, m, delta1, delta2)
        except DegenerateEvolution:
            continue
        checked += 1
        npt.assert_allclose(np.abs([l2, m1, s12]), 1, atol=1e-9)
        assert compatibility_residual(s, s1, s2, l, m, l2, m1, s12, delta1, delta2) < 1e-9


def test_degenerate_evolution_names_quantity():
    with pytest.raises(DegenerateEvolution) as excinfo:
        ck_evolve_quad(1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5)
    assert excinfo.value.quantity == 's12'


def test_ell_length():
    assert ell_length(0.3, -0.3, 0.5) == 1.0
    rho = 0.4
    a = np.angle(half_tangent(0.5 + 0.2j))
    expected = np.sqrt(np.cos(rho - a) / np.cos(rho + a))
    npt.assert_allclose(ell_length(rho, rho, 0.5 + 0.2j), expected)
    with pytest.raises(NegativeRadicand):
        ell_length(1.4, 1.4, 0.5 + 0.4j)


@pytest.mark.parametrize('y', [-0.6, 0.4, 1.1])
@pytest.mark.parametrize('t', [0.0, 0.3])
def test_ell_length_keeps_l_quaternionic_for_unimodular_tangent(y, t):
    delta = np.pi / 2 + 1j * y
    rho, rho1 = 0.3, 0.1
    for phase in (0.0, 0.7, -2.0):
        l = ell_length(rho, rho1, delta) * np.exp(1j * phase)
        L = ck_L(np.exp(1j * rho), np.exp(1j * rho1), l, delta, t).Lmat
        assert np.max(np.abs(L.coefficients.imag)) < 1e-12
        assert L.is_quaternion()


def test_line_field_integrates_to_line(line_field):
    frame, net = ck_integrate(line_field, 0.0)
    assert frame.compat_residual < 1e-12
    npt.assert_allclose(net.f[..., 1:], 0, atol=1e-12)
    npt.assert_allclose(net.f[1, 0, 0] - net.f[0, 0, 0], -2 * np.sin(0.1), atol=1e-12)


@pytest.mark.parametrize('t', [-0.5, 0.0, 0.5])
def test_random_fields_give_ck_nets(make_lax_field, t):
    field = make_lax_field((8, 8))
    _, net = ck_integrate(field, t)
    horizontal, vertical = edge_constraint_residual(net)
    assert max(horizontal.max(), vertical.max()) < 1e-9
    for k, l in net.quads():
        npt.assert_allclose(gauss_curvature(net, k, l), -1, atol=1e-8)
        if t == 0.0:
            assert circularity(net, k, l) < 1e-9


def test_incompatible_field_is_rejected(make_lax_field):
    field = make_lax_field((4, 4))
    field.s[3, 3] *= np.exp(0.5j)
    with pytest.raises(IncompatibleField):
        ck_integrate(field, 0.0)


def test_fourth_vertex_has_unit_curvature(make_lax_field):
    field = make_lax_field((2, 2))
    _, net = ck_integrate(field, 0.0)
    data = CircularQuadData.from_points(net.f[0, 0], net.f[1, 0], net.f[0, 1], net.n[0, 0])
    npt.assert_allclose(data.quad_curvature(data.fourth_angle()), -1, atol=1e-10)
    npt.assert_allclose(np.linalg.norm(data.fourth_vertex() - data.center), data.r, atol=1e-12)


def test_collinear_points_are_not_concircular():
    with pytest.raises(NonConcircular):
        CircularQuadData([0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 0, 1])
    with pytest.raises(NonConcircular):
        CircularQuadData([0, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1])


def test_fit_reproduces_integrated_quads(make_lax_field):
    for _ in range(100):
        field = make_lax_field((2, 2), delta1=(0.2, 0.6), delta2=(0.7, 1.2))
        _, net = ck_integrate(field, 0.0)
        data = CircularQuadData(net.f[0, 0], net.f[1, 0], net.f[0, 1], net.n[0, 0])
        fit = ck_fit_quad(data)
        npt.assert_allclose(fit.delta1, field.delta1[0].real, atol=1e-8)
        npt.assert_allclose(fit.delta2, field.delta2[0].real, atol=1e-8)
        _, rebuilt = fit.integrate()
        npt.assert_allclose(rebuilt.f, net.f, atol=1e-8)
        npt.assert_allclose(rebuilt.n, net.n, atol=1e-8)
