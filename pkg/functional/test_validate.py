import numpy as np
import numpy.testing as npt
import pytest
from scipy.spatial.transform import Rotation

from cknet.module_utils.cknet import CoincidentVertices
from cknet.module_utils.cknet import DegenerateQuad
from cknet.module_utils.cknet import DimensionMismatch
from cknet.module_utils.cknet import UsageError
from cknet.module_utils.cknet import ZeroEdge
from cknet.module_utils.explicit import gen_dini
from cknet.module_utils.explicit import gen_line
from cknet.module_utils.explicit import gen_tractrix_pseudosphere
from cknet.module_utils.lattice import QuadNet
from cknet.module_utils.validate import circularity
from cknet.module_utils.validate import congruent_up_to_rigid_motion
from cknet.module_utils.validate import cross_ratio
from cknet.module_utils.validate import edge_constraint_residual
from cknet.module_utils.validate import gauss_curvature
from cknet.module_utils.validate import mean_curvature
from cknet.module_utils.validate import offset_area
from cknet.module_utils.validate import polygon_planarity
from cknet.module_utils.validate import quad_report
from cknet.module_utils.validate import steiner_coefficients
from cknet.module_utils.validate import validate_net


def sphere_net(dims=(5, 5)):
    """Unit sphere net in spherical coordinates with n = f."""
    K, L = dims
    theta = 0.3 + 0.1 * np.arange(K)[:, None]
    phi = 0.2 * np.arange(L)[None, :]
    f = np.stack(np.broadcast_arrays(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)),
                 axis=-1)
    return QuadNet(f, f.copy())


def quad_net(points):
    """2x2 net from four points given in the order f, f1, f12, f2."""
    f = np.zeros((2, 2, 3))
    f[0, 0], f[1, 0], f[1, 1], f[0, 1] = [np.asarray(p, dtype=float) for p in points]
    n = np.zeros((2, 2, 3))
    n[..., 2] = 1
    return QuadNet(f, n)


def test_steiner_identity():
    net = gen_dini((4, 4), 1.0, 0.8, 0.2, 0.25, 0.3)
    for k, l in net.quads():
        area, linear, quadratic = steiner_coefficients(net, k, l)
        for s in (-0.7, 0.2, 1.5):
            npt.assert_allclose(offset_area(net, k, l, s), area + linear * s + quadratic * s ** 2, atol=1e-14)


def test_curvature_ignores_normal_orientation():
    net = gen_dini((4, 4), 1.0, 0.8, 0.2, 0.25, 0.3)
    flipped = QuadNet(net.f, -net.n)
    for k, l in net.quads():
        npt.assert_allclose(gauss_curvature(flipped, k, l), gauss_curvature(net, k, l), rtol=1e-12)
        npt.assert_allclose(mean_curvature(flipped, k, l), -mean_curvature(net, k, l), rtol=1e-12, atol=1e-12)


def test_unit_sphere():
    net = sphere_net()
    for k, l in net.quads():
        npt.assert_allclose(gauss_curvature(net, k, l), 1, rtol=1e-12)
        npt.assert_allclose(mean_curvature(net, k, l), 1, rtol=1e-12)
    report = validate_net(net, checks=['edge-constraint', 'curvature'], target_curvature=1.0)
    assert report['passed']
    assert not validate_net(net, checks=['curvature'])['passed']


def test_quad_report_of_circular_net():
    net = gen_dini((3, 3), 1.0, np.pi / 2, 0.3, 0.4)
    report = quad_report(net, 1, 1)
    npt.assert_allclose(report.K, -1, atol=1e-10)
    assert report.cross_ratio_im < 1e-9
    assert report.edge_constraint_max < 1e-9
    npt.assert_allclose(np.linalg.norm(report.face_normal), 1)


def test_circularity():
    circle = quad_net([[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]])
    assert circularity(circle, 0, 0) < 1e-12
    skew = quad_net([[1, 0, 0], [0, 1, 0], [-1, 0, 0.5], [0, -1, 0]])
    assert circularity(skew, 0, 0) > 1e-2


def test_cross_ratio_of_square():
    ratio = cross_ratio([1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0])
    npt.assert_allclose(ratio.coefficients, [-1, 0, 0, 0], atol=1e-14)


def test_coincident_and_zero_edge():
    with pytest.raises(CoincidentVertices):
        cross_ratio([0, 0, 0], [0, 0, 0], [1, 0, 0], [0, 1, 0])
    net = quad_net([[0, 0, 0], [0, 0, 0], [1, 1, 0], [0, 1, 0]])
    with pytest.raises(ZeroEdge):
        edge_constraint_residual(net)


def test_line_quads_are_degenerate():
    net = gen_line((4, 4), 0.1, 0.12, 0.3)
    with pytest.raises(DegenerateQuad):
        gauss_curvature(net, 0, 0)
    report = validate_net(net, checks=['edge-constraint', 'curvature'])
    assert report['degenerate'] == [[k, l] for k, l in net.quads()]
    assert report['checks']['edge-constraint']['passed']
    assert not report['passed']


def test_polygon_planarity():
    k = np.arange(6)
    helix = np.stack([np.cos(k), np.sin(k), 0.3 * k], axis=1)
    f = np.stack([helix, helix + [0, 0, 1]], axis=1)
    net = QuadNet(f, np.tile([0.0, 0.0, 1.0], (6, 2, 1)))
    assert polygon_planarity(net, 'k', 0) > 1e-2
    assert polygon_planarity(net, 'l', 3) == 0.0
    assert polygon_planarity(sphere_net(), 'k', 2) < 1e-12
    assert polygon_planarity(quad_net([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]), 'k', 0) == 0.0
    with pytest.raises(UsageError):
        polygon_planarity(net, 'x', 0)


def test_congruence(pseudosphere):
    rotation = Rotation.from_euler('xyz', [0.3, -0.5, 1.1]).as_matrix()
    moved = QuadNet(pseudosphere.f @ rotation.T + [1.0, -2.0, 0.5], pseudosphere.n @ rotation.T)
    isometry, residual = congruent_up_to_rigid_motion(pseudosphere, moved)
    assert residual < 1e-12
    npt.assert_allclose(isometry.rotation, rotation, atol=1e-12)

    flipped = QuadNet(moved.f, -moved.n)
    assert congruent_up_to_rigid_motion(pseudosphere, flipped)[1] > 1
    assert congruent_up_to_rigid_motion(pseudosphere, flipped, normals='sign')[1] < 1e-12
    assert congruent_up_to_rigid_motion(pseudosphere, flipped, normals='ignore')[1] < 1e-12


def test_congruence_errors(pseudosphere):
    with pytest.raises(DimensionMismatch):
        congruent_up_to_rigid_motion(pseudosphere, sphere_net())
    with pytest.raises(UsageError):
        congruent_up_to_rigid_motion(pseudosphere, pseudosphere, normals='loose')


def test_validate_report():
    net = gen_dini((6, 6), 1.0, np.pi / 2, 0.2, 0.3)
    report = validate_net(net, checks=['edge-constraint', 'curvature', 'circularity', 'planarity'])
    assert set(report['checks']) == {'edge-constraint', 'curvature', 'circularity', 'planarity'}
    for name in ('edge-constraint', 'curvature', 'circularity'):
        assert report['checks'][name]['passed']
        assert report['checks'][name]['failing'] == []
    assert report['tol'] == 1e-8


def test_validate_perturbed_net():
    net = gen_dini((6, 6), 1.0, np.pi / 2, 0.2, 0.3)
    f = net.f.copy()
    f[2, 2] += [0.01, 0.02, -0.015]
    report = validate_net(QuadNet(f, net.n))
    assert not report['passed']
    assert [2, 2] in report['checks']['curvature']['failing']
    assert report['checks']['edge-constraint']['max_residual'] > 1e-4
    incident = [{'dir': 'k', 'index': [1, 2]}, {'dir': 'k', 'index': [2, 2]},
                {'dir': 'l', 'index': [2, 1]}, {'dir': 'l', 'index': [2, 2]}]
    failing = report['checks']['edge-constraint']['failing']
    assert failing
    assert all(edge in incident for edge in failing)


def test_validate_rejects_unknown_check():
    with pytest.raises(UsageError):
        validate_net(sphere_net(), checks=['curvature', 'flatness'])


def test_edge_threshold_scales_with_net():
    short = quad_net([[0, 0, 0], [1e-13, 0, 0], [1, 1, 0], [0, 1, 0]])
    with pytest.raises(ZeroEdge):
        edge_constraint_residual(short)
    horizontal, vertical = edge_constraint_residual(short, threshold=1e-14)
    assert horizontal.shape == (1, 2)
    assert vertical.shape == (2, 1)

    large = quad_net([[0, 0, 0], [1e-7, 0, 0], [1e6, 1e6, 0], [0, 1e6, 0]])
    with pytest.raises(ZeroEdge):
        edge_constraint_residual(large)
    report = validate_net(large, checks=['edge-constraint'])
    assert report['degenerate_edges'] == [{'dir': 'k', 'index': [0, 0]}]
    assert report['checks']['edge-constraint']['passed']


def test_pseudosphere_tip_is_skipped():
    net = gen_tractrix_pseudosphere((40, 24), 1.0, 24)
    report = validate_net(net, checks=['edge-constraint', 'curvature'], tol=1e-8)
    assert report['passed']
    assert report['degenerate_edges']
    assert all(edge['dir'] == 'l' and edge['index'][0] > 10 for edge in report['degenerate_edges'])
    assert all(k > 10 for k, _ in report['degenerate'])
    assert report['checks']['curvature']['max_residual'] < 1e-8


def test_nothing_to_measure_fails():
    report = validate_net(gen_line((4, 4), 0.1, 0.12), checks=['curvature'])
    assert report['checks']['curvature']['max_residual'] == 0.0
    assert not report['checks']['curvature']['passed']
