"""Geometric checks on quad nets with normals: edge constraint, curvatures, circularity, planarity, congruence."""
import collections
import logging

import numpy as np

from cknet.module_utils.cknet import DEGENERATE
from cknet.module_utils.cknet import GEOMETRY_TOL
from cknet.module_utils.cknet import CknetError
from cknet.module_utils.cknet import CoincidentVertices
from cknet.module_utils.cknet import DegenerateFrame
from cknet.module_utils.cknet import DegenerateQuad
from cknet.module_utils.cknet import DimensionMismatch
from cknet.module_utils.cknet import UsageError
from cknet.module_utils.cknet import ZeroEdge
from cknet.module_utils.quat import embed
from cknet.module_utils.quat import inverse
from cknet.module_utils.quat import mul

log = logging.getLogger(__name__)

QuadReport = collections.namedtuple('QuadReport', ['K', 'H', 'face_normal', 'cross_ratio_im', 'planarity',
                                                   'edge_constraint_max'])
Isometry = collections.namedtuple('Isometry', ['rotation', 'translation'])

CHECKS = ('edge-constraint', 'curvature', 'circularity', 'planarity')
NORMAL_MODES = ('exact', 'sign', 'ignore')


def _det(a, b, c):
    return float(np.dot(a, np.cross(b, c)))


def face_normal(f, n):
    """Unit face normal of a quad given as (f, f1, f12, f2) with normals in the same order.

    Taken along (n12 - n) x (n2 - n1); nets whose normals barely move fall back to the f diagonals.
    """
    candidate = np.cross(n[2] - n[0], n[3] - n[1])
    length = np.linalg.norm(candidate)
    if length < DEGENERATE:
        candidate = np.cross(f[2] - f[0], f[3] - f[1])
        length = np.linalg.norm(candidate)
        if length < DEGENERATE:
            raise DegenerateQuad('both diagonal pairs are parallel')
    return candidate / length


def _diagonals(net, k, l):
    f, n = net.quad(k, l)
    N = face_normal(f, n)
    return f[2] - f[0], n[2] - n[0], f[3] - f[1], n[3] - n[1], N


def steiner_coefficients(net, k, l):
    """Mixed areas (A0, A1, A2) with area(f + s n) = A0 + A1 s + A2 s^2 on quad (k, l)."""
    a, b, c, d, N = _diagonals(net, k, l)
    return 0.5 * _det(a, c, N), 0.5 * (_det(a, d, N) + _det(b, c, N)), 0.5 * _det(b, d, N)


def offset_area(net, k, l, s):
    a, b, c, d, N = _diagonals(net, k, l)
    return 0.5 * _det(a + s * b, c + s * d, N)


def _area(net, k, l):
    area, linear, quadratic = steiner_coefficients(net, k, l)
    if abs(area) < DEGENERATE:
        raise DegenerateQuad('quad (%d, %d) has vanishing area' % (k, l))
    return area, linear, quadratic


def gauss_curvature(net, k, l):
    area, _, quadratic = _area(net, k, l)
    return quadratic / area


def mean_curvature(net, k, l):
    """Signed under the face normal rule of face_normal; callers wanting an orientation free value use abs."""
    area, linear, _ = _area(net, k, l)
    return linear / (2 * area)


def _edge_residual(df, n_sum, threshold):
    length = np.linalg.norm(df)
    if length < threshold:
        raise ZeroEdge('edge of length %.3g' % length)
    width = np.linalg.norm(n_sum)
    if width < DEGENERATE:
        return 0.0
    return abs(float(np.dot(df, n_sum))) / (length * width)


def net_scale(net):
    """Largest absolute vertex coordinate, at least 1."""
    return max(1.0, float(np.max(np.abs(net.f))))


def _edges(net):
    """(direction, k, l, f_i - f, n_i + n) for every edge, direction 'k' before 'l'."""
    K, L = net.dims
    if K < 2 and L < 2:
        raise DimensionMismatch('a 1x1 net has no edges')
    for l in range(L):
        for k in range(K - 1):
            yield 'k', k, l, net.f[k + 1, l] - net.f[k, l], net.n[k + 1, l] + net.n[k, l]
    for l in range(L - 1):
        for k in range(K):
            yield 'l', k, l, net.f[k, l + 1] - net.f[k, l], net.n[k, l + 1] + net.n[k, l]


def edge_constraint_residual(net, threshold=None):
    """Per edge |(f_i - f).(n_i + n)| / (|f_i - f| |n_i + n|) as arrays of shape (K-1, L) and (K, L-1).

    Edges shorter than threshold raise ZeroEdge; the default threshold is DEGENERATE times net_scale.
    """
    if threshold is None:
        threshold = DEGENERATE * net_scale(net)
    K, L = net.dims
    residuals = {'k': np.zeros((K - 1, L)), 'l': np.zeros((K, L - 1))}
    for direction, k, l, df, n_sum in _edges(net):
        residuals[direction][k, l] = _edge_residual(df, n_sum, threshold)
    return residuals['k'], residuals['l']


def cross_ratio(a, b, c, d, threshold=DEGENERATE):
    """Quaternionic cross-ratio (a - b)(b - c)^-1 (c - d)(d - a)^-1 of four points in R^3."""
    points = [np.asarray(p, dtype=float) for p in (a, b, c, d)]
    for i in range(4):
        for j in range(i + 1, 4):
            if np.linalg.norm(points[i] - points[j]) < threshold:
                raise CoincidentVertices('vertices %d and %d coincide' % (i, j))
    A, B, C, D = [embed(p) for p in points]
    return mul(mul(mul(A - B, inverse(B - C)), C - D), inverse(D - A))


def circularity(net, k, l):
    """Size of the vector part of the cross-ratio of quad (k, l) relative to its full size; 0 iff concircular."""
    f, _ = net.quad(k, l)
    coefficients = cross_ratio(*f).coefficients.real
    return float(np.linalg.norm(coefficients[1:]) / np.linalg.norm(coefficients))


def polygon_planarity(net, direction, index):
    """Largest distance of a coordinate polygon's vertices to its best fitting plane.

    direction 'k' takes the polygon f[:, index], direction 'l' the polygon f[index, :].
    """
    if direction == 'k':
        points = net.f[:, index]
    elif direction == 'l':
        points = net.f[index, :]
    else:
        raise UsageError("direction must be 'k' or 'l', got %r" % (direction,))
    if len(points) < 4:
        return 0.0
    centered = points - points.mean(axis=0)
    _, _, vh = np.linalg.svd(centered)
    return float(np.max(np.abs(centered @ vh[-1])))


def quad_report(net, k, l):
    f, n = net.quad(k, l)
    N = face_normal(f, n)
    threshold = DEGENERATE * net_scale(net)
    edges = [_edge_residual(f[j] - f[i], n[j] + n[i], threshold) for i, j in ((0, 1), (1, 2), (3, 2), (0, 3))]
    centered = f - f.mean(axis=0)
    planarity = float(np.max(np.abs(centered @ np.linalg.svd(centered)[2][-1])))
    return QuadReport(gauss_curvature(net, k, l), mean_curvature(net, k, l), N, circularity(net, k, l),
                      planarity, max(edges))


def _frame(points, normal):
    """Proper orthonormal frame spanned by the first two independent directions among points and normal."""
    candidates = list(points) + [normal]
    first = None
    for vector in candidates:
        length = np.linalg.norm(vector)
        if length < DEGENERATE:
            continue
        if first is None:
            first = vector / length
            continue
        second = vector - np.dot(vector, first) * first
        if np.linalg.norm(second) > 1e-9 * length:
            second /= np.linalg.norm(second)
            return np.stack([first, second, np.cross(first, second)], axis=1)
    raise DegenerateFrame('no two independent directions at (0, 0)')


def _tangents(net):
    K, L = net.dims
    vectors = []
    if K > 1:
        vectors.append(net.f[1, 0] - net.f[0, 0])
    if L > 1:
        vectors.append(net.f[0, 1] - net.f[0, 0])
    return vectors


def congruent_up_to_rigid_motion(a, b, normals='exact'):
    """Rotation and translation taking a onto b, fixed by the lattice tangents at (0, 0), and the residual.

    The residual is the largest vertex distance after alignment; normals are compared exactly, up to
    one global sign, or not at all.
    """
    if normals not in NORMAL_MODES:
        raise UsageError('normals must be one of %s' % ', '.join(NORMAL_MODES))
    if tuple(a.dims) != tuple(b.dims):
        raise DimensionMismatch('nets have dims %s and %s' % (a.dims, b.dims))
    rotation = _frame(_tangents(b), b.n[0, 0]) @ _frame(_tangents(a), a.n[0, 0]).T
    if np.linalg.det(rotation) < 0:
        raise DegenerateFrame('alignment is not a proper rotation')
    translation = b.f[0, 0] - rotation @ a.f[0, 0]
    moved = a.f @ rotation.T + translation
    residual = float(np.max(np.linalg.norm(moved - b.f, axis=2)))
    if normals != 'ignore':
        turned = a.n @ rotation.T
        gap = float(np.max(np.linalg.norm(turned - b.n, axis=2)))
        if normals == 'sign':
            gap = min(gap, float(np.max(np.linalg.norm(turned + b.n, axis=2))))
        residual = max(residual, gap)
    return Isometry(rotation, translation), residual


def _record(report, name, residuals, tol):
    """Store max residual and failing indices; a check with nothing left to measure does not pass."""
    failing = [index for index, value in residuals if value > tol]
    worst = max([value for _, value in residuals] or [0.0])
    report[name] = {'max_residual': worst, 'failing': failing, 'passed': bool(residuals) and not failing}


def validate_net(net, checks=CHECKS, tol=GEOMETRY_TOL, target_curvature=-1.0):
    """Run the named checks and return a JSON-ready report; passed is False if any check fails.

    Edges shorter than DEGENERATE times net_scale and quads without area are listed under
    degenerate_edges and degenerate and left out of the residuals.
    """
    unknown = [name for name in checks if name not in CHECKS]
    if unknown:
        raise UsageError('unknown checks: %s' % ', '.join(unknown))
    report = {}
    degenerate = []
    degenerate_edges = []
    if 'edge-constraint' in checks:
        threshold = DEGENERATE * net_scale(net)
        residuals = []
        for direction, k, l, df, n_sum in _edges(net):
            edge = {'dir': direction, 'index': [k, l]}
            try:
                residuals.append((edge, _edge_residual(df, n_sum, threshold)))
            except ZeroEdge as e:
                log.info('skipping edge %s (%d, %d): %s', direction, k, l, e)
                degenerate_edges.append(edge)
        _record(report, 'edge-constraint', residuals, tol)
    for name, measure in (('curvature', lambda k, l: abs(gauss_curvature(net, k, l) - target_curvature)),
                          ('circularity', lambda k, l: circularity(net, k, l))):
        if name not in checks:
            continue
        residuals = []
        for k, l in net.quads():
            try:
                residuals.append(([k, l], measure(k, l)))
            except CknetError as e:
                log.info('skipping %s on quad (%d, %d): %s', name, k, l, e)
                if [k, l] not in degenerate:
                    degenerate.append([k, l])
        _record(report, name, residuals, tol)
    if 'planarity' in checks:
        residuals = [([0, l], polygon_planarity(net, 'k', l)) for l in range(net.L)]
        _record(report, 'planarity', residuals, tol)
    passed = all(entry['passed'] for entry in report.values())
    log.info('validated %s: %s', net, 'passed' if passed else 'failed')
    return {'checks': report, 'degenerate': degenerate, 'degenerate_edges': degenerate_edges, 'passed': passed,
            'tol': tol}
