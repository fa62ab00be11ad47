"""Bäcklund transformations of cK-nets and their associated families.

A transform of angle alpha attaches a vertex variable s~ to every vertex; the frame of the transformed
net is U(s -> s~) phi with U the K-net matrix of half tangent tan(alpha/2). Double transforms of
complex angle attach a cK Lax matrix B(s -> s_db; s_b) instead.
"""
import collections
import logging

import numpy as np
from scipy import optimize

from cknet.module_utils.cknet import DEGENERATE
from cknet.module_utils.cknet import GEOMETRY_TOL
from cknet.module_utils.cknet import DegenerateAngle
from cknet.module_utils.cknet import DegenerateEvolution
from cknet.module_utils.cknet import DimensionMismatch
from cknet.module_utils.cknet import NoSolution
from cknet.module_utils.cknet import UsageError
from cknet.module_utils.cklax import ck_integrate
from cknet.module_utils.cklax import evolve_quad_tangents
from cknet.module_utils.cklax import lax_matrix
from cknet.module_utils.knet import half_tangent
from cknet.module_utils.knet import normalized
from cknet.module_utils.knet import sym_net
from cknet.module_utils.knet import u_matrix
from cknet.module_utils.lattice import CknetLaxField
from cknet.module_utils.lattice import FrameState
from cknet.module_utils.quat import matrix_from_coefficients

log = logging.getLogger(__name__)

DoubleBacklund = collections.namedtuple('DoubleBacklund', ['frame', 'net', 's_b', 's_db'])
BianchiReport = collections.namedtuple('BianchiReport', ['theta_hat_tilde', 'theta_tilde_hat',
                                                         'position_residual', 'normal_residual'])


class BacklundParams(object):
    """Transform angle, initial phase s~(0, 0) = exp(i theta) and spectral parameter t = log(lambda)."""

    def __init__(self, alpha, theta=np.pi / 2, t=0.0, half_tan=None):
        self.alpha = alpha
        self.theta = float(theta)
        self.t = float(t)
        if half_tan is None:
            value = complex(alpha)
            if value.imag == 0.0 and (value.real == 0.0 or abs(value.real) >= np.pi):
                raise DegenerateAngle('transform angle must satisfy 0 < |alpha| < pi, got %r' % (alpha,))
            half_tan = half_tangent(alpha)
        self.half_tan = half_tan

    @classmethod
    def from_mu(cls, mu, theta=np.pi / 2, t=0.0):
        """Complex angle with tan(alpha/2) = exp(i mu)."""
        half_tan = np.exp(1j * mu)
        return cls(2 * np.arctan(half_tan), theta=theta, t=t, half_tan=half_tan)

    @property
    def real(self):
        return np.imag(self.half_tan) == 0.0

    def __repr__(self):
        return 'BacklundParams(alpha=%r, theta=%r, t=%r)' % (self.alpha, self.theta, self.t)


class BacklundField(object):
    """Vertex variables s~ and edge variables l~, m~ of a transformed net."""

    def __init__(self, s_tilde, l_tilde, m_tilde, params, delta1, delta2):
        self.s_tilde = s_tilde
        self.l_tilde = l_tilde
        self.m_tilde = m_tilde
        self.params = params
        self.delta1 = delta1
        self.delta2 = delta2
        self.dims = s_tilde.shape
        self.consistency_residual = 0.0

    def as_lax_field(self):
        return CknetLaxField(self.s_tilde, self.l_tilde, self.m_tilde, self.delta1, self.delta2,
                             unitary=self.params.real)


def bt_distance(alpha, t):
    """Distance between a net and its transform in the associated family at lambda = exp(t)."""
    return np.sin(alpha) / (np.cosh(t) - np.cos(alpha) * np.sinh(t))


def bt_normal_cosine(alpha, t):
    return (np.cos(alpha) * np.cosh(t) - np.sinh(t)) / (np.cosh(t) - np.cos(alpha) * np.sinh(t))


def _transform_step(s, s_next, edge, s_tilde, tan_alpha, tan_delta):
    """Edge variable of the transformed edge and s~ at its end vertex."""
    cot_alpha, cot_delta = 1 / tan_alpha, 1 / tan_delta
    denominator = s_tilde * cot_alpha - edge * cot_delta
    if abs(denominator) < DEGENERATE:
        raise DegenerateEvolution('denominator vanishes', quantity='edge')
    edge_tilde = s * (edge * cot_alpha - s_tilde * cot_delta) / denominator
    T = -tan_alpha * tan_delta
    denominator = edge * (1 + T * edge_tilde * s_next)
    if abs(denominator) < DEGENERATE:
        raise DegenerateEvolution('denominator vanishes', quantity='s_tilde')
    return edge_tilde, (T + edge_tilde * s_next) / denominator


def bt_evolve(field, params, order='k'):
    """Propagate s~ from s~(0, 0) = exp(i theta) over the window.

    order 'k' sweeps row 0 and then every column, order 'l' column 0 and then every row; the
    results agree on compatible fields and the largest mismatch is kept as consistency_residual.
    """
    K, L = field.dims
    t1 = [half_tangent(d) for d in field.delta1]
    t2 = [half_tangent(d) for d in field.delta2]
    tan_alpha = params.half_tan
    s_tilde = np.zeros((K, L), dtype=complex)
    s_tilde[0, 0] = np.exp(1j * params.theta)

    def k_step(k, l):
        return _transform_step(field.s[k, l], field.s[k + 1, l], field.l[k, l], s_tilde[k, l], tan_alpha, t1[k])

    def l_step(k, l):
        return _transform_step(field.s[k, l], field.s[k, l + 1], field.m[k, l], s_tilde[k, l], tan_alpha, t2[l])

    if order == 'k':
        for k in range(K - 1):
            s_tilde[k + 1, 0] = k_step(k, 0)[1]
        for k in range(K):
            for l in range(L - 1):
                s_tilde[k, l + 1] = l_step(k, l)[1]
    elif order == 'l':
        for l in range(L - 1):
            s_tilde[0, l + 1] = l_step(0, l)[1]
        for l in range(L):
            for k in range(K - 1):
                s_tilde[k + 1, l] = k_step(k, l)[1]
    else:
        raise UsageError("order must be 'k' or 'l', got %r" % (order,))

    l_tilde = np.zeros((K - 1, L), dtype=complex)
    m_tilde = np.zeros((K, L - 1), dtype=complex)
    worst = 0.0
    for l in range(L):
        for k in range(K - 1):
            l_tilde[k, l], end = k_step(k, l)
            worst = max(worst, abs(end - s_tilde[k + 1, l]))
    for l in range(L - 1):
        for k in range(K):
            m_tilde[k, l], end = l_step(k, l)
            worst = max(worst, abs(end - s_tilde[k, l + 1]))
    log.debug('transform %r evolved over %dx%d, consistency residual %.3g', params, K, L, worst)
    bt_field = BacklundField(s_tilde, l_tilde, m_tilde, params, field.delta1, field.delta2)
    bt_field.consistency_residual = worst
    return bt_field


def _transform_frame(phi, dphi, s, s_tilde, tan_alpha, lam):
    cot_alpha = 1 / tan_alpha
    mat, dmat = u_matrix(s, s_tilde, cot_alpha, lam)
    A, dA = normalized(mat, dmat, cot_alpha ** 2 + lam ** 2, 2 * lam ** 2)
    return A @ phi, dA @ phi + A @ dphi


def bt_immerse(frame, field, bt_field):
    """Frames and net of the transform: phi~ = U(s -> s~) phi, read off with the Sym formula.

    At lambda = 1 the vertex moves by sin(alpha) in the tangent plane and the normal turns by alpha.
    """
    if tuple(frame.dims) != tuple(field.dims) or tuple(field.dims) != tuple(bt_field.dims):
        raise DimensionMismatch('frame, field and transform live on different windows')
    K, L = frame.dims
    lam = np.exp(frame.t)
    phi = matrix_from_coefficients(frame.phi)
    dphi = matrix_from_coefficients(frame.phi_dot)
    new_phi = np.zeros_like(phi)
    new_dphi = np.zeros_like(dphi)
    for k in range(K):
        for l in range(L):
            new_phi[k, l], new_dphi[k, l] = _transform_frame(phi[k, l], dphi[k, l], field.s[k, l],
                                                             bt_field.s_tilde[k, l], bt_field.params.half_tan, lam)
    new_frame = FrameState.from_matrices(new_phi, new_dphi, frame.t)
    meta = {'generator': 'backlund', 'alpha': bt_field.params.alpha, 'theta': bt_field.params.theta, 't': frame.t}
    return new_frame, sym_net(new_frame, meta=meta)


def bt_transform(field, params):
    """Integrate the base field at params.t and return the base net, the transform frames and net."""
    frame, net = ck_integrate(field, params.t)
    bt_field = bt_evolve(field, params)
    new_frame, new_net = bt_immerse(frame, field, bt_field)
    return net, bt_field, new_frame, new_net


def bt_double(frame, field, mu, theta_b=np.pi / 2, theta_db=0.0):
    """Double transform with tan(alpha/2) = exp(i mu) through the Lax matrix B(s -> s_db; s_b).

    s_b and s_db evolve by the cK compatibility in the plane spanned by a lattice direction and the
    transform direction. mu = 0 gives Kuen type nets over the line, other real mu breathers.
    """
    if tuple(frame.dims) != tuple(field.dims):
        raise DimensionMismatch('frame and field live on different windows')
    K, L = field.dims
    tan_mu = np.exp(1j * mu)
    if np.imag(mu) == 0 and abs(np.cos(2 * mu) + 1) < DEGENERATE:
        raise DegenerateAngle('mu = pi/2 mod pi makes the transform singular')
    t1 = [half_tangent(d) for d in field.delta1]
    t2 = [half_tangent(d) for d in field.delta2]
    s_b = np.zeros((K, L), dtype=complex)
    s_db = np.zeros((K, L), dtype=complex)
    s_b[0, 0] = np.exp(1j * theta_b)
    s_db[0, 0] = np.exp(1j * theta_db)
    for k in range(K - 1):
        _, s_b[k + 1, 0], s_db[k + 1, 0] = evolve_quad_tangents(
            field.s[k, 0], field.s[k + 1, 0], s_db[k, 0], field.l[k, 0], s_b[k, 0], t1[k], tan_mu)
    for k in range(K):
        for l in range(L - 1):
            _, s_b[k, l + 1], s_db[k, l + 1] = evolve_quad_tangents(
                field.s[k, l], field.s[k, l + 1], s_db[k, l], field.m[k, l], s_b[k, l], t2[l], tan_mu)

    lam = np.exp(frame.t)
    phi = matrix_from_coefficients(frame.phi)
    dphi = matrix_from_coefficients(frame.phi_dot)
    new_phi = np.zeros_like(phi)
    new_dphi = np.zeros_like(dphi)
    for k in range(K):
        for l in range(L):
            mat, dmat, det, ddet = lax_matrix(field.s[k, l], s_db[k, l], s_b[k, l], tan_mu, lam)
            B, dB = normalized(mat, dmat, det, ddet)
            new_phi[k, l] = B @ phi[k, l]
            new_dphi[k, l] = dB @ phi[k, l] + B @ dphi[k, l]
    new_frame = FrameState.from_matrices(new_phi, new_dphi, frame.t)
    log.debug('double transform mu=%s over %dx%d', mu, K, L)
    net = sym_net(new_frame, meta={'generator': 'double_backlund', 'mu': mu, 't': frame.t})
    return DoubleBacklund(new_frame, net, s_b, s_db)


def _corner(frame, s, theta, tan_alpha):
    """Position and normal at (0, 0) of a transform with initial phase theta."""
    phi, dphi = _transform_frame(matrix_from_coefficients(frame.phi[0, 0]),
                                 matrix_from_coefficients(frame.phi_dot[0, 0]),
                                 s, np.exp(1j * theta), tan_alpha, np.exp(frame.t))
    net = sym_net(FrameState.from_matrices(phi[None, None], dphi[None, None], frame.t))
    return net.f[0, 0], net.n[0, 0]


def _second_transform(frame, bt_field, alpha, theta):
    lax = bt_field.as_lax_field()
    second = bt_evolve(lax, BacklundParams(alpha, theta=theta))
    return bt_immerse(frame, lax, second)[1]


def bianchi_check(field, alpha_hat, alpha_tilde, theta_hat=np.pi / 2, theta_tilde=np.pi / 2, tol=GEOMETRY_TOL,
                  samples=180):
    """Compare the alpha~ transform of f^ with the alpha^ transform of f~ at lambda = 1.

    The initial phase of the first is found by brentq from |f^~ - f~| = sin(alpha^) at (0, 0); the
    phase of the second follows from the position of that corner, which is linear in (cos, sin) of it.
    """
    frame, _ = ck_integrate(field, 0.0)
    hat = bt_evolve(field, BacklundParams(alpha_hat, theta=theta_hat))
    tilde = bt_evolve(field, BacklundParams(alpha_tilde, theta=theta_tilde))
    hat_frame, hat_net = bt_immerse(frame, field, hat)
    tilde_frame, tilde_net = bt_immerse(frame, field, tilde)
    tan_hat, tan_tilde = half_tangent(alpha_hat), half_tangent(alpha_tilde)
    target = np.sin(alpha_hat) ** 2

    def gap(theta):
        corner, _ = _corner(hat_frame, hat.s_tilde[0, 0], theta, tan_tilde)
        return float(np.sum((corner - tilde_net.f[0, 0]) ** 2) - target)

    grid = np.linspace(-np.pi, np.pi, samples + 1)
    values = np.array([gap(theta) for theta in grid])
    if np.max(np.abs(values)) < tol:
        candidates = [theta_hat]
    else:
        candidates = [optimize.brentq(gap, a, b, xtol=1e-15)
                      for a, b, va, vb in zip(grid[:-1], grid[1:], values[:-1], values[1:]) if va * vb < 0]
        if not candidates:
            best = int(np.argmin(np.abs(values)))
            if abs(values[best]) > tol:
                raise NoSolution('no initial phase places the fourth net at distance sin(alpha)')
            candidates = [grid[best]]
    log.debug('Bianchi phase candidates %s', candidates)

    origin = tilde_net.f[0, 0]
    axis_a = _corner(tilde_frame, tilde.s_tilde[0, 0], 0.0, tan_hat)[0] - origin
    axis_b = _corner(tilde_frame, tilde.s_tilde[0, 0], np.pi / 2, tan_hat)[0] - origin
    best = None
    for theta in candidates:
        first = _second_transform(hat_frame, hat, alpha_tilde, theta)
        offset = first.f[0, 0] - origin
        psi = float(np.arctan2(np.dot(offset, axis_b), np.dot(offset, axis_a)))
        second = _second_transform(tilde_frame, tilde, alpha_hat, psi)
        report = BianchiReport(float(theta), psi, float(np.max(np.linalg.norm(first.f - second.f, axis=2))),
                               float(np.max(np.linalg.norm(first.n - second.n, axis=2))))
        if best is None or report.position_residual + report.normal_residual < \
                best.position_residual + best.normal_residual:
            best = report
    log.info('Bianchi check residuals: position %.3g, normal %.3g', best.position_residual, best.normal_residual)
    return best


def permutability_holds(report, tol=GEOMETRY_TOL):
    return report.position_residual < tol and report.normal_residual < tol
