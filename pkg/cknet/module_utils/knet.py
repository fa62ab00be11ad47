"""Asymptotic K-nets: U, V Lax matrices, the Hirota equation and frame integration with the Sym formula."""
import collections
import logging

import numpy as np

from cknet.module_utils.cknet import DEGENERATE
from cknet.module_utils.cknet import TOL
from cknet.module_utils.cknet import DegenerateAngle
from cknet.module_utils.cknet import DegenerateQuad
from cknet.module_utils.cknet import IncompatibleField
from cknet.module_utils.lattice import FrameState
from cknet.module_utils.lattice import KnetField
from cknet.module_utils.lattice import QuadNet
from cknet.module_utils.quat import Biquat
from cknet.module_utils.quat import conjugate_normal
from cknet.module_utils.quat import mul
from cknet.module_utils.quat import inverse
from cknet.module_utils.quat import trace_free

log = logging.getLogger(__name__)

LaxEval = collections.namedtuple('LaxEval', ['mat', 'dmat'])
KnetLaxPairEval = collections.namedtuple('KnetLaxPairEval', ['U', 'V', 'dU', 'dV'])

# Relative tolerance of the per-quad path independence check.
COMPAT_TOL = 1e-8


def half_tangent(delta):
    """tan(delta/2), rejecting angles where tan or cot of the half angle blows up."""
    value = np.tan(complex(delta) / 2)
    if not np.isfinite(value) or abs(value) < DEGENERATE or abs(value) > 1.0 / DEGENERATE:
        raise DegenerateAngle('tan(delta/2) degenerate for delta=%r' % (delta,))
    if abs(value.imag) == 0.0:
        return value.real
    return value


def u_matrix(H, H1, cot_half, lam):
    """U(H -> H1) = [[c H1/H, i lam], [i lam, c H/H1]] as a 2x2 matrix with its t-derivative."""
    mat = np.array([[cot_half * H1 / H, 1j * lam], [1j * lam, cot_half * H / H1]], dtype=complex)
    dmat = np.array([[0, 1j * lam], [1j * lam, 0]], dtype=complex)
    return mat, dmat


def v_matrix(H, H2, tan_half, lam):
    """V(H -> H2) = [[1, (i/lam) t H2 H], [(i/lam) t / (H2 H), 1]] with its t-derivative."""
    a = 1j * tan_half * H2 * H / lam
    b = 1j * tan_half / (H2 * H * lam)
    mat = np.array([[1, a], [b, 1]], dtype=complex)
    dmat = np.array([[0, -a], [-b, 0]], dtype=complex)
    return mat, dmat


def normalized(mat, dmat, det, ddet):
    """Scale a Lax matrix to unit determinant and carry the exact derivative of the scale along.

    The extra term is proportional to the matrix itself, so it only adds a multiple of the identity
    to phi^-1 phi_dot, which the trace free projection in the Sym formula removes.
    """
    root = np.sqrt(complex(det))
    if abs(root) < DEGENERATE:
        raise DegenerateAngle('Lax matrix determinant vanishes')
    return mat / root, dmat / root - mat * (ddet / (2 * det * root))


def knet_U(h, h1, delta_u, t):
    lam = np.exp(t)
    mat, dmat = u_matrix(np.exp(1j * h), np.exp(1j * h1), 1.0 / half_tangent(delta_u), lam)
    return LaxEval(Biquat.from_matrix(mat), Biquat.from_matrix(dmat))


def knet_V(h, h2, delta_v, t):
    lam = np.exp(t)
    mat, dmat = v_matrix(np.exp(1j * h), np.exp(1j * h2), half_tangent(delta_v), lam)
    return LaxEval(Biquat.from_matrix(mat), Biquat.from_matrix(dmat))


def knet_lax_pair(h, h1, h2, delta_u, delta_v, t):
    U = knet_U(h, h1, delta_u, t)
    V = knet_V(h, h2, delta_v, t)
    return KnetLaxPairEval(U.mat, V.mat, U.dmat, V.dmat)


def hirota_residual(field, k, l):
    h = field.h
    T = half_tangent(field.delta_u[k]) * half_tangent(field.delta_v[l])
    return (np.exp(1j * (h[k + 1, l + 1] + h[k, l])) - np.exp(1j * (h[k + 1, l] + h[k, l + 1]))
            - T * (1 - np.exp(1j * (h[k, l] + h[k + 1, l] + h[k + 1, l + 1] + h[k, l + 1]))))


def knet_solve_h12(h, h1, h2, delta_u, delta_v):
    """Phase h12 solving the Hirota equation on one quad; the solution is unimodular for real angles."""
    T = half_tangent(delta_u) * half_tangent(delta_v)
    p = np.exp(1j * (h1 + h2))
    denominator = np.exp(1j * h) * (1 + T * p)
    if abs(denominator) < DEGENERATE:
        raise DegenerateQuad('Hirota solve degenerate')
    return float(np.angle((T + p) / denominator))


def knet_field_from_cauchy(h_row, h_col, delta_u, delta_v):
    """Fill a K-net field from phases on row l=0 and column k=0 (h_row[0] and h_col[0] coincide)."""
    K, L = len(h_row), len(h_col)
    h = np.zeros((K, L))
    h[:, 0] = h_row
    h[0, :] = h_col
    for l in range(L - 1):
        for k in range(K - 1):
            h[k + 1, l + 1] = knet_solve_h12(h[k, l], h[k + 1, l], h[k, l + 1], delta_u[k], delta_v[l])
    return KnetField(h, delta_u, delta_v)


def integrate_frames(dims, k_step, l_step, t, phi0=None, tol=COMPAT_TOL):
    """Propagate (phi, phi_dot) from (0, 0) along row 0 and then up every column.

    k_step(k, l) and l_step(k, l) return the unit determinant transition matrix and its t-derivative
    for the edge leaving (k, l). Every quad is checked for path independence.
    """
    K, L = dims
    phi = np.zeros((K, L, 2, 2), dtype=complex)
    dphi = np.zeros((K, L, 2, 2), dtype=complex)
    phi[0, 0] = np.eye(2) if phi0 is None else phi0.matrix
    for k in range(K - 1):
        A, dA = k_step(k, 0)
        phi[k + 1, 0] = A @ phi[k, 0]
        dphi[k + 1, 0] = dA @ phi[k, 0] + A @ dphi[k, 0]
    for k in range(K):
        for l in range(L - 1):
            B, dB = l_step(k, l)
            phi[k, l + 1] = B @ phi[k, l]
            dphi[k, l + 1] = dB @ phi[k, l] + B @ dphi[k, l]
    worst = 0.0
    for l in range(1, L):
        for k in range(K - 1):
            A, _ = k_step(k, l)
            other = A @ phi[k, l]
            residual = np.linalg.norm(other - phi[k + 1, l]) / max(1.0, np.linalg.norm(phi[k + 1, l]))
            worst = max(worst, residual)
            if residual > tol:
                raise IncompatibleField('zero curvature residual %.3g on quad (%d, %d)' % (residual, k, l - 1))
    log.debug('integrated %dx%d frame at t=%s, compatibility residual %.3g', K, L, t, worst)
    frame = FrameState.from_matrices(phi, dphi, t)
    frame.compat_residual = worst
    return frame


def sym_net(frame, meta=None):
    """Immersion f = 2 tf(phi^-1 phi_dot) and Gauss map n = phi^-1 e3 phi of a frame."""
    K, L = frame.dims
    f = np.zeros((K, L, 3))
    n = np.zeros((K, L, 3))
    for k in range(K):
        for l in range(L):
            phi = frame.frame(k, l)
            f[k, l] = 2 * trace_free(mul(inverse(phi), frame.frame_dot(k, l)))
            n[k, l] = conjugate_normal(phi)
    n /= np.linalg.norm(n, axis=2)[..., None]
    return QuadNet(f, n, meta=meta)


def knet_integrate(field, t, tol=COMPAT_TOL):
    lam = np.exp(t)
    H = np.exp(1j * field.h)
    cot_u = [1.0 / half_tangent(d) for d in field.delta_u]
    tan_v = [half_tangent(d) for d in field.delta_v]

    def k_step(k, l):
        mat, dmat = u_matrix(H[k, l], H[k + 1, l], cot_u[k], lam)
        return normalized(mat, dmat, cot_u[k] ** 2 + lam ** 2, 2 * lam ** 2)

    def l_step(k, l):
        mat, dmat = v_matrix(H[k, l], H[k, l + 1], tan_v[l], lam)
        return normalized(mat, dmat, 1 + tan_v[l] ** 2 / lam ** 2, -2 * tan_v[l] ** 2 / lam ** 2)

    for l in range(field.dims[1] - 1):
        for k in range(field.dims[0] - 1):
            residual = abs(hirota_residual(field, k, l))
            if residual > TOL:
                raise IncompatibleField('Hirota residual %.3g on quad (%d, %d)' % (residual, k, l))
    frame = integrate_frames(field.dims, k_step, l_step, t, tol=tol)
    return frame, sym_net(frame, meta={'generator': 'knet', 't': t})


def knet_quad_curvature(delta_u, delta_v, t):
    denominator = np.cos(delta_u) + np.cos(delta_v)
    if abs(denominator) < DEGENERATE:
        raise DegenerateQuad('cos(delta_u) + cos(delta_v) vanishes')
    return (-2 * np.cosh(t) ** 2 * (1 - np.cos(delta_u) * np.tanh(t)) * (1 + np.cos(delta_v) * np.tanh(t))
            / denominator)
