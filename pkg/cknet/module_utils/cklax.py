"""Circular K-nets (cK-nets) and their associated families from the L, M Lax pair.

L(s -> s1; l) = [[l (c/s + t s1), i (lam - s s1 / lam)], [i (lam - 1 / (lam s s1)), (c s + t / s1) / l]]
with t = tan(delta/2), c = cot(delta/2); it factors as V(l -> s1; -delta) U(s -> l; delta) into K-net
matrices. M has the same form along the second lattice direction.
"""
import collections
import logging

import numpy as np

from cknet.module_utils.cknet import DEGENERATE
from cknet.module_utils.cknet import TIGHT_TOL
from cknet.module_utils.cknet import TOL
from cknet.module_utils.cknet import DegenerateEvolution
from cknet.module_utils.cknet import DegenerateQuad
from cknet.module_utils.cknet import NegativeRadicand
from cknet.module_utils.cknet import NonConcircular
from cknet.module_utils.knet import COMPAT_TOL
from cknet.module_utils.knet import half_tangent
from cknet.module_utils.knet import integrate_frames
from cknet.module_utils.knet import normalized
from cknet.module_utils.knet import sym_net
from cknet.module_utils.lattice import CknetLaxField
from cknet.module_utils.quat import Biquat
from cknet.module_utils.quat import embed
from cknet.module_utils.quat import frame_for_normal
from cknet.module_utils.quat import inverse
from cknet.module_utils.quat import mul
from cknet.module_utils.quat import trace_free

log = logging.getLogger(__name__)

CknetLaxEval = collections.namedtuple('CknetLaxEval', ['Lmat', 'dL', 'det'])


def lax_matrix(s, s1, l, tan_half, lam):
    """The L matrix, its t-derivative, determinant and determinant derivative, all as plain arrays."""
    cot_half = 1.0 / tan_half
    p = s * s1
    mat = np.array([[l * (cot_half / s + tan_half * s1), 1j * (lam - p / lam)],
                    [1j * (lam - 1 / (lam * p)), (cot_half * s + tan_half / s1) / l]], dtype=complex)
    dmat = np.array([[0, 1j * (lam + p / lam)], [1j * (lam + 1 / (lam * p)), 0]], dtype=complex)
    det = lam ** 2 + lam ** -2 + tan_half ** 2 + cot_half ** 2
    ddet = 2 * lam ** 2 - 2 * lam ** -2
    return mat, dmat, det, ddet


def ck_L(s, s1, l, delta1, t):
    mat, dmat, det, _ = lax_matrix(s, s1, l, half_tangent(delta1), np.exp(t))
    return CknetLaxEval(Biquat.from_matrix(mat), Biquat.from_matrix(dmat), det)


def ck_M(s, s2, m, delta2, t):
    return ck_L(s, s2, m, delta2, t)


def ell_length(rho, rho_i, delta_i, tol=TOL):
    """Modulus of the edge variable that keeps L quaternionic.

    |l|^2 = cos(sigma - a) / cos(sigma + a) with sigma = (rho + rho_i)/2 and a = arg tan(delta_i/2).
    """
    a = np.angle(half_tangent(delta_i))
    sigma = (rho + rho_i) / 2
    numerator = np.cos(sigma - a)
    denominator = np.cos(sigma + a)
    if abs(denominator) < DEGENERATE:
        raise NegativeRadicand('edge length radicand has a vanishing denominator')
    radicand = numerator / denominator
    if radicand < -tol:
        raise NegativeRadicand('edge length radicand %.6g is negative' % radicand)
    return float(np.sqrt(max(radicand, 0.0)))


def evolve_quad_tangents(s, s1, s2, l, m, t1, t2, threshold=DEGENERATE):
    """Solve M1 L = L2 M for (l2, m1, s12) by exchanging K-net factors around the quad.

    x is the vertex shared by U(s -> l; delta1) U(l -> x; delta2) and U(s -> m; delta2) U(m -> x; delta1);
    Hirota moves then give m1 and l2, and the V V exchange gives s12.
    """
    c1, c2 = 1 / t1, 1 / t2
    denominator = m * c2 - l * c1
    if abs(denominator) < threshold:
        raise DegenerateEvolution('exchange vertex denominator vanishes', quantity='s12')
    x = s * (l * c2 - m * c1) / denominator
    T = -t1 * t2
    denominator = l * (1 + T * x * s1)
    if abs(denominator) < threshold:
        raise DegenerateEvolution('denominator vanishes', quantity='m1')
    m1 = (T + x * s1) / denominator
    denominator = m * (1 + T * x * s2)
    if abs(denominator) < threshold:
        raise DegenerateEvolution('denominator vanishes', quantity='l2')
    l2 = (T + x * s2) / denominator
    denominator = m1 * t2 - l2 * t1
    if abs(denominator) < threshold:
        raise DegenerateEvolution('denominator vanishes', quantity='s12')
    s12 = x * (l2 * t2 - m1 * t1) / denominator
    return l2, m1, s12


def ck_evolve_quad(s, s1, s2, l, m, delta1, delta2, threshold=DEGENERATE):
    return evolve_quad_tangents(s, s1, s2, l, m, half_tangent(delta1), half_tangent(delta2), threshold)


def compatibility_residual(s, s1, s2, l, m, l2, m1, s12, delta1, delta2, lams=(0.5, 1.0, 2.0)):
    """Largest relative norm of M1 L - L2 M over the sampled spectral parameters."""
    t1, t2 = half_tangent(delta1), half_tangent(delta2)
    worst = 0.0
    for lam in lams:
        L, _, _, _ = lax_matrix(s, s1, l, t1, lam)
        M, _, _, _ = lax_matrix(s, s2, m, t2, lam)
        L2, _, _, _ = lax_matrix(s2, s12, l2, t1, lam)
        M1, _, _, _ = lax_matrix(s1, s12, m1, t2, lam)
        left, right = M1 @ L, L2 @ M
        scale = np.linalg.norm(M1) * np.linalg.norm(L)
        worst = max(worst, np.linalg.norm(left - right) / scale)
    return worst


def ck_line_field(dims, delta1, delta2):
    """Lax data of the straight line: s = l = m = (-1)^l."""
    K, L = dims
    sign = np.array([(-1.0) ** l for l in range(L)])
    return CknetLaxField(np.tile(sign, (K, 1)), np.tile(sign, (K - 1, 1)), np.tile(sign[:-1], (K, 1)),
                         np.full(K - 1, delta1, dtype=complex) if np.isscalar(delta1) else delta1,
                         np.full(L - 1, delta2, dtype=complex) if np.isscalar(delta2) else delta2)


def ck_field_from_cauchy(s_row, s_col, l_row, m_col, delta1, delta2, unitary=True):
    """Fill a Lax field from s on row 0 and column 0, l on row 0 and m on column 0."""
    K, L = len(s_row), len(s_col)
    s = np.zeros((K, L), dtype=complex)
    l = np.zeros((K - 1, L), dtype=complex)
    m = np.zeros((K, L - 1), dtype=complex)
    s[:, 0] = s_row
    s[0, :] = s_col
    l[:, 0] = l_row
    m[0, :] = m_col
    t1 = [half_tangent(d) for d in delta1]
    t2 = [half_tangent(d) for d in delta2]
    for j in range(L - 1):
        for k in range(K - 1):
            l[k, j + 1], m[k + 1, j], s[k + 1, j + 1] = evolve_quad_tangents(
                s[k, j], s[k + 1, j], s[k, j + 1], l[k, j], m[k, j], t1[k], t2[j])
    log.debug('evolved %dx%d Lax field', K, L)
    return CknetLaxField(s, l, m, delta1, delta2, unitary=unitary)


def ck_integrate(field, t, phi0=None, origin=None, tol=COMPAT_TOL):
    """Integrate a compatible Lax field and read off (f, n) with the Sym formula."""
    lam = np.exp(t)
    t1 = [half_tangent(d) for d in field.delta1]
    t2 = [half_tangent(d) for d in field.delta2]

    def k_step(k, l):
        mat, dmat, det, ddet = lax_matrix(field.s[k, l], field.s[k + 1, l], field.l[k, l], t1[k], lam)
        return normalized(mat, dmat, det, ddet)

    def l_step(k, l):
        mat, dmat, det, ddet = lax_matrix(field.s[k, l], field.s[k, l + 1], field.m[k, l], t2[l], lam)
        return normalized(mat, dmat, det, ddet)

    frame = integrate_frames(field.dims, k_step, l_step, t, phi0=phi0, tol=tol)
    net = sym_net(frame, meta={'generator': 'lax', 't': t})
    if origin is not None:
        net = net.translated(origin)
    return frame, net


class CircularQuadData(object):
    """A circular quad seen in its circle plane.

    Vertices sit at center + r (cos phi_j ex + sin phi_j ey); the normal at f is
    (sin alpha cos beta, sin alpha sin beta, cos alpha) in the frame (ex, ey, ez).
    """

    def __init__(self, f, f1, f2, n):
        self.f = np.asarray(f, dtype=float)
        self.f1 = np.asarray(f1, dtype=float)
        self.f2 = np.asarray(f2, dtype=float)
        self.n = np.asarray(n, dtype=float) / np.linalg.norm(n)
        a = self.f1 - self.f
        b = self.f2 - self.f
        if min(np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(self.f2 - self.f1)) < TIGHT_TOL:
            raise NonConcircular('quad vertices coincide')
        normal = np.cross(a, b)
        area = np.linalg.norm(normal)
        if area < TIGHT_TOL * np.linalg.norm(a) * np.linalg.norm(b):
            raise NonConcircular('the three vertices are collinear')
        self.center = self.f + np.cross(np.dot(a, a) * b - np.dot(b, b) * a, normal) / (2 * area ** 2)
        self.r = float(np.linalg.norm(self.f - self.center))
        self.ez = normal / area
        self.ex = (self.f - self.center) / self.r
        self.ey = np.cross(self.ez, self.ex)
        self.phi = 0.0
        self.phi1 = self._angle(self.f1)
        self.phi2 = self._angle(self.f2)
        self.alpha = float(np.arccos(np.clip(np.dot(self.n, self.ez), -1.0, 1.0)))
        self.beta = float(np.arctan2(np.dot(self.n, self.ey), np.dot(self.n, self.ex)))
        self.d = float(np.linalg.norm(a))
        self.phi_edge = float(np.arccos(np.clip(np.dot(self.n, a) / self.d, -1.0, 1.0)))

    @classmethod
    def from_points(cls, f, f1, f2, n):
        return cls(f, f1, f2, n)

    def _angle(self, p):
        v = p - self.center
        return float(np.arctan2(np.dot(v, self.ey), np.dot(v, self.ex)))

    def _point(self, angle):
        return self.center + self.r * (np.cos(angle) * self.ex + np.sin(angle) * self.ey)

    def _normal(self, angle):
        sa = np.sin(self.alpha)
        return sa * (np.cos(angle) * self.ex + np.sin(angle) * self.ey) + np.cos(self.alpha) * self.ez

    def fourth_angle(self):
        """Circle angle of the fourth vertex giving Gauss curvature -1."""
        sa2 = np.sin(self.alpha) ** 2
        if sa2 < TIGHT_TOL:
            raise DegenerateQuad('normal is orthogonal to the circle plane; K = -1 cannot be met')
        r2 = self.r ** 2
        w = np.exp(2j * (self.phi - self.beta))
        z = np.exp(-1j * (self.phi - self.phi1 - self.phi2)) * (r2 + sa2 * w) / (r2 + sa2 / w)
        return float(np.angle(z))

    def fourth_vertex(self):
        return self._point(self.fourth_angle())

    def normals(self):
        """Normals at f1, f2, f12; each differs from its neighbor by a multiple of the connecting edge."""
        phi12 = self.fourth_angle()
        return (self._normal(self.phi + self.phi1 - self.beta),
                self._normal(self.phi + self.phi2 - self.beta),
                self._normal(phi12 - self.phi + self.beta))

    def quad_curvature(self, phi12=None):
        if phi12 is None:
            phi12 = self.fourth_angle()
        numerator = np.sin(self.alpha) ** 2 * np.sin(
            (4 * self.beta - 3 * self.phi - self.phi1 - self.phi2 + phi12) / 2)
        denominator = self.r ** 2 * np.sin((self.phi - self.phi1 - self.phi2 + phi12) / 2)
        if abs(denominator) < DEGENERATE:
            raise DegenerateQuad('curvature denominator vanishes')
        return float(numerator / denominator)


class CkQuadFit(object):
    """Lax data fitted to one circular quad."""

    def __init__(self, data, s, frame, edges, f12, normals):
        self.data = data
        self.s = s
        self.frame = frame
        (self.delta1, self.s1, self.l), (self.delta2, self.s2, self.m) = edges
        self.rho1 = float(np.angle(self.s1))
        self.rho2 = float(np.angle(self.s2))
        self.f12 = f12
        self.n1, self.n2, self.n12 = normals

    def lax_field(self):
        return ck_field_from_cauchy([self.s, self.s1], [self.s, self.s2], [self.l], [self.m],
                                    [self.delta1], [self.delta2])

    def integrate(self, t=0.0):
        return ck_integrate(self.lax_field(), t, phi0=self.frame, origin=self.data.f)


def _sym_edge_matrix(s, s1, tan_half):
    """2 tf(L^-1 dL) at lam = 1 with unit edge variable, as a 2x2 matrix."""
    mat, dmat, _, _ = lax_matrix(s, s1, 1.0, tan_half, 1.0)
    product = np.linalg.solve(mat, dmat)
    return 2 * (product - np.trace(product) / 2 * np.eye(2))


def _fit_edge(frame, edge, s):
    """Parameter angle, next vertex variable and edge variable reproducing one edge from its start vertex.

    With sigma = arg(s s1) the Sym edge has length 2 |cos(sigma/2) sin(delta)| and normal component
    sin(sigma) sin^2(delta); the edge variable conjugates the edge by diag(l^1/2, l^-1/2), which turns
    it about the normal (and rescales it off the unit circle for complex delta).
    """
    local = trace_free(mul(mul(frame, embed(edge)), inverse(frame)))
    d = float(np.linalg.norm(local))
    if d < TIGHT_TOL:
        raise DegenerateQuad('zero length edge')
    cos_phi = local[2] / d
    sin2 = d * d / 4 + cos_phi ** 2
    sin_delta = np.sqrt(sin2)
    delta = float(np.arcsin(sin_delta)) if sin_delta <= 1.0 else complex(np.arcsin(complex(sin_delta)))
    tan_half = half_tangent(delta)
    half_sigma = float(np.arcsin(np.clip(cos_phi / sin_delta, -1.0, 1.0)))
    target = embed(local).matrix
    if abs(target[0, 1]) < TIGHT_TOL * d:
        raise DegenerateQuad('edge is parallel to the normal')
    best = None
    for sigma in (2 * half_sigma, -2 * half_sigma):
        s1 = np.exp(1j * sigma) / s
        model = _sym_edge_matrix(s, s1, tan_half)
        l = model[0, 1] / target[0, 1]
        residual = (abs(model[0, 0] - target[0, 0]) + abs(model[1, 0] * l - target[1, 0]))
        if best is None or residual < best[0]:
            best = (residual, delta, s1, l)
    log.debug('edge fit residual %.3g', best[0])
    return best[1:]


def ck_fit_quad(data, s_init=1.0):
    """Lax data whose single quad integrates to the circular cK quad spanned by f, f1, f2 with normal n.

    The fourth vertex and the remaining normals come from the circle-plane formulas; the frame at f is
    the unit quaternion turning e3 into n, and each edge variable fixes the turn of its edge about n.
    """
    f12 = data.fourth_vertex()
    normals = data.normals()
    frame = frame_for_normal(data.n)
    s = complex(s_init)
    edges = (_fit_edge(frame, data.f1 - data.f, s), _fit_edge(frame, data.f2 - data.f, s))
    return CkQuadFit(data, s, frame, edges, f12, normals)
