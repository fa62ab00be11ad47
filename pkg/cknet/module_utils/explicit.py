"""Closed-form nets: the straight line, its single and double Bäcklund transforms and the tractrix pseudosphere.

All generators take a window size (K, L) and an optional origin (k0, l0); vertex (i, j) of the window
carries the lattice index (k0 + i, l0 + j). Parameter line angles may be scalars or, for the line and
its single transforms, one value per edge.
"""
import fractions
import logging

import numpy as np

from cknet.module_utils.cknet import DEGENERATE
from cknet.module_utils.cknet import TIGHT_TOL
from cknet.module_utils.cknet import DegenerateAngle
from cknet.module_utils.cknet import DimensionMismatch
from cknet.module_utils.cknet import InvalidStep
from cknet.module_utils.cknet import NoSolution
from cknet.module_utils.lattice import QuadNet

log = logging.getLogger(__name__)


class ClosedFormAux(object):
    """Index fields shared by the line formulas.

    x and omega parametrize the line and its Gauss map; growth = exp(chi) drives a single transform.
    """

    def __init__(self, k, l, x, omega, growth=None, kappa=None, tau=None, mu=None):
        self.k = k
        self.l = l
        self.x = x
        self.omega = omega
        self.growth = growth
        self.kappa = kappa
        self.tau = tau
        self.mu = mu

    @property
    def chi(self):
        if self.growth is None:
            return None
        if np.all(self.growth > 0):
            return np.log(self.growth)
        return np.log(self.growth.astype(complex))

    def tanh_chi(self):
        g = self.growth
        return (g - 1 / g) / (g + 1 / g)

    def sech_chi(self):
        g = self.growth
        return 2 / (g + 1 / g)


def _indices(dims, origin):
    K, L = int(dims[0]), int(dims[1])
    if K < 1 or L < 1:
        raise DimensionMismatch('dims must be at least (1, 1), got %s' % (dims,))
    k0, l0 = int(origin[0]), int(origin[1])
    return np.meshgrid(np.arange(k0, k0 + K), np.arange(l0, l0 + L), indexing='ij')


def _per_edge(value, count, name):
    if np.isscalar(value):
        return np.full(count, float(value))
    values = np.asarray(value, dtype=float)
    if values.shape != (count,):
        raise DimensionMismatch('%s needs %d values, got shape %s' % (name, count, values.shape))
    return values


def _anchor(start, count):
    """Position of lattice index 0 in a run of count vertices starting at start."""
    if not start <= 0 <= start + count - 1:
        raise DimensionMismatch('varying angles need a window containing index 0, got start %d' % start)
    return -start


def _cumulative_sum(values, start):
    """sum over edges s = 0 .. k-1 for k >= 0 and minus the sum over s = k .. -1 for k < 0."""
    total = np.concatenate([[0.0], np.cumsum(values)])
    return total - total[_anchor(start, len(values) + 1)]


def _cumulative_product(values, start):
    total = np.concatenate([[1.0 + 0j], np.cumprod(values)])
    return total / total[_anchor(start, len(values) + 1)]


def _check_alpha(alpha):
    if np.iscomplexobj(alpha) or alpha == 0 or abs(alpha) >= np.pi:
        raise DegenerateAngle('transform angle must be real with 0 < |alpha| < pi, got %r' % (alpha,))


def _alternating(l):
    return np.where(np.mod(l, 2) == 0, 1.0, -1.0)


def _accumulate(delta, count, start, term, product=False):
    """Sum (or product) of term(delta) over the edges between index 0 and each vertex of a run."""
    if np.isscalar(delta):
        index = np.arange(start, start + count)
        value = term(float(delta))
        return value ** index if product else index * value
    values = term(_per_edge(delta, count - 1, 'delta'))
    if product:
        return _cumulative_product(values, start)
    return _cumulative_sum(values, start)


def line_aux(dims, delta1, delta2, t=0.0, alpha=None, theta=np.pi / 2, origin=(0, 0)):
    k, l = _indices(dims, origin)
    K, L = k.shape
    d1 = _per_edge(delta1, K - 1, 'delta1')
    d2 = _per_edge(delta2, L - 1, 'delta2')
    sh, ch = np.sinh(t), np.cosh(t)
    x = (_accumulate(delta1, K, origin[0], lambda d: ch * np.sin(d) / (1 + sh ** 2 * np.sin(d) ** 2))[:, None]
         + _accumulate(delta2, L, origin[1],
                       lambda d: sh * np.sin(d) * np.cos(d) / (1 + sh ** 2 * np.sin(d) ** 2))[None, :])
    omega = (_accumulate(delta1, K, origin[0], lambda d: (1j + sh * np.sin(d)) / (1j - sh * np.sin(d)),
                         product=True)[:, None]
             * _accumulate(delta2, L, origin[1], lambda d: (1j + ch * np.tan(d)) / (1j - ch * np.tan(d)),
                           product=True)[None, :])
    growth = None
    if alpha is not None:
        sa = np.sin(alpha)
        k_factors = (sa + np.sin(d1)) / (sa - np.sin(d1))
        l_factors = np.sin(alpha + d2) / np.sin(alpha - d2)
        if not (np.all(np.isfinite(k_factors)) and np.all(np.isfinite(l_factors))
                and np.all(np.abs(k_factors) > DEGENERATE) and np.all(np.abs(l_factors) > DEGENERATE)):
            raise DegenerateAngle('transform angle %r collides with a parameter line angle' % (alpha,))
        half = np.tan(theta / 2)
        if abs(half) < DEGENERATE or not np.isfinite(half):
            raise DegenerateAngle('initial phase %r is degenerate' % (theta,))
        growth = (half * np.real(_accumulate(delta1, K, origin[0], lambda d: (sa + np.sin(d)) / (sa - np.sin(d)),
                                             product=True))[:, None]
                  * np.real(_accumulate(delta2, L, origin[1], lambda d: np.sin(alpha + d) / np.sin(alpha - d),
                                        product=True))[None, :])
    return ClosedFormAux(k, l, x, omega, growth=growth)


def _stack(a, b, c):
    return np.stack(np.broadcast_arrays(a, b, c), axis=-1).astype(float)


def _net(f, n, **meta):
    return QuadNet(f, n, meta=meta)


def gen_line(dims, delta1, delta2, t=0.0, origin=(0, 0)):
    aux = line_aux(dims, delta1, delta2, t, origin=origin)
    if np.any(np.abs(np.sin(_per_edge(delta1, aux.k.shape[0] - 1, 'delta1'))) < DEGENERATE):
        raise DegenerateAngle('sin(delta1) vanishes')
    zero = np.zeros(aux.x.shape)
    f = _stack(-2 * aux.x, zero, zero)
    n = _stack(zero, aux.omega.imag, aux.omega.real)
    return _net(f, n, generator='line', delta1=delta1, delta2=delta2, t=t)


def _transform_scale(alpha, t):
    return np.sin(alpha) / (np.cosh(t) - np.cos(alpha) * np.sinh(t))


def gen_dini(dims, alpha, theta, delta1, delta2, t=0.0, origin=(0, 0)):
    """Single transform of the line with its associated family; t = 0 gives circular Dini nets.

    With theta = pi/2 the transform of angle alpha > 0 starts at (0, -sin(alpha), 0).
    """
    _check_alpha(alpha)
    aux = line_aux(dims, delta1, delta2, t, alpha=alpha, theta=theta, origin=origin)
    scale = _transform_scale(alpha, t)
    tanh, sech = aux.tanh_chi(), aux.sech_chi()
    omega = aux.omega
    omega_hat = omega * (1j * tanh + np.cosh(t) / np.tan(alpha) - np.sinh(t) / np.sin(alpha))
    f = _stack(-2 * aux.x + scale * tanh, -scale * sech * omega.real, scale * sech * omega.imag)
    n = scale * _stack(sech, omega_hat.imag, omega_hat.real)
    return _net(f, n, generator='dini', alpha=alpha, theta=theta, delta1=delta1, delta2=delta2, t=t)


def gen_varying_delta(dims, delta1, delta2, t=0.0, alpha=None, theta=np.pi / 2, origin=(0, 0)):
    """Line (alpha None) or Dini net with one parameter line angle per edge."""
    K, L = dims
    _per_edge(delta1, K - 1, 'delta1')
    _per_edge(delta2, L - 1, 'delta2')
    if alpha is None:
        return gen_line(dims, delta1, delta2, t, origin=origin)
    return gen_dini(dims, alpha, theta, delta1, delta2, t, origin=origin)


def line_backlund_s(dims, alpha, theta, delta1, delta2, origin=(0, 0)):
    """Vertex variable of the line's transform: (-1)^l (-1 + 2 / (1 - i exp(chi)))."""
    aux = line_aux(dims, delta1, delta2, alpha=alpha, theta=theta, origin=origin)
    return _alternating(aux.l) * (-1 + 2 / (1 - 1j * aux.growth))


def gen_pseudosphere_family(dims, theta, delta1, delta2, t=0.0, origin=(0, 0)):
    """Associated family of the pseudosphere of revolution (the alpha = -pi/2 transform of the line)."""
    aux = line_aux(dims, delta1, delta2, t, alpha=-np.pi / 2, theta=theta, origin=origin)
    tanh, sech = aux.tanh_chi(), aux.sech_chi()
    re, im = aux.omega.real, aux.omega.imag
    sech_t, sinh_t = 1 / np.cosh(t), np.sinh(t)
    f = _stack(-2 * aux.x - sech_t * tanh, sech_t * sech * re, -sech_t * sech * im)
    n = -sech_t * _stack(sech, tanh * re + sinh_t * im, sinh_t * re - tanh * im)
    return _net(f, n, generator='pseudosphere_family', theta=theta, delta1=delta1, delta2=delta2, t=t)


def gen_tractrix_pseudosphere(dims, epsilon, phi_steps, origin=(0, 0)):
    """Pseudosphere of revolution over the tractrix polygon of step epsilon, closing after phi_steps rows."""
    if not 0 < epsilon < 2:
        raise InvalidStep('epsilon must lie in (0, 2), got %r' % (epsilon,))
    if int(phi_steps) != phi_steps or phi_steps < 1:
        raise InvalidStep('phi_steps must be a positive integer, got %r' % (phi_steps,))
    k, l = _indices(dims, origin)
    tau = np.log((2 + epsilon) / (2 - epsilon))
    phi = 2 * np.pi / phi_steps
    f = _stack(epsilon * k - np.tanh(tau * k), np.cos(l * phi) / np.cosh(tau * k), np.sin(l * phi) / np.cosh(tau * k))
    n = _stack(1 / np.cosh(tau * k), np.cos(l * phi) * np.tanh(tau * k), np.sin(l * phi) * np.tanh(tau * k))
    return _net(f, n, generator='pseudosphere', epsilon=epsilon, phi_steps=phi_steps, closed='l')


class TractrixData(object):
    """A planar polygon p, its Darboux transform p^, the tractrix halfway between and its normals."""

    def __init__(self, p, p_hat, normals, epsilon=None):
        self.p = p
        self.p_hat = p_hat
        self.p_tilde = (p + p_hat) / 2
        self.normals = normals
        self.d = float(np.linalg.norm(p_hat[0] - p[0]) / 2)
        self.epsilon = epsilon
        self.phi = None

    def condition_residuals(self):
        """Largest violations of |p^ - p| = 2d, |p^1 - p^| = |p1 - p| and of the fold.

        A folded parallelogram p, p1, p^1, p^ has its two crossing segments p p^1 and p1 p^ parallel;
        the fold residual is the sine of the angle between them.
        """
        distance = np.abs(np.linalg.norm(self.p_hat - self.p, axis=1) - 2 * self.d)
        edges = np.abs(np.linalg.norm(np.diff(self.p_hat, axis=0), axis=1)
                       - np.linalg.norm(np.diff(self.p, axis=0), axis=1))
        a = self.p_hat[1:] - self.p[:-1]
        b = self.p_hat[:-1] - self.p[1:]
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        fold = np.abs(cross) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        return (float(np.max(distance)), float(np.max(edges, initial=0.0)), float(np.max(fold, initial=0.0)))


def line_polygon(count, epsilon):
    return np.stack([epsilon * np.arange(count), np.zeros(count)], axis=1)


def gen_darboux_tractrix(p, start):
    """Darboux transform of a planar polygon by folding parallelograms.

    Each new vertex is the mirror image of p across the perpendicular bisector of p1 and p^, so
    p, p1, p^1, p^ is a folded parallelogram with sides |p1 - p| and 2d.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2:
        raise DimensionMismatch('polygon must have shape (N, 2), got %s' % (p.shape,))
    if np.any(np.linalg.norm(np.diff(p, axis=0), axis=1) < TIGHT_TOL):
        raise NoSolution('polygon has a vanishing edge')
    p_hat = np.zeros_like(p)
    p_hat[0] = start
    if np.linalg.norm(p_hat[0] - p[0]) < TIGHT_TOL:
        raise NoSolution('start point coincides with the polygon')
    for i in range(len(p) - 1):
        gap = p_hat[i] - p[i + 1]
        length = np.linalg.norm(gap)
        if length < TIGHT_TOL:
            raise NoSolution('fold degenerates at vertex %d' % i)
        u = gap / length
        middle = (p[i + 1] + p_hat[i]) / 2
        p_hat[i + 1] = p[i] - 2 * np.dot(p[i] - middle, u) * u
    direction = (p_hat - p) / np.linalg.norm(p_hat - p, axis=1)[:, None]
    normals = np.stack([direction[:, 1], -direction[:, 0]], axis=1)
    log.debug('Darboux transform of a %d vertex polygon', len(p))
    return TractrixData(p, p_hat, normals)


def tractrix_surface(data, phi_steps, L):
    """Surface of revolution of the tractrix polygon about the x axis, rotating by 2 pi / phi_steps per row."""
    if int(phi_steps) != phi_steps or phi_steps < 1:
        raise InvalidStep('phi_steps must be a positive integer, got %r' % (phi_steps,))
    phi = 2 * np.pi / phi_steps
    data.phi = phi
    angles = phi * np.arange(L)
    x, y = data.p_tilde[:, 0][:, None], data.p_tilde[:, 1][:, None]
    nx, ny = data.normals[:, 0][:, None], data.normals[:, 1][:, None]
    f = _stack(x, np.cos(angles) * y, np.sin(angles) * y)
    n = _stack(nx, np.cos(angles) * ny, np.sin(angles) * ny)
    return _net(f, n, generator='tractrix', d=data.d, phi_steps=phi_steps)


def _check_mu(mu):
    if abs(np.sin(mu)) < DEGENERATE:
        raise DegenerateAngle('mu must differ from 0 and pi')
    if abs(np.cos(mu)) < DEGENERATE:
        raise DegenerateAngle('mu = pi/2 mod pi makes the transform singular')


def breather_constants(mu, delta1, delta2):
    kappa = 2 * np.arctan(np.sin(mu) * np.tan(delta2))
    tau = np.log((1 - np.sin(delta1) * np.cos(mu)) / (1 + np.sin(delta1) * np.cos(mu)))
    return kappa, tau


def double_backlund_line_fields(dims, mu, delta1, delta2, origin=(0, 0)):
    """s0, s_b and s_db of the line's double transform with s_b(0, 0) = i and s_db(0, 0) = 1."""
    _check_mu(mu)
    k, l = _indices(dims, origin)
    kappa, tau = breather_constants(mu, delta1, delta2)
    sign = _alternating(l)
    s_b = sign * (-1 + 2 / (1 - 1j * np.exp(-(1j * l * kappa + k * tau))))
    s_db = sign * (-1 + 2 / (1 - 1j * (np.sin(l * kappa) / (np.tan(mu) * np.cosh(k * tau)))))
    return sign + 0j, s_b, s_db


def gen_breather(dims, mu, delta1, delta2, t=0.0, origin=(0, 0)):
    """Stationary breather over the line and its associated family."""
    _check_mu(mu)
    if abs(np.cos(2 * mu) + np.cosh(2 * t)) < DEGENERATE:
        raise DegenerateAngle('breather denominator vanishes')
    aux = line_aux(dims, delta1, delta2, t, origin=origin)
    k, l = aux.k, aux.l
    kappa, tau = breather_constants(mu, delta1, delta2)
    re, im = aux.omega.real, aux.omega.imag
    sm, cm = np.sin(mu), np.cos(mu)
    sh, ch = np.sinh(t), np.cosh(t)
    sk, ck = np.sin(l * kappa), np.cos(l * kappa)
    shk, chk = np.sinh(k * tau), np.cosh(k * tau)
    A = np.sin(2 * mu) * chk / ((np.cos(2 * mu) + np.cosh(2 * t)) * (cm ** 2 * sk ** 2 + chk ** 2 * sm ** 2))
    B = 2 * (cm * ch * np.sin(2 * l * kappa) - sm * sh * np.sinh(2 * k * tau))
    C = (sk ** 2 * (np.sin(2 * mu) + (np.cosh(2 * t) + 1) / np.tan(mu))
         - chk ** 2 * (np.sin(2 * mu) + np.tan(mu) * (1 - np.cosh(2 * t))))
    inner = cm * sh * np.tanh(k * tau) * sk + sm * ch * ck
    f = _stack(-2 * aux.x + 2 * A * (cm * sh * sk * ck / chk - sm * ch * shk),
               2 * A * (im * sk - re * inner),
               2 * A * (im * inner + re * sk))
    n = (A / (2 * chk))[..., None] * _stack(4 * (sm * sh * chk * ck + cm * ch * shk * sk),
                                            re * B - im * C,
                                            -re * C - im * B)
    return _net(f, n, generator='breather', mu=mu, delta1=delta1, delta2=delta2, t=t)


def gen_kuen(dims, delta1, delta2, t=0.0, origin=(0, 0)):
    """Kuen type net and its associated family; at t = 0 the polygons along k are planar."""
    aux = line_aux(dims, delta1, delta2, t, origin=origin)
    k, l = aux.k, aux.l
    tau = np.log((1 - np.sin(delta1)) / (1 + np.sin(delta1)))
    re, im = aux.omega.real, aux.omega.imag
    sh, ch, th = np.sinh(t), np.cosh(t), np.tanh(t)
    shk, chk, thk = np.sinh(k * tau), np.cosh(k * tau), np.tanh(k * tau)
    w = 2 * l * np.tan(delta2)
    denominator = chk ** 2 + w ** 2
    scale = 2 * chk / (ch * denominator)
    f = _stack(-2 * aux.x + scale * (w * th / chk - shk),
               scale * (w * im / ch - re * (w * th * thk + 1)),
               scale * (im * (w * th * thk + 1) + w * re / ch))
    D = (1 - sh ** 2) * chk ** 2 - w ** 2 * ch ** 2
    E = 2 * w * ch - sh * np.sinh(2 * k * tau)
    n = (1 / (ch ** 2 * denominator))[..., None] * _stack(2 * (w * ch * shk + sh * chk), im * D + re * E,
                                                          re * D - im * E)
    return _net(f, n, generator='kuen', delta1=delta1, delta2=delta2, t=t)


def closing_mu(q, delta2):
    """Breather parameter closing the net in the l direction for rational 0 < q < 1."""
    return float(-np.arcsin(np.tan(delta2 * q) / np.tan(delta2)))


def _rational_period(angle, max_denominator):
    """Smallest P > 0 with P * angle a multiple of 2 pi, or None when angle / 2 pi is not rational enough."""
    ratio = angle / (2 * np.pi)
    fraction = fractions.Fraction(ratio).limit_denominator(max_denominator)
    if abs(float(fraction) - ratio) > 1e-12:
        return None
    return fraction.denominator


def breather_period(mu, delta2, max_denominator=1000):
    """Closing period of the t = 0 breather in the l direction, or None if it does not close.

    Both the rotation of the line's Gauss map (2 delta2 per step) and the breather phase kappa must close.
    """
    kappa = 2 * np.arctan(np.sin(mu) * np.tan(delta2))
    periods = [_rational_period(kappa, max_denominator), _rational_period(2 * delta2, max_denominator)]
    if None in periods:
        log.info('breather with mu=%s, delta2=%s does not close', mu, delta2)
        return None
    return int(np.lcm(*periods))
