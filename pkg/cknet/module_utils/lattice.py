"""Quad nets over rectangular windows of Z^2 and the fields living on them.

Vertex arrays are indexed [k, l]; serialized lists are row-major with (k, l) -> l*K + k.
Horizontal edge arrays have shape (K-1, L), vertical edge arrays (K, L-1).
"""
import json
import logging

import numpy as np

from cknet.module_utils.cknet import TOL
from cknet.module_utils.cknet import DimensionMismatch
from cknet.module_utils.cknet import InvariantViolation
from cknet.module_utils.cknet import IoError
from cknet.module_utils.cknet import ParseError
from cknet.module_utils.quat import Biquat
from cknet.module_utils.quat import coefficients_from_matrix

log = logging.getLogger(__name__)


def vertex_index(k, l, dims):
    return l * dims[0] + k


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or dims[0] < 1 or dims[1] < 1:
        raise DimensionMismatch('dims must be at least (1, 1), got %s' % (dims,))
    return dims


def _shaped(values, shape, name, dtype=float):
    array = np.array(values, dtype=dtype)
    if array.shape != tuple(shape):
        raise DimensionMismatch('%s has shape %s, expected %s' % (name, array.shape, tuple(shape)))
    return array


class QuadNet(object):
    """Vertex positions f and unit normals n on a K x L window."""

    def __init__(self, f, n, meta=None, tol=TOL):
        f = np.asarray(f, dtype=float)
        if f.ndim != 3 or f.shape[2] != 3:
            raise DimensionMismatch('f must have shape (K, L, 3), got %s' % (f.shape,))
        self.dims = _check_dims(f.shape[:2])
        self.f = f
        self.n = _shaped(n, f.shape, 'n')
        self.meta = dict(meta or {})
        lengths = np.linalg.norm(self.n, axis=2)
        bad = np.argwhere(np.abs(lengths - 1.0) > tol)
        if len(bad):
            k, l = bad[0]
            raise InvariantViolation('normal at (%d, %d) has length %.12g' % (k, l, lengths[k, l]))

    @property
    def K(self):
        return self.dims[0]

    @property
    def L(self):
        return self.dims[1]

    def quads(self):
        for l in range(self.L - 1):
            for k in range(self.K - 1):
                yield k, l

    def quad(self, k, l):
        """Positions and normals of quad (k, l) in the order f, f1, f12, f2."""
        index = ([k, k + 1, k + 1, k], [l, l, l + 1, l + 1])
        return self.f[index], self.n[index]

    def translated(self, offset):
        return QuadNet(self.f + np.asarray(offset, dtype=float), self.n, self.meta)

    def __repr__(self):
        return 'QuadNet(dims=%s, meta=%s)' % (self.dims, self.meta)


class CknetLaxField(object):
    """Vertex variables s, edge variables l (horizontal) and m (vertical), parameter line angles.

    delta1 holds one angle per horizontal edge column, delta2 one per vertical edge row.
    """

    def __init__(self, s, l, m, delta1, delta2, unitary=True, tol=TOL):
        s = np.asarray(s, dtype=complex)
        if s.ndim != 2:
            raise DimensionMismatch('s must be a K x L array')
        self.dims = _check_dims(s.shape)
        K, L = self.dims
        self.s = s
        self.l = _shaped(l, (K - 1, L), 'l', complex)
        self.m = _shaped(m, (K, L - 1), 'm', complex)
        self.delta1 = _shaped(delta1, (K - 1,), 'delta1', complex)
        self.delta2 = _shaped(delta2, (L - 1,), 'delta2', complex)
        self.unitary = unitary
        if unitary:
            bad = np.argwhere(np.abs(np.abs(s) - 1.0) > tol)
            if len(bad):
                k, ll = bad[0]
                raise InvariantViolation('|s| at (%d, %d) is %.12g' % (k, ll, abs(s[k, ll])))

    def check_edge_lengths(self, tol=TOL):
        """Edge variables of real parameter lines must be unimodular."""
        for name, values, deltas, axis in (('l', self.l, self.delta1, 0), ('m', self.m, self.delta2, 1)):
            real = np.abs(deltas.imag) <= tol
            moduli = np.abs(values)
            moduli = moduli if axis == 1 else moduli.T
            for index in np.flatnonzero(real):
                if np.any(np.abs(moduli[..., index] - 1.0) > tol):
                    raise InvariantViolation('|%s| differs from 1 on real parameter line %d' % (name, index))


class KnetField(object):
    """Real phases h of a K-net with one angle delta_u per k-edge column and delta_v per l-edge row."""

    def __init__(self, h, delta_u, delta_v):
        h = np.asarray(h, dtype=float)
        if h.ndim != 2:
            raise DimensionMismatch('h must be a K x L array')
        self.dims = _check_dims(h.shape)
        self.h = h
        self.delta_u = _shaped(delta_u, (self.dims[0] - 1,), 'delta_u')
        self.delta_v = _shaped(delta_v, (self.dims[1] - 1,), 'delta_v')


class FrameState(object):
    """Frames phi and their t-derivatives, stored as Pauli coefficient arrays of shape (K, L, 4)."""

    def __init__(self, phi, phi_dot, t):
        self.phi = np.asarray(phi, dtype=complex)
        self.phi_dot = np.asarray(phi_dot, dtype=complex)
        self.t = float(t)
        self.dims = _check_dims(self.phi.shape[:2])
        self.compat_residual = 0.0

    @classmethod
    def from_matrices(cls, phi, phi_dot, t):
        return cls(coefficients_from_matrix(phi), coefficients_from_matrix(phi_dot), t)

    def frame(self, k, l):
        return Biquat.from_coefficients(self.phi[k, l])

    def frame_dot(self, k, l):
        return Biquat.from_coefficients(self.phi_dot[k, l])


def _fmt(value):
    return '%.17g' % value


def _vector_text(v):
    return '[%s]' % ', '.join(_fmt(x) for x in v)


def net_io_write(net, path):
    """Write a net as JSON, one vertex record per line, floats with 17 significant digits."""
    K, L = net.dims
    lines = ['{"dims": [%d, %d],' % (K, L)]
    if net.meta:
        lines.append('"meta": %s,' % json.dumps(net.meta, sort_keys=True, default=_meta_default))
    lines.append('"vertices": [')
    records = []
    for l in range(L):
        for k in range(K):
            records.append('{"f": %s, "n": %s}' % (_vector_text(net.f[k, l]), _vector_text(net.n[k, l])))
    lines.append(',\n'.join(records))
    lines.append(']}')
    _write_text(path, '\n'.join(lines) + '\n')


def _meta_default(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError('%r is not JSON serializable' % (value,))


def _write_text(path, text):
    try:
        with open(path, 'w') as f:
            f.write(text)
    except (IOError, OSError) as e:
        raise IoError('Error writing %s: %s' % (path, e))


def _read_json(path):
    try:
        with open(path, 'r') as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise IoError('Error reading %s: %s' % (path, e))
    try:
        return json.loads(text)
    except ValueError as e:
        raise ParseError('%s is not valid JSON: %s' % (path, e.msg if hasattr(e, 'msg') else e),
                         line=getattr(e, 'lineno', None))


def _read_dims(document):
    try:
        return _check_dims(document['dims'])
    except (KeyError, TypeError, ValueError):
        raise ParseError('missing or malformed dims', field='dims')


def _vector(record, key, index):
    try:
        v = [float(x) for x in record[key]]
    except (KeyError, TypeError, ValueError):
        raise ParseError('vertex %d has no numeric %s' % (index, key), field='vertices[%d].%s' % (index, key))
    if len(v) != 3:
        raise ParseError('vertex %d: %s needs 3 components' % (index, key), field='vertices[%d].%s' % (index, key))
    return v


def net_io_read(path):
    document = _read_json(path)
    if not isinstance(document, dict):
        raise ParseError('net file must hold a JSON object')
    K, L = _read_dims(document)
    vertices = document.get('vertices')
    if not isinstance(vertices, list):
        raise ParseError('vertices must be a list', field='vertices')
    if len(vertices) != K * L:
        raise DimensionMismatch('dims %dx%d need %d vertices, found %d' % (K, L, K * L, len(vertices)))
    f = np.zeros((K, L, 3))
    n = np.zeros((K, L, 3))
    for index, record in enumerate(vertices):
        k, l = index % K, index // K
        f[k, l] = _vector(record, 'f', index)
        n[k, l] = _vector(record, 'n', index)
    return QuadNet(f, n, meta=document.get('meta'))


def _complex_list(values):
    return [[float(v.real), float(v.imag)] for v in np.ravel(values)]


def _vertex_order(array):
    """Row-major flattening (l outer, k inner) of a [k, l] indexed array."""
    return np.asarray(array).T.reshape(-1)


def write_lax_field(field, path):
    document = {
        'dims': list(field.dims),
        's': _complex_list(_vertex_order(field.s)),
        'l': _complex_list(_vertex_order(field.l)),
        'm': _complex_list(_vertex_order(field.m)),
        'delta1': _complex_list(field.delta1),
        'delta2': _complex_list(field.delta2),
    }
    _write_text(path, json.dumps(document, sort_keys=True) + '\n')


def _complex_array(document, key, shape):
    try:
        values = np.array([complex(float(re), float(im)) for re, im in document[key]], dtype=complex)
    except (KeyError, TypeError, ValueError):
        raise ParseError('%s must be a list of [re, im] pairs' % key, field=key)
    size = int(np.prod(shape))
    if values.size != size:
        raise DimensionMismatch('%s needs %d values, found %d' % (key, size, values.size))
    if len(shape) == 1:
        return values
    return values.reshape(shape[1], shape[0]).T


def read_lax_field(path):
    document = _read_json(path)
    K, L = _read_dims(document)
    return CknetLaxField(_complex_array(document, 's', (K, L)),
                         _complex_array(document, 'l', (K - 1, L)),
                         _complex_array(document, 'm', (K, L - 1)),
                         _complex_array(document, 'delta1', (K - 1,)),
                         _complex_array(document, 'delta2', (L - 1,)))


def seam_rows(net, tol=TOL):
    """Rows of a net closed in the l direction that make up one full turn, or None for an open net.

    A net whose meta says closed 'l' after phi_steps rows repeats row 0 from row phi_steps on.
    """
    steps = net.meta.get('phi_steps')
    if net.meta.get('closed') != 'l' or not steps or int(steps) < 3:
        return None
    steps = int(steps)
    K, L = net.dims
    if L < steps:
        return None
    if L > steps and not np.allclose(net.f[:, steps], net.f[:, 0], rtol=0, atol=tol):
        return None
    return steps


def export_obj(net, path):
    """Write vertices, vertex normals and quad faces as a Wavefront OBJ file with 1-based indices.

    Nets closed in the l direction are written once around, with faces joining the last row to row 0.
    Returns the number of faces written.
    """
    K, L = net.dims
    if K < 2 or L < 2:
        raise DimensionMismatch('OBJ export needs at least a 2x2 window, got %dx%d' % (K, L))
    steps = seam_rows(net)
    rows = L if steps is None else steps
    lines = ['# cknet %dx%d' % (K, rows)]
    for l in range(rows):
        for k in range(K):
            lines.append('v %s' % ' '.join(_fmt(x) for x in net.f[k, l]))
    for l in range(rows):
        for k in range(K):
            lines.append('vn %s' % ' '.join(_fmt(x) for x in net.n[k, l]))
    quads = [(k, l, l + 1) for k, l in net.quads() if l + 1 < rows]
    if steps is not None:
        quads.extend((k, rows - 1, 0) for k in range(K - 1))
    for k, l, l_next in quads:
        corners = [vertex_index(a, b, (K, rows)) for a, b in ((k, l), (k + 1, l), (k + 1, l_next), (k, l_next))]
        lines.append('f %s' % ' '.join('%d//%d' % (i + 1, i + 1) for i in corners))
    _write_text(path, '\n'.join(lines) + '\n')
    log.info('exported %d quads to %s', len(quads), path)
    return len(quads)
