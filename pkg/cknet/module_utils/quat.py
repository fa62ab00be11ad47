"""Biquaternions over the basis 1, -i*sigma1, -i*sigma2, -i*sigma3.

Real coefficients give the quaternions; R^3 is identified with the imaginary quaternions.
"""
import numpy as np

from cknet.module_utils.cknet import DEGENERATE
from cknet.module_utils.cknet import TIGHT_TOL
from cknet.module_utils.cknet import TOL
from cknet.module_utils.cknet import NonRealImage
from cknet.module_utils.cknet import SingularMatrix

BASIS = np.array([
    [[1, 0], [0, 1]],
    [[0, -1j], [-1j, 0]],
    [[0, -1], [1, 0]],
    [[-1j, 0], [0, 1j]],
], dtype=complex)


def coefficients_from_matrix(matrix):
    """Pauli-basis coefficients of 2x2 complex matrices; works on stacked arrays of shape (..., 2, 2)."""
    matrix = np.asarray(matrix, dtype=complex)
    a = matrix[..., 0, 0]
    b = matrix[..., 0, 1]
    c = matrix[..., 1, 0]
    d = matrix[..., 1, 1]
    return np.stack([(a + d) / 2, 1j * (b + c) / 2, (c - b) / 2, 1j * (a - d) / 2], axis=-1)


def matrix_from_coefficients(coeffs):
    coeffs = np.asarray(coeffs, dtype=complex)
    return np.einsum('...k,kij->...ij', coeffs, BASIS)


class Biquat(object):
    """Immutable 2x2 complex matrix held as complex coefficients over the Pauli basis."""

    __slots__ = ('_c',)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        c = np.array([c0, c1, c2, c3], dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, '_c', c)

    def __setattr__(self, name, value):
        raise AttributeError('Biquat is immutable')

    @classmethod
    def from_coefficients(cls, coeffs):
        return cls(*np.asarray(coeffs, dtype=complex).reshape(4))

    @classmethod
    def from_matrix(cls, matrix):
        return cls.from_coefficients(coefficients_from_matrix(matrix))

    @property
    def coefficients(self):
        return self._c

    @property
    def c0(self):
        return self._c[0]

    @property
    def vector(self):
        return self._c[1:]

    @property
    def matrix(self):
        return matrix_from_coefficients(self._c)

    def det(self):
        return complex(np.sum(self._c * self._c))

    def conjugate(self):
        """Quaternionic conjugate c0 - c1 e1 - c2 e2 - c3 e3 (no complex conjugation)."""
        return Biquat(self._c[0], -self._c[1], -self._c[2], -self._c[3])

    def is_quaternion(self, tol=TOL):
        return bool(np.all(np.abs(self._c.imag) <= tol * max(1.0, float(np.max(np.abs(self._c))))))

    def __mul__(self, other):
        if isinstance(other, Biquat):
            return mul(self, other)
        return Biquat.from_coefficients(self._c * complex(other))

    def __rmul__(self, other):
        return Biquat.from_coefficients(self._c * complex(other))

    def __add__(self, other):
        return Biquat.from_coefficients(self._c + other.coefficients)

    def __sub__(self, other):
        return Biquat.from_coefficients(self._c - other.coefficients)

    def __neg__(self):
        return Biquat.from_coefficients(-self._c)

    def __eq__(self, other):
        return isinstance(other, Biquat) and bool(np.all(self._c == other.coefficients))

    def __hash__(self):
        return hash(tuple(self._c))

    def __repr__(self):
        return 'Biquat(%s)' % ', '.join(repr(complex(c)) for c in self._c)

    def allclose(self, other, atol=TIGHT_TOL):
        return bool(np.allclose(self._c, other.coefficients, rtol=0, atol=atol))


ONE = Biquat(1)
E1 = Biquat(0, 1)
E2 = Biquat(0, 0, 1)
E3 = Biquat(0, 0, 0, 1)


def mul(a, b):
    """Quaternion product, identical to the 2x2 matrix product of the representations."""
    a0, av = a.coefficients[0], a.coefficients[1:]
    b0, bv = b.coefficients[0], b.coefficients[1:]
    scalar = a0 * b0 - np.dot(av, bv)
    vector = a0 * bv + b0 * av + np.cross(av, bv)
    return Biquat(scalar, *vector)


def inverse(a, threshold=DEGENERATE):
    det = a.det()
    if abs(det) < threshold * max(1.0, float(np.sum(np.abs(a.coefficients) ** 2))):
        raise SingularMatrix('determinant %r below threshold' % det)
    return Biquat.from_coefficients(a.conjugate().coefficients / det)


def embed(v):
    v = np.asarray(v, dtype=float).reshape(3)
    return Biquat(0, v[0], v[1], v[2])


def project(q):
    return trace_free(q)


def trace_free(q, tol=1e-8):
    """Vector part of q as a real R^3 vector.

    :param q: biquaternion whose trace free part is expected to be real
    :type q: Biquat
    :param tol: allowed imaginary residue relative to the coefficient size
    :type tol: float
    :return: the coefficients over -i*sigma1, -i*sigma2, -i*sigma3
    :rtype: numpy.ndarray
    """
    vector = q.vector
    scale = max(1.0, float(np.max(np.abs(vector))))
    residue = float(np.max(np.abs(vector.imag)))
    if residue > tol * scale:
        raise NonRealImage('trace free part has imaginary residue %.3g' % residue)
    return np.array(vector.real, dtype=float)


def conjugate_normal(phi):
    """Gauss map -i phi^-1 sigma3 phi, written as phi^-1 e3 phi."""
    return trace_free(mul(mul(inverse(phi), E3), phi))


def conjugate_vector(phi, v):
    """Image of the vector v under x -> phi^-1 x phi."""
    return trace_free(mul(mul(inverse(phi), embed(v)), phi))


def frame_for_normal(n):
    """Unit quaternion q with q^-1 e3 q = n.

    The rotation p = q^-1 turning e3 into n is taken about e3 x n; antipodal normals rotate about e1.
    """
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    axis = np.cross([0.0, 0.0, 1.0], n)
    sin_angle = np.linalg.norm(axis)
    cos_angle = n[2]
    if sin_angle < TIGHT_TOL:
        if cos_angle > 0:
            return ONE
        return E1
    angle = np.arctan2(sin_angle, cos_angle)
    axis = axis / sin_angle
    p = Biquat(np.cos(angle / 2), *(np.sin(angle / 2) * axis))
    return p.conjugate()
