import os

import hypothesis
import numpy as np
import pytest

from cknet.module_utils.cklax import ck_field_from_cauchy
from cknet.module_utils.cklax import ck_line_field
from cknet.module_utils.explicit import gen_tractrix_pseudosphere
from cknet.module_utils.knet import knet_field_from_cauchy

np.seterr(all="warn")

hypothesis.settings.register_profile("ci", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def unit(angle):
    return np.exp(1j * np.asarray(angle, dtype=float))


def random_lax_field(rng, dims, delta1=(0.2, 0.7), delta2=(0.9, 1.4)):
    """Lax field grown from random unimodular Cauchy data with real parameter line angles."""
    K, L = dims
    phases = rng.uniform(-np.pi, np.pi, size=K + (L - 1) + (K - 1) + (L - 1))
    s_row = unit(phases[:K])
    s_col = np.concatenate([[s_row[0]], unit(phases[K:K + L - 1])])
    l_row = unit(phases[K + L - 1:2 * K + L - 2])
    m_col = unit(phases[2 * K + L - 2:])
    d1 = rng.uniform(*delta1, size=K - 1)
    d2 = rng.uniform(*delta2, size=L - 1)
    return ck_field_from_cauchy(s_row, s_col, l_row, m_col, d1, d2)


def random_knet_field(rng, dims, delta_u=(0.3, 0.8), delta_v=(0.3, 0.8)):
    K, L = dims
    h_row = rng.uniform(-np.pi, np.pi, size=K)
    h_col = np.concatenate([[h_row[0]], rng.uniform(-np.pi, np.pi, size=L - 1)])
    return knet_field_from_cauchy(h_row, h_col, rng.uniform(*delta_u, size=K - 1), rng.uniform(*delta_v, size=L - 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20130417)


@pytest.fixture
def line_field():
    return ck_line_field((12, 12), 0.1, 0.12)


@pytest.fixture
def pseudosphere():
    return gen_tractrix_pseudosphere((20, 20), 0.5, 20)


@pytest.fixture
def make_lax_field(rng):
    return lambda dims, **kwargs: random_lax_field(rng, dims, **kwargs)


@pytest.fixture
def make_knet_field(rng):
    return lambda dims, **kwargs: random_knet_field(rng, dims, **kwargs)
