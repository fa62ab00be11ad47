import json

import numpy as np
import numpy.testing as npt
import pytest

from cknet.module_utils.cklax import ck_line_field
from cknet.module_utils.explicit import gen_tractrix_pseudosphere
from cknet.module_utils.cknet import DimensionMismatch
from cknet.module_utils.cknet import InvariantViolation
from cknet.module_utils.cknet import IoError
from cknet.module_utils.cknet import ParseError
from cknet.module_utils.lattice import CknetLaxField
from cknet.module_utils.lattice import QuadNet
from cknet.module_utils.lattice import export_obj
from cknet.module_utils.lattice import net_io_read
from cknet.module_utils.lattice import net_io_write
from cknet.module_utils.lattice import read_lax_field
from cknet.module_utils.lattice import vertex_index
from cknet.module_utils.lattice import write_lax_field


def small_net():
    """3x2 net whose vertex (k, l) sits at (k, l, 0) with normal e3."""
    f = np.zeros((3, 2, 3))
    for k in range(3):
        for l in range(2):
            f[k, l] = (k, l, 0)
    n = np.zeros((3, 2, 3))
    n[..., 2] = 1
    return QuadNet(f, n, meta={'generator': 'test'})


def test_row_major_order(tmp_path):
    net = small_net()
    path = str(tmp_path / 'net.json')
    net_io_write(net, path)
    with open(path) as f:
        document = json.load(f)
    assert document['dims'] == [3, 2]
    assert [v['f'][:2] for v in document['vertices']] == [[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [2, 1]]
    for k in range(3):
        for l in range(2):
            assert document['vertices'][vertex_index(k, l, (3, 2))]['f'] == [k, l, 0]


def test_net_round_trip(tmp_path, pseudosphere):
    path = str(tmp_path / 'net.json')
    net_io_write(pseudosphere, path)
    net = net_io_read(path)
    assert net.dims == pseudosphere.dims
    npt.assert_array_equal(net.f, pseudosphere.f)
    npt.assert_array_equal(net.n, pseudosphere.n)
    assert net.meta['generator'] == 'pseudosphere'


def test_quad_order():
    f, n = small_net().quad(1, 0)
    npt.assert_array_equal(f[:, :2], [[1, 0], [2, 0], [2, 1], [1, 1]])
    assert list(small_net().quads()) == [(0, 0), (1, 0)]


def test_normals_must_be_unit():
    net = small_net()
    with pytest.raises(InvariantViolation):
        QuadNet(net.f, 2 * net.n)


@pytest.mark.parametrize('text,error', [
    ('{"dims": [2, 2], "vertices": [', ParseError),
    ('{"vertices": []}', ParseError),
    ('{"dims": [2, 2], "vertices": [{"f": [0, 0, 0], "n": [0, 0, 1]}]}', DimensionMismatch),
    ('{"dims": [1, 1], "vertices": [{"f": [0, 0], "n": [0, 0, 1]}]}', ParseError),
    ('{"dims": [1, 1], "vertices": [{"f": [0, 0, "x"], "n": [0, 0, 1]}]}', ParseError),
])
def test_read_errors(tmp_path, text, error):
    path = tmp_path / 'bad.json'
    path.write_text(text)
    with pytest.raises(error):
        net_io_read(str(path))


def test_read_missing_file(tmp_path):
    with pytest.raises(IoError):
        net_io_read(str(tmp_path / 'missing.json'))


def test_parse_error_names_field(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"dims": [1, 1], "vertices": [{"f": [0, 0, 0]}]}')
    with pytest.raises(ParseError) as excinfo:
        net_io_read(str(path))
    assert excinfo.value.field == 'vertices[0].n'


def test_lax_field_round_trip(tmp_path, make_lax_field):
    field = make_lax_field((4, 3))
    path = str(tmp_path / 'lax.json')
    write_lax_field(field, path)
    back = read_lax_field(path)
    assert back.dims == field.dims
    npt.assert_array_equal(back.s, field.s)
    npt.assert_array_equal(back.l, field.l)
    npt.assert_array_equal(back.m, field.m)
    npt.assert_array_equal(back.delta2, field.delta2)


def test_lax_field_shapes():
    field = ck_line_field((4, 3), 0.1, 0.2)
    assert field.l.shape == (3, 3)
    assert field.m.shape == (4, 2)
    field.check_edge_lengths()
    with pytest.raises(DimensionMismatch):
        CknetLaxField(field.s, field.m, field.l, field.delta1, field.delta2)
    with pytest.raises(InvariantViolation):
        CknetLaxField(2 * field.s, field.l, field.m, field.delta1, field.delta2)


def test_export_obj(tmp_path):
    path = tmp_path / 'net.obj'
    export_obj(small_net(), str(path))
    lines = path.read_text().splitlines()
    assert len([line for line in lines if line.startswith('v ')]) == 6
    assert len([line for line in lines if line.startswith('vn ')]) == 6
    faces = [line for line in lines if line.startswith('f ')]
    assert faces == ['f 1//1 2//2 5//5 4//4', 'f 2//2 3//3 6//6 5//5']


@pytest.mark.parametrize('L', [12, 13, 20])
def test_export_closed_pseudosphere_is_watertight(tmp_path, L):
    K = 6
    path = tmp_path / 'pseudosphere.obj'
    faces = export_obj(gen_tractrix_pseudosphere((K, L), 0.5, 12), str(path))
    lines = path.read_text().splitlines()
    vertices = [tuple(float(x) for x in line.split()[1:]) for line in lines if line.startswith('v ')]
    assert len(vertices) == K * 12
    assert len(set(tuple(np.round(v, 9)) for v in vertices)) == K * 12
    quads = [[int(corner.split('//')[0]) - 1 for corner in line.split()[1:]] for line in lines if line.startswith('f ')]
    assert faces == len(quads) == (K - 1) * 12
    edges = {}
    for quad in quads:
        for a, b in zip(quad, quad[1:] + quad[:1]):
            edge = (min(a, b), max(a, b))
            edges[edge] = edges.get(edge, 0) + 1
    for (a, b), count in edges.items():
        on_boundary = a % K == b % K and a % K in (0, K - 1)
        assert count == (1 if on_boundary else 2)


def test_export_open_window_of_closed_net(tmp_path):
    assert export_obj(gen_tractrix_pseudosphere((4, 6), 0.5, 12), str(tmp_path / 'part.obj')) == 15


def test_export_needs_quads(tmp_path):
    net = QuadNet(np.zeros((1, 3, 3)), np.tile([0.0, 0.0, 1.0], (1, 3, 1)))
    with pytest.raises(DimensionMismatch):
        export_obj(net, str(tmp_path / 'net.obj'))
