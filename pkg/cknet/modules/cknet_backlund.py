#!/usr/bin/env python
import sys

import numpy as np

from cknet.module_utils.backlund import BacklundParams
from cknet.module_utils.backlund import bt_transform
from cknet.module_utils.cklax import ck_line_field
from cknet.module_utils.cknet import IncompatibleField
from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_output
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.cknet import parse_dims
from cknet.module_utils.lattice import net_io_read
from cknet.module_utils.lattice import net_io_write
from cknet.module_utils.lattice import read_lax_field
from cknet.module_utils.lattice import write_lax_field

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_backlund
version_added: "0.1.0"
short_description: Single Bäcklund transform of a cK-net
description:
    - Evolves the transform's vertex variable from exp(i theta) at (0, 0) over a base Lax field, multiplies the
      base frames by the transform matrix and writes the transformed net.
    - Without lax the base is the straight line over dims with the given parameter line angles.
options:
    lax:
        type: path
        description:
            - base Lax field JSON file
    net:
        type: path
        description:
            - base net JSON file; when given it must match the integrated base within tol
    dims:
        type: dims
        default: 20x20
        description:
            - window of the straight line base
    delta1:
        type: float
        default: 0.1
        description:
            - parameter line angle of the straight line base in the first direction
    delta2:
        type: float
        default: 0.1
        description:
            - parameter line angle of the straight line base in the second direction
    alpha:
        type: float
        description:
            - transform angle, 0 < |alpha| < pi. [required]
    theta:
        type: float
        default: pi/2
        description:
            - initial phase of the transform
    t:
        type: float
        default: 0
        description:
            - associated family parameter, lambda = exp(t)
    lax_output:
        type: path
        description:
            - also write the transformed Lax field here
    base_output:
        type: path
        description:
            - also write the integrated base net here
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet backlund --alpha 1.0 --t 0.3 --output dini.json
cknet backlund --lax field.json --net base.json --alpha -1.5707963267948966 --output transform.json
'''
RETURN = r'''
---
consistency_residual:
    description: largest mismatch of the transform's vertex variable between the two lattice directions
    returned: success
    type: float
'''


def main(argv=None):
    argspec = cknet_argspec()
    argspec['lax'] = dict(required=False, type='path')
    argspec['net'] = dict(required=False, type='path')
    argspec['dims'] = dict(required=False, type=parse_dims, default=(20, 20))
    argspec['delta1'] = dict(required=False, type='float', default=0.1)
    argspec['delta2'] = dict(required=False, type='float', default=0.1)
    argspec['alpha'] = dict(required=True, type='float')
    argspec['theta'] = dict(required=False, type='float', default=np.pi / 2)
    argspec['t'] = dict(required=False, type='float', default=0.0)
    argspec['lax_output'] = dict(required=False, type='path')
    argspec['base_output'] = dict(required=False, type='path')

    return cknet_run(cknet_backlund, argspec, argv, 'cknet backlund', description='Write a Bäcklund transform.')


def base_field(params):
    if params.get('lax'):
        return read_lax_field(params.get('lax'))
    return ck_line_field(params.get('dims'), params.get('delta1'), params.get('delta2'))


@netwrapper
def cknet_backlund(module):
    params = module.params
    output = cknet_output(params)
    field = base_field(params)
    transform = BacklundParams(params.get('alpha'), theta=params.get('theta'), t=params.get('t'))
    net, bt_field, _, new_net = bt_transform(field, transform)
    if params.get('net'):
        given = net_io_read(params.get('net'))
        if given.dims != net.dims or np.max(np.abs(given.f - net.f)) > params.get('tol') \
                or np.max(np.abs(given.n - net.n)) > params.get('tol'):
            raise IncompatibleField('base net %s does not match the integrated Lax field' % params.get('net'))
    net_io_write(new_net, output)
    if params.get('lax_output'):
        write_lax_field(bt_field.as_lax_field(), params.get('lax_output'))
    if params.get('base_output'):
        net_io_write(net, params.get('base_output'))
    return {'changed': True, 'dims': list(new_net.dims), 'output': output,
            'consistency_residual': bt_field.consistency_residual}


if __name__ == '__main__':
    sys.exit(main())
