#!/usr/bin/env python
import sys

from cknet.module_utils.cklax import ck_field_from_cauchy
from cknet.module_utils.cklax import ck_integrate
from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_output
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.lattice import net_io_write
from cknet.module_utils.lattice import read_lax_field
from cknet.module_utils.lattice import write_lax_field

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_evolve
version_added: "0.1.0"
short_description: Integrate a cK-net Lax field into a net
description:
    - Reads a Lax field JSON file, integrates the frames from the identity at (0, 0) and writes the net given by
      the Sym formula.
    - With cauchy, only s on row 0 and column 0, l on row 0 and m on column 0 are used; the
      remaining entries are overwritten but must still be unimodular.
options:
    lax:
        type: path
        description:
            - Lax field JSON file. [required]
    t:
        type: float
        default: 0
        description:
            - associated family parameter, lambda = exp(t)
    cauchy:
        type: bool
        default: false
        description:
            - fill the field from its first row and column instead of checking the given interior
    lax_output:
        type: path
        description:
            - also write the completed Lax field here
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet evolve --lax field.json --t 0.5 --output net.json
cknet evolve --lax seed.json --cauchy true --lax-output field.json --output net.json
'''
RETURN = r'''
---
compat_residual:
    description: largest relative mismatch of the two frame propagation paths around a quad
    returned: success
    type: float
'''


def main(argv=None):
    argspec = cknet_argspec()
    argspec['lax'] = dict(required=True, type='path')
    argspec['t'] = dict(required=False, type='float', default=0.0)
    argspec['cauchy'] = dict(required=False, type='bool', default=False)
    argspec['lax_output'] = dict(required=False, type='path')

    return cknet_run(cknet_evolve, argspec, argv, 'cknet evolve', description='Integrate a Lax field.')


@netwrapper
def cknet_evolve(module):
    params = module.params
    output = cknet_output(params)
    field = read_lax_field(params.get('lax'))
    if params.get('cauchy'):
        field = ck_field_from_cauchy(field.s[:, 0], field.s[0, :], field.l[:, 0], field.m[0, :],
                                     field.delta1, field.delta2)
    frame, net = ck_integrate(field, params.get('t'))
    net_io_write(net, output)
    if params.get('lax_output'):
        write_lax_field(field, params.get('lax_output'))
    return {'changed': True, 'dims': list(net.dims), 'output': output, 'compat_residual': frame.compat_residual}


if __name__ == '__main__':
    sys.exit(main())
