#!/usr/bin/env python
import sys

import numpy as np

from cknet.module_utils.backlund import bt_double
from cknet.module_utils.cklax import ck_integrate
from cknet.module_utils.cknet import UsageError
from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_output
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import format_complex
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.cknet import parse_complex
from cknet.module_utils.cknet import parse_dims
from cknet.module_utils.explicit import breather_period
from cknet.module_utils.explicit import closing_mu
from cknet.module_utils.lattice import net_io_write
from cknet.modules.cknet_backlund import base_field

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_double_backlund
version_added: "0.1.0"
short_description: Double Bäcklund transform with complex angle
description:
    - Multiplies the base frames by the cK Lax matrix of angle alpha with tan(alpha/2) = exp(i mu), whose vertex
      and edge variables are evolved from s_db(0, 0) = exp(i theta_db) and s_b(0, 0) = exp(i theta_b).
    - Over the straight line mu = 0 gives Kuen type nets and other mu breathers.
options:
    lax:
        type: path
        description:
            - base Lax field JSON file; the straight line over dims when absent
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
    mu:
        type: complex
        description:
            - transform parameter as a re+imi literal. Real mu gives the complex conjugate pair of angles of a
              breather, purely imaginary mu a real angle with tan(alpha/2) = exp(-Im mu)
    q:
        type: float
        description:
            - rational 0 < q < 1 choosing the breather closing in the second direction. Replaces mu
    theta_b:
        type: float
        default: pi/2
        description:
            - initial phase of the edge variable
    theta_db:
        type: float
        default: 0
        description:
            - initial phase of the vertex variable
    t:
        type: float
        default: 0
        description:
            - associated family parameter, lambda = exp(t)
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet double-backlund --mu 0 --dims 30x30 --output kuen.json
cknet double-backlund --mu 0+0.3i --dims 30x30 --output real_angle.json
cknet double-backlund --q 0.6 --delta2 0.3141592653589793 --dims 20x51 --output breather.json
'''
RETURN = r'''
---
mu:
    description: transform parameter used, as a re+imi literal
    returned: success
    type: str
period:
    description: closing period in the second direction of a breather over the line at t = 0, null otherwise
    returned: success
    type: int
'''


def main(argv=None):
    argspec = cknet_argspec()
    argspec['lax'] = dict(required=False, type='path')
    argspec['dims'] = dict(required=False, type=parse_dims, default=(20, 20))
    argspec['delta1'] = dict(required=False, type='float', default=0.1)
    argspec['delta2'] = dict(required=False, type='float', default=0.1)
    argspec['mu'] = dict(required=False, type=parse_complex)
    argspec['q'] = dict(required=False, type='float')
    argspec['theta_b'] = dict(required=False, type='float', default=np.pi / 2)
    argspec['theta_db'] = dict(required=False, type='float', default=0.0)
    argspec['t'] = dict(required=False, type='float', default=0.0)

    return cknet_run(cknet_double_backlund, argspec, argv, 'cknet double-backlund',
                     description='Write a double Bäcklund transform.', required_one_of=[['mu', 'q']],
                     mutually_exclusive=[['mu', 'q']])


@netwrapper
def cknet_double_backlund(module):
    params = module.params
    output = cknet_output(params)
    field = base_field(params)
    mu = params.get('mu')
    if mu is None:
        if params.get('lax'):
            raise UsageError('q selects a breather over the straight line; give mu with lax')
        mu = closing_mu(params.get('q'), params.get('delta2'))
    if complex(mu).imag == 0:
        mu = complex(mu).real
    frame, _ = ck_integrate(field, params.get('t'))
    double = bt_double(frame, field, mu, theta_b=params.get('theta_b'), theta_db=params.get('theta_db'))
    net_io_write(double.net, output)
    period = None
    if not params.get('lax') and params.get('t') == 0 and isinstance(mu, float) and np.sin(mu) != 0:
        period = breather_period(mu, params.get('delta2'))
    return {'changed': True, 'dims': list(double.net.dims), 'output': output, 'mu': format_complex(mu),
            'period': period}


if __name__ == '__main__':
    sys.exit(main())
