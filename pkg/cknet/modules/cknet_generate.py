#!/usr/bin/env python
import sys

import numpy as np

from cknet.module_utils.cknet import UsageError
from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_output
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.cknet import parse_dims
from cknet.module_utils.explicit import closing_mu
from cknet.module_utils.explicit import gen_breather
from cknet.module_utils.explicit import gen_darboux_tractrix
from cknet.module_utils.explicit import gen_dini
from cknet.module_utils.explicit import gen_kuen
from cknet.module_utils.explicit import gen_line
from cknet.module_utils.explicit import gen_pseudosphere_family
from cknet.module_utils.explicit import gen_tractrix_pseudosphere
from cknet.module_utils.explicit import line_polygon
from cknet.module_utils.explicit import tractrix_surface
from cknet.module_utils.lattice import net_io_write

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_generate
version_added: "0.1.0"
short_description: Closed form cK-nets and their associated families
description:
    - Writes one of the closed form nets over the straight line, or the tractrix pseudosphere, as a net JSON file.
    - Only the options belonging to the chosen surface may be given.
options:
    surface:
        type: str
        choices: ["line", "dini", "pseudosphere", "pseudosphere-family", "breather", "kuen", "tractrix"]
        description:
            - closed form to evaluate. [required]
    dims:
        type: dims
        default: 20x20
        description:
            - window size KxL
    origin:
        type: list
        elements: int
        default: 0,0
        description:
            - lattice index of the first vertex. Windows with several angles per direction must contain 0,0
    delta1:
        type: list
        elements: float
        default: 0.1
        description:
            - parameter line angle in the first direction, one value or one per edge
    delta2:
        type: list
        elements: float
        default: 0.1
        description:
            - parameter line angle in the second direction, one value or one per edge
    t:
        type: float
        default: 0
        description:
            - associated family parameter, lambda = exp(t)
    alpha:
        type: float
        description:
            - transform angle of the dini surface, 0 < |alpha| < pi
    theta:
        type: float
        default: pi/2
        description:
            - initial phase of single transforms
    mu:
        type: float
        description:
            - breather parameter with tan(alpha/2) = exp(i mu)
    q:
        type: float
        description:
            - rational 0 < q < 1 picking the breather that closes in the second direction. Replaces mu
    epsilon:
        type: float
        description:
            - tractrix step, 0 < epsilon < 2
    phi_steps:
        type: int
        description:
            - rows per full turn of a surface of revolution
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet generate --surface pseudosphere --epsilon 1 --phi-steps 24 --dims 40x24 --output pseudosphere.json
cknet generate --surface dini --alpha 1.0 --t 0.3 --output dini.json
cknet generate --surface breather --q 0.6 --delta2 0.3141592653589793 --dims 20x51 --output breather.json
'''
RETURN = r'''
---
dims:
    description: window size of the written net
    returned: success
    type: list
output:
    description: path of the written net
    returned: success
    type: str
'''

ANGLES = ('delta1', 'delta2', 't', 'origin')
SURFACES = {
    'line': ANGLES,
    'dini': ANGLES + ('alpha', 'theta'),
    'pseudosphere': ('epsilon', 'phi_steps', 'origin'),
    'pseudosphere-family': ANGLES + ('theta',),
    'breather': ANGLES + ('mu', 'q'),
    'kuen': ANGLES,
    'tractrix': ('epsilon', 'phi_steps'),
}
SURFACE_OPTIONS = ('alpha', 'theta', 'mu', 'q', 'epsilon', 'phi_steps') + ANGLES


def main(argv=None):
    argspec = cknet_argspec()
    argspec['surface'] = dict(required=True, type='str', choices=sorted(SURFACES))
    argspec['dims'] = dict(required=False, type=parse_dims, default=(20, 20))
    argspec['origin'] = dict(required=False, type='list', elements='int')
    argspec['delta1'] = dict(required=False, type='list', elements='float')
    argspec['delta2'] = dict(required=False, type='list', elements='float')
    argspec['t'] = dict(required=False, type='float')
    argspec['alpha'] = dict(required=False, type='float')
    argspec['theta'] = dict(required=False, type='float')
    argspec['mu'] = dict(required=False, type='float')
    argspec['q'] = dict(required=False, type='float')
    argspec['epsilon'] = dict(required=False, type='float')
    argspec['phi_steps'] = dict(required=False, type='int')

    return cknet_run(cknet_generate, argspec, argv, 'cknet generate', description='Write a closed form net.')


def _angle(values):
    if values is None:
        return 0.1
    if len(values) == 1:
        return values[0]
    return np.array(values)


def _required(params, *names):
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise UsageError('missing required arguments: %s' % ', '.join(missing))


def surface_net(params):
    surface = params.get('surface')
    extra = [name for name in SURFACE_OPTIONS if params.get(name) is not None and name not in SURFACES[surface]]
    if extra:
        raise UsageError('options not supported by surface %s: %s' % (surface, ', '.join(extra)))
    dims = params.get('dims')
    origin = tuple(params.get('origin') or (0, 0))
    if len(origin) != 2:
        raise UsageError('origin needs two integers')
    delta1, delta2 = _angle(params.get('delta1')), _angle(params.get('delta2'))
    t = params.get('t') or 0.0
    theta = np.pi / 2 if params.get('theta') is None else params.get('theta')

    if surface == 'line':
        return gen_line(dims, delta1, delta2, t, origin=origin)
    if surface == 'dini':
        _required(params, 'alpha')
        return gen_dini(dims, params.get('alpha'), theta, delta1, delta2, t, origin=origin)
    if surface == 'pseudosphere':
        _required(params, 'epsilon', 'phi_steps')
        return gen_tractrix_pseudosphere(dims, params.get('epsilon'), params.get('phi_steps'), origin=origin)
    if surface == 'pseudosphere-family':
        return gen_pseudosphere_family(dims, theta, delta1, delta2, t, origin=origin)
    if surface == 'breather':
        if (params.get('mu') is None) == (params.get('q') is None):
            raise UsageError('breather needs exactly one of: mu, q')
        mu = params.get('mu')
        if mu is None:
            mu = closing_mu(params.get('q'), delta2)
        return gen_breather(dims, mu, delta1, delta2, t, origin=origin)
    if surface == 'kuen':
        return gen_kuen(dims, delta1, delta2, t, origin=origin)
    _required(params, 'epsilon', 'phi_steps')
    data = gen_darboux_tractrix(line_polygon(dims[0], params.get('epsilon')), (0.0, 2.0))
    return tractrix_surface(data, params.get('phi_steps'), dims[1])


@netwrapper
def cknet_generate(module):
    params = module.params
    output = cknet_output(params)
    net = surface_net(params)
    net_io_write(net, output)
    return {'changed': True, 'dims': list(net.dims), 'output': output}


if __name__ == '__main__':
    sys.exit(main())
