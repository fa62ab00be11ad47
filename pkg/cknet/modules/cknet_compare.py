#!/usr/bin/env python
import sys

from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.lattice import net_io_read
from cknet.module_utils.validate import NORMAL_MODES
from cknet.module_utils.validate import congruent_up_to_rigid_motion

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_compare
version_added: "0.1.0"
short_description: Compare two nets up to a rigid motion
description:
    - Aligns the first net onto the second with the rotation fixed by the lattice tangents at (0, 0) and reports
      the largest remaining vertex (and normal) distance.
    - Exits with code 3 when the residual exceeds tol.
options:
    net_a:
        type: path
        description:
            - net JSON file moved onto net_b. [required]
    net_b:
        type: path
        description:
            - reference net JSON file. [required]
    normals:
        type: str
        default: exact
        choices: ["exact", "sign", "ignore"]
        description:
            - compare normals exactly, up to one global sign, or not at all
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet compare --net-a dini.json --net-b dini_lax.json --normals sign --tol 1e-8
'''
RETURN = r'''
---
residual:
    description: largest distance after alignment
    returned: success
    type: float
rotation:
    description: rotation matrix applied to net_a
    returned: success
    type: list
translation:
    description: translation applied after the rotation
    returned: success
    type: list
'''


def main(argv=None):
    argspec = cknet_argspec()
    argspec['net_a'] = dict(required=True, type='path')
    argspec['net_b'] = dict(required=True, type='path')
    argspec['normals'] = dict(required=False, type='str', default='exact', choices=list(NORMAL_MODES))

    return cknet_run(cknet_compare, argspec, argv, 'cknet compare', description='Compare two nets.')


@netwrapper
def cknet_compare(module):
    params = module.params
    a = net_io_read(params.get('net_a'))
    b = net_io_read(params.get('net_b'))
    isometry, residual = congruent_up_to_rigid_motion(a, b, normals=params.get('normals'))
    result = {'residual': residual, 'rotation': isometry.rotation, 'translation': isometry.translation}
    if residual > params.get('tol'):
        result.update(rc=3, failed=True,
                      msg='Error InvariantViolation(residual %.3g exceeds %.3g)' % (residual, params.get('tol')))
    return result


if __name__ == '__main__':
    sys.exit(main())
