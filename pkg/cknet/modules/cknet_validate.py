#!/usr/bin/env python
import json
import sys

from cknet.module_utils.cknet import IoError
from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.lattice import net_io_read
from cknet.module_utils.validate import CHECKS
from cknet.module_utils.validate import validate_net

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_validate
version_added: "0.1.0"
short_description: Check a net for the edge constraint, constant curvature, circularity and planarity
description:
    - Computes the largest residual of each requested check over the net and lists the failing indices. Quads
      are [k, l], edges carry dir, the lattice direction k or l the edge runs in, and index [k, l].
    - Edges shorter than 1e-12 times the largest vertex coordinate and quads without area are skipped and
      listed under degenerate_edges and degenerate. A check with nothing left to measure fails.
    - Exits with code 3 when any check fails.
options:
    net:
        type: path
        description:
            - net JSON file. [required]
    checks:
        type: list
        elements: str
        default: edge-constraint,curvature
        choices: ["edge-constraint", "curvature", "circularity", "planarity"]
        description:
            - checks to run. planarity measures the polygons along the first lattice direction
    target_curvature:
        type: float
        default: -1
        description:
            - Gauss curvature every quad must have
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet validate --net pseudosphere.json --checks edge-constraint,curvature --tol 1e-8
cknet validate --net kuen.json --checks planarity,curvature --output report.json
'''
RETURN = r'''
---
report:
    description: per check max_residual, failing indices and passed flag, plus degenerate quads and edges
    returned: always
    type: dict
'''


def main(argv=None):
    argspec = cknet_argspec()
    argspec['net'] = dict(required=True, type='path')
    argspec['checks'] = dict(required=False, type='list', elements='str', default=['edge-constraint', 'curvature'],
                             choices=list(CHECKS))
    argspec['target_curvature'] = dict(required=False, type='float', default=-1.0)

    return cknet_run(cknet_validate, argspec, argv, 'cknet validate', description='Validate a net.')


@netwrapper
def cknet_validate(module):
    params = module.params
    net = net_io_read(params.get('net'))
    report = validate_net(net, checks=params.get('checks'), tol=params.get('tol'),
                          target_curvature=params.get('target_curvature'))
    output = params.get('output')
    if output and output != '-':
        try:
            with open(output, 'w') as f:
                json.dump(report, f, sort_keys=True, indent=2)
        except (IOError, OSError) as e:
            raise IoError('Error writing %s: %s' % (output, e))
    result = {'report': report}
    if not report['passed']:
        failed = sorted(name for name, entry in report['checks'].items() if not entry['passed'])
        msg = 'failed checks: %s' % ', '.join(failed)
        if report['degenerate']:
            msg += '; %d degenerate quads skipped' % len(report['degenerate'])
        result.update(rc=3, failed=True, msg='Error InvariantViolation(%s)' % msg)
    return result


if __name__ == '__main__':
    sys.exit(main())
