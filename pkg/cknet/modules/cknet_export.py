#!/usr/bin/env python
import sys

from cknet.module_utils.cknet import cknet_argspec
from cknet.module_utils.cknet import cknet_output
from cknet.module_utils.cknet import cknet_run
from cknet.module_utils.cknet import netwrapper
from cknet.module_utils.lattice import export_obj
from cknet.module_utils.lattice import net_io_read

ANSIBLE_METADATA = {'status': ['preview'], 'supported_by': 'community', 'version': '1.1'}
DOCUMENTATION = r'''
---
module: cknet_export
version_added: "0.1.0"
short_description: Export a net as a mesh file
description:
    - Writes vertices, vertex normals and quad faces of a net as a Wavefront OBJ file with 1-based indices.
    - A net closed in its second direction, such as the pseudosphere, is written once around with faces across
      the seam, so no vertex appears twice.
options:
    net:
        type: path
        description:
            - net JSON file. [required]
    format:
        type: str
        default: obj
        choices: ["obj"]
        description:
            - mesh format
extends_documentation_fragment:
    - cknet
'''
EXAMPLES = r'''
---
cknet export --net pseudosphere.json --output pseudosphere.obj
'''
RETURN = r'''
---
faces:
    description: number of quad faces written
    returned: success
    type: int
'''


def main(argv=None):
    argspec = cknet_argspec()
    argspec['net'] = dict(required=True, type='path')
    argspec['format'] = dict(required=False, type='str', default='obj', choices=['obj'])

    return cknet_run(cknet_export, argspec, argv, 'cknet export', description='Export a net as a mesh.')


@netwrapper
def cknet_export(module):
    params = module.params
    output = cknet_output(params)
    net = net_io_read(params.get('net'))
    faces = export_obj(net, output)
    return {'changed': True, 'output': output, 'faces': faces}


if __name__ == '__main__':
    sys.exit(main())
