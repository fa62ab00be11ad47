import sys

from cknet.module_utils.cknet import CknetModule
from cknet.modules import cknet_backlund
from cknet.modules import cknet_compare
from cknet.modules import cknet_double_backlund
from cknet.modules import cknet_evolve
from cknet.modules import cknet_export
from cknet.modules import cknet_generate
from cknet.modules import cknet_validate

COMMANDS = {
    'generate': cknet_generate.main,
    'evolve': cknet_evolve.main,
    'backlund': cknet_backlund.main,
    'double-backlund': cknet_double_backlund.main,
    'validate': cknet_validate.main,
    'compare': cknet_compare.main,
    'export': cknet_export.main,
}


def main(argv=None):
    """Dispatch ``cknet <command> [--option value ...]`` to the command module and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        given = argv[0] if argv else ''
        return CknetModule('cknet', {}).fail_json(
            rc=1, msg="Error UsageError(unknown command '%s', choose from: %s)" % (given, ', '.join(sorted(COMMANDS))))
    return COMMANDS[argv[0]](argv[1:])


if __name__ == '__main__':
    sys.exit(main())
