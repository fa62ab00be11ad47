import argparse
import json
import logging
import os
import sys

from ansible.module_utils.basic import env_fallback
from ansible.module_utils.common.arg_spec import ArgumentSpecValidator
from ansible.module_utils.common.text.converters import jsonify

# Default absolute tolerance for invariant checks and the tight tolerance for algebraic identities.
TOL = 1e-9
TIGHT_TOL = 1e-12
# Geometric residual tolerance used by the command line when none is given.
GEOMETRY_TOL = 1e-8
# Magnitudes below this are treated as zero divisors.
DEGENERATE = 1e-12

log = logging.getLogger(__name__)


class CknetError(Exception):
    rc = 1


class UsageError(CknetError):
    rc = 1


class ParseError(CknetError):
    rc = 2

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        detail = []
        if line is not None:
            detail.append('line %s' % line)
        if field is not None:
            detail.append('field %s' % field)
        if detail:
            message = '%s (%s)' % (message, ', '.join(detail))
        super(ParseError, self).__init__(message)


class IoError(CknetError):
    rc = 2


class InvariantViolation(CknetError):
    rc = 3


class DimensionMismatch(InvariantViolation):
    pass


class IncompatibleField(InvariantViolation):
    pass


class NonRealImage(InvariantViolation):
    pass


class DegeneracyError(CknetError):
    rc = 4


class SingularMatrix(DegeneracyError):
    pass


class DegenerateAngle(DegeneracyError):
    pass


class DegenerateEvolution(DegeneracyError):

    def __init__(self, message, quantity=None):
        self.quantity = quantity
        if quantity is not None:
            message = '%s: %s' % (quantity, message)
        super(DegenerateEvolution, self).__init__(message)


class DegenerateQuad(DegeneracyError):
    pass


class DegenerateFrame(DegeneracyError):
    pass


class ZeroEdge(DegeneracyError):
    pass


class CoincidentVertices(DegeneracyError):
    pass


class NegativeRadicand(DegeneracyError):
    pass


RadicandNegative = NegativeRadicand


class NonConcircular(DegeneracyError):
    pass


class NoSolution(DegeneracyError):
    pass


class InvalidStep(DegeneracyError):
    pass


def parse_complex(value):
    """Parse a ``re+imi`` literal.

    :param value: literal such as ``0.5``, ``1-2i`` or ``+i``
    :type value: str
    :return: parsed value
    :rtype: complex
    """
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    text = str(value).replace(' ', '')
    if not text or 'j' in text:
        raise ValueError("invalid complex literal '%s'" % value)
    return complex(text.replace('i', 'j'))


def format_complex(value):
    value = complex(value)
    return '%.17g%+.17gi' % (value.real, value.imag)


def parse_dims(value):
    if isinstance(value, (list, tuple)):
        dims = tuple(int(v) for v in value)
    else:
        parts = str(value).lower().split('x')
        if len(parts) != 2:
            raise ValueError("dims must look like KxL, got '%s'" % value)
        dims = (int(parts[0]), int(parts[1]))
    if len(dims) != 2 or dims[0] < 1 or dims[1] < 1:
        raise ValueError("dims must be two positive integers, got '%s'" % (value,))
    return dims


def cknet_argspec():
    argument_spec = dict(
        tol=dict(required=False, type='float', default=GEOMETRY_TOL, fallback=(env_fallback, ['CKNET_TOL'])),
        config=dict(required=False, type='path', fallback=(env_fallback, ['CKNET_CONFIG'])),
        log_level=dict(required=False, type='str', default='WARNING', fallback=(env_fallback, ['CKNET_LOG_LEVEL']),
                       choices=['DEBUG', 'INFO', 'WARNING', 'ERROR']),
        output=dict(required=False, type='path', default='-'),
    )
    return argument_spec


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def _plain(value):
    if isinstance(value, dict):
        return dict((key, _plain(item)) for key, item in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, complex):
        return format_complex(value)
    if hasattr(value, 'tolist'):
        return _plain(value.tolist())
    return value


class CknetModule(object):
    """Validated options plus the result emitters of one subcommand run."""

    def __init__(self, name, params, stream=None):
        self.name = name
        self.params = params
        self.stream = stream or sys.stdout

    def exit_json(self, **result):
        result.setdefault('changed', False)
        result.setdefault('rc', 0)
        self.stream.write(jsonify(_plain(result), sort_keys=True) + '\n')
        return result['rc']

    def fail_json(self, **result):
        result['failed'] = True
        if not result.get('rc'):
            result['rc'] = 1
        return self.exit_json(**result)


def _load_config(path):
    try:
        with open(path, 'r') as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise IoError('Error reading config %s: %s' % (path, e))
    try:
        config = json.loads(text)
    except ValueError as e:
        raise ParseError('config %s is not valid JSON: %s' % (path, e), line=getattr(e, 'lineno', None))
    if not isinstance(config, dict):
        raise ParseError('config %s must hold a JSON object' % path)
    return dict((key.replace('-', '_'), value) for key, value in config.items())


def cknet_init(argument_spec, argv=None, name=None, description=None, **kwargs):
    """Build a CknetModule from command line arguments, an optional JSON config and the declared defaults.

    argparse only maps ``--some-option value`` onto ``some_option``; the argspec validator converts types and
    applies choices, required options, fallbacks and the option groups given in kwargs. Precedence is flag,
    then config file, then environment fallback, then declared default.
    """
    name = name or os.path.basename(sys.argv[0])
    parser = _ArgumentParser(prog=name, description=description)
    for key in sorted(argument_spec):
        parser.add_argument('--' + key.replace('_', '-'), dest=key, default=None, metavar=key.upper())
    given = dict((key, value) for key, value in vars(parser.parse_args(argv)).items() if value is not None)

    parameters = {}
    config_path = given.get('config') or os.environ.get('CKNET_CONFIG')
    if config_path:
        parameters.update(_load_config(os.path.expanduser(config_path)))
    parameters.update(given)

    validator = ArgumentSpecValidator(argument_spec, **kwargs)
    result = validator.validate(parameters)
    if result.error_messages:
        raise UsageError('; '.join(result.error_messages))
    params = result.validated_parameters

    logging.basicConfig(level=getattr(logging, params.get('log_level') or 'WARNING'), stream=sys.stderr,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    log.debug('%s params: %s', name, params)
    return CknetModule(name, params)


def netwrapper(function):
    def wrapper(*args, **kwargs):
        result = {"changed": False, "rc": 0}
        try:
            result.update(function(*args, **kwargs))
        except CknetError as e:
            error_string = "%s(%s)" % (e.__class__.__name__, e)
            log.debug('command failed: %s', error_string)
            result['rc'] = e.rc
            result['failed'] = True
            result['msg'] = u"Error %s" % error_string
        return result
    return wrapper


def cknet_run(main_function, argument_spec, argv, name, description=None, **kwargs):
    """Parse options and run a wrapped subcommand, turning usage errors into a failed result."""
    try:
        module = cknet_init(argument_spec, argv=argv, name=name, description=description, **kwargs)
    except CknetError as e:
        module = CknetModule(name, {})
        return module.fail_json(rc=e.rc, msg=u"Error %s(%s)" % (e.__class__.__name__, e))
    result = main_function(module)
    if result.get('failed'):
        return module.fail_json(**result)
    return module.exit_json(**result)


def cknet_output(params):
    """Path a net producing command writes to; `-` is refused since stdout carries the JSON result."""
    output = params.get('output')
    if not output or output == '-':
        raise UsageError('missing required arguments: output')
    return output
