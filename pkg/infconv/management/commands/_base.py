import json
import logging
from contextlib import contextmanager
from pathlib import Path

from django.core.exceptions import ValidationError as DjangoValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from infconv.exceptions import InfConvError
from infconv.extreal import Grid

logger = logging.getLogger('infconv')

USAGE_ERROR = 2
SUITE_FAILURE = 1


def _message(error):
    if isinstance(error, serializers.ValidationError):
        return json.dumps(error.detail, default=str)
    if isinstance(error, DjangoValidationError):
        return '; '.join(error.messages)
    return str(error)


@contextmanager
def usage_errors(what):
    """Turn input, config and domain errors into a CommandError with exit code 2."""
    try:
        yield
    except CommandError:
        raise
    except (serializers.ValidationError, DjangoValidationError, InfConvError, ValueError, KeyError,
            OSError) as e:
        logger.debug(f"{what} failed: {e!r}")
        raise CommandError(f"{what}: {_message(e)}", returncode=USAGE_ERROR)


def load_json(value, what):
    """
    JSON from a file path or an inline JSON string.

    A value starting with '{' or '[' is parsed as JSON text; anything else
    is a path.
    """
    if value is None:
        raise CommandError(f"{what} is required", returncode=USAGE_ERROR)
    if value.lstrip().startswith(('{', '[')):
        text = value
    else:
        try:
            text = Path(value).read_text()
        except OSError as e:
            raise CommandError(f"Cannot read {what} '{value}': {e}", returncode=USAGE_ERROR)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CommandError(f"Malformed JSON in {what}: {e}", returncode=USAGE_ERROR)


def attach_option_values(argv, flags):
    """
    Rewrite ``FLAG VALUE`` as ``FLAG=VALUE`` for the given flags.

    argparse reads a separate value such as ``-4:4:1601`` as an unknown
    option; attached, it stays the flag's value.
    """
    argv = list(argv)
    joined = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in flags and i + 1 < len(argv) and not argv[i + 1].startswith('--'):
            joined.append(f'{arg}={argv[i + 1]}')
            i += 2
        else:
            joined.append(arg)
            i += 1
    return joined


def parse_grid(text):
    with usage_errors('--grid'):
        return Grid.parse(text)


class GridCommand(BaseCommand):
    """Base for commands that compute a function on a grid and write it as CSV."""

    def add_arguments(self, parser):
        parser.add_argument('--grid', required=True, help='lo:hi:n (1D) or lo:hi:n,lo:hi:n (2D)')
        parser.add_argument('--out', help='Output CSV path (default: standard output)')
        parser.add_argument('--threads', type=int, default=None, help='Worker threads (default: CPU count)')

    def run_from_argv(self, argv):
        super().run_from_argv(attach_option_values(argv, ('--grid',)))

    def compute(self, grid, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        if options['threads'] is not None and options['threads'] < 1:
            raise CommandError('--threads must be at least 1', returncode=USAGE_ERROR)
        grid = parse_grid(options['grid'])
        with usage_errors(self.name):
            result = self.compute(grid, options)
        write_frame(result.to_frame(), options['out'], self.stdout)
        if options['out']:
            self.stderr.write(f"Wrote {grid.size} values to {options['out']}")

    @property
    def name(self):
        return self.__module__.rsplit('.', 1)[-1]


def write_text(text, out, stdout):
    """Write to ``out`` when given, else to the command's standard output."""
    if not out:
        stdout.write(text, ending='')
        return
    try:
        Path(out).write_text(text)
    except OSError as e:
        raise CommandError(f"Cannot write '{out}': {e}", returncode=USAGE_ERROR)


def write_frame(frame, out, stdout):
    write_text(frame.to_csv(index=False, float_format='%.17g'), out, stdout)
