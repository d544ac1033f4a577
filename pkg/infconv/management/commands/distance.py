from infconv.envelope import distance_fn
from infconv.serializers import parse_setspec

from ._base import GridCommand, load_json, usage_errors


class Command(GridCommand):
    help = 'Compute the Euclidean distance function to a target set'

    def add_arguments(self, parser):
        parser.add_argument('--target', required=True, help='SetSpec JSON (path or inline) for the target')
        super().add_arguments(parser)

    def compute(self, grid, options):
        with usage_errors('--target'):
            target = parse_setspec(load_json(options['target'], '--target'))
        return distance_fn(target, grid, threads=options['threads'])
