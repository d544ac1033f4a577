from infconv.envelope import min_time
from infconv.serializers import parse_gauge_set, parse_setspec

from ._base import GridCommand, load_json, usage_errors


class Command(GridCommand):
    help = 'Compute the minimal time function T_F(x; target) for constant dynamics F'

    def add_arguments(self, parser):
        parser.add_argument('--target', required=True, help='SetSpec JSON (path or inline) for the target')
        parser.add_argument('--dynamics', required=True,
                            help='Dynamics set JSON (box, polygon or ball with 0 in its interior)')
        super().add_arguments(parser)

    def compute(self, grid, options):
        with usage_errors('--target'):
            target = parse_setspec(load_json(options['target'], '--target'))
        with usage_errors('--dynamics'):
            dynamics = parse_gauge_set(load_json(options['dynamics'], '--dynamics'))
        return min_time(target, dynamics, grid, threads=options['threads'])
