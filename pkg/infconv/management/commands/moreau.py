from infconv.envelope import moreau_fast
from infconv.funcspec import sample
from infconv.serializers import parse_funcspec

from ._base import GridCommand, load_json, usage_errors


class Command(GridCommand):
    help = 'Compute the Moreau envelope min_w f(w) + alpha ||w - x||^2 with the separable fast path'

    def add_arguments(self, parser):
        parser.add_argument('--f', required=True, help='FuncSpec JSON (path or inline) for f')
        parser.add_argument('--alpha', type=float, default=1.0, help='Quadratic weight, > 0 (default: 1)')
        super().add_arguments(parser)

    def compute(self, grid, options):
        with usage_errors('--f'):
            f = parse_funcspec(load_json(options['f'], '--f'))
        return moreau_fast(sample(f, grid), options['alpha'], threads=options['threads'])
