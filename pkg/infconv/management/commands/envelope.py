from infconv.envelope import ConvCase, inf_conv_brute
from infconv.serializers import parse_funcspec

from ._base import GridCommand, load_json, usage_errors


class Command(GridCommand):
    help = 'Compute the infimal convolution (f ⊕ phi) on a grid by exact minimisation and write it as CSV'

    def add_arguments(self, parser):
        parser.add_argument('--f', required=True, help='FuncSpec JSON (path or inline) for f')
        parser.add_argument('--phi', required=True, help='FuncSpec JSON (path or inline) for the kernel')
        super().add_arguments(parser)

    def compute(self, grid, options):
        with usage_errors('--f'):
            f = parse_funcspec(load_json(options['f'], '--f'))
        with usage_errors('--phi'):
            phi = parse_funcspec(load_json(options['phi'], '--phi'))
        return inf_conv_brute(ConvCase(f, phi, grid), threads=options['threads'])
