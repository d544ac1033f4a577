from django.core.management.base import CommandError
from django.core.management.commands import check as system_check

from infconv.corpus import builtin_corpus
from infconv.harness import CHECK_IDS, run_suite
from infconv.models import SuiteRun
from infconv.serializers import load_corpus
from infconv.utils import get_setting, parse_tolerance_overrides

from ._base import SUITE_FAILURE, USAGE_ERROR, load_json, usage_errors, write_frame, write_text


class Command(system_check.Command):
    """
    Run the check suite over the builtin or a custom corpus.

    Overrides Django's ``check`` command. Calls that ask for system checks
    (app labels, --tag, --deploy, --list-tags, --database, as the test
    runner does) are handed to the original command.
    """
    help = 'Run the envelope check suite and write a JSON (or CSV) report'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--corpus', default='builtin',
                            help="'builtin' or a JSON array of CheckCase objects (path or inline)")
        parser.add_argument('--out', help='Report path (default: standard output)')
        parser.add_argument('--format', choices=['json', 'csv'], default='json')
        parser.add_argument('--seed', type=int, default=None, help='Seed for sampled checks (default: DEFAULT_SEED)')
        parser.add_argument('--threads', type=int, default=None, help='Worker threads (default: CPU count)')
        parser.add_argument('--tol', action='append', default=[], metavar='KEY=VAL',
                            help='Override a named tolerance; repeatable')
        parser.add_argument('--checks', help=f"Comma-separated subset of: {', '.join(CHECK_IDS)}")
        parser.add_argument('--store', action='store_true', help='Store the report as a SuiteRun')

    def _wants_system_checks(self, app_labels, options):
        return bool(app_labels or options.get('tags') or options.get('deploy') or options.get('list_tags')
                    or options.get('databases') is not None)

    def handle(self, *app_labels, **options):
        if self._wants_system_checks(app_labels, options):
            return super().handle(*app_labels, **options)
        if options['threads'] is not None and options['threads'] < 1:
            raise CommandError('--threads must be at least 1', returncode=USAGE_ERROR)
        with usage_errors('--tol'):
            overrides = parse_tolerance_overrides(options['tol'])
        checks = None
        if options['checks']:
            checks = [c.strip() for c in options['checks'].split(',') if c.strip()]
            unknown = [c for c in checks if c not in CHECK_IDS]
            if unknown:
                raise CommandError(f"Unknown checks: {', '.join(unknown)}", returncode=USAGE_ERROR)
        corpus = self._load_corpus(options['corpus'])
        seed = get_setting('DEFAULT_SEED') if options['seed'] is None else options['seed']

        report = run_suite(corpus, checks=checks, seed=seed, threads=options['threads'], tolerances=overrides)

        if options['format'] == 'csv':
            write_frame(report.to_frame(), options['out'], self.stdout)
        else:
            write_text(report.to_json(), options['out'], self.stdout)
        if options['store']:
            run = SuiteRun.objects.create_from_report(report)
            self.stderr.write(f"Stored run {run.pk}")
        summary = report.summary
        self.stderr.write(', '.join(f"{key}: {value}" for key, value in summary.items()))
        if not report.passed:
            raise CommandError(f"{summary['fail']} failing and {summary['error']} erroring records",
                               returncode=SUITE_FAILURE)

    def _load_corpus(self, value):
        if value == 'builtin':
            return builtin_corpus()
        data = load_json(value, '--corpus')
        with usage_errors('--corpus'):
            return load_corpus(data, name=value if not value.lstrip().startswith('[') else 'inline')
