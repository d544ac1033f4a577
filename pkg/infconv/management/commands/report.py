import json

from django.core.management.base import BaseCommand, CommandError

from infconv.harness import records_frame
from infconv.models import SuiteRun
from infconv.serializers import CheckResultSerializer, ReportSerializer

from ._base import USAGE_ERROR, load_json, write_frame, write_text


class Command(BaseCommand):
    help = 'Re-emit a stored suite run or flatten a report file as CSV or JSON'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--run', type=int, help='Id of a stored SuiteRun')
        source.add_argument('--input', help='Path of a report JSON written by the check command')
        parser.add_argument('--format', choices=['csv', 'json'], default='csv')
        parser.add_argument('--out', help='Output path (default: standard output)')
        parser.add_argument('--failing', action='store_true', help='Only fail and error records')
        parser.add_argument('--check', help='Only records of this check id')

    def handle(self, *args, **options):
        if options['run'] is not None:
            report = self._stored(options['run'], options['failing'], options['check'])
        else:
            report = self._from_file(options['input'])
            if options['failing']:
                report['records'] = [r for r in report['records'] if r['verdict'] in ('fail', 'error')]
            if options['check']:
                report['records'] = [r for r in report['records'] if r['check'] == options['check']]
        if options['format'] == 'json':
            write_text(json.dumps(report, sort_keys=True, indent=2) + '\n', options['out'], self.stdout)
        else:
            write_frame(records_frame(report['records']), options['out'], self.stdout)

    def _stored(self, pk, failing_only, check):
        try:
            run = SuiteRun.objects.get(pk=pk)
        except SuiteRun.DoesNotExist:
            raise CommandError(f"No stored run with id {pk}", returncode=USAGE_ERROR)
        results = run.results.failing() if failing_only else run.results.all()
        results = results.filter(check_name=check) if check else results
        return {
            'corpus': run.corpus,
            'seed': run.seed,
            'fingerprint': run.fingerprint,
            'summary': run.get_summary(),
            'records': CheckResultSerializer(results, many=True).data,
        }

    def _from_file(self, path):
        serializer = ReportSerializer(data=load_json(path, '--input'))
        if not serializer.is_valid():
            raise CommandError(f"Invalid report '{path}': {json.dumps(serializer.errors, default=str)}",
                               returncode=USAGE_ERROR)
        report = dict(serializer.validated_data)
        report['records'] = [dict(r) for r in report['records']]
        return report
