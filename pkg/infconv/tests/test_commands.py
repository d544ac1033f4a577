import json
import shutil
import tempfile
from contextlib import redirect_stderr
from io import StringIO
from pathlib import Path

import numpy as np
import pandas as pd
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

import manage
from infconv.management.commands._base import attach_option_values
from infconv.models import SuiteRun

ABS = '{"kind": "norm", "p": 1}'
SQ = '{"kind": "sq", "alpha": 1.0}'
UNIT = '{"kind": "box", "lo": [0.0], "hi": [1.0]}'

HUBER_CASE = {
    'id': 'huber-small',
    'f': {'kind': 'norm', 'p': 1},
    'phi': {'kind': 'sq', 'alpha': 1.0},
    'grid': '-2:2:401',
    'points': [[0.25], [1.0]],
    'expected': [{'point': [1.0], 'set': {'kind': 'interval', 'lo': 1.0, 'hi': 1.0}}],
}


def run(name, *args, **options):
    """Call a command, returning (stdout, stderr)."""
    out, err = StringIO(), StringIO()
    call_command(name, *args, stdout=out, stderr=err, **options)
    return out.getvalue(), err.getvalue()


def frame(text):
    return pd.read_csv(StringIO(text))


class CommandTestMixin:
    def setUp(self):
        self.tmpdir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def assertExitCode(self, code, name, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            run(name, *args, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class GridCommandTest(CommandTestMixin, SimpleTestCase):
    def test_envelope_and_moreau_agree(self):
        """Test that both Huber computations write the same CSV values"""
        brute, _ = run('envelope', f=ABS, phi=SQ, grid='-2:2:401')
        fast, _ = run('moreau', f=ABS, alpha=1.0, grid='-2:2:401')
        brute, fast = frame(brute), frame(fast)
        self.assertEqual(list(brute.columns), ['x0', 'value'])
        self.assertEqual(len(brute), 401)
        np.testing.assert_allclose(fast['value'], brute['value'], atol=1e-9)
        self.assertAlmostEqual(brute['value'][300], 0.75)

    def test_mintime_and_distance(self):
        out, _ = run('mintime', target=UNIT, dynamics='{"kind": "box", "lo": [-0.5], "hi": [0.5]}',
                     grid='-2:3:501')
        values = frame(out)['value']
        self.assertAlmostEqual(values[400], 2.0)
        self.assertEqual(values[250], 0.0)
        out, _ = run('distance', target='{"kind": "ball", "center": [0, 0], "radius": 1}', grid='-2:2:5,-2:2:5')
        plane = frame(out)
        self.assertEqual(list(plane.columns), ['x0', 'x1', 'value'])
        self.assertEqual(len(plane), 25)
        # corners are closest to the grid points (1, 0) and (0, 1) of the disk
        self.assertAlmostEqual(plane['value'].max(), np.sqrt(5))

    def test_out_file_and_spec_files(self):
        """Test reading specs from files and writing the CSV to --out"""
        spec = self.tmpdir / 'f.json'
        spec.write_text(ABS)
        target = self.tmpdir / 'values.csv'
        out, err = run('moreau', f=str(spec), grid='-1:1:21', out=str(target))
        self.assertEqual(out, '')
        self.assertIn('Wrote 21 values', err)
        self.assertEqual(len(frame(target.read_text())), 21)

    def test_negative_grid_as_a_separate_argument(self):
        """Test that '--grid -4:4:1601' is read as the grid, not as an option"""
        spec = self.tmpdir / 'abs.json'
        spec.write_text(ABS)
        target = self.tmpdir / 'env.csv'
        argv = ['manage.py', 'moreau', '--f', str(spec), '--alpha', '1', '--grid', '-4:4:1601', '--out', str(target)]
        with redirect_stderr(StringIO()) as err:
            code = manage.main(argv)
        self.assertEqual(code, 0, err.getvalue())
        values = frame(target.read_text())
        self.assertEqual(len(values), 1601)
        self.assertEqual(values['x0'].iloc[0], -4.0)
        self.assertAlmostEqual(values['value'].iloc[0], 3.75)

    def test_attached_grid_values(self):
        self.assertEqual(attach_option_values(['m', 'distance', '--grid', '-1:1:5,-1:1:5', '--out', 'x.csv'],
                                              ('--grid',)),
                         ['m', 'distance', '--grid=-1:1:5,-1:1:5', '--out', 'x.csv'])
        self.assertEqual(attach_option_values(['m', 'moreau', '--grid', '--out', 'x.csv'], ('--grid',)),
                         ['m', 'moreau', '--grid', '--out', 'x.csv'])
        with redirect_stderr(StringIO()):
            self.assertEqual(manage.main(['manage.py', 'moreau', '--f', ABS, '--grid', '-1:1:1']), 2)

    def test_indicator_specs(self):
        out, _ = run('envelope', f=f'{{"kind": "indicator", "set": {UNIT}}}', phi=SQ, grid='0:1:11')
        self.assertTrue(np.isfinite(frame(out)['value']).all())
        out, _ = run('moreau', f='{"kind": "indicator", "set": {"kind": "points", "points": [[0.0]]}}',
                     grid='0:1:11', alpha=1.0)
        self.assertEqual(frame(out)['value'][0], 0.0)

    def test_usage_errors(self):
        """Test that bad flags exit with code 2"""
        self.assertExitCode(2, 'envelope', f=ABS, phi=SQ, grid='0:1:1')
        self.assertExitCode(2, 'envelope', f='{"kind": "norm", "p": 3}', phi=SQ, grid='0:1:11')
        self.assertExitCode(2, 'envelope', f='{not json', phi=SQ, grid='0:1:11')
        self.assertExitCode(2, 'envelope', f=str(self.tmpdir / 'missing.json'), phi=SQ, grid='0:1:11')
        self.assertExitCode(2, 'envelope', f=ABS, phi=f'{{"kind": "indicator", "set": {UNIT}}}', grid='0:1:11')
        self.assertExitCode(2, 'moreau', f=ABS, alpha=0.0, grid='0:1:11')
        self.assertExitCode(2, 'moreau', f=ABS, grid='0:1:11', threads=0)
        self.assertExitCode(2, 'distance', target='{"kind": "box", "lo": [5.0], "hi": [6.0]}', grid='0:1:11')
        self.assertExitCode(2, 'mintime', target=UNIT, dynamics='{"kind": "box", "lo": [0.0], "hi": [1.0]}',
                            grid='0:1:11')


class CheckCommandTest(CommandTestMixin, TestCase):
    def test_builtin_corpus_passes(self):
        """Test that the builtin corpus reports no fail and no error records"""
        out, err = run('check', threads=2)
        report = json.loads(out)
        self.assertEqual(report['corpus'], 'builtin')
        self.assertEqual(report['summary']['fail'], 0)
        self.assertEqual(report['summary']['error'], 0)
        self.assertGreater(report['summary']['pass'], 0)
        self.assertIn('total:', err)
        checks = {r['check'] for r in report['records']}
        self.assertEqual(len(checks), 16)

    def test_subset_is_reproducible_as_csv(self):
        first, _ = run('check', checks='domain_in_s0,ekeland', seed=5, format='csv')
        second, _ = run('check', checks='domain_in_s0, ekeland', seed=5, format='csv', threads=1)
        self.assertEqual(first, second)
        rows = frame(first)
        self.assertEqual(set(rows['check']), {'domain_in_s0', 'ekeland'})
        self.assertEqual(list(rows.columns)[:4], ['check', 'case', 'point', 'verdict'])

    def test_inline_corpus_with_malformed_case(self):
        """Test that a malformed case gives an error record and exit code 1"""
        corpus = json.dumps([HUBER_CASE, dict(HUBER_CASE, id='bad', grid='oops')])
        target = self.tmpdir / 'report.json'
        self.assertExitCode(1, 'check', corpus=corpus, checks='strict_differentiability', out=str(target))
        report = json.loads(target.read_text())
        self.assertEqual(report['corpus'], 'inline')
        verdicts = {(r['case'], r['check']): r['verdict'] for r in report['records']}
        self.assertEqual(verdicts[('bad', 'case')], 'error')
        self.assertEqual(report['summary']['error'], 1)

    def test_corpus_from_file(self):
        path = self.tmpdir / 'corpus.json'
        path.write_text(json.dumps([HUBER_CASE]))
        out, _ = run('check', corpus=str(path), checks='projection_inclusion,union_inclusion')
        report = json.loads(out)
        self.assertEqual(report['corpus'], str(path))
        self.assertEqual({r['verdict'] for r in report['records']}, {'pass'})

    def test_usage_errors(self):
        self.assertExitCode(2, 'check', checks='frechet_formula,telepathy')
        self.assertExitCode(2, 'check', tol=['closeness=1'])
        self.assertExitCode(2, 'check', tol=['hausdorff'])
        self.assertExitCode(2, 'check', corpus=str(self.tmpdir / 'nothing.json'))
        self.assertExitCode(2, 'check', corpus='{"id": "not-a-list"}')
        self.assertExitCode(2, 'check', threads=0)

    def test_system_checks_still_run(self):
        """Test that app labels hand over to Django's system check framework"""
        out, _ = run('check', 'infconv')
        self.assertIn('no issues', out)


class ReportCommandTest(CommandTestMixin, TestCase):
    def setUp(self):
        super().setUp()
        corpus = json.dumps([HUBER_CASE])
        self.report_path = self.tmpdir / 'report.json'
        _, err = run('check', corpus=corpus, checks='wellposedness,frechet_formula,domain_in_s0',
                     out=str(self.report_path), store=True)
        self.run_id = SuiteRun.objects.get().pk
        self.assertIn(f'Stored run {self.run_id}', err)

    def test_stored_run_as_csv(self):
        out, _ = run('report', run=self.run_id)
        rows = frame(out)
        self.assertEqual(len(rows), 5)
        self.assertEqual(set(rows['verdict']), {'skip'})

    def test_stored_run_filters(self):
        out, _ = run('report', run=self.run_id, format='json', check='wellposedness')
        report = json.loads(out)
        self.assertEqual(len(report['records']), 2)
        self.assertEqual(report['summary']['skip'], 5)
        out, _ = run('report', run=self.run_id, format='json', failing=True)
        self.assertEqual(json.loads(out)['records'], [])

    def test_report_file(self):
        """Test that a report file is validated and re-emitted"""
        out, _ = run('report', input=str(self.report_path), format='json')
        self.assertEqual(json.loads(out), json.loads(self.report_path.read_text()))
        target = self.tmpdir / 'report.csv'
        run('report', input=str(self.report_path), out=str(target))
        self.assertEqual(len(frame(target.read_text())), 5)

    def test_errors(self):
        self.assertExitCode(2, 'report', run=self.run_id + 100)
        broken = self.tmpdir / 'broken.json'
        broken.write_text(json.dumps({'corpus': 'x', 'records': []}))
        self.assertExitCode(2, 'report', input=str(broken))
