import math

from django.core.exceptions import ValidationError
from django.test import TestCase

from infconv.harness import CheckRecord, CheckReport
from infconv.models import CheckResult, SuiteRun
from infconv.serializers import CheckResultSerializer


def sample_report():
    records = [
        CheckRecord('transfer_inequality', 'unit-interval-abs', verdict='pass', measured={'worst_excess': 0.0},
                    tolerance=1e-9, margin=1e-9),
        CheckRecord('frechet_formula', 'huber', (0.0,), verdict='skip', note='needs declared constants with m > l'),
        CheckRecord('segment_identity', 'zero-l1', (1.0,), verdict='fail', measured={'worst_gap': math.inf},
                    tolerance=1e-8, margin=-math.inf),
        CheckRecord('case', 'broken', verdict='error', note='invalid case'),
    ]
    return CheckReport(records, 3, 'inline', 'a' * 64)


class SuiteRunTest(TestCase):
    def setUp(self):
        self.run = SuiteRun.objects.create_from_report(sample_report())

    def test_records_are_stored_in_order(self):
        """Test that every record becomes a row, keeping report order"""
        results = list(self.run.results.all())
        self.assertEqual([r.position for r in results], [0, 1, 2, 3])
        self.assertEqual(results[1].check_name, 'frechet_formula')
        self.assertEqual(results[1].point, [0.0])
        self.assertEqual(str(results[0]), 'transfer_inequality unit-interval-abs pass')

    def test_infinite_numbers(self):
        """Test that infinite tolerances and margins are stored as null"""
        failing = self.run.results.get(check_name='segment_identity')
        self.assertIsNone(failing.margin)
        self.assertEqual(failing.tolerance, 1e-8)
        self.assertEqual(failing.measured, {'worst_gap': 'inf'})

    def test_summary_and_failing(self):
        self.assertEqual(self.run.get_summary(), {'pass': 1, 'fail': 1, 'skip': 1, 'error': 1, 'total': 4})
        self.assertEqual(self.run.results.failing().count(), 2)
        self.assertEqual(CheckResult.objects.failing().count(), 2)
        self.assertFalse(self.run.passed)

    def test_passing_run(self):
        report = CheckReport(sample_report().records[:2], 0, 'inline', 'b' * 64)
        run = SuiteRun.objects.create_from_report(report)
        self.assertTrue(run.passed)
        self.assertEqual(SuiteRun.objects.first(), run)

    def test_fingerprint_must_be_a_digest(self):
        with self.assertRaises(ValidationError):
            SuiteRun.objects.create(corpus='builtin', seed=0, fingerprint='abc')

    def test_delete_cascades(self):
        self.run.delete()
        self.assertEqual(CheckResult.objects.count(), 0)

    def test_serializer_uses_report_keys(self):
        """Test that stored rows serialize back with the report's record keys"""
        data = CheckResultSerializer(self.run.results.all(), many=True).data
        self.assertEqual(data[3]['check'], 'case')
        self.assertEqual(set(data[0]), {'check', 'anchor', 'case', 'point', 'verdict', 'mode', 'measured',
                                        'tolerance', 'margin', 'note'})
