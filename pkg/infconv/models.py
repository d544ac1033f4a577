import logging
import math

from django.core.exceptions import ValidationError
from django.db import models, transaction
from django.db.models import Count

logger = logging.getLogger('infconv')


def _finite_or_none(value):
    if value is None or isinstance(value, str):
        return None
    value = float(value)
    return value if math.isfinite(value) else None


class SuiteRunManager(models.Manager):
    @transaction.atomic
    def create_from_report(self, report):
        """Store a CheckReport with one CheckResult row per record."""
        run = self.create(corpus=report.corpus, seed=report.seed, fingerprint=report.fingerprint)
        rows = []
        for position, record in enumerate(report.records):
            data = record.to_dict()
            rows.append(CheckResult(
                run=run,
                position=position,
                check_name=data['check'],
                anchor=data['anchor'],
                case=data['case'],
                point=data['point'],
                verdict=data['verdict'],
                mode=data['mode'],
                measured=data['measured'],
                tolerance=_finite_or_none(data['tolerance']),
                margin=_finite_or_none(data['margin']),
                note=data['note'],
            ))
        CheckResult.objects.bulk_create(rows)
        logger.info(f"stored suite run {run.pk} ({len(rows)} records, corpus '{run.corpus}')")
        return run


class CheckResultManager(models.Manager):
    def failing(self):
        """Records that fail or error"""
        return self.filter(verdict__in=[CheckResult.FAIL, CheckResult.ERROR])


class SuiteRun(models.Model):
    """
    One stored execution of the check suite.

    The fingerprint identifies the corpus and seed, so two runs with the
    same fingerprint and tolerances hold the same records.
    """
    objects = SuiteRunManager()

    corpus = models.CharField(max_length=100)
    seed = models.IntegerField(default=0)
    fingerprint = models.CharField(max_length=64, db_index=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"Run {self.pk}: {self.corpus} (seed {self.seed})"

    def clean(self):
        super().clean()
        if len(self.fingerprint) != 64:
            raise ValidationError('Fingerprint must be a sha256 hex digest')

    def save(self, *args, **kwargs):
        self.full_clean()
        super().save(*args, **kwargs)

    def get_summary(self):
        counts = {verdict: 0 for verdict, _ in CheckResult.VERDICT_CHOICES}
        for row in self.results.order_by().values('verdict').annotate(total=Count('id')):
            counts[row['verdict']] = row['total']
        counts['total'] = sum(counts.values())
        return counts

    @property
    def passed(self):
        return not self.results.failing().exists()


class CheckResult(models.Model):
    PASS, FAIL, SKIP, ERROR = 'pass', 'fail', 'skip', 'error'
    VERDICT_CHOICES = [
        (PASS, 'Pass'),
        (FAIL, 'Fail'),
        (SKIP, 'Skip'),
        (ERROR, 'Error'),
    ]

    objects = CheckResultManager()

    run = models.ForeignKey(SuiteRun, on_delete=models.CASCADE, related_name='results')
    position = models.PositiveIntegerField()
    check_name = models.CharField(max_length=50, db_index=True)
    anchor = models.TextField()
    case = models.CharField(max_length=100)
    point = models.JSONField(null=True, blank=True)
    verdict = models.CharField(max_length=10, choices=VERDICT_CHOICES, db_index=True)
    mode = models.CharField(max_length=30)
    measured = models.JSONField(default=dict, blank=True)
    tolerance = models.FloatField(null=True, blank=True)
    margin = models.FloatField(null=True, blank=True)
    note = models.TextField(blank=True)

    class Meta:
        ordering = ['run', 'position']
        indexes = [
            models.Index(fields=['run', 'verdict'], name='infconv_che_run_id_5b1f0e_idx'),
            models.Index(fields=['check_name', 'verdict'], name='infconv_che_check_n_8a2c41_idx'),
        ]

    def __str__(self):
        return f"{self.check_name} {self.case} {self.verdict}"
