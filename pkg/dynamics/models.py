from __future__ import annotations

from typing import TYPE_CHECKING

from django.db import models

if TYPE_CHECKING:
    from .interval_systems import PipelineReport
    from .lemma_lab import SweepReport


# ---------------------------------------------------------------------------
# SweepRun
# ---------------------------------------------------------------------------


class SweepRunQuerySet(models.QuerySet):
    def passed(self) -> SweepRunQuerySet:
        return self.filter(failure_count=0)

    def failed(self) -> SweepRunQuerySet:
        return self.filter(failure_count__gt=0)

    def for_degree(self, degree: int) -> SweepRunQuerySet:
        return self.filter(degree=degree)


class SweepRun(models.Model):
    """A saved verification campaign: its parameters, failures and sequence histogram."""

    class Mode(models.TextChoices):
        EXHAUSTIVE = "exhaustive", "Exhaustive"
        RANDOM = "random", "Random"

    degree = models.PositiveIntegerField()
    mode = models.CharField(max_length=20, choices=Mode.choices, default=Mode.EXHAUSTIVE)
    properties = models.CharField(max_length=255, blank=True, help_text="Comma-separated property names")
    seed = models.BigIntegerField(null=True, blank=True)
    samples = models.PositiveIntegerField(null=True, blank=True)
    total = models.PositiveIntegerField(default=0)
    failure_count = models.PositiveIntegerField(default=0)
    failures = models.JSONField(default=list, blank=True)
    histogram = models.JSONField(default=dict, blank=True)
    elapsed_seconds = models.FloatField(default=0.0)
    created_at = models.DateTimeField(auto_now_add=True)

    objects = SweepRunQuerySet.as_manager()

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Sweep Run"
        verbose_name_plural = "Sweep Runs"
        indexes = [models.Index(fields=["degree", "mode"], name="sweeprun_degree_mode_idx")]

    def __str__(self) -> str:
        verdict = "pass" if self.is_passed else f"{self.failure_count} failures"
        return f"n={self.degree} {self.mode} [{self.properties or '-'}]: {verdict}"

    @property
    def is_passed(self) -> bool:
        return self.failure_count == 0

    @classmethod
    def from_report(cls, report: SweepReport) -> SweepRun:
        """Unsaved instance mirroring the report."""
        data = report.to_dict()
        return cls(
            degree=report.n,
            mode=report.mode,
            properties=",".join(report.properties),
            seed=report.seed,
            samples=report.samples,
            total=report.total,
            failure_count=len(report.failures),
            failures=data["failures"],
            histogram=data["histogram"],
            elapsed_seconds=report.elapsed,
        )


# ---------------------------------------------------------------------------
# PipelineRun
# ---------------------------------------------------------------------------


class PipelineRunQuerySet(models.QuerySet):
    def with_period(self, period: int) -> PipelineRunQuerySet:
        return self.filter(period=period)


class PipelineRun(models.Model):
    label = models.CharField(max_length=255, blank=True)
    interval_count = models.PositiveIntegerField()
    x0 = models.CharField(max_length=255, help_text='Exact rational as "p/q"')
    period = models.PositiveIntegerField()
    minimal_period = models.PositiveIntegerField()
    report = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    objects = PipelineRunQuerySet.as_manager()

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Pipeline Run"
        verbose_name_plural = "Pipeline Runs"

    def __str__(self) -> str:
        name = self.label or f"k={self.interval_count}"
        return f"{name}: x0 = {self.x0}, period {self.period}"

    @classmethod
    def from_report(cls, report: PipelineReport, label: str = "") -> PipelineRun:
        return cls(
            label=label,
            interval_count=report.system.k,
            x0=str(report.point.x0),
            period=report.point.period,
            minimal_period=report.point.minimal_period,
            report=report.to_dict(),
        )
