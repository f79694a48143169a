from __future__ import annotations

from django.contrib import admin
from django.http import HttpRequest
from unfold.admin import ModelAdmin

from .models import PipelineRun, SweepRun

# ---------------------------------------------------------------------------
# SweepRunAdmin
# ---------------------------------------------------------------------------


@admin.register(SweepRun)
class SweepRunAdmin(ModelAdmin):
    list_display = ["degree", "mode", "properties", "total", "failure_count", "passed_display", "created_at"]
    list_filter = ["mode", "degree"]
    search_fields = ["properties"]
    readonly_fields = ["created_at", "elapsed_seconds"]
    fieldsets = [
        (
            "Campaign",
            {
                "fields": ["degree", "mode", "properties", "seed", "samples"],
            },
        ),
        (
            "Outcome",
            {
                "fields": ["total", "failure_count", "failures", "histogram", "elapsed_seconds", "created_at"],
            },
        ),
    ]

    @admin.display(boolean=True, description="Passed")
    def passed_display(self, obj: SweepRun) -> bool:
        return obj.is_passed


# ---------------------------------------------------------------------------
# PipelineRunAdmin
# ---------------------------------------------------------------------------


@admin.register(PipelineRun)
class PipelineRunAdmin(ModelAdmin):
    list_display = ["__str__", "interval_count", "x0", "period", "minimal_period", "created_at"]
    list_filter = ["period", "interval_count"]
    search_fields = ["label", "x0"]
    readonly_fields = ["created_at"]

    def has_change_permission(self, request: HttpRequest, obj: PipelineRun | None = None) -> bool:
        return False
