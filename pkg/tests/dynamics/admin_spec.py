import pytest
from django.contrib import admin
from django.contrib.auth import get_user_model
from django.test import Client, RequestFactory

from dynamics.admin import PipelineRunAdmin, SweepRunAdmin
from dynamics.models import PipelineRun, SweepRun
from tests.dynamics.factories import PipelineRunFactory, SweepRunFactory

User = get_user_model()


def describe_admin_registration():
    def it_registers_sweep_run():
        assert SweepRun in admin.site._registry
        assert isinstance(admin.site._registry[SweepRun], SweepRunAdmin)

    def it_registers_pipeline_run():
        assert PipelineRun in admin.site._registry
        assert isinstance(admin.site._registry[PipelineRun], PipelineRunAdmin)


@pytest.mark.django_db
def describe_sweep_run_admin():
    def it_displays_the_verdict():
        sweep_admin = admin.site._registry[SweepRun]
        assert sweep_admin.passed_display(SweepRunFactory()) is True
        assert sweep_admin.passed_display(SweepRunFactory(failure_count=1)) is False


def describe_pipeline_run_admin():
    def it_refuses_edits():
        pipeline_admin = admin.site._registry[PipelineRun]
        request = RequestFactory().get("/admin/dynamics/pipelinerun/")
        assert pipeline_admin.has_change_permission(request) is False


# ---------------------------------------------------------------------------
# Admin View Integration Tests (HTTP-level)
# ---------------------------------------------------------------------------


@pytest.fixture()
def admin_client():
    """Return a Django test client logged in as a superuser."""
    user = User.objects.create_superuser(
        username="admin-test",
        password="admin-test-pw",
        email="admin-test@example.com",
    )
    client = Client()
    client.force_login(user)
    return client


@pytest.mark.django_db
def describe_admin_views():
    def it_loads_the_sweep_run_changelist(admin_client):
        SweepRunFactory()
        resp = admin_client.get("/admin/dynamics/sweeprun/")
        assert resp.status_code == 200

    def it_filters_the_sweep_run_changelist(admin_client):
        SweepRunFactory(degree=9)
        resp = admin_client.get("/admin/dynamics/sweeprun/?degree=9")
        assert resp.status_code == 200

    def it_loads_a_sweep_run_change_form(admin_client):
        run = SweepRunFactory()
        resp = admin_client.get(f"/admin/dynamics/sweeprun/{run.pk}/change/")
        assert resp.status_code == 200

    def it_loads_the_pipeline_run_changelist(admin_client):
        PipelineRunFactory()
        resp = admin_client.get("/admin/dynamics/pipelinerun/")
        assert resp.status_code == 200

    def it_shows_pipeline_runs_read_only(admin_client):
        run = PipelineRunFactory()
        resp = admin_client.get(f"/admin/dynamics/pipelinerun/{run.pk}/change/")
        assert resp.status_code == 200
        resp = admin_client.post(f"/admin/dynamics/pipelinerun/{run.pk}/change/", {"label": "edited"})
        assert resp.status_code == 403

    def it_searches_pipeline_runs(admin_client):
        PipelineRunFactory(label="swap")
        resp = admin_client.get("/admin/dynamics/pipelinerun/?q=swap")
        assert resp.status_code == 200
