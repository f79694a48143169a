# Generated by Django 5.1 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="PipelineRun",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("label", models.CharField(blank=True, max_length=255)),
                ("interval_count", models.PositiveIntegerField()),
                ("x0", models.CharField(help_text='Exact rational as "p/q"', max_length=255)),
                ("period", models.PositiveIntegerField()),
                ("minimal_period", models.PositiveIntegerField()),
                ("report", models.JSONField(default=dict)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "verbose_name": "Pipeline Run",
                "verbose_name_plural": "Pipeline Runs",
                "ordering": ["-created_at"],
            },
        ),
        migrations.CreateModel(
            name="SweepRun",
            fields=[
                ("id", models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name="ID")),
                ("degree", models.PositiveIntegerField()),
                (
                    "mode",
                    models.CharField(
                        choices=[("exhaustive", "Exhaustive"), ("random", "Random")],
                        default="exhaustive",
                        max_length=20,
                    ),
                ),
                (
                    "properties",
                    models.CharField(blank=True, help_text="Comma-separated property names", max_length=255),
                ),
                ("seed", models.BigIntegerField(blank=True, null=True)),
                ("samples", models.PositiveIntegerField(blank=True, null=True)),
                ("total", models.PositiveIntegerField(default=0)),
                ("failure_count", models.PositiveIntegerField(default=0)),
                ("failures", models.JSONField(blank=True, default=list)),
                ("histogram", models.JSONField(blank=True, default=dict)),
                ("elapsed_seconds", models.FloatField(default=0.0)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "verbose_name": "Sweep Run",
                "verbose_name_plural": "Sweep Runs",
                "ordering": ["-created_at"],
                "indexes": [models.Index(fields=["degree", "mode"], name="sweeprun_degree_mode_idx")],
            },
        ),
    ]
