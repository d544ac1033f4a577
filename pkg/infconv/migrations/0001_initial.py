# Generated by Django 5.2.5 on 2026-10-19 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SuiteRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('corpus', models.CharField(max_length=100)),
                ('seed', models.IntegerField(default=0)),
                ('fingerprint', models.CharField(db_index=True, max_length=64)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.CreateModel(
            name='CheckResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.PositiveIntegerField()),
                ('check_name', models.CharField(db_index=True, max_length=50)),
                ('anchor', models.TextField()),
                ('case', models.CharField(max_length=100)),
                ('point', models.JSONField(blank=True, null=True)),
                ('verdict', models.CharField(choices=[('pass', 'Pass'), ('fail', 'Fail'), ('skip', 'Skip'), ('error', 'Error')], db_index=True, max_length=10)),
                ('mode', models.CharField(max_length=30)),
                ('measured', models.JSONField(blank=True, default=dict)),
                ('tolerance', models.FloatField(blank=True, null=True)),
                ('margin', models.FloatField(blank=True, null=True)),
                ('note', models.TextField(blank=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='infconv.suiterun')),
            ],
            options={
                'ordering': ['run', 'position'],
                'indexes': [models.Index(fields=['run', 'verdict'], name='infconv_che_run_id_5b1f0e_idx'), models.Index(fields=['check_name', 'verdict'], name='infconv_che_check_n_8a2c41_idx')],
            },
        ),
    ]
