"""
End-to-end tests through the command-line interface
"""

import json
import shutil

import pytest
import requests
import yaml
from click.testing import CliRunner
from freezegun import freeze_time

from src.runner.cli import EXIT_DEGRADED, EXIT_SEED_FAILED, cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_config(tmp_path):
    def _write(**fields):
        data = {
            'name': 'cli-ants',
            'scenario': 'ants',
            'steps': 30,
            'population': 4,
            'controller_mix': [{'kind': 'rule_based', 'count': 2}, {'kind': 'scripted_oracle', 'count': 2}],
            'seeds': [1, 2],
        }
        data.update(fields)
        path = tmp_path / f"{data['name']}.yaml"
        path.write_text(yaml.safe_dump(data), encoding='utf-8')
        return path
    return _write


def _files(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob('*')) if p.is_file()}


class TestRun:
    @freeze_time('2026-03-01 12:00:00')
    def test_reruns_write_identical_files(self, runner, write_config, tmp_path):
        config = write_config()
        for name in ('a', 'b'):
            result = runner.invoke(cli, ['run', '--config', str(config), '--out', str(tmp_path / name), '--no-progress'])
            assert result.exit_code == 0, result.output
            assert 'seed 1: completed' in result.output

        first, second = _files(tmp_path / 'a'), _files(tmp_path / 'b')
        assert 'seed_2/calls.jsonl' in first
        assert first == second

    @freeze_time('2026-03-01 12:00:00')
    def test_manifest_records_the_run(self, runner, write_config, tmp_path):
        config = write_config()
        runner.invoke(cli, ['run', '--config', str(config), '--out', str(tmp_path / 'out'), '--no-progress'])

        manifest = json.loads((tmp_path / 'out' / 'manifest.json').read_text(encoding='utf-8'))
        assert manifest['started_at'] == '2026-03-01T12:00:00+00:00'
        assert manifest['finished_at'] == '2026-03-01T12:00:00+00:00'
        assert manifest['status'] == 'completed'
        assert manifest['template'] == 'ants/v9'
        assert manifest['config']['steps'] == 30
        assert manifest['seeds']['1']['outputs']['agents'] == 'seed_1/agents.jsonl'

    def test_flag_overrides(self, runner, write_config, tmp_path):
        config = write_config()
        result = runner.invoke(cli, [
            'run', '--config', str(config), '--out', str(tmp_path / 'out'), '--no-progress',
            '--seed', '7', '--controller-mix', 'rule_based:3,decision_table:1', '--template', 'ants/v8',
        ])
        assert result.exit_code == 0, result.output
        manifest = json.loads((tmp_path / 'out' / 'manifest.json').read_text(encoding='utf-8'))
        assert list(manifest['seeds']) == ['7']
        assert manifest['template'] == 'ants/v8'
        assert [e['kind'] for e in manifest['config']['controller_mix']] == ['rule_based', 'decision_table']

    def test_invalid_config_is_reported(self, runner, write_config, tmp_path):
        config = write_config(population=5)
        result = runner.invoke(cli, ['run', '--config', str(config), '--out', str(tmp_path / 'out')])
        assert result.exit_code == 1
        assert 'controller_mix' in result.output
        assert not (tmp_path / 'out').exists()

    def test_missing_config_file(self, runner, tmp_path):
        result = runner.invoke(cli, ['run', '--config', str(tmp_path / 'nope.yaml')])
        assert result.exit_code == 1
        assert 'config file not found' in result.output

    def test_failed_seed_exit_status(self, runner, write_config, mocker, tmp_path):
        mocker.patch('src.runner.experiment.Engine.run', side_effect=RuntimeError('boom'))
        result = runner.invoke(cli, ['run', '--config', str(write_config()), '--out', str(tmp_path / 'out'),
                                     '--no-progress'])
        assert result.exit_code == EXIT_SEED_FAILED
        assert 'RuntimeError: boom' in result.output
        manifest = json.loads((tmp_path / 'out' / 'manifest.json').read_text(encoding='utf-8'))
        assert manifest['status'] == 'failed'


class TestDegradedRun:
    @pytest.fixture
    def remote_config(self, write_config, monkeypatch, mocker):
        monkeypatch.setenv('OPENAI_API_KEY', 'sk-test')
        session = mocker.Mock(spec=requests.Session)
        session.post.side_effect = requests.exceptions.ConnectionError('connection refused')
        mocker.patch('src.llm.client.requests.Session', return_value=session)
        return write_config(
            name='cli-flock', scenario='flocking', steps=5, population=4, seeds=[1],
            controller_mix=[{'kind': 'rule_based', 'count': 2}, {'kind': 'llm_remote', 'count': 2}],
            llm={'base_url': 'http://stub.test/v1', 'max_retries': 0, 'backoff_base': 0},
        )

    def test_degraded_run_completes(self, runner, remote_config, tmp_path):
        result = runner.invoke(cli, ['run', '--config', str(remote_config), '--out', str(tmp_path / 'out'),
                                     '--no-progress'])
        assert result.exit_code == 0, result.output
        assert '(10 fallback decisions)' in result.output

    def test_fail_on_degraded(self, runner, remote_config, tmp_path):
        result = runner.invoke(cli, ['run', '--config', str(remote_config), '--out', str(tmp_path / 'out'),
                                     '--no-progress', '--fail-on-degraded'])
        assert result.exit_code == EXIT_DEGRADED
        manifest = json.loads((tmp_path / 'out' / 'manifest.json').read_text(encoding='utf-8'))
        assert manifest['status'] == 'degraded'


class TestValidatePrompts:
    def test_shipped_golden_texts_match(self, runner):
        result = runner.invoke(cli, ['validate-prompts'])
        assert result.exit_code == 0, result.output
        assert 'PASS  ants/v9 (system)' in result.output
        assert 'all prompts match' in result.output

    def test_edited_golden_text_fails(self, runner, golden_dir, tmp_path):
        golden = tmp_path / 'golden'
        shutil.copytree(golden_dir, golden)
        path = golden / 'flocking_v5.user.txt'
        path.write_bytes(path.read_bytes().replace(b'Current heading', b'Current  heading'))

        result = runner.invoke(cli, ['validate-prompts', '--golden', str(golden)])
        assert result.exit_code == 1
        assert 'FAIL  flocking/v5 (user)' in result.output
        assert 'prompt mismatch' in result.output


class TestShowConfig:
    def test_prints_masked_settings(self, runner, monkeypatch):
        monkeypatch.setenv('OPENAI_API_KEY', 'sk-test-4321')
        result = runner.invoke(cli, ['show-config', '--llm'])
        assert result.exit_code == 0, result.output
        assert '***4321' in result.output
        assert 'configuration ok' in result.output

    def test_missing_key_with_llm(self, runner, monkeypatch):
        monkeypatch.delenv('OPENAI_API_KEY', raising=False)
        result = runner.invoke(cli, ['show-config', '--llm'])
        assert result.exit_code == 1
        assert 'OPENAI_API_KEY is required' in result.output


class TestSummarize:
    def test_empty_directory(self, runner, tmp_path):
        result = runner.invoke(cli, ['summarize', '--in', str(tmp_path)])
        assert result.exit_code == 1
        assert 'no runs found' in result.output

    def test_ant_run_summary(self, runner, write_config, tmp_path):
        out = tmp_path / 'out'
        runner.invoke(cli, ['run', '--config', str(write_config(steps=200)), '--out', str(out), '--no-progress'])

        result = runner.invoke(cli, ['summarize', '--in', str(out)])
        assert result.exit_code == 0, result.output
        assert 'cli-ants: 2 run(s)' in result.output
        assert 'final_food' in result.output
        assert (out / 'summary.csv').is_file()

    def test_flock_run_summary(self, runner, write_config, tmp_path):
        out = tmp_path / 'out'
        config = write_config(name='cli-flock', scenario='flocking', steps=10, population=6, seeds=[1],
                              controller_mix=[{'kind': 'rule_based', 'count': 6}])
        runner.invoke(cli, ['run', '--config', str(config), '--out', str(out), '--no-progress'])

        result = runner.invoke(cli, ['summarize', '--in', str(out)])
        assert result.exit_code == 0, result.output
        assert 'rule birds' in result.output
        assert 'collisions' in result.output
