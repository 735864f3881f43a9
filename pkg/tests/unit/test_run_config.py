"""
Unit tests for run configuration loading and validation
"""

import pytest
import yaml

from src.llm.controllers import ControllerKind
from src.runner.run_config import build_run_config, load_run_config, parse_controller_mix
from src.utils.config import Config
from src.utils.errors import ConfigurationError


def test_defaults_fill_template_and_params(make_config):
    config = make_config()
    assert config.prompt_template == 'ants/v9'
    assert config.ant_params.pheromone_deposit == 60.0
    assert not config.uses_remote

    flock = make_config(scenario='flocking', population=3, controller_mix=[{'kind': 'rule_based', 'count': 3}])
    assert flock.prompt_template == 'flocking/v5'


@pytest.mark.parametrize('fields, key', [
    ({'population': 5}, 'controller_mix'),
    ({'prompt_template': 'ants/v42'}, 'prompt_template'),
    ({'prompt_template': 'flocking/v5'}, 'prompt_template'),
    ({'controller_mix': [{'kind': 'scripted_oracle', 'count': 4}], 'prompt_template': 'ants/v2'}, 'prompt_template'),
    ({'controller_mix': [{'kind': 'llm_remote', 'count': 4}]}, 'llm'),
    ({'controller_mix': [{'kind': 'telepathy', 'count': 4}]}, 'controller_mix'),
    ({'seeds': [1, 1]}, 'seeds'),
    ({'seeds': [-3]}, 'seeds'),
    ({'steps': 0}, 'steps'),
    ({'flock_params': {'minimum_separation': 9.0}}, 'flock_params'),
    ({'colour': 'blue'}, 'colour'),
])
def test_invalid_configs_name_the_key(make_config, fields, key):
    with pytest.raises(ConfigurationError) as excinfo:
        make_config(**fields)
    assert key in str(excinfo.value)


def test_llm_block_without_remote_controllers_is_accepted(make_config):
    config = make_config(llm={'model': 'gpt-4o', 'temperature': 0})
    assert config.llm.model == 'gpt-4o'
    assert not config.uses_remote


def test_remote_config(make_config):
    config = make_config(
        controller_mix=[{'kind': 'rule_based', 'count': 2}, {'kind': 'llm_remote', 'count': 2}],
        llm={'base_url': 'http://localhost:8000/v1', 'model': 'local', 'max_retries': 1},
    )
    assert config.uses_remote
    assert config.llm.max_retries == 1
    assert config.controller_mix[1].kind == ControllerKind.LLM_REMOTE


def test_digest_ignores_key_order(make_config):
    a = build_run_config({'scenario': 'ants', 'steps': 5, 'population': 1, 'seeds': [1, 2],
                          'controller_mix': [{'kind': 'rule_based', 'count': 1}]})
    b = build_run_config({'controller_mix': [{'count': 1, 'kind': 'rule_based'}], 'seeds': [1, 2],
                          'population': 1, 'steps': 5, 'scenario': 'ants'})
    assert a.digest() == b.digest()
    assert a.digest() != make_config(steps=6).digest()


def test_overrides_replace_file_values_and_skip_none(make_config):
    config = build_run_config(
        {'scenario': 'ants', 'steps': 5, 'population': 2, 'seeds': [1, 2, 3],
         'controller_mix': [{'kind': 'rule_based', 'count': 2}]},
        {'seeds': [7], 'prompt_template': None},
    )
    assert config.seeds == [7]
    assert config.prompt_template == 'ants/v9'


class TestControllerMixFlag:
    def test_parses_pairs(self):
        assert parse_controller_mix('rule_based:25, scripted_oracle:5') == [
            {'kind': 'rule_based', 'count': 25},
            {'kind': 'scripted_oracle', 'count': 5},
        ]

    @pytest.mark.parametrize('spec', ['', 'rule_based', 'rule_based:many'])
    def test_rejects_malformed(self, spec):
        with pytest.raises(ConfigurationError):
            parse_controller_mix(spec)


class TestLoadFile:
    def test_shipped_configs_are_valid(self):
        paths = sorted(Config.CONFIG_DIR.glob('*.yaml'))
        assert paths
        for path in paths:
            config = load_run_config(path)
            assert config.steps > 0

    def test_yaml_file(self, tmp_path):
        path = tmp_path / 'run.yaml'
        path.write_text(yaml.safe_dump({
            'name': 'tiny', 'scenario': 'flocking', 'steps': 3, 'population': 2,
            'controller_mix': [{'kind': 'rule_based', 'count': 1}, {'kind': 'scripted_oracle', 'count': 1}],
        }), encoding='utf-8')
        config = load_run_config(path)
        assert config.name == 'tiny'
        assert config.seeds == [0]

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match='not found'):
            load_run_config(tmp_path / 'nope.yaml')

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / 'list.yaml'
        path.write_text('- 1\n- 2\n', encoding='utf-8')
        with pytest.raises(ConfigurationError):
            load_run_config(path)

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / 'bad.yaml'
        path.write_text('scenario: [ants\n', encoding='utf-8')
        with pytest.raises(ConfigurationError):
            load_run_config(path)
