"""
Unit tests for the prompt registry and the golden-text check
"""

import shutil

import pytest

from src.llm.registry import (
    GOLDEN_CASES,
    REGISTRY,
    example_ant_snapshot,
    get_template,
    template_hashes,
    validate_prompts,
)
from src.utils.errors import ConfigurationError


@pytest.fixture
def golden_copy(golden_dir, tmp_path):
    target = tmp_path / 'golden'
    shutil.copytree(golden_dir, target)
    return target


def test_registry_matches_golden_texts(golden_dir):
    report = validate_prompts(golden_dir)
    assert report.passed, report.failures
    assert len(report.checks) == 2 * len(GOLDEN_CASES)


def test_one_byte_edit_is_detected(golden_copy):
    path = golden_copy / 'ants_v9.system.txt'
    text = path.read_text(encoding='utf-8')
    path.write_text(text.replace('under 45 tokens', 'under 46 tokens'), encoding='utf-8')

    report = validate_prompts(golden_copy)

    assert not report.passed
    assert report.failures == ['ants/v9 (system)']


def test_trailing_newline_counts(golden_copy):
    path = golden_copy / 'flocking_v5.user.txt'
    path.write_bytes(path.read_bytes() + b'\n')
    assert validate_prompts(golden_copy).failures == ['flocking/v5 (user)']


def test_missing_golden_file(golden_copy):
    (golden_copy / 'flocking_v1.system.txt').unlink()
    with pytest.raises(ConfigurationError, match='flocking_v1.system.txt'):
        validate_prompts(golden_copy)


def test_templates_cover_every_iteration():
    assert sorted(name for name in REGISTRY if name.startswith('ants/')) == [f'ants/v{i}' for i in range(1, 10)]
    assert sorted(name for name in REGISTRY if name.startswith('flocking/')) == [
        f'flocking/v{i}' for i in range(1, 6)
    ]
    assert set(template_hashes()) == set(REGISTRY)


def test_numeric_iterations_are_not_oracle_readable():
    assert not get_template('ants/v3').oracle_readable
    assert get_template('ants/v5').oracle_readable
    assert get_template('flocking/v1').oracle_readable


def test_unknown_or_mismatched_template():
    with pytest.raises(ConfigurationError):
        get_template('ants/v99')
    with pytest.raises(ConfigurationError):
        get_template('ants/v9', scenario='flocking')


def test_render_uses_version_layout():
    snapshot = example_ant_snapshot()
    assert get_template('ants/v9').render(snapshot).startswith('This is your current environment: \n')
    assert get_template('ants/v6').render(snapshot).startswith('Current environment:\n    -Higher Pheromone')
    assert '196.84' in get_template('ants/v2').render(snapshot)
