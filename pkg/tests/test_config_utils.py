"""Tests for configuration utilities."""

import json

import pytest

from src.utils.config_utils import (
    DEFAULT_CONFIG,
    clear_config_cache,
    color_enabled,
    get_option,
    list_options,
    load_config,
    options_from_config,
)


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_config_cache()
    yield
    clear_config_cache()


@pytest.fixture
def config_file(tmp_path):
    """Write a partial configuration and return its path."""
    path = tmp_path / 'loomp.json'
    path.write_text(json.dumps({'backend': 'irbuilder', 'num_threads': 4}), encoding='utf-8')
    return str(path)


def test_load_default_config():
    """Test the shipped configuration carries every option."""
    config = load_config()

    assert set(DEFAULT_CONFIG) <= set(config)
    assert config['backend'] == 'shadow'
    assert config['unroll_strategy'] == 'strip-mine-hint'
    assert config['heuristic_factor'] == 2


def test_load_config_is_cached():
    """Test the default configuration is read once."""
    assert load_config() is load_config()


def test_partial_file_keeps_defaults(config_file):
    """Test keys missing from the file take their built-in values."""
    config = load_config(config_file)

    assert config['backend'] == 'irbuilder'
    assert config['num_threads'] == 4
    assert config['step_limit'] == DEFAULT_CONFIG['step_limit']


def test_missing_file_uses_defaults(tmp_path, caplog):
    """Test a missing file logs a warning and falls back to defaults."""
    config = load_config(str(tmp_path / 'absent.json'))

    assert config == DEFAULT_CONFIG
    assert 'Configuration file not found' in caplog.text


def test_invalid_json_raises(tmp_path):
    """Test a malformed file is reported."""
    path = tmp_path / 'broken.json'
    path.write_text('{"backend": ', encoding='utf-8')

    with pytest.raises(json.JSONDecodeError):
        load_config(str(path))


def test_get_option(config_file):
    """Test reading one option and refusing unknown names."""
    config = load_config(config_file)

    assert get_option('num_threads', config) == 4
    assert get_option('color', {}) == 'auto'
    with pytest.raises(ValueError, match="Unknown option 'colour'"):
        get_option('colour', config)


def test_list_options():
    """Test every option name is listed."""
    assert list_options() == ['backend', 'unroll_strategy', 'heuristic_factor', 'num_threads', 'step_limit', 'color']


def test_options_from_config(config_file):
    """Test None overrides are ignored and others win over the file."""
    config = load_config(config_file)

    options = options_from_config(config, backend=None, num_threads=2, heuristic_factor=4)

    assert options.backend == 'irbuilder'
    assert options.num_threads == 2
    assert options.heuristic_factor == 4


def test_options_from_config_validates():
    """Test out-of-range values are refused."""
    with pytest.raises(ValueError, match='Unknown backend'):
        options_from_config({'backend': 'llvm'})
    with pytest.raises(ValueError, match='Thread count'):
        options_from_config({}, num_threads=0)


@pytest.mark.parametrize('mode,is_tty,expected', [
    ('auto', True, True),
    ('auto', False, False),
    ('always', False, True),
    ('never', True, False),
])
def test_color_enabled(mode, is_tty, expected):
    """Test the colour mode against whether stderr is a terminal."""
    assert color_enabled({'color': mode}, is_tty) is expected


def test_color_enabled_unknown_mode():
    """Test an unknown colour mode is refused."""
    with pytest.raises(ValueError, match='Unknown color mode'):
        color_enabled({'color': 'sometimes'})
