"""Configuration utilities for user-tunable pipeline defaults."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..config import (
    DEFAULT_BACKEND,
    DEFAULT_NUM_THREADS,
    DEFAULT_STEP_LIMIT,
    DEFAULT_UNROLL_STRATEGY,
    HEURISTIC_UNROLL_FACTOR,
)
from ..models.TransformOptions import TransformOptions

logger = logging.getLogger(__name__)

COLOR_MODES = ('auto', 'always', 'never')

DEFAULT_CONFIG = {
    'backend': DEFAULT_BACKEND,
    'unroll_strategy': DEFAULT_UNROLL_STRATEGY,
    'heuristic_factor': HEURISTIC_UNROLL_FACTOR,
    'num_threads': DEFAULT_NUM_THREADS,
    'step_limit': DEFAULT_STEP_LIMIT,
    'color': 'auto',
}

# Cache for the default configuration file
_config_cache: Optional[Dict] = None


def default_config_path() -> Path:
    return Path(__file__).parent.parent.parent / "config" / "loomp.json"


def load_config(config_path: Optional[str] = None) -> Dict:
    """Load pipeline defaults from a JSON file.

    Keys missing from the file take their built-in defaults.

    Args:
        config_path: Optional path to config file. Uses config/loomp.json if None.

    Returns:
        Dict: Configuration with every option present

    Raises:
        json.JSONDecodeError: If the file is not valid JSON
    """
    global _config_cache

    if _config_cache is not None and config_path is None:
        return _config_cache

    path = Path(config_path) if config_path is not None else default_config_path()
    config = dict(DEFAULT_CONFIG)

    try:
        with open(path, 'r', encoding='utf-8') as f:
            config.update(json.load(f))
        logger.debug(f"Loaded configuration from {path}")
    except FileNotFoundError:
        logger.warning(f"Configuration file not found: {path}; using built-in defaults")
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing configuration {path}: {e}")
        raise

    if config_path is None:
        _config_cache = config
    return config


def clear_config_cache() -> None:
    global _config_cache
    _config_cache = None


def get_option(name: str, config: Optional[Dict] = None) -> Any:
    """Get one configuration value.

    Raises:
        ValueError: If the option name is unknown
    """
    if config is None:
        config = load_config()
    if name not in DEFAULT_CONFIG:
        raise ValueError(f"Unknown option '{name}'. Available options: {', '.join(list_options())}")
    return config.get(name, DEFAULT_CONFIG[name])


def list_options() -> List[str]:
    return list(DEFAULT_CONFIG)


def options_from_config(config: Optional[Dict] = None, **overrides) -> TransformOptions:
    """Build TransformOptions from a configuration, with ``None`` overrides ignored.

    Raises:
        ValueError: If a value is out of range
    """
    if config is None:
        config = load_config()
    data = {name: config.get(name, DEFAULT_CONFIG[name]) for name in DEFAULT_CONFIG if name != 'color'}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return TransformOptions.from_dict(data)


def color_enabled(config: Optional[Dict] = None, is_tty: bool = False) -> bool:
    """Resolve the ``color`` option against whether stderr is a terminal.

    Raises:
        ValueError: If the mode is not auto, always or never
    """
    mode = get_option('color', config)
    if mode not in COLOR_MODES:
        raise ValueError(f"Unknown color mode: {mode}. Use one of: {', '.join(COLOR_MODES)}")
    if mode == 'auto':
        return is_tty
    return mode == 'always'
