from __future__ import annotations

import logging
import os
from typing import Any, Dict, Mapping, Optional

from pydantic import ValidationError

from shared import defaults as DEFAULTS
from shared.config import RunConfig, parse_config_text

logger = logging.getLogger(__name__)


class ConfigError(Exception):
    """Malformed config file, unknown key or invalid parameter value."""


def _is_empty(value: Any) -> bool:
    return value is None or value == ""


def read_config_file(path: str) -> Dict[str, str]:
    """Key=value pairs from ``path``; parse failures become ConfigError."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        values = parse_config_text(text)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    logger.debug("config file read", extra={"path": path, "keys": sorted(values)})
    return values


def resolve_config_path(
    explicit: Optional[str], environ: Optional[Mapping[str, str]] = None
) -> Optional[str]:
    """--config wins; otherwise the path named by the environment, if any."""
    if not _is_empty(explicit):
        return explicit
    env = os.environ if environ is None else environ
    from_env = env.get(DEFAULTS.CONFIG_PATH_ENV_VAR)
    return None if _is_empty(from_env) else from_env


def merge_config(
    file_values: Mapping[str, Any], flag_values: Mapping[str, Any]
) -> RunConfig:
    """Flags over file values over defaults; unset flags are None."""
    merged: Dict[str, Any] = dict(file_values)
    for key, value in flag_values.items():
        if value is not None:
            merged[key] = value
    try:
        return RunConfig(**merged)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def load_run_config(
    explicit_path: Optional[str],
    flag_values: Mapping[str, Any],
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    path = resolve_config_path(explicit_path, environ)
    file_values: Dict[str, str] = {} if path is None else read_config_file(path)
    config = merge_config(file_values, flag_values)
    logger.debug(
        "run configuration resolved",
        extra={"config_path": path, "config": config.model_dump()},
    )
    return config
