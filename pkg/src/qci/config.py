from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from .gates import DEFAULT_TOLERANCE

TOLERANCE_ENV = "QCI_TOLERANCE"
_TRUE = {"on", "true", "yes", "1"}
_FALSE = {"off", "false", "no", "0"}


class ConfigError(ValueError):
    pass


def parse_switch(value: str | bool) -> bool:
    if isinstance(value, bool):
        return value
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigError(f"Expected on/off, got '{value}'")


@dataclass(frozen=True)
class Settings:
    tolerance: float = DEFAULT_TOLERANCE
    max_len: int = 3
    workers: int = 1
    drop_rotations: bool = True
    group: bool = True
    keep_half_turns: bool = True
    format: Optional[str] = None
    db: Optional[str] = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ConfigError(f"Tolerance must be positive, got {self.tolerance}")
        if self.workers < 1:
            raise ConfigError(f"Worker count must be at least 1, got {self.workers}")


_FIELD_TYPES = {f.name: f.type for f in fields(Settings)}


def _coerce(name: str, value: Any) -> Any:
    kind = _FIELD_TYPES[name]
    try:
        if kind == "float":
            return float(value)
        if kind == "int":
            return int(value)
        if kind == "bool":
            return parse_switch(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for '{name}': {value!r} ({e})") from None
    return value


def read_config_file(path: Path) -> Dict[str, Any]:
    """Plain ``key=value`` lines; keys are long flag names, '-' and '_' interchangeable."""
    values: Dict[str, Any] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from None
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value, got '{line}'")
        key, value = (part.strip() for part in line.split("=", 1))
        name = key.replace("-", "_")
        if name not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{number}: unknown key '{key}'")
        values[name] = _coerce(name, value)
    return values


def resolve_settings(
    overrides: Mapping[str, Any],
    config_path: Optional[Path] = None,
    environ: Mapping[str, str] = os.environ,
) -> Settings:
    """Defaults, then config file, then QCI_TOLERANCE, then explicit flags (None means unset)."""
    settings = Settings()
    if config_path is not None:
        settings = replace(settings, **read_config_file(config_path))
    if environ.get(TOLERANCE_ENV):
        settings = replace(settings, tolerance=_coerce("tolerance", environ[TOLERANCE_ENV]))
    explicit = {
        name: _coerce(name, value)
        for name, value in overrides.items()
        if name in _FIELD_TYPES and value is not None
    }
    return replace(settings, **explicit)
