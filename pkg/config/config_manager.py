"""Load run configurations from files, inline JSON, overrides and LTBX_* variables."""
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import structlog
import yaml
from pydantic import ValidationError

from config.run_config import RunConfig

logger = structlog.get_logger(__name__)

ENV_PREFIX = "LTBX_"
RESERVED_ENV = {"SEED"}


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _known_keys() -> List[str]:
    keys: List[str] = []
    for name, info in RunConfig.model_fields.items():
        keys.append(name)
        if info.alias:
            keys.append(info.alias)
    return keys


class ConfigManager:
    def __init__(
        self,
        source: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ):
        self.source = source
        self.overrides = overrides or {}
        self.environ = os.environ if environ is None else environ
        self.config: Dict[str, Any] = {}
        self.load_config()

    def load_config(self) -> None:
        """Load base config, merge explicit overrides, then environment variables."""
        if self.source:
            self.config = self._read_source(self.source)
        self.config = self._deep_merge(self.config, self.overrides)
        self._override_from_env()

    @property
    def seed(self) -> Optional[str]:
        """LTBX_SEED is reserved; it is recorded but never changes results."""
        return self.environ.get(f"{ENV_PREFIX}SEED")

    def run_config(self) -> RunConfig:
        try:
            config = RunConfig.model_validate(self.config)
        except ValidationError as exc:
            first = exc.errors()[0]
            path = ".".join(str(part) for part in first["loc"])
            raise ConfigError(first["msg"], path) from exc
        logger.debug("configuration validated", command=config.command.value, config_hash=config.config_hash())
        return config

    def _read_source(self, source: str) -> Dict[str, Any]:
        text = source.strip()
        if text.startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed inline JSON: {exc}") from exc
        else:
            path = Path(source)
            if not path.is_file():
                raise ConfigError(f"config file {source} not found")
            try:
                with open(path, "r") as f:
                    data = yaml.safe_load(f)
            except yaml.YAMLError as exc:
                raise ConfigError(f"malformed config file {source}: {exc}") from exc
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        return data

    def _override_from_env(self) -> None:
        """Override configuration with LTBX_* variables; ``__`` separates levels."""
        for key, value in self.environ.items():
            if not key.startswith(ENV_PREFIX):
                continue
            name = key[len(ENV_PREFIX):]
            if name in RESERVED_ENV:
                continue
            path = name.lower().split("__")
            self._set_nested_value(self.config, path, value)

    def _set_nested_value(self, config: Dict[str, Any], path: List[str], value: Any) -> None:
        """Set nested dictionary value using path, matching keys case-insensitively."""
        current = config
        for part in path[:-1]:
            part = self._match_key(current, part)
            if part not in current or not isinstance(current[part], dict):
                current[part] = {}
            current = current[part]

        try:
            if value.lower() in ("true", "false"):
                value = value.lower() == "true"
            elif "." in value:
                value = float(value)
            else:
                value = int(value)
        except (ValueError, AttributeError):
            pass

        current[self._match_key(current, path[-1])] = value

    @staticmethod
    def _match_key(current: Dict[str, Any], part: str) -> str:
        for key in list(current) + _known_keys():
            if key.lower() == part:
                return key
        return part

    def _deep_merge(self, dict1: Dict[str, Any], dict2: Dict[str, Any]) -> Dict[str, Any]:
        """Deep merge two dictionaries."""
        result = dict1.copy()
        for key, value in dict2.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._deep_merge(result[key], value)
            else:
                result[key] = value
        return result

    def save_config(self, path: str) -> None:
        with open(path, "w") as f:
            yaml.safe_dump(self.config, f, default_flow_style=False, sort_keys=True)


def parse_config(
    source: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Path or inline JSON → validated :class:`RunConfig`."""
    return ConfigManager(source, overrides, environ).run_config()
