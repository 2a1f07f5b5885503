import json
from pathlib import Path
from typing import Dict, Optional, Union

from src.config.optim_config import OptimConfig
from src.errors import ConfigError


class ConfigFileHandler:
    """Reads the JSON analysis config; every OptimConfig field is optional."""

    def __init__(self, config_file: Optional[Union[str, Path]] = None):
        self.config_file = Path(config_file) if config_file is not None else None

    def read_values(self) -> Dict:
        if self.config_file is None:
            return {}
        if not self.config_file.is_file():
            raise ConfigError(f"config file not found: {self.config_file}")
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {self.config_file}: {exc}") from exc
        if not text.strip():
            return {}
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{self.config_file}:{exc.lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(values, dict):
            raise ConfigError(f"{self.config_file}: config must be a JSON object")
        return values

    def load(self, **overrides) -> OptimConfig:
        """OptimConfig from the file, with non-None keyword overrides applied on top."""
        values = self.read_values()
        values.update({key: value for key, value in overrides.items() if value is not None})
        return OptimConfig.from_dict(values)

    def save(self, config: OptimConfig) -> None:
        if self.config_file is None:
            raise ConfigError("no config file path set")
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(config.to_dict(), f, indent=2)
                f.write("\n")
        except OSError as exc:
            raise ConfigError(f"cannot write config file {self.config_file}: {exc}") from exc
