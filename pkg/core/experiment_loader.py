"""
Experiment Preset Loader Module

Loads the published experiment set-ups from experiments.yaml. Each preset
names the subcommand it belongs to, the run settings, and optionally the
printed reference errors {p: {N: [dg_l2, pp_l2]}} used for precision gating
and for comparing reproduced tables.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

import yaml

from core.utils import InvalidArgumentError

logger = logging.getLogger(__name__)

PRESET_SECTIONS = ("description", "command", "settings", "reference")


class ExperimentLoader:
    """Loads and resolves experiment presets from configuration."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the preset loader.

        Args:
            config_path: Path to an experiments YAML file. If None, uses the packaged one.
        """
        if config_path is None:
            config_path = Path(__file__).parent / "experiments.yaml"

        self.config_path = Path(config_path)
        self._presets: Optional[Dict] = None

    def _load_config(self) -> Dict:
        """Load the preset file once."""
        if self._presets is not None:
            return self._presets

        if not self.config_path.exists():
            raise FileNotFoundError(f"Experiment presets not found: {self.config_path}")

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in experiment presets: {e}")
        if not isinstance(loaded, dict):
            raise ValueError(f"Experiment presets must be a mapping, got {type(loaded).__name__}")
        for name, preset in loaded.items():
            unknown = set(preset or {}) - set(PRESET_SECTIONS)
            if unknown:
                raise ValueError(f"Preset '{name}' has unknown sections: {sorted(unknown)}")

        self._presets = loaded
        logger.info(f"Loaded experiment presets from {self.config_path}")
        return self._presets

    def get_available_presets(self) -> List[str]:
        """Names of all presets, in file order."""
        return list(self._load_config().keys())

    def get_preset(self, name: str) -> Dict:
        """
        Raw preset entry.

        Raises:
            InvalidArgumentError: If no preset has this name.
        """
        config = self._load_config()
        if name not in config:
            raise InvalidArgumentError(
                f"Unknown preset '{name}'. Available: {', '.join(self.get_available_presets())}"
            )
        return config[name] or {}

    def describe(self, name: str) -> str:
        preset = self.get_preset(name)
        return f"{preset.get('command', 'converge')}: {preset.get('description', '')}".strip()

    def resolve_preset(self, name: str) -> Dict:
        """
        Flat run settings for a preset, with its reference table under 'reference'.

        Returns:
            Mapping suitable for RunConfig.from_sources.
        """
        preset = self.get_preset(name)
        values = dict(preset.get('settings') or {})
        if preset.get('reference'):
            values['reference'] = preset['reference']
        logger.debug(f"Preset '{name}' resolved to {len(values)} settings")
        return values


def get_available_presets() -> List[str]:
    """Convenience function listing the packaged presets."""
    return ExperimentLoader().get_available_presets()


def resolve_preset(name: str) -> Dict:
    """
    Convenience function resolving a packaged preset.

    Args:
        name: Preset name (e.g. 'sdg-linear').

    Returns:
        Flat run settings including the reference table.
    """
    return ExperimentLoader().resolve_preset(name)


def preset_command(name: str) -> str:
    """Subcommand the packaged preset belongs to."""
    return ExperimentLoader().get_preset(name).get('command', 'converge')
