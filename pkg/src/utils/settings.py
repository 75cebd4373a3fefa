"""
Settings loader for syncmdp.

Reads config/config.yaml and applies environment variable overrides
(a .env file in the working directory is honoured).
"""
import os
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

load_dotenv()
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Limits:
    """Exploration caps; hitting one yields an inconclusive answer."""
    sequence_cap: int = 4096
    max_period: int = 4096
    support_cap: int = 65536
    full_enumeration_threshold: int = 10
    phase_step_cap: int = 100000
    oracle_max_states: int = 12


@dataclass(frozen=True)
class SimulationSettings:
    horizon: int = 50
    witness_horizon: int = 1000
    weak_hits: int = 3
    precision: int = 6
    almost_tolerance: Fraction = Fraction(1, 10000)


@dataclass(frozen=True)
class GeneratorSettings:
    max_denominator: int = 16
    branching: int = 3


@dataclass(frozen=True)
class LoggingSettings:
    level: str = "WARNING"
    format: str = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
    file: Optional[str] = None


@dataclass(frozen=True)
class Settings:
    limits: Limits = field(default_factory=Limits)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    generators: GeneratorSettings = field(default_factory=GeneratorSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)


class SettingsLoader:
    """Loads Settings from YAML with environment overrides."""

    # env var -> (section, key)
    ENV_OVERRIDES = {
        'SYNCMDP_SEQUENCE_CAP': ('analysis', 'sequence_cap'),
        'SYNCMDP_MAX_PERIOD': ('analysis', 'max_period'),
        'SYNCMDP_SUPPORT_CAP': ('analysis', 'support_cap'),
        'SYNCMDP_ORACLE_MAX_STATES': ('oracle', 'max_states'),
        'SYNCMDP_HORIZON': ('simulation', 'horizon'),
        'SYNCMDP_WITNESS_HORIZON': ('simulation', 'witness_horizon'),
        'SYNCMDP_LOG_LEVEL': ('logging', 'level'),
    }

    def __init__(self, config_dir: Optional[str] = None):
        """
        Initialize SettingsLoader.

        Args:
            config_dir: Path to config directory. Defaults to project config/
        """
        if config_dir is None:
            config_dir = Path(__file__).parent.parent.parent / 'config'
        self.config_dir = Path(config_dir)

    def _load_yaml(self, path: Path) -> Dict[str, Any]:
        """Load YAML configuration file; a missing file means defaults."""
        if not path.exists():
            logger.debug(f"No config file at {path}, using defaults")
            return {}
        with open(path, 'r') as f:
            return yaml.safe_load(f) or {}

    def _apply_env_overrides(self, raw: Dict[str, Any]) -> Dict[str, Any]:
        """Apply environment variable overrides to the raw YAML tree."""
        for var, (section, key) in self.ENV_OVERRIDES.items():
            value = os.getenv(var)
            if value:
                raw.setdefault(section, {})[key] = value
                logger.debug(f"{var} overrides {section}.{key}")
        return raw

    def load(self) -> Settings:
        raw = self._apply_env_overrides(self._load_yaml(self.config_dir / 'config.yaml'))
        analysis = raw.get('analysis', {}) or {}
        oracle = raw.get('oracle', {}) or {}
        simulation = raw.get('simulation', {}) or {}
        generators = raw.get('generators', {}) or {}
        log = raw.get('logging', {}) or {}

        defaults = Limits()
        limits = Limits(
            sequence_cap=int(analysis.get('sequence_cap', defaults.sequence_cap)),
            max_period=int(analysis.get('max_period', defaults.max_period)),
            support_cap=int(analysis.get('support_cap', defaults.support_cap)),
            full_enumeration_threshold=int(analysis.get(
                'full_enumeration_threshold', defaults.full_enumeration_threshold)),
            phase_step_cap=int(analysis.get('phase_step_cap', defaults.phase_step_cap)),
            oracle_max_states=int(oracle.get('max_states', defaults.oracle_max_states)),
        )
        sim_defaults = SimulationSettings()
        sim = SimulationSettings(
            horizon=int(simulation.get('horizon', sim_defaults.horizon)),
            witness_horizon=int(simulation.get('witness_horizon', sim_defaults.witness_horizon)),
            weak_hits=int(simulation.get('weak_hits', sim_defaults.weak_hits)),
            precision=int(simulation.get('precision', sim_defaults.precision)),
            almost_tolerance=Fraction(str(simulation.get(
                'almost_tolerance', sim_defaults.almost_tolerance))),
        )
        gen_defaults = GeneratorSettings()
        gen = GeneratorSettings(
            max_denominator=int(generators.get('max_denominator', gen_defaults.max_denominator)),
            branching=int(generators.get('branching', gen_defaults.branching)),
        )
        log_defaults = LoggingSettings()
        logging_settings = LoggingSettings(
            level=str(log.get('level', log_defaults.level)).upper(),
            format=log.get('format', log_defaults.format),
            file=log.get('file') or None,
        )
        return Settings(limits, sim, gen, logging_settings)


def load_settings(config_dir: Optional[str] = None, **limit_overrides) -> Settings:
    """Load settings and apply explicit limit overrides (e.g. from CLI flags)."""
    settings = SettingsLoader(config_dir).load()
    overrides = {k: v for k, v in limit_overrides.items() if v is not None}
    if overrides:
        settings = replace(settings, limits=replace(settings.limits, **overrides))
    return settings


def configure_logging(settings: LoggingSettings, verbose: bool = False) -> None:
    """Configure the root logger once; logs go to stderr, never stdout."""
    level = logging.DEBUG if verbose else getattr(logging, settings.level, logging.WARNING)
    handlers = [logging.StreamHandler()]
    if settings.file:
        log_path = Path(settings.file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path))
    logging.basicConfig(level=level, format=settings.format, handlers=handlers, force=True)
