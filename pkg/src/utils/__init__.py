"""syncmdp utilities: settings loading and batch reports."""

from .settings import (
    GeneratorSettings,
    Limits,
    LoggingSettings,
    Settings,
    SettingsLoader,
    SimulationSettings,
    configure_logging,
    load_settings,
)
from .report_generator import ComparisonEntry, ComparisonReport

__all__ = [
    'GeneratorSettings',
    'Limits',
    'LoggingSettings',
    'Settings',
    'SettingsLoader',
    'SimulationSettings',
    'configure_logging',
    'load_settings',
    'ComparisonEntry',
    'ComparisonReport',
]
