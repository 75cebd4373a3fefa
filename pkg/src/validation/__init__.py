"""
Independent ground truth: the support-graph oracle for sure-mode
questions, the exact strategy simulator and witness re-verification.
"""

from .oracle import (
    ORACLES,
    SupportGraph,
    oracle_sure_event,
    oracle_sure_strong_max,
    oracle_sure_strong_sum,
    oracle_sure_weak,
)
from .simulate import SyncReport, Trace, check_sync, decimal_text, run_trace
from .witness import WitnessCheck, verify_witness

__all__ = [
    'ORACLES',
    'SupportGraph',
    'oracle_sure_event',
    'oracle_sure_strong_max',
    'oracle_sure_strong_sum',
    'oracle_sure_weak',
    'SyncReport',
    'Trace',
    'check_sync',
    'decimal_text',
    'run_trace',
    'WitnessCheck',
    'verify_witness',
]
