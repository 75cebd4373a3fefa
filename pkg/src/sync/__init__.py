"""
Synchronizing objectives: eventually, weakly and strongly synchronizing
deciders, witness strategies and the query dispatcher.
"""

from .strategy import Strategy, Transducer, closing_action, memoryless
from .event import (
    LimitEventResult,
    PairSequence,
    PeriodicResult,
    ShiftInfo,
    SureEventResult,
    decide_almost_event_periodic,
    decide_limit_event_support,
    decide_sure_event,
    decide_sure_event_support,
    pair_seq,
    synth_sure_event,
)
from .weak import (
    AlmostWeakResult,
    PhaseMark,
    ScheduleStrategy,
    WeakSureCertificate,
    WeakSureResult,
    candidate_supports,
    decide_almost_weak,
    decide_limit_weak,
    decide_sure_weak,
    synth_almost_weak,
    synth_sure_weak,
    weak_max_to_sum,
)
from .strong import (
    StrongMaxVerdict,
    StrongSumVerdict,
    candidate_cycles,
    decide_strong,
    decide_strong_max,
    decide_strong_sum,
    evaluate_cycle,
)
from .query import Answer, QuerySpec, Verdict, solve

__all__ = [
    'Strategy',
    'Transducer',
    'closing_action',
    'memoryless',
    'LimitEventResult',
    'PairSequence',
    'PeriodicResult',
    'ShiftInfo',
    'SureEventResult',
    'decide_almost_event_periodic',
    'decide_limit_event_support',
    'decide_sure_event',
    'decide_sure_event_support',
    'pair_seq',
    'synth_sure_event',
    'AlmostWeakResult',
    'PhaseMark',
    'ScheduleStrategy',
    'WeakSureCertificate',
    'WeakSureResult',
    'candidate_supports',
    'decide_almost_weak',
    'decide_limit_weak',
    'decide_sure_weak',
    'synth_almost_weak',
    'synth_sure_weak',
    'weak_max_to_sum',
    'StrongMaxVerdict',
    'StrongSumVerdict',
    'candidate_cycles',
    'decide_strong',
    'decide_strong_max',
    'decide_strong_sum',
    'evaluate_cycle',
    'Answer',
    'QuerySpec',
    'Verdict',
    'solve',
]
