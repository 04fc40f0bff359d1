from .errors import (
    ConstructionError, BootstrapFailed, StepFailed, StateStoreError, SchemaVersionMismatch,
    ParseError,
)
from .state import (
    Mode, StepType, PMark, StepRecord, ConstructionState, empty_state, families_of,
    family_rate_key,
)
from .store import dumps_state, save_state, load_state
from .context import StepContext
from .bootstrap import bootstrap
from .steps import step_A, step_B, dual_step_A, dual_step_B, return_target
from .driver import run, parse_schedule, delta_for

__all__ = [
    'ConstructionError', 'BootstrapFailed', 'StepFailed', 'StateStoreError',
    'SchemaVersionMismatch', 'ParseError',
    'Mode', 'StepType', 'PMark', 'StepRecord', 'ConstructionState', 'empty_state',
    'families_of', 'family_rate_key',
    'dumps_state', 'save_state', 'load_state',
    'StepContext', 'bootstrap',
    'step_A', 'step_B', 'dual_step_A', 'dual_step_B', 'return_target',
    'run', 'parse_schedule', 'delta_for',
]
