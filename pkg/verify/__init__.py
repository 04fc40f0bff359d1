from .errors import VerifyError, BranchDead
from .checks import (
    IndexPartition, index_partition, interval_for, ce_windows, non_ce_witness, recurrence,
    combinatorial_equiv, dual_rate_contrast,
)
from .pullback import (
    PullbackResult, POLICIES, PULLBACK_CSV_HEADER, pullback_shrink, pullback_exhaustive,
    random_pullbacks, endpoint_rate, fit_rate, parse_policy_word,
)
from .runner import REPORTS, default_reports, select_reports, sample_parameters, verify_state

__all__ = [
    'VerifyError', 'BranchDead',
    'IndexPartition', 'index_partition', 'interval_for', 'ce_windows', 'non_ce_witness',
    'recurrence', 'combinatorial_equiv', 'dual_rate_contrast',
    'PullbackResult', 'POLICIES', 'PULLBACK_CSV_HEADER', 'pullback_shrink',
    'pullback_exhaustive', 'random_pullbacks', 'endpoint_rate', 'fit_rate',
    'parse_policy_word',
    'REPORTS', 'default_reports', 'select_reports', 'sample_parameters', 'verify_state',
]
