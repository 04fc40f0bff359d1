from .escalation import run_with_escalation
from .monitoring import measure_latency
from .parallel import map_parameters

__all__ = ['run_with_escalation', 'measure_latency', 'map_parameters']
