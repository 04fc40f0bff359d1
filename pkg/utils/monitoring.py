import time
from functools import wraps
from typing import Any, Callable, Optional, TypeVar, cast

from config.logging import get_logger
from config.settings import SLOW_OPERATION_THRESHOLD

F = TypeVar('F', bound=Callable[..., Any])


def _bits_of(args, kwargs) -> Optional[int]:
    """Точность из PrecisionContext среди аргументов, если он передан"""
    for value in list(args) + list(kwargs.values()):
        bits = getattr(value, 'bits', None)
        if isinstance(bits, int) and hasattr(value, 'escalate'):
            return bits
    return None


def measure_latency(func: F) -> F:
    """
    Декоратор для вычислений: длительность в DEBUG, медленные вызовы
    (> SLOW_OPERATION_THRESHOLD) в WARNING, ошибки в ERROR.
    """
    logger = get_logger(func.__module__)

    @wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        started = time.perf_counter()
        bits = _bits_of(args, kwargs)
        at = f" at {bits} bits" if bits is not None else ""
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            elapsed = time.perf_counter() - started
            logger.error(f"{func.__name__} failed after {elapsed:.3f}s{at}: {e}")
            raise

        elapsed = time.perf_counter() - started
        if elapsed > SLOW_OPERATION_THRESHOLD:
            logger.warning(f"Slow computation: {func.__name__} took {elapsed:.3f}s{at}")
        else:
            logger.debug(f"{func.__name__} done in {elapsed:.3f}s{at}")
        return result

    return cast(F, wrapper)
