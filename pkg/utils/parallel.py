import concurrent.futures
from typing import Callable, Iterable, List, TypeVar

from config.logging import get_logger

T = TypeVar('T')
R = TypeVar('R')

logger = get_logger(__name__)


def map_parameters(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """
    Применить func к каждому элементу, сохраняя порядок.
    jobs <= 1 — последовательно в текущем процессе; иначе пул процессов,
    поэтому func и элементы должны сериализоваться pickle.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(jobs, len(items))
    logger.debug(f"Dispatching {len(items)} items to {workers} worker processes")
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
