from typing import Callable, Tuple, Type, TypeVar, Union

from config.logging import get_logger

T = TypeVar('T')

logger = get_logger(__name__)


def run_with_escalation(
    compute: Callable[['PrecisionContext'], T],
    ctx: 'PrecisionContext',
    retry_on: Union[Type[BaseException], Tuple[Type[BaseException], ...]],
    what: str = "computation",
) -> Tuple[T, 'PrecisionContext']:
    """
    Выполнить compute(ctx); при исключении из retry_on повторить на ctx.escalate().
    Возвращает (результат, контекст, на котором он получен).
    Когда эскалации исчерпаны, пробрасывается последнее исключение.
    """
    while True:
        try:
            return compute(ctx), ctx
        except retry_on as e:
            if not ctx.can_escalate:
                logger.warning(
                    f"Precision exhausted for {what} at {ctx.bits} bits: {e}"
                )
                raise
            escalated = ctx.escalate()
            logger.debug(
                f"{what}: escalating {ctx.bits} -> {escalated.bits} bits, retry "
                f"{escalated.escalations}/{ctx.max_escalations} ({e})"
            )
            ctx = escalated
