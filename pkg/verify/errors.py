class VerifyError(Exception):
    """Базовое исключение пакета verify"""


class BranchDead(VerifyError):
    """Выбранная обратная ветвь не содержит текущую точку обратной орбиты"""

    def __init__(self, step: int, lap: str, x: str):
        self.step = step
        self.lap = lap
        self.x = x
        super().__init__(f"Backward branch I{lap} is dead at step {step}: x={x}")
