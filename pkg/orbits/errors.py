class OrbitError(Exception):
    """Базовое исключение пакета orbits"""


class AmbiguousSymbol(OrbitError):
    """Положение точки орбиты относительно c_j не сертифицируется"""

    def __init__(self, step: int, critical: int):
        self.step = step
        self.critical = critical
        super().__init__(f"Symbol at step {step} is ambiguous near critical point c{critical}")


class NotAdmissible(OrbitError):
    """Маршрут не допустим для нидинг-последовательности отображения"""

    def __init__(self, itinerary: str, kneading: str):
        self.itinerary = itinerary
        self.kneading = kneading
        super().__init__(f"Itinerary {itinerary} is not admissible for kneading {kneading}")


class NotRealizable(OrbitError):
    """Допустимый маршрут не удалось реализовать на текущей точности"""

    def __init__(self, itinerary: str, reason: str):
        self.itinerary = itinerary
        self.reason = reason
        super().__init__(f"Cannot realize itinerary {itinerary}: {reason}")


class NoPreimage(OrbitError):
    """Точка вне образа лапы"""

    def __init__(self, lap: str, y: str):
        self.lap = lap
        self.y = y
        super().__init__(f"No preimage of {y} in lap I{lap}")


class NotFound(OrbitError):
    """Периодическая или неподвижная точка не найдена на ожидаемом отрезке"""

    def __init__(self, what: str, reason: str = ""):
        self.what = what
        self.reason = reason
        message = f"{what} not found"
        if reason:
            message += f": {reason}"
        super().__init__(message)
