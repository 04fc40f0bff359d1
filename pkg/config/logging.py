import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from pythonjsonlogger import jsonlogger

from config.settings import (
    ENABLE_JSON_LOGGING,
    JSON_LOG_FILE,
    LOG_BACKUP_COUNT,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    LOG_LEVEL,
    LOG_MAX_BYTES,
    LOG_ROTATION_ENABLED,
)

# Пакеты kneadlab и их значки в консоли
PACKAGE_MARKS = {
    'numerics': '🧮',
    'symbolic': '🔤',
    'families': '📈',
    'orbits': '🌀',
    'paramsearch': '🎯',
    'construct': '🏗️',
    'verify': '🔍',
    'cli': '🐚',
    'utils': '🔧',
}

# Сторонние логгеры, которым достаточно WARNING
QUIET_LOGGERS = ("mpmath", "sympy", "concurrent", "numpy")


def _package_of(record: logging.LogRecord) -> str:
    return record.name.split('.', 1)[0]


class ColoredFormatter(logging.Formatter):
    """
    Консольный формат: время, значок пакета, цветной уровень, короткое имя логгера.
    Сообщения о принятых шагах и эскалации точности получают отдельную метку.
    """

    LEVEL_COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    DIM = '\033[2m'
    RESET = '\033[0m'

    EVENT_MARKS = (
        ('accepted', '💎'),
        ('certified', '💎'),
        ('escalat', '⏫'),
        ('vacuous', '∅'),
        ('failed', '☠️'),
    )

    def format(self, record: logging.LogRecord) -> str:
        color = self.LEVEL_COLORS.get(record.levelname, self.RESET)
        mark = PACKAGE_MARKS.get(_package_of(record), '📝')
        parts = record.name.split('.')
        name = f"{parts[0]}.{parts[-1]}" if len(parts) > 2 else record.name

        msg = record.getMessage()
        lowered = msg.lower()
        for needle, event_mark in self.EVENT_MARKS:
            if needle in lowered:
                msg = f"{event_mark} {msg}"
                break
        if record.levelno >= logging.ERROR:
            msg = f"{color}{msg}{self.RESET}"
        if record.exc_info:
            msg = f"{msg}\n{self.formatException(record.exc_info)}"

        when = self.formatTime(record, self.datefmt)
        return (f"{self.DIM}{when}{self.RESET} {mark} {color}{record.levelname:8s}{self.RESET} "
                f"{self.DIM}{name}{self.RESET} - {msg}")


class KneadlabJsonFormatter(jsonlogger.JsonFormatter):
    """JSON-строка лога с полем package для фильтрации по пакетам"""

    def add_fields(self, log_record, record, message_dict):
        super().add_fields(log_record, record, message_dict)
        log_record['package'] = _package_of(record)
        log_record.setdefault('level', record.levelname)


def _console_handler(level: str) -> logging.Handler:
    # stdout занят результатами команд
    handler = logging.StreamHandler(sys.stderr)
    if getattr(sys.stderr, 'isatty', lambda: False)():
        handler.setFormatter(ColoredFormatter(datefmt=LOG_DATE_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
    handler.setLevel(level)
    return handler


def _json_handler(path: str, level: str) -> logging.Handler:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    if LOG_ROTATION_ENABLED:
        handler = RotatingFileHandler(path, maxBytes=LOG_MAX_BYTES,
                                      backupCount=LOG_BACKUP_COUNT, encoding='utf-8')
    else:
        handler = logging.FileHandler(path, encoding='utf-8')
    handler.setFormatter(KneadlabJsonFormatter('%(asctime)s %(name)s %(levelname)s %(message)s',
                                               datefmt=LOG_DATE_FORMAT))
    handler.setLevel(level)
    return handler


_configured = False


def setup_logging(level: Optional[str] = None, json_log_file: Optional[str] = None,
                  enable_json: Optional[bool] = None) -> logging.Logger:
    """
    Настроить корневой логгер один раз за процесс: консоль в stderr
    и, при enable_json, JSON-файл с ротацией. Повторные вызовы ничего не меняют.
    """
    global _configured
    root = logging.getLogger()
    if _configured:
        return root

    level = (level or LOG_LEVEL).upper()
    enable_json = ENABLE_JSON_LOGGING if enable_json is None else enable_json

    root.setLevel(level)
    root.addHandler(_console_handler(level))
    if enable_json:
        root.addHandler(_json_handler(json_log_file or JSON_LOG_FILE, level))

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    _configured = True
    return root


def get_logger(name: str) -> logging.Logger:
    """Логгер модуля; все записи уходят в обработчики корневого"""
    logger = logging.getLogger(name)
    logger.propagate = True
    return logger
