"""
JSON-файл состояния конструкции.
Десятичные строки хранятся точно, порядок ключей фиксирован, меток времени нет,
поэтому save -> load -> save дает идентичный файл.
"""

import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from config.logging import get_logger
from config.settings import STATE_JSON_INDENT, STATE_SCHEMA_VERSION
from construct.errors import ParseError, SchemaVersionMismatch
from construct.state import ConstructionState
from numerics import CodecError
from symbolic import SequenceParseError

logger = get_logger(__name__)


def dumps_state(state: ConstructionState) -> str:
    return json.dumps(state.to_dict(), indent=STATE_JSON_INDENT, ensure_ascii=False) + "\n"


def save_state(state: ConstructionState, path: Union[str, Path]) -> Path:
    """Записать состояние; файл заменяется целиком"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps_state(state), encoding="utf-8")
    tmp.replace(path)
    logger.info(f"State saved to {path}: stage {state.stage}, t={state.final_t}")
    return path


def load_state(path: Union[str, Path]) -> ConstructionState:
    """Прочитать состояние; SchemaVersionMismatch или ParseError при ошибке"""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(str(path), str(e)) from e
    if not isinstance(data, dict):
        raise ParseError(str(path), "top-level JSON value must be an object")
    version = data.get("version")
    if version != STATE_SCHEMA_VERSION:
        raise SchemaVersionMismatch(version, STATE_SCHEMA_VERSION)
    try:
        state = ConstructionState.from_dict(data)
    except (KeyError, TypeError, ValueError, ValidationError, CodecError,
            SequenceParseError) as e:
        raise ParseError(str(path), str(e)) from e
    logger.debug(f"State loaded from {path}: stage {state.stage}")
    return state
