"""Flat key=value files (the .env dialect) for catalogs, descriptors and scenarios."""

import io
from decimal import Decimal
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Tuple, Type, TypeVar, Union

from dotenv.parser import parse_stream
from loguru import logger
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from costbench.exceptions import ParseError, ValidationError

ModelT = TypeVar("ModelT", bound=BaseModel)

# pydantic error types that mean "the text is not a value of that type"
_PARSE_ERROR_TYPES = {"decimal_parsing", "int_parsing", "float_parsing", "bool_parsing", "enum"}


def parse_flat(text: str, source: str = "<string>") -> Dict[str, str]:
    """Parse flat key=value text.

    Args:
        text: File contents
        source: Name used in diagnostics

    Returns:
        Keys mapped to their string values, in file order

    Raises:
        ParseError: On a malformed line, a key without value or a duplicate key
    """
    values: Dict[str, str] = {}
    for binding in parse_stream(io.StringIO(text)):
        if binding.error:
            line = binding.original.line
            raise ParseError(f"{source}: malformed line {line}", binding.original.string.strip())
        if binding.key is None:
            continue
        if binding.value is None:
            raise ParseError(f"{source}: key '{binding.key}' has no value", binding.key)
        if binding.key in values:
            raise ParseError(f"{source}: duplicate key '{binding.key}'", binding.key)
        values[binding.key] = binding.value
    return values


def read_flat(path: Union[str, Path]) -> Dict[str, str]:
    """Read and parse a flat key=value file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    logger.debug(f"Reading {path}")
    return parse_flat(path.read_text(encoding="utf-8"), str(path))


def dump_flat(items: Iterable[Tuple[str, object]]) -> str:
    """Render key/value pairs, skipping None values."""
    lines = []
    for key, value in items:
        if value is None:
            continue
        if isinstance(value, Decimal):
            text = format(value, "f")
        elif isinstance(value, Enum):
            text = str(value.value)
        else:
            text = str(value)
        if any(ch in text for ch in " #'\"\\"):
            text = '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"


def build_model(model: Type[ModelT], values: Dict[str, object], source: str) -> ModelT:
    """Validate values into a model, translating pydantic errors.

    The first offending field is named in the raised error.

    Raises:
        ParseError: If a value is not parseable as its field's type
        ValidationError: If a field is missing, unknown or out of range
    """
    try:
        return model.model_validate(values)
    except PydanticValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "<root>"
        message = f"{source}: {error['msg']}"
        if error["type"] in _PARSE_ERROR_TYPES:
            raise ParseError(f"{source}: field '{field}' is not a valid value", error["msg"]) from exc
        raise ValidationError(field, message) from exc
