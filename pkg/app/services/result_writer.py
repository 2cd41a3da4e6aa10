"""Result documents: rendering, atomic writes and reading back."""
import json
import logging
import os
import tempfile
from enum import Enum
from fractions import Fraction
from pathlib import Path

from app.models import ResultDocument
from app.utils import format_rational

logger = logging.getLogger(__name__)


def _json_default(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def render_result(doc: ResultDocument) -> str:
    """Deterministic JSON text: sorted keys, exact rationals as strings, trailing newline."""
    return json.dumps(doc.to_dict(), default=_json_default, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def parse_result(text: str) -> ResultDocument:
    data = json.loads(text)
    return ResultDocument(
        command=data['command'],
        arguments=data['arguments'],
        result=data['result'],
        timing=data.get('timing'),
    )


def write_atomic(path: Path, text: str) -> Path:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug("wrote %d bytes to %s", len(text), path)
    return path
