from __future__ import annotations

import functools
import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional

import click
from pydantic import BaseModel

from .. import __version__, config
from ..log import get_logger
from ..schemas import InputRead, Report
from ..services.basis import validate_presentation
from ..services.corpus import builtin
from ..services.errors import ComputationLimit, InvalidAssignment, InvalidInput
from ..services.manifest import dump_manifest, load_manifest
from ..services.presentation import Presentation

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_LIMIT = 3
EXIT_GOLDEN = 4


@dataclass
class Settings:
    """
    Options set once on the command group and shared by every command.
    """
    format: str = config.REPORT_FORMAT
    threads: int = config.DEFAULT_THREADS


@dataclass(frozen=True)
class Loaded:
    presentation: Presentation
    base: Presentation
    input: InputRead
    source: str
    assignment: Dict[str, int] = field(default_factory=dict)


# ---------- input ----------

def load_input(source: str, assignment: Optional[Dict[str, int]] = None, instantiate: Optional[str] = None) -> Loaded:
    """
    A manifest path or a built-in name, validated, then specialised by
    the named instantiation and/or explicit parameter bits.
    """
    if Path(source).is_file():
        loaded = load_manifest(source)
        presentation, digest = loaded.presentation, loaded.digest
        validate_presentation(presentation)
    else:
        presentation = builtin(source)
        digest = hashlib.sha256(dump_manifest(presentation).encode("utf-8")).hexdigest()

    base = presentation
    bits: Dict[str, int] = {}
    if instantiate:
        bits.update(presentation.instantiation(instantiate))
    bits.update(assignment or {})
    read = InputRead(
        name=presentation.name,
        mode=presentation.mode.value,
        dimension=presentation.dim,
        digest=digest,
        assignment=dict(sorted(bits.items())),
    )
    if bits:
        presentation = presentation.specialise(bits)
    return Loaded(presentation, base, read, source, bits)


def parse_assignment(tokens: Iterable[str]) -> Dict[str, int]:
    """
    `name=bit` tokens, repeated or comma-separated.
    """
    out: Dict[str, int] = {}
    for token in tokens:
        for part in token.split(","):
            part = part.strip()
            if not part:
                continue
            name, sep, value = part.partition("=")
            name, value = name.strip(), value.strip()
            if not sep or not name or value not in ("0", "1"):
                raise InvalidAssignment(f"expected name=0 or name=1, got {part!r}")
            out[name] = int(value)
    return out


def assignment_options(fn: Callable) -> Callable:
    """
    --set/--instantiate plus trailing name=bit arguments, so that both
    `--set a=1 --set b=1` and `--set a=1 b=1` work.
    """
    fn = click.argument("bits", nargs=-1, metavar="[NAME=BIT]...")(fn)
    fn = click.option("--instantiate", "instantiate", default=None, help="Named parameter assignment from the manifest.")(fn)
    fn = click.option("--set", "set_", multiple=True, metavar="NAME=BIT", help="Fix a parameter; repeatable, comma-separated.")(fn)
    return fn


def collect_assignment(set_: Iterable[str], bits: Iterable[str]) -> Dict[str, int]:
    return parse_assignment([*set_, *bits])


# ---------- output ----------

def build_report(command: str, loaded: Loaded, payload: BaseModel | List[BaseModel] | None) -> Report:
    if isinstance(payload, list):
        result = [item.model_dump(by_alias=True) for item in payload]
    elif payload is not None:
        result = payload.model_dump(by_alias=True)
    else:
        result = None
    return Report(version=__version__, command=command, input=loaded.input, result=result)


def emit(settings: Settings, report: Report, text: Callable[[Report], List[str]]) -> None:
    if settings.format == "text":
        lines = [f"{report.input.name} ({report.input.mode}, dimension {report.input.dimension})"]
        if report.input.assignment:
            lines.append("with " + ", ".join(f"{k}={v}" for k, v in report.input.assignment.items()))
        lines.extend(text(report))
        click.echo("\n".join(lines))
    else:
        click.echo(report.model_dump_json(indent=2, by_alias=True))


def fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(fn: Callable) -> Callable:
    """
    Map the two error roots onto the exit-code contract.
    """
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InvalidInput as exc:
            logger.debug("invalid input", exc_info=True)
            fail(str(exc), EXIT_INVALID)
        except ComputationLimit as exc:
            logger.debug("computation limit", exc_info=True)
            fail(str(exc), EXIT_LIMIT)

    return wrapper
