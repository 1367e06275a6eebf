from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from pydantic import ValidationError

from ..log import get_logger
from ..schemas import GeneratorSpec, Manifest
from .errors import ExpressionSyntaxError, InvalidInput, ManifestError
from .presentation import Presentation, build_presentation

logger = get_logger(__name__)


@dataclass(frozen=True)
class LoadedManifest:
    manifest: Manifest
    presentation: Presentation
    digest: str
    source: str


def _line_column(raw: str, index: int) -> Tuple[int, int]:
    line = raw.count("\n", 0, index) + 1
    column = index - (raw.rfind("\n", 0, index) + 1) + 1
    return line, column


def _locate(raw: str, needle: str, offset: int = 0) -> Tuple[Optional[int], Optional[int]]:
    """
    Line and column of `needle` as a JSON string literal in the raw text,
    shifted by `offset` characters into its contents.
    """
    literal = json.dumps(needle)
    index = raw.find(literal)
    if index < 0:
        return None, None
    return _line_column(raw, index + 1 + offset)


def _validation_error(raw: str, exc: ValidationError) -> ManifestError:
    first = exc.errors()[0]
    path = ".".join(str(part) for part in first["loc"])
    keys = [part for part in first["loc"] if isinstance(part, str)]
    line, column = _locate(raw, keys[-1]) if keys else (None, None)
    return ManifestError(f"{path}: {first['msg']}", line, column)


def _expression_error(raw: str, text: str, exc: InvalidInput) -> ManifestError:
    offset = exc.position if isinstance(exc, ExpressionSyntaxError) else 0
    line, column = _locate(raw, text, offset)
    return ManifestError(str(exc), line, column)


def parse_manifest(raw: str) -> Manifest:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ManifestError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return Manifest.model_validate(data)
    except ValidationError as exc:
        raise _validation_error(raw, exc) from None


def manifest_to_presentation(manifest: Manifest, raw: Optional[str] = None) -> Presentation:
    """
    Build and structurally validate the presentation. Expression errors
    are reported at their line and column when the raw text is known.
    """
    try:
        return build_presentation(
            name=manifest.name,
            generators=[(g.name, g.degree) for g in manifest.generators],
            relations=manifest.relations,
            dim=manifest.dimension,
            mode=manifest.mode,
            params=manifest.parameters,
            steenrod=manifest.steenrod,
            assume_smooth=manifest.assume_smooth,
            instantiations=manifest.instantiations,
        )
    except ExpressionSyntaxError as exc:
        if raw is None:
            raise
        raise _expression_error(raw, exc.text, exc) from None
    except InvalidInput as exc:
        if raw is None or isinstance(exc, ManifestError):
            raise
        culprit = _culprit(manifest, str(exc))
        line, column = _locate(raw, culprit) if culprit else (None, None)
        raise ManifestError(str(exc), line, column) from None


def _culprit(manifest: Manifest, message: str) -> Optional[str]:
    # relation errors name the relation by its 1-based position
    for i, text in enumerate(manifest.relations):
        if f"relation {i + 1} " in message:
            return text
    for gen, entries in manifest.steenrod.items():
        for index, text in entries.items():
            if f"Sq^{index} {gen}" in message:
                return text
    return None


def load_manifest(path: str | Path) -> LoadedManifest:
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read manifest {path}: {exc.strerror}") from None
    return loads_manifest(raw, source=str(path))


def loads_manifest(raw: str, source: str = "<string>") -> LoadedManifest:
    manifest = parse_manifest(raw)
    presentation = manifest_to_presentation(manifest, raw)
    digest = hashlib.sha256(raw.encode("utf-8")).hexdigest()
    logger.debug("loaded %s from %s (sha256 %s)", manifest.name, source, digest[:12])
    return LoadedManifest(manifest, presentation, digest, source)


def presentation_to_manifest(p: Presentation) -> Manifest:
    steenrod = {}
    for (g, i), value in p.squares:
        steenrod.setdefault(g, {})[i] = str(value)
    return Manifest(
        name=p.name,
        mode=p.mode.value,
        dimension=p.dim,
        generators=[GeneratorSpec(name=n, degree=d) for n, d in zip(p.gens.names, p.gens.degrees)],
        parameters=list(p.params),
        relations=[str(r) for r in p.relations],
        steenrod=steenrod,
        assume_smooth=p.assume_smooth,
        instantiations={key: dict(assignment) for key, assignment in p.instantiations},
    )


def dump_manifest(p: Presentation) -> str:
    return presentation_to_manifest(p).model_dump_json(indent=2, by_alias=True)
