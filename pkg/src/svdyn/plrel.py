"""Reading and writing the line-oriented ``.plrel`` relation format.

    plrel v1
    # comment
    pt X Y
    seg X1 Y1 X2 Y2
    rect X1 Y1 X2 Y2

Coordinates are ``p/q`` rationals or integers in [0, 1].
"""
import logging
from pathlib import Path

from svdyn.errors import DomainError, ParseError
from svdyn.pieces import Piece
from svdyn.relation import PLRelation, normalize

logger = logging.getLogger(__name__)

HEADER = "plrel v1"

_ARITY = {"pt": 2, "seg": 4, "rect": 4}
_BUILDERS = {"pt": Piece.point, "seg": Piece.segment, "rect": Piece.rect}


def parse(text: str) -> PLRelation:
    pieces = []
    seen_header = False
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if " ".join(line.split()) != HEADER:
                raise ParseError(f"expected header {HEADER!r}, got {line!r}", number)
            seen_header = True
            continue
        kind, *fields = line.split()
        if kind not in _ARITY:
            raise ParseError(f"unknown piece kind {kind!r}", number)
        if len(fields) != _ARITY[kind]:
            raise ParseError(f"{kind} takes {_ARITY[kind]} coordinates, got {len(fields)}", number)
        try:
            pieces.append(_BUILDERS[kind](*fields))
        except DomainError as e:
            raise ParseError(str(e), number) from e
    if not seen_header:
        raise ParseError(f"missing header {HEADER!r}", 1)
    return normalize(pieces)


def serialize(rel: PLRelation) -> str:
    lines = [HEADER] + [str(p) for p in rel.pieces]
    return "\n".join(lines) + "\n"


def read_text(path: str | Path) -> str:
    """File contents as UTF-8; undecodable bytes are a parse error on their line."""
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        raise ParseError(f"not UTF-8 text: {e.reason}", line) from e


def load_relation(path: str | Path) -> PLRelation:
    text = read_text(path)
    rel = parse(text)
    logger.debug(f"Loaded {len(rel.pieces)} pieces from {path}")
    return rel


def write_relation(rel: PLRelation, path: str | Path) -> None:
    Path(path).write_text(serialize(rel))
