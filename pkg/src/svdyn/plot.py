"""SVG drawings of relations. The only place exact rationals become decimals."""
import logging
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Optional

from lxml import etree

from svdyn.relation import PLRelation

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
SIZE = 400
MARGIN = 20
SIGNIFICANT_DIGITS = 12

STROKE = "#1f4e79"
FILL = "#9dc3e6"


def _num(value: Fraction) -> str:
    """Decimal rendering rounded to 12 significant digits."""
    with localcontext() as ctx:
        ctx.prec = SIGNIFICANT_DIGITS
        d = Decimal(value.numerator) / Decimal(value.denominator)
    return format(d.normalize(), "f")


def _sx(x: Fraction) -> str:
    return _num(MARGIN + x * SIZE)


def _sy(y: Fraction) -> str:
    # y axis points up
    return _num(MARGIN + (1 - y) * SIZE)


def _sub(parent, tag: str, **attrs) -> etree._Element:
    return etree.SubElement(parent, f"{{{SVG_NS}}}{tag}", {k.replace("_", "-"): v for k, v in attrs.items()})


def render(rel: PLRelation, title: Optional[str] = None) -> bytes:
    """Draw the graph of a relation inside the unit square.

    Args:
        rel: Relation to draw
        title: Optional caption stored as the SVG <title>

    Returns:
        UTF-8 encoded SVG document
    """
    total = str(SIZE + 2 * MARGIN)
    root = etree.Element(
        f"{{{SVG_NS}}}svg",
        nsmap={None: SVG_NS},
        width=total,
        height=total,
        viewBox=f"0 0 {total} {total}",
    )
    if title:
        _sub(root, "title").text = title
    _sub(
        root, "rect", x=str(MARGIN), y=str(MARGIN), width=str(SIZE), height=str(SIZE),
        fill="none", stroke="#888888", stroke_width="1",
    )
    graph = _sub(root, "g", stroke=STROKE, stroke_width="2", fill=FILL)
    for p in rel.pieces:
        if p.kind == "rect":
            _sub(
                graph, "rect",
                x=_sx(p.x_lo), y=_sy(p.y_hi),
                width=_num(p.x_hi * SIZE - p.x_lo * SIZE),
                height=_num(p.y_hi * SIZE - p.y_lo * SIZE),
            )
        elif p.kind == "seg":
            _sub(graph, "line", x1=_sx(p.x1), y1=_sy(p.y1), x2=_sx(p.x2), y2=_sy(p.y2))
        else:
            _sub(graph, "circle", cx=_sx(p.x1), cy=_sy(p.y1), r="3", fill=STROKE)
    return etree.tostring(root, pretty_print=True, xml_declaration=True, encoding="utf-8")


def write_svg(rel: PLRelation, path: str | Path, title: Optional[str] = None) -> None:
    Path(path).write_bytes(render(rel, title))
    logger.info(f"Wrote {len(rel.pieces)} pieces to {path}")
