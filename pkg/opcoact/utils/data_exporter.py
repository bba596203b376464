from dataclasses import fields, is_dataclass
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from functools import singledispatch
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any
import json
import logging

from opcoact.core.coact import AbelianGroup, Grading, GroupMorphism, KPoint
from opcoact.core.groebner import GroebnerBasis
from opcoact.core.polyring import MonomialOrder, Polynomial, format_polynomial
from opcoact.core.universal import Tag, UniversalPresentation

log = logging.getLogger(__name__)


def fraction_str(x: Fraction | int) -> str:
    """Render as "p/q", or "p" for integers."""
    return str(Fraction(x))


def polynomial_to_json(p: Polynomial, order: MonomialOrder = MonomialOrder.DEGREVLEX) -> list[dict[str, Any]]:
    """Terms from the largest monomial down, each {"coeff", "vars": [[block, s, i, π, exp], ...]}."""
    return [
        {"coeff": fraction_str(c), "vars": [[v.block, v.row, v.col, v.cdeg, e] for v, e in m]}
        for m, c in p.sorted_terms(order)
    ]


def matrix_to_json(m: tuple[tuple[Fraction, ...], ...]) -> list[list[str]]:
    return [[fraction_str(x) for x in row] for row in m]


def element_key(sigma: tuple[int, ...]) -> str:
    return "(" + ",".join(str(t) for t in sigma) + ")"


def _graded_label(presentation: UniversalPresentation, index: int) -> list[int]:
    degrees = presentation.degrees or ()
    return [degrees[index - 1], presentation.local_index(index)]


def tag_to_json(tag: Tag, presentation: UniversalPresentation | None = None) -> dict[str, Any]:
    if presentation is not None and presentation.graded:
        return {
            "gen": tag.gen,
            "a": _graded_label(presentation, tag.a),
            "inputs": [_graded_label(presentation, i) for i in tag.inputs],
            "omega": tag.omega,
            "degenerate": tag.degenerate,
        }
    return {"gen": tag.gen, "a": tag.a, "inputs": list(tag.inputs), "omega": tag.omega}


def presentation_to_json(presentation: UniversalPresentation) -> dict[str, Any]:
    """The UniversalPresentation document; parses back through data_importer.parse_presentation."""
    doc: dict[str, Any] = {
        "operad": presentation.operad,
        "src_dim": presentation.src_dim,
        "tgt_dim": presentation.tgt_dim,
        "graded": presentation.graded,
    }
    if presentation.graded:
        doc["degrees"] = list(presentation.degrees or ())
    doc.update(
        {
            "order": presentation.order.value,
            "dropped": presentation.dropped,
            "duplicates": presentation.duplicates,
            "jgens": [
                {"tag": tag_to_json(t.tag, presentation), "poly": polynomial_to_json(t.poly, presentation.order)}
                for t in presentation.jgens
            ],
        }
    )
    return doc


@singledispatch
def to_jsonable(obj: Any) -> Any:
    """Convert reports and values into plain JSON data with a fixed key order."""
    if is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if not f.name.startswith("_")}
        if hasattr(obj, "passed"):
            out["passed"] = obj.passed
        return out
    return obj


@to_jsonable.register
def _(obj: Fraction) -> str:
    return fraction_str(obj)


@to_jsonable.register
def _(obj: Polynomial) -> str:
    return format_polynomial(obj)


@to_jsonable.register
def _(obj: Enum) -> Any:
    return obj.value


@to_jsonable.register
def _(obj: Tag) -> dict[str, Any]:
    return tag_to_json(obj)


@to_jsonable.register
def _(obj: tuple) -> list[Any]:
    return [to_jsonable(x) for x in obj]


@to_jsonable.register
def _(obj: list) -> list[Any]:
    return [to_jsonable(x) for x in obj]


@to_jsonable.register
def _(obj: dict) -> dict[str, Any]:
    out = {}
    for k, v in obj.items():
        key = element_key(k) if isinstance(k, tuple) else str(k)
        out[key] = to_jsonable(v)
    return out


@to_jsonable.register
def _(obj: UniversalPresentation) -> dict[str, Any]:
    return presentation_to_json(obj)


@to_jsonable.register
def _(obj: GroebnerBasis) -> dict[str, Any]:
    return {
        "order": obj.order.value,
        "reduced": obj.reduced,
        "basis": [polynomial_to_json(g, obj.order) for g in obj.basis],
    }


@to_jsonable.register
def _(obj: KPoint) -> list[list[str]]:
    return matrix_to_json(obj.matrix)


@to_jsonable.register
def _(obj: AbelianGroup) -> dict[str, Any]:
    return {"factors": list(obj.factors)}


@to_jsonable.register
def _(obj: GroupMorphism) -> dict[str, Any]:
    return {
        "group": to_jsonable(obj.group),
        "projections": {element_key(s): matrix_to_json(obj.projections[s]) for s in sorted(obj.projections)},
    }


@to_jsonable.register
def _(obj: Grading) -> dict[str, Any]:
    return {
        "group": to_jsonable(obj.group),
        "components": {
            element_key(s): [[fraction_str(x) for x in v] for v in obj.components[s]] for s in sorted(obj.components)
        },
    }


def dumps(obj: Any) -> str:
    """Deterministic JSON text for any report or value."""
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def write_text(text: str, output: Path | None) -> None:
    """Write to the output file, or to stdout when none is given."""
    if output is None:
        print(text, end="")
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w") as f:
        f.write(text)
    log.info("Wrote %s", output)


def write_metadata(output: Path, command: str, inputs: list[str]) -> Path:
    """Write the provenance sidecar <output>.meta.json; the artifact itself stays free of timestamps."""
    try:
        tool_version = version("opcoact")
    except PackageNotFoundError:
        tool_version = "unknown"
    sidecar = output.with_name(output.name + ".meta.json")
    meta = {
        "tool": "opcoact",
        "version": tool_version,
        "command": command,
        "inputs": inputs,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    with open(sidecar, "w") as f:
        json.dump(meta, f, indent=2)
    return sidecar
