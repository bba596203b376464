"""
This module, tables.py, renders reports as rich tables for `--format text`.

Every renderer returns a rich renderable; render_text prints it into a string with a fixed
width and no colour so the output is the same on every terminal.
"""

from __future__ import annotations

from dataclasses import fields, is_dataclass
from functools import singledispatch
from io import StringIO
from typing import Any

from rich import box
from rich.console import Console, Group, RenderableType
from rich.table import Table
from rich.text import Text

from opcoact.core.coact import GroupMorphism, Grading, KPoint
from opcoact.core.groebner import GroebnerBasis
from opcoact.core.polyring import format_polynomial
from opcoact.core.universal import UniversalPresentation
from opcoact.utils.data_exporter import element_key, fraction_str, tag_to_json, to_jsonable

WIDTH = 120


def _status(passed: bool) -> Text:
    return Text("PASS", style="bold green") if passed else Text("FAIL", style="bold red")


def _cell(value: Any) -> str:
    """One table cell; lists become one line per item."""
    plain = to_jsonable(value)
    if isinstance(plain, list):
        return "\n".join(_cell_item(x) for x in plain) if plain else "-"
    return _cell_item(plain)


def _cell_item(value: Any) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(_cell_item(x) for x in value) + ")"
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_cell_item(v)}" for k, v in value.items())
    return str(value)


def _matrix(title: str, rows: tuple[tuple[Any, ...], ...]) -> Table:
    table = Table(title=title, show_header=False, box=box.SIMPLE)
    for row in rows:
        table.add_row(*(fraction_str(x) for x in row))
    return table


@singledispatch
def renderable(obj: Any) -> RenderableType:
    """Fallback: a two-column table of a report's fields, or the value as text."""
    if is_dataclass(obj) and not isinstance(obj, type):
        table = Table(title=type(obj).__name__, show_header=False, box=box.SIMPLE)
        for f in fields(obj):
            if not f.name.startswith("_"):
                table.add_row(f.name, _cell(getattr(obj, f.name)))
        if hasattr(obj, "passed"):
            table.add_row("result", _status(obj.passed))
        return table
    return Text(_cell(obj))


@renderable.register
def _(obj: UniversalPresentation) -> RenderableType:
    table = Table(title=f"Universal polynomials for {obj.operad}", box=box.SIMPLE_HEAD)
    for name in ("gen", "a", "inputs", "ω", "polynomial"):
        table.add_column(name)
    if obj.graded:
        table.add_column("degenerate")
    for tagged in obj.jgens:
        tag = tag_to_json(tagged.tag, obj)
        row = [tag["gen"], _cell_item(tag["a"]), _cell_item(tag["inputs"]), str(tag["omega"])]
        row.append(format_polynomial(tagged.poly, obj.order))
        if obj.graded:
            row.append("yes" if tag["degenerate"] else "")
        table.add_row(*row)
    summary = Text(
        f"{len(obj.jgens)} generators of J on a {obj.src_dim}x{obj.tgt_dim} grid; "
        f"{obj.dropped} zero dropped, {obj.duplicates} duplicates"
    )
    return Group(table, summary)


@renderable.register
def _(obj: GroebnerBasis) -> RenderableType:
    table = Table(title=f"Reduced Gröbner basis ({obj.order.value})", box=box.SIMPLE_HEAD)
    table.add_column("#", justify="right")
    table.add_column("polynomial")
    for index, g in enumerate(obj.basis, start=1):
        table.add_row(str(index), format_polynomial(g, obj.order))
    return table


@renderable.register
def _(obj: KPoint) -> RenderableType:
    return _matrix("K-point", obj.matrix)


@renderable.register
def _(obj: GroupMorphism) -> RenderableType:
    parts = [_matrix(f"P{element_key(sigma)}", obj.projections[sigma]) for sigma in sorted(obj.projections)]
    return Group(*parts) if parts else Text("no projections")


@renderable.register
def _(obj: Grading) -> RenderableType:
    table = Table(title="Grading", box=box.SIMPLE_HEAD)
    table.add_column("σ")
    table.add_column("spanning vectors")
    for sigma in sorted(obj.components):
        vectors = ["(" + ", ".join(fraction_str(x) for x in v) + ")" for v in obj.components[sigma]]
        table.add_row(element_key(sigma), "\n".join(vectors))
    return table


def render_text(obj: Any) -> str:
    """Render a report as plain text."""
    console = Console(file=StringIO(), width=WIDTH, color_system=None, force_terminal=False, highlight=False)
    console.print(renderable(obj))
    return console.file.getvalue()
