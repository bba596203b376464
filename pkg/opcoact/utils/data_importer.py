from fractions import Fraction
from pathlib import Path
from typing import Any
import json
import logging

from opcoact.core import linalg
from opcoact.core.coact import AbelianGroup, Grading, GroupMorphism, KPoint
from opcoact.core.groebner import GroebnerBasis
from opcoact.core.operad import GeneratorSet, GeneratorSpec, Node, OperadElement, OperadPresentation, Tree
from opcoact.core.palgebra import StructureAlgebra, StructureTensor
from opcoact.core.polyring import MonomialOrder, Polynomial, var
from opcoact.core.presets import preset
from opcoact.core.universal import Tag, TaggedPolynomial, UniversalPresentation
from opcoact.utils.errors import InputError

log = logging.getLogger(__name__)


def parse_rational(value: Any) -> Fraction:
    """Read a rational given as a JSON integer or a "p/q" string.

    Raises:
        InputError: For floats, booleans and malformed strings.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{value!r} is not an exact rational; use an integer or a \"p/q\" string.")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise InputError(f"{value!r} is not an exact rational; use an integer or a \"p/q\" string.")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"Cannot read {value!r} as a rational.") from exc
    raise InputError(f"Cannot read {value!r} as a rational.")


def load_json(path: Path) -> Any:
    """Load a JSON file.

    Args:
        path (Path): Path to the file.

    Raises:
        InputError: If the file does not exist or is not valid JSON.

    Returns:
        Any: The parsed document.
    """
    if not path.exists():
        raise InputError(f"File {path} does not exist.")
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _inline_or_file(text: str) -> Any:
    """CLI values may be inline JSON or a path to a JSON file."""
    candidate = Path(text)
    if candidate.suffix == ".json" or (candidate.exists() and candidate.is_file()):
        return load_json(candidate)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{text!r} is neither a JSON value nor an existing file.") from exc


def load_operad(ref: str, k: int | None = None) -> OperadPresentation:
    """A preset name, or the path of an operad JSON file."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        return parse_operad(load_json(path), name=path.stem)
    return preset(ref, k)


def _action_row(entry: Any, position: int, width: int, gname: str) -> tuple[Fraction, ...]:
    # a full matrix is recognised by its nesting depth
    if isinstance(entry, list) and entry and isinstance(entry[0], list):
        if len(entry) != width:
            raise InputError(f"Action matrix of {gname} has {len(entry)} rows, expected {width}.")
        entry = entry[position]
    if not isinstance(entry, list):
        raise InputError(f"Action entry of {gname} must be a row or a matrix.")
    return tuple(parse_rational(x) for x in entry)


def _parse_tree(gens: GeneratorSet, node: Any, labels: list[int]) -> Tree:
    if node is None:
        if not labels:
            raise InputError("Relation tree has more leaves than its leafperm.")
        return labels.pop(0)
    if not isinstance(node, list) or not node:
        raise InputError(f"Tree node {node!r} must be null or [generator, child, ...].")
    g = gens.index(node[0])
    return Node(g, tuple(_parse_tree(gens, child, labels) for child in node[1:]))


def _count_leaves(node: Any) -> int:
    if node is None:
        return 1
    return sum(_count_leaves(child) for child in node[1:])


def parse_operad(data: dict[str, Any], name: str = "custom") -> OperadPresentation:
    """Build a presentation from operad JSON.

    Raises:
        InputError: If the document is malformed or the action is not a representation.
    """
    try:
        raw_gens = data["generators"]
    except (KeyError, TypeError) as exc:
        raise InputError("Operad file needs a \"generators\" list.") from exc
    peers: dict[int, list[int]] = {}
    for g, raw in enumerate(raw_gens):
        peers.setdefault(int(raw["arity"]), []).append(g)
    specs = []
    for g, raw in enumerate(raw_gens):
        arity = int(raw["arity"])
        group = peers[arity]
        action = tuple(
            _action_row(entry, group.index(g), len(group), raw["name"]) for entry in raw.get("action", [])
        )
        specs.append(GeneratorSpec(name=str(raw["name"]), arity=arity, cdeg=int(raw.get("cdeg", 0)), action=action))
    gens = GeneratorSet(specs)
    relations = []
    for raw_relation in data.get("relations", []):
        total: OperadElement | None = None
        for term in raw_relation:
            tree_data = term["tree"]
            width = _count_leaves(tree_data)
            labels = [int(x) for x in term.get("leafperm", range(1, width + 1))]
            if len(labels) != width:
                raise InputError(f"leafperm {labels} does not match a tree with {width} leaves.")
            elem = OperadElement.from_tree(gens, _parse_tree(gens, tree_data, list(labels)), parse_rational(term.get("coeff", 1)))
            total = elem if total is None else total + elem
        if total is not None:
            relations.append(total)
    return OperadPresentation(
        name=str(data.get("name", name)),
        gens=gens,
        relations=relations,
        graded=bool(data.get("graded", False)),
        quadratic=bool(data.get("quadratic", True)),
    )


def _out_vector(raw: dict[str, Any], offset: int, size: int, where: str) -> dict[int, Fraction]:
    vec = {}
    for key, value in raw.items():
        s = int(key)
        if not 1 <= s <= size:
            raise InputError(f"Output index {s} out of range in {where}.")
        vec[offset + s - 1] = parse_rational(value)
    return vec


def parse_algebra(data: dict[str, Any], pres: OperadPresentation, name: str = "algebra") -> StructureAlgebra:
    """Build an algebra from algebra JSON, converting 1-based (or graded (p, i)) indices.

    Raises:
        InputError: If the document is malformed or an index is out of range.
    """
    label = str(data.get("name", name))
    graded = "dims" in data
    if graded:
        dims = [int(d) for d in data["dims"]]
        offsets = [sum(dims[:p]) for p in range(len(dims))]
        dim = sum(dims)
        degrees: tuple[int, ...] | None = tuple(p for p, d in enumerate(dims) for _ in range(d))
    elif "dim" in data:
        dim = int(data["dim"])
        degrees = None
    else:
        raise InputError(f"Algebra {label} needs \"dim\" or \"dims\".")

    def global_index(p: int, i: int) -> int:
        if not 0 <= p < len(dims) or not 1 <= i <= dims[p]:
            raise InputError(f"Basis element ({p}, {i}) does not exist in {label}.")
        return offsets[p] + i - 1

    tensors = {}
    for gname, raw in data.get("operations", {}).items():
        spec = pres.gens.specs[pres.gens.index(gname)]
        entries: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for entry in raw.get("entries", []):
            where = f"{gname} at {entry.get('in')}"
            if graded:
                pairs = [(int(p), int(i)) for p, i in entry["in"]]
                inputs = tuple(global_index(p, i) for p, i in pairs)
                theta = sum(p for p, _ in pairs) + spec.cdeg
                if theta >= len(dims):
                    if any(parse_rational(v) for v in entry["out"].values()):
                        raise InputError(f"{where} lands in degree {theta}, which {label} does not have.")
                    continue
                vec = _out_vector(entry["out"], offsets[theta], dims[theta], where)
            else:
                inputs = tuple(int(i) - 1 for i in entry["in"])
                if any(not 0 <= i < dim for i in inputs):
                    raise InputError(f"Input index out of range in {where}.")
                vec = _out_vector(entry["out"], 0, dim, where)
            if len(inputs) != spec.arity:
                raise InputError(f"{where} has {len(inputs)} inputs, {gname} has arity {spec.arity}.")
            slot = entries.setdefault(inputs, {})
            for s, c in vec.items():
                slot[s] = slot.get(s, 0) + c
        tensors[gname] = StructureTensor.build(spec.arity, entries)
    return StructureAlgebra(
        name=label, dim=dim, degrees=degrees, tensors=tensors, shorthand=str(data.get("shorthand", "none"))
    )


def load_algebra(path: Path, pres: OperadPresentation) -> StructureAlgebra:
    """Load an algebra JSON file against a presentation."""
    return parse_algebra(load_json(path), pres, name=path.stem)


def parse_matrix(raw: Any) -> linalg.Matrix:
    if not isinstance(raw, list) or any(not isinstance(row, list) for row in raw):
        raise InputError("A matrix must be a list of rows.")
    return linalg.as_matrix([[parse_rational(x) for x in row] for row in raw])


def load_matrix(text: str) -> KPoint:
    """A K-point from inline JSON such as '[[1,0],[1,1]]' or a matrix file."""
    return KPoint(parse_matrix(_inline_or_file(text)))


def parse_group(raw: Any) -> AbelianGroup:
    if isinstance(raw, dict):
        raw = raw.get("factors")
    if not isinstance(raw, list):
        raise InputError("A group needs a \"factors\" list.")
    return AbelianGroup(factors=tuple(int(m) for m in raw))


def load_group(text: str) -> AbelianGroup:
    return parse_group(_inline_or_file(text))


def parse_element(key: str) -> tuple[int, ...]:
    """Group elements are written "(t1,...,tr)"; the parentheses are optional."""
    body = key.strip().strip("()")
    if not body:
        return ()
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError as exc:
        raise InputError(f"{key!r} is not a group element.") from exc


def parse_morphism(raw: dict[str, Any], group: AbelianGroup | None = None) -> GroupMorphism:
    group = group or parse_group(raw.get("group"))
    projections = {parse_element(k): parse_matrix(m) for k, m in raw.get("projections", {}).items()}
    return GroupMorphism(group=group, projections=projections)


def load_morphism(text: str, group: AbelianGroup | None = None) -> GroupMorphism:
    return parse_morphism(_inline_or_file(text), group)


def parse_grading(raw: dict[str, Any], group: AbelianGroup | None = None) -> Grading:
    group = group or parse_group(raw.get("group"))
    components = {
        parse_element(k): [tuple(parse_rational(x) for x in v) for v in vectors]
        for k, vectors in raw.get("components", {}).items()
    }
    return Grading(group=group, components=components)


def load_grading(text: str, group: AbelianGroup | None = None) -> Grading:
    return parse_grading(_inline_or_file(text), group)


def parse_polynomial(raw: list[dict[str, Any]], graded: bool = False) -> Polynomial:
    terms = {}
    for term in raw:
        factors = []
        for block, s, i, pi, e in term["vars"]:
            factors.extend([var(int(s), int(i), block=int(block), cdeg=int(pi))] * int(e))
        piece = Polynomial.product(parse_rational(term["coeff"]), factors, graded=graded)
        for m, c in piece.terms.items():
            terms[m] = terms.get(m, 0) + c
    return Polynomial(terms, graded=graded)


def parse_presentation(raw: dict[str, Any]) -> UniversalPresentation:
    """Rebuild a UniversalPresentation from its JSON export.

    Raises:
        InputError: If the document is malformed.
    """
    try:
        graded = bool(raw.get("graded", False))
        degrees = tuple(int(d) for d in raw["degrees"]) if graded else None
        presentation = UniversalPresentation(
            src_dim=int(raw["src_dim"]),
            tgt_dim=int(raw["tgt_dim"]),
            order=MonomialOrder(raw.get("order", "degrevlex")),
            graded=graded,
            degrees=degrees,
            operad=str(raw.get("operad", "")),
            dropped=int(raw.get("dropped", 0)),
            duplicates=int(raw.get("duplicates", 0)),
        )
        for item in raw.get("jgens", []):
            t = item["tag"]
            if graded and degrees is not None:
                by_degree = {p: [i for i, d in enumerate(degrees) if d == p] for p in set(degrees)}
                a = by_degree[t["a"][0]][t["a"][1] - 1] + 1
                inputs = tuple(by_degree[p][i - 1] + 1 for p, i in t["inputs"])
            else:
                a = int(t["a"])
                inputs = tuple(int(i) for i in t["inputs"])
            tag = Tag(str(t["gen"]), a, inputs, int(t.get("omega", 0)), bool(t.get("degenerate", False)))
            presentation.jgens.append(TaggedPolynomial(tag, parse_polynomial(item["poly"], graded)))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"Malformed presentation document: {exc}") from exc
    return presentation


def load_presentation(path: Path) -> UniversalPresentation:
    return parse_presentation(load_json(path))


def parse_groebner(raw: dict[str, Any]) -> GroebnerBasis:
    """Rebuild a GroebnerBasis from the groebner report.

    Raises:
        InputError: If the document is malformed.
    """
    try:
        return GroebnerBasis(
            basis=[parse_polynomial(g) for g in raw["basis"]],
            order=MonomialOrder(raw.get("order", "degrevlex")),
            reduced=bool(raw.get("reduced", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"Malformed Gröbner basis document: {exc}") from exc
