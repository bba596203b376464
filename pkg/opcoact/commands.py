"""
This module, commands.py, ties the library together behind the subcommands of the CLI.

Each subcommand loads its inputs, runs one computation and returns a report. dispatch turns the
report into an exit status; run adds output writing and maps errors to exit statuses.

Classes:
    RunConfig: Everything one invocation needs, after CLI flags are merged over the config file.

    Violation: A generator of J that does not vanish at a matrix, with its value.

    KPointReport: Outcome of kpoint-check.

    AutReport: Outcome of aut-check.

    GradingReport: Outcome of grading-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable
import logging

from opcoact.core.coact import (
    Grading,
    GroupMorphism,
    KPoint,
    bialgebra_structure,
    conjugate,
    grading_support,
    grading_to_morphism,
    grading_violations,
    gradings_isomorphic,
    hom_check,
    invert_kpoint,
    kpoint_violations,
    morphism_to_grading,
    verify_bialgebra,
    verify_group_morphism,
    zeta,
)
from opcoact.core.groebner import Budget
from opcoact.core.operad import OperadPresentation
from opcoact.core.palgebra import StructureAlgebra, check_axioms, check_morphism
from opcoact.core.polyring import MonomialOrder, Polynomial
from opcoact.core.universal import (
    Tag,
    UniversalPresentation,
    graded_universal_polynomials,
    universal_polynomials,
    verify_eta_morphism,
    verify_generation,
)
from opcoact.reports.tables import render_text
from opcoact.utils import data_exporter, data_importer
from opcoact.utils.errors import AxiomError, BudgetExceeded, InputError, OpcoactError

log = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

FORMATS = ("json", "text")


@dataclass(kw_only=True)
class RunConfig:
    """
    One invocation of a subcommand.

    Attributes:
        command (str): Subcommand name, one of COMMANDS.
        operad (str): Preset name or path of an operad JSON file.
        k (int | None): Arity for the k-ary presets.
        algebra (Path | None): The algebra a.
        target_algebra (Path | None): The algebra b of C(a, b); a itself when omitted.
        presentation (Path | None): A saved presentation to use instead of recomputing one.
        order (MonomialOrder): Monomial order.
        max_arity (int | None): Arity bound for verify-t52; derived from the operad when None.
        max_nodes (int): Largest number of internal vertices in verify-t52 composites.
        max_basis_size (int): Gröbner basis size cap.
        max_reduction_steps (int): Gröbner reduction step cap.
        matrix (str | None): A matrix, inline JSON or file.
        group (str | None): A group, inline JSON or file; overrides the group of other inputs.
        grading (str | None): A grading, inline JSON or file.
        second_grading (str | None): The grading compared against in grading-iso-check.
        morphism (str | None): Projection matrices of a map to K[G], inline JSON or file.
        output (Path | None): Report destination; stdout when None.
        metadata (bool): Write a provenance sidecar next to the output.
        format (str): "json" or "text".
    """

    command: str
    operad: str = "lie"
    k: int | None = None
    algebra: Path | None = None
    target_algebra: Path | None = None
    presentation: Path | None = None
    order: MonomialOrder = MonomialOrder.DEGREVLEX
    max_arity: int | None = None
    max_nodes: int = 3
    max_basis_size: int = 2000
    max_reduction_steps: int = 500000
    matrix: str | None = None
    group: str | None = None
    grading: str | None = None
    second_grading: str | None = None
    morphism: str | None = None
    output: Path | None = None
    metadata: bool = False
    format: str = "json"

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"Unknown command {self.command!r}.")
        if self.format not in FORMATS:
            raise InputError(f"Unknown format {self.format!r}; choose json or text.")
        if self.max_basis_size <= 0 or self.max_reduction_steps <= 0:
            raise InputError("Budget caps must be positive.")
        if self.max_arity is not None and self.max_arity < 1:
            raise InputError("max_arity must be positive.")
        if self.max_nodes < 2:
            raise InputError("max_nodes must be at least 2.")
        for path in (self.algebra, self.target_algebra, self.presentation):
            if path is not None and not path.exists():
                raise InputError(f"File {path} does not exist.")

    @classmethod
    def from_settings(cls, settings: dict[str, Any], **overrides: Any) -> RunConfig:
        """Build a config from load_config() output, with non-None overrides taking precedence."""
        caps = settings.get("budget", {})
        values: dict[str, Any] = {
            "order": settings.get("order", "degrevlex"),
            "max_arity": settings.get("max_arity"),
            "max_nodes": settings.get("max_tree_nodes", 3),
            "max_basis_size": caps.get("max_basis_size", 2000),
            "max_reduction_steps": caps.get("max_reduction_steps", 500000),
            "format": settings.get("format", "json"),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            values["order"] = MonomialOrder(values["order"])
        except ValueError as exc:
            raise InputError(f"Unknown monomial order {values['order']!r}.") from exc
        return cls(**values)

    def budget(self) -> Budget:
        return Budget(max_basis_size=self.max_basis_size, max_reduction_steps=self.max_reduction_steps)

    def inputs(self) -> list[str]:
        """Every input the run reads, for the provenance sidecar."""
        out = [f"operad={self.operad}" + (f" k={self.k}" if self.k is not None else "")]
        for name in ("algebra", "target_algebra", "presentation", "matrix", "group", "grading", "second_grading", "morphism"):
            value = getattr(self, name)
            if value is not None:
                out.append(f"{name}={value}")
        return out


@dataclass
class Violation:
    """
    A generator of J that does not vanish at a matrix.

    Attributes:
        tag (Tag): Where the polynomial comes from.
        polynomial (Polynomial): The polynomial.
        value (Fraction): Its value at the matrix.
    """

    tag: Tag
    polynomial: Polynomial
    value: Fraction


@dataclass
class KPointReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass
class AutReport:
    """
    Outcome of aut-check.

    Attributes:
        kpoint (bool): The matrix annihilates every generator of J.
        violations (list[Violation]): The generators that do not vanish.
        invertible (bool): The matrix has an inverse which is again a K-point.
        inverse (KPoint | None): That inverse.
        morphism (bool): zeta of the matrix is an endomorphism of the algebra.
    """

    kpoint: bool
    violations: list[Violation] = field(default_factory=list)
    invertible: bool = False
    inverse: KPoint | None = None
    morphism: bool = False

    @property
    def agree(self) -> bool:
        return self.kpoint == self.morphism

    @property
    def passed(self) -> bool:
        return self.kpoint and self.invertible and self.agree


@dataclass
class GradingReport:
    """
    Outcome of grading-check.

    Attributes:
        support (list[tuple[int, ...]]): Group elements with a nonzero component.
        violations (list[tuple[str, tuple[tuple[int, ...], ...]]]): Generator and component
            degrees wherever the product leaves the expected component.
    """

    support: list[tuple[int, ...]]
    violations: list[tuple[str, tuple[tuple[int, ...], ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class Session:
    """Lazily loaded inputs of one run."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self._pres: OperadPresentation | None = None
        self._alg: StructureAlgebra | None = None
        self._target: StructureAlgebra | None = None
        self._presentation: UniversalPresentation | None = None

    @property
    def pres(self) -> OperadPresentation:
        if self._pres is None:
            self._pres = data_importer.load_operad(self.config.operad, self.config.k)
        return self._pres

    @property
    def alg(self) -> StructureAlgebra:
        if self._alg is None:
            if self.config.algebra is None:
                raise InputError(f"{self.config.command} needs --algebra.")
            self._alg = data_importer.load_algebra(self.config.algebra, self.pres)
        return self._alg

    @property
    def target(self) -> StructureAlgebra:
        if self._target is None:
            if self.config.target_algebra is None:
                self._target = self.alg
            else:
                self._target = data_importer.load_algebra(self.config.target_algebra, self.pres)
        return self._target

    @property
    def presentation(self) -> UniversalPresentation:
        if self._presentation is None:
            if self.config.presentation is not None:
                self._presentation = data_importer.load_presentation(self.config.presentation)
            else:
                self._presentation = universal_polynomials(self.alg, self.target, self.pres, self.config.order)
        return self._presentation

    def require(self, name: str) -> str:
        value = getattr(self.config, name)
        if value is None:
            raise InputError(f"{self.config.command} needs --{name.replace('_', '-')}.")
        return value

    def kpoint(self) -> KPoint:
        return data_importer.load_matrix(self.require("matrix"))

    def grading(self, name: str = "grading") -> Grading:
        group = data_importer.load_group(self.config.group) if self.config.group else None
        return data_importer.load_grading(self.require(name), group)

    def morphism(self) -> GroupMorphism:
        group = data_importer.load_group(self.config.group) if self.config.group else None
        return data_importer.load_morphism(self.require("morphism"), group)


def _violations(presentation: UniversalPresentation, c: KPoint) -> list[Violation]:
    polys = {t.tag: t.poly for t in presentation.jgens}
    return [Violation(tag, polys[tag], value) for tag, value in kpoint_violations(presentation, c)]


def _check_axioms(session: Session) -> Any:
    return check_axioms(session.alg, session.pres)


def _polys(session: Session) -> Any:
    return session.presentation


def _graded_polys(session: Session) -> Any:
    return graded_universal_polynomials(session.alg, session.pres, session.config.order)


def _groebner(session: Session) -> Any:
    return session.presentation.groebner_basis(session.config.budget())


def _verify_eta(session: Session) -> Any:
    return verify_eta_morphism(
        session.alg, session.target, session.pres, session.presentation, session.config.budget()
    )


def _verify_t52(session: Session) -> Any:
    max_arity = session.config.max_arity or session.pres.composite_bound()
    return verify_generation(
        session.alg,
        session.pres,
        session.presentation,
        max_arity,
        max_nodes=session.config.max_nodes,
        budget=session.config.budget(),
    )


def _bialgebra_check(session: Session) -> Any:
    presentation = session.presentation
    return verify_bialgebra(presentation, bialgebra_structure(presentation), session.config.budget())


def _kpoint_check(session: Session) -> Any:
    return KPointReport(violations=_violations(session.presentation, session.kpoint()))


def _aut_check(session: Session) -> Any:
    presentation, c = session.presentation, session.kpoint()
    violations = _violations(presentation, c)
    report = AutReport(kpoint=not violations, violations=violations)
    report.inverse = invert_kpoint(presentation, c)
    report.invertible = report.inverse is not None
    report.morphism = check_morphism(zeta(c), session.alg, session.alg, session.pres)
    for v in violations:
        log.warning("%s does not vanish: %s = %s", v.tag.gen, data_exporter.to_jsonable(v.polynomial), v.value)
    if report.kpoint and not report.invertible:
        log.warning("The matrix is a K-point without an inverse K-point.")
    return report


def _grading_check(session: Session) -> Any:
    grading = session.grading()
    return GradingReport(
        support=grading_support(grading), violations=grading_violations(session.alg, session.pres, grading)
    )


def _grading_to_morphism(session: Session) -> Any:
    grading = session.grading()
    bad = grading_violations(session.alg, session.pres, grading)
    if bad:
        return GradingReport(support=grading_support(grading), violations=bad)
    return grading_to_morphism(session.alg, session.pres, grading)


def _morphism_to_grading(session: Session) -> Any:
    m = session.morphism()
    report = verify_group_morphism(session.presentation, m)
    if not report.passed:
        return report
    return morphism_to_grading(session.presentation, m)


def _conjugate(session: Session) -> Any:
    return conjugate(session.presentation, session.morphism(), session.kpoint())


def _hom_check(session: Session) -> Any:
    return hom_check(session.presentation, session.kpoint(), session.alg, session.target, session.pres)


def _grading_iso_check(session: Session) -> Any:
    return gradings_isomorphic(
        session.alg,
        session.pres,
        session.presentation,
        session.grading(),
        session.grading("second_grading"),
        session.kpoint(),
    )


COMMANDS: dict[str, Callable[[Session], Any]] = {
    "check-axioms": _check_axioms,
    "polys": _polys,
    "graded-polys": _graded_polys,
    "groebner": _groebner,
    "verify-eta": _verify_eta,
    "verify-t52": _verify_t52,
    "bialgebra-check": _bialgebra_check,
    "kpoint-check": _kpoint_check,
    "aut-check": _aut_check,
    "grading-check": _grading_check,
    "grading-to-morphism": _grading_to_morphism,
    "morphism-to-grading": _morphism_to_grading,
    "conjugate": _conjugate,
    "hom-check": _hom_check,
    "grading-iso-check": _grading_iso_check,
}


def dispatch(config: RunConfig) -> tuple[int, Any]:
    """Run one subcommand.

    Args:
        config (RunConfig): The run.

    Raises:
        InputError: For malformed or missing inputs.
        AxiomError: If an algebra is not an algebra over the presentation.
        BudgetExceeded: If a Gröbner computation hits a cap.

    Returns:
        tuple[int, Any]: The exit status (0 pass, 1 failed check) and the report.
    """
    log.info("Running %s with operad %s", config.command, config.operad)
    report = COMMANDS[config.command](Session(config))
    passed = getattr(report, "passed", True)
    return (EXIT_PASS if passed else EXIT_FAIL), report


def serialize(report: Any, fmt: str) -> str:
    return render_text(report) if fmt == "text" else data_exporter.dumps(report)


def run(config: RunConfig) -> int:
    """Dispatch, write the report and map errors to exit statuses."""
    try:
        status, report = dispatch(config)
    except AxiomError as exc:
        log.error("%s", exc)
        status, report = EXIT_FAIL, exc.report
    except BudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except OpcoactError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    if report is not None:
        data_exporter.write_text(serialize(report, config.format), config.output)
        if config.metadata and config.output is not None:
            data_exporter.write_metadata(config.output, config.command, config.inputs())
    return status

