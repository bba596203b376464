import argparse
import logging
import sys
from pathlib import Path

from opcoact.commands import COMMANDS, EXIT_INPUT, FORMATS, RunConfig, run
from opcoact.core.polyring import MonomialOrder
from opcoact.utils import config
from opcoact.utils.errors import InputError
from opcoact.utils.logger import setup_logging

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """The opcoact argument parser: one positional subcommand and shared flags."""
    parser = argparse.ArgumentParser(
        prog="opcoact",
        description="Universal coacting bialgebras of algebras over quadratic operads.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to compute or check.")
    parser.add_argument("--operad", default="lie", help="Preset name or operad JSON file (default: lie).")
    parser.add_argument("--k", type=int, default=None, help="Arity of the k-ary presets tass, pass, klie, kleib.")
    parser.add_argument("--algebra", type=Path, default=None, help="Algebra JSON file.")
    parser.add_argument(
        "--target-algebra", type=Path, default=None, help="Second algebra b for C(a, b); defaults to --algebra."
    )
    parser.add_argument("--presentation", type=Path, default=None, help="Saved presentation JSON to reuse.")
    parser.add_argument("--order", choices=[o.value for o in MonomialOrder], default=None, help="Monomial order.")
    parser.add_argument("--max-arity", type=int, default=None, help="Largest arity certified by verify-t52.")
    parser.add_argument("--max-nodes", type=int, default=None, help="Largest number of vertices per composite.")
    parser.add_argument("--max-basis-size", type=int, default=None, help="Gröbner basis size cap.")
    parser.add_argument("--max-steps", type=int, default=None, help="Gröbner reduction step cap.")
    parser.add_argument("--matrix", default=None, help="Matrix as inline JSON or a JSON file.")
    parser.add_argument("--group", default=None, help="Group as inline JSON or a JSON file, e.g. '[2]'.")
    parser.add_argument("--grading", default=None, help="Grading as inline JSON or a JSON file.")
    parser.add_argument("--second-grading", default=None, help="Second grading for grading-iso-check.")
    parser.add_argument("--morphism", default=None, help="Projection matrices as inline JSON or a JSON file.")
    parser.add_argument("--output", type=Path, default=None, help="Write the report here instead of stdout.")
    parser.add_argument("--metadata", action="store_true", help="Also write <output>.meta.json.")
    parser.add_argument("--format", choices=FORMATS, default=None, help="Report format (default from config).")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug.")
    return parser


def main(argv: list[str] | None = None) -> None:
    """Run the CLI and exit with the status of the run."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        config.check_config_json()
        run_config = RunConfig.from_settings(
            config.load_config(),
            command=args.command,
            operad=args.operad,
            k=args.k,
            algebra=args.algebra,
            target_algebra=args.target_algebra,
            presentation=args.presentation,
            order=args.order,
            max_arity=args.max_arity,
            max_nodes=args.max_nodes,
            max_basis_size=args.max_basis_size,
            max_reduction_steps=args.max_steps,
            matrix=args.matrix,
            group=args.group,
            grading=args.grading,
            second_grading=args.second_grading,
            morphism=args.morphism,
            output=args.output,
            metadata=args.metadata,
            format=args.format,
        )
    except InputError as exc:
        log.error("%s", exc)
        sys.exit(EXIT_INPUT)
    sys.exit(run(run_config))


if __name__ == "__main__":
    main()
