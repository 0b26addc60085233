"""Command line interface.

Exit codes: 0 on success, 1 when the input violates a domain rule, 2 when a file
cannot be read or parsed or a setting is invalid.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

import pandas as pd

import archopt
from archopt.archive import ConflictError, NotFoundError, experiment_data, open_archive
from archopt.attribution import (
    attribute,
    attribute_sequences,
    attribution_frame,
    idle_frame,
    summarize,
)
from archopt.model import (
    Architecture,
    ModelParseError,
    ModelValidationError,
    UnknownElementError,
    fixture_path,
    load_architecture,
)
from archopt.objectives import (
    PowerParams,
    evaluate,
    parse_objectives,
    read_complexity_catalog,
)
from archopt.refactor import (
    ActionSamplingError,
    InfeasibleSequenceError,
    PreconditionError,
    RefactoringSequence,
    read_sequence,
)
from archopt.search import (
    ConfigError,
    ExperimentConfig,
    FrontFileError,
    Individual,
    objective_samples,
    read_config,
    read_front,
    read_front_dir,
    run_experiment,
    write_experiment,
)
from archopt.search.fronts import PhenotypeSchema
from archopt.solver import InfeasibleResultError, solve
from archopt.stats import (
    ObjectiveMismatchError,
    action_frequencies,
    compare_frequencies,
    distribution_frame,
    psp,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2

DOMAIN_ERRORS = (
    ModelValidationError,
    InfeasibleSequenceError,
    PreconditionError,
    ActionSamplingError,
    ObjectiveMismatchError,
    NotFoundError,
    ConflictError,
    InfeasibleResultError,
    UnknownElementError,
)
INPUT_ERRORS = (ModelParseError, ConfigError, FrontFileError, OSError, ValueError)
CSV_FLOAT_FORMAT = "%.6f"


def _model(args: argparse.Namespace) -> Architecture:
    return load_architecture(args.model or fixture_path())


def _params(args: argparse.Namespace) -> PowerParams:
    return PowerParams() if args.k is None else PowerParams(args.k)


def _write_csv(frame: pd.DataFrame, out: Path | None):
    if out is None:
        frame.to_csv(sys.stdout, index=False, float_format=CSV_FLOAT_FORMAT)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info("Wrote %s", out)


def cmd_validate(args: argparse.Namespace) -> int:
    """Check a model file; violations are listed on standard error."""
    try:
        _model(args)
    except ModelValidationError as err:
        for violation in err.violations:
            print(violation, file=sys.stderr)
        return EXIT_DOMAIN
    print("valid")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    """Print the objectives of the architecture a sequence produces."""
    arch0 = _model(args)
    seq = read_sequence(args.sequence) if args.sequence else RefactoringSequence()
    catalog = ExperimentConfig().complexity
    if args.complexity_catalog:
        catalog = read_complexity_catalog(args.complexity_catalog)
    vector = evaluate(arch0, seq, _params(args), catalog)
    print(json.dumps(PhenotypeSchema().dump(vector), sort_keys=True))
    return EXIT_OK


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    config = read_config(args.config) if args.config else ExperimentConfig()
    try:
        objectives = parse_objectives(args.objectives) if args.objectives else None
        complexity = (
            read_complexity_catalog(args.complexity_catalog)
            if args.complexity_catalog
            else None
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err
    return config.override(
        seed=args.seed,
        runs=args.runs,
        objective_set=objectives,
        k=args.k,
        complexity=complexity,
        max_generations=args.generations,
    )


def cmd_optimize(args: argparse.Namespace) -> int:
    """Run an experiment and write its fronts, manifest and raw distributions."""
    arch0 = _model(args)
    config = _experiment_config(args)
    out = Path(args.out)
    name = args.name or out.name
    if args.archive:
        with open_archive(args.archive) as archive:
            if name in archive:
                raise ConflictError(
                    f"An experiment named {name!r} is archived already"
                )
    result = run_experiment(config, arch0)
    manifest = write_experiment(result, arch0, out, args.model, name)
    if args.archive:
        with open_archive(args.archive) as archive:
            archive.put(name, experiment_data(result, manifest))
            for run in result.runs:
                archive.add_front(name, run.front)
            archive.add_front(name, result.super_front, super_front=True)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Write the penalty of every objective, baseline against power-aware."""
    if args.archive:
        with open_archive(args.archive) as archive:
            baseline = archive.objective_samples(args.baseline)
            power_aware = archive.objective_samples(args.power_aware)
    else:
        baseline = objective_samples(read_front_dir(args.baseline))
        power_aware = objective_samples(read_front_dir(args.power_aware))
    report = psp(baseline, power_aware)
    _write_csv(report.to_frame(), Path(args.out) if args.out else None)
    if args.distributions:
        frame = distribution_frame({"baseline": baseline, "power-aware": power_aware})
        _write_csv(frame, Path(args.distributions))
    return EXIT_OK


def cmd_attribute(args: argparse.Namespace) -> int:
    """Write per-solution per-scenario power and cost, their summary and idle nodes."""
    arch0 = _model(args)
    params = _params(args)
    front = read_front(args.front)
    reports = attribute_sequences(
        arch0, ((ind.solution_id, ind.genotype) for ind in front), params
    )
    initial = None
    if (initial_result := solve(arch0)).feasible:
        initial = attribute(arch0, initial_result, params)
    out = Path(args.out)
    _write_csv(attribution_frame(reports), out / "attribution.csv")
    _write_csv(summarize(list(reports.values()), initial), out / "summary.csv")
    _write_csv(idle_frame(reports), out / "idle.csv")
    return EXIT_OK


def _experiment_name(path: Path) -> str:
    return path.parent.name if path.stem == "super-front" else path.stem


def cmd_actions_report(args: argparse.Namespace) -> int:
    """Write the frequencies of refactoring actions in one or more fronts."""
    fronts: dict[str, list[Individual]] = {}
    if args.archive:
        with open_archive(args.archive) as archive:
            for name in args.fronts:
                fronts[name] = archive.individuals(name, super_front=True)
    else:
        for path in map(Path, args.fronts):
            name = _experiment_name(path)
            fronts[name if name not in fronts else str(path)] = read_front(path)
    reports = {
        name: action_frequencies(ind.genotype for ind in front)
        for name, front in fronts.items()
    }
    if len(reports) == 1:
        frame = next(iter(reports.values())).to_frame()
    else:
        frame = compare_frequencies(reports)
    _write_csv(frame, Path(args.out) if args.out else None)
    return EXIT_OK


def _add_model(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--model", type=Path, help="Model JSON file (default: bundled fixture)"
    )


def _add_power(parser: argparse.ArgumentParser):
    parser.add_argument("--k", type=float, help="Idle power scaling factor")


def _add_archive(parser: argparse.ArgumentParser, help_: str):
    parser.add_argument("--archive", metavar="URL", help=help_)


def build_parser() -> argparse.ArgumentParser:
    """Parser of every subcommand."""
    parser = argparse.ArgumentParser(
        prog="archopt",
        description="Search sustainable deployments of microservice architectures.",
    )
    parser.add_argument("--version", action="version", version=archopt.__version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="Check a model file")
    _add_model(validate)
    validate.set_defaults(handler=cmd_validate)

    evaluate_ = commands.add_parser("evaluate", help="Objectives of one sequence")
    _add_model(evaluate_)
    evaluate_.add_argument("--sequence", type=Path, help="JSON list of actions")
    _add_power(evaluate_)
    evaluate_.add_argument("--complexity-catalog", type=Path)
    evaluate_.set_defaults(handler=cmd_evaluate)

    optimize = commands.add_parser("optimize", help="Run an NSGA-II experiment")
    _add_model(optimize)
    optimize.add_argument("--config", type=Path, help="Experiment JSON file")
    optimize.add_argument("--out", type=Path, required=True)
    optimize.add_argument("--name", help="Experiment name (default: --out's name)")
    optimize.add_argument("--seed", type=int)
    optimize.add_argument("--runs", type=int)
    optimize.add_argument("--generations", type=int)
    optimize.add_argument(
        "--objectives", help="baseline, power-aware or a comma separated list"
    )
    _add_power(optimize)
    optimize.add_argument("--complexity-catalog", type=Path)
    _add_archive(optimize, "Also store the experiment in this database")
    optimize.set_defaults(handler=cmd_optimize)

    compare = commands.add_parser("compare", help="Penalty of the power objective")
    compare.add_argument("baseline", help="Experiment directory or archived name")
    compare.add_argument("power_aware", help="Experiment directory or archived name")
    compare.add_argument("--out", type=Path, help="CSV file (default: stdout)")
    compare.add_argument(
        "--distributions", type=Path, help="Also write the pooled values here"
    )
    _add_archive(compare, "Read experiments from this database")
    compare.set_defaults(handler=cmd_compare)

    attribute_ = commands.add_parser(
        "attribute", help="Power and cost of every request type"
    )
    _add_model(attribute_)
    attribute_.add_argument("front", type=Path, help="Front file")
    attribute_.add_argument("--out", type=Path, default=Path("."))
    _add_power(attribute_)
    attribute_.set_defaults(handler=cmd_attribute)

    actions = commands.add_parser(
        "actions-report", help="Frequencies of refactoring actions"
    )
    actions.add_argument("fronts", nargs="+", help="Front files or archived names")
    actions.add_argument("--out", type=Path, help="CSV file (default: stdout)")
    _add_archive(actions, "Read super fronts from this database")
    actions.set_defaults(handler=cmd_actions_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run a subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except DOMAIN_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except INPUT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
