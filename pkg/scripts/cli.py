"""
Command line interface of framelab.

Indices are 1-based on the command line and in reports. Exit codes: 0 when
the command ran (and a `decide` answered Yes), 1 when a `decide` answered
No or Undecided, 2 on usage or input errors.
"""

import argparse
import sys
import time

import pandas as pd
from loguru import logger

from framelab import __version__
from framelab.config import Settings
from framelab.construct import (
    example_registry,
    failing_frame_from_pair,
    generic_full_spark,
    projection_family,
)
from framelab.errors import FramelabError, NotClassifiable
from framelab.frames import frame_bounds
from framelab.io import (
    frame_to_dict,
    parse_vector,
    read_frame,
    vector_to_list,
    write_frame,
)
from framelab.perturb import (
    DEFAULT_SWEEP,
    ExperimentConfig,
    Subspace,
    density_base_frame,
    density_experiment,
    density_sweep,
    sampled_sphere_distance,
    sphere_distance,
    verify_basis_perturbation,
    verify_normal_estimate,
)
from framelab.report import (
    build_report,
    classification_to_dict,
    decision_result,
    dumps_report,
    frame_source,
    render_text,
    witness_to_dict,
)
from framelab.spark import Outcome, does_phase_retrieval, is_full_spark
from framelab.wpr import (
    ambiguity_pairs,
    classify_pair,
    decide_wpr,
    measurements_agree,
    phase_retrieval_from_classification,
    project_frame,
    projected_pr_equivalence,
)

from .setup_examples import export_examples

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)

EXPERIMENT_TRIALS = 1000


def configure_logging(verbose: bool = False) -> None:
    """
    Send log records to stderr; stdout carries the report
    """
    logger.configure(
        handlers=[
            {
                "sink": sys.stderr,
                "format": LOG_FORMAT,
                "level": "DEBUG" if verbose else "WARNING",
                "colorize": True,
                "backtrace": True,
                "diagnose": True,
            }
        ]
    )


def _indices(text: str) -> tuple:
    """
    argparse type for comma-separated 1-based indices
    """
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from exc
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("indices start at 1")
    return tuple(v - 1 for v in values)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="Print the report as JSON."
    )
    common.add_argument("--seed", type=int, help="Seed of random draws.")
    common.add_argument(
        "--tolerance", type=float, help="Zero tolerance of float frames."
    )
    common.add_argument(
        "--trials", type=int, help="Samples or trials to draw."
    )
    common.add_argument(
        "--epsilon", type=float, help="Perturbation budget."
    )
    common.add_argument(
        "--cap", type=int, help="Largest m for partition enumeration."
    )
    common.add_argument(
        "--timings",
        action="store_true",
        help="Add wall-clock timings to decisions.",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Increase the verbosity of the logger.",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="framelab",
        description=(
            "Decide phase retrieval and weak phase retrieval of finite "
            "real frames."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"framelab {__version__}"
    )
    parser.add_argument(
        "--export-examples",
        action="store_true",
        help="Write the example frames as frame files.",
    )
    parser.add_argument(
        "--output-path",
        type=str,
        help="Directory for --export-examples.",
    )
    commands = parser.add_subparsers(dest="command")

    analyze = commands.add_parser(
        "analyze", parents=[common], help="Run every check on a frame."
    )
    analyze.add_argument("frame", help="Frame file.")

    decide = commands.add_parser("decide", help="Decide one property.")
    checks = decide.add_subparsers(dest="check", required=True)
    for check, text in (
        ("spark", "Full spark."),
        ("pr", "Phase retrieval."),
        ("wpr", "Weak phase retrieval."),
    ):
        sub = checks.add_parser(check, parents=[common], help=text)
        sub.add_argument("frame", help="Frame file.")

    witness = commands.add_parser(
        "witness",
        parents=[common],
        help="Weak phase decision with the ambiguity pairs of the frame.",
    )
    witness.add_argument("frame", help="Frame file.")

    classify = commands.add_parser(
        "classify", parents=[common], help="Classify an ambiguity pair."
    )
    classify.add_argument("--x", required=True, help='Vector, e.g. "2,3,0".')
    classify.add_argument("--y", required=True, help="Vector.")
    classify.add_argument("--frame", help="Frame file the pair belongs to.")

    project = commands.add_parser(
        "project",
        parents=[common],
        help="Project onto coordinates, or test the projection conditions.",
    )
    project.add_argument("frame", help="Frame file.")
    project.add_argument(
        "--coords", type=_indices, help="1-based coordinates, e.g. 1,3."
    )

    construct = commands.add_parser("construct", help="Build a frame.")
    kinds = construct.add_subparsers(dest="kind", required=True)
    for kind, text in (
        ("p3", "Full spark under every coordinate projection."),
        ("fullspark", "Generic full spark frame."),
    ):
        sub = kinds.add_parser(kind, parents=[common], help=text)
        sub.add_argument("--m", type=int, required=True)
        sub.add_argument("--n", type=int, required=True)
        sub.add_argument("--output", help="Write the frame file here.")
        if kind == "fullspark":
            sub.add_argument(
                "--orthonormal-tail",
                action="store_true",
                help="Canonical basis followed by orthonormal vectors.",
            )
    failing = kinds.add_parser(
        "failing",
        parents=[common],
        help="Frame failing weak phase retrieval through (x+y, x-y).",
    )
    failing.add_argument("--x", required=True)
    failing.add_argument("--y", required=True)
    failing.add_argument("--output", help="Write the frame file here.")

    examples = commands.add_parser("examples", help="Worked example frames.")
    actions = examples.add_subparsers(dest="action", required=True)
    actions.add_parser("list", parents=[common], help="List the examples.")
    get = actions.add_parser("get", parents=[common], help="Show one.")
    get.add_argument("name", choices=list(example_registry()))
    get.add_argument("--output", help="Write the frame file here.")

    experiment = commands.add_parser(
        "experiment", help="Randomized checks of the perturbation results."
    )
    kinds = experiment.add_subparsers(dest="kind", required=True)
    density = kinds.add_parser(
        "density",
        parents=[common],
        help="Share of perturbed frames failing weak phase retrieval.",
    )
    density.add_argument(
        "frame",
        nargs="?",
        help="Base frame file (default: e1, e2, e3, (1,1,1)/sqrt(3)).",
    )
    for kind in ("p1", "l1l3"):
        sub = kinds.add_parser(
            kind, parents=[common], help="Zero violations expected."
        )
        sub.add_argument("--n", type=int, required=True)

    distance = commands.add_parser(
        "distance",
        parents=[common],
        help="Sphere distance between two spans.",
    )
    distance.add_argument(
        "--first", required=True, help='Spanning vectors, "1,0,0;0,1,0".'
    )
    distance.add_argument("--second", required=True)
    distance.add_argument(
        "--samples", type=int, help="Also report a sampled estimate."
    )
    return parser


def _settings(args) -> Settings:
    trials = getattr(args, "trials", None)
    return Settings.from_env().override(
        seed=getattr(args, "seed", None),
        tolerance=getattr(args, "tolerance", None),
        enumeration_cap=getattr(args, "cap", None),
        falsification_trials=trials,
        density_trials=trials,
    )


def _timed(function, *args, **kwargs) -> tuple:
    start = time.perf_counter()
    value = function(*args, **kwargs)
    return value, time.perf_counter() - start


def _load(args, settings: Settings) -> tuple:
    frame, digest = read_frame(args.frame, settings.tolerance)
    return frame, frame_source(frame, args.frame, digest)


def _decide(check: str, frame, settings: Settings):
    if check == "spark":
        return is_full_spark(frame)
    if check == "pr":
        return does_phase_retrieval(frame, settings.enumeration_cap)
    return decide_wpr(
        frame,
        settings.enumeration_cap,
        settings.falsification_trials,
        settings.seed,
    )


def _decision(check: str, frame, settings: Settings, timings: bool) -> dict:
    decision, seconds = _timed(_decide, check, frame, settings)
    return decision_result(
        check, frame, decision, seconds if timings else None
    )


def _summary(results: list) -> pd.DataFrame:
    rows = [
        {"check": r["check"], "outcome": r["outcome"], "rule": r["rule"]}
        for r in results
        if "outcome" in r
    ]
    return pd.DataFrame(rows, columns=["check", "outcome", "rule"])


def handle_analyze(args, settings: Settings) -> tuple:
    frame, source = _load(args, settings)
    checks = ["pr", "wpr"]
    if frame.m >= frame.n:
        checks.insert(0, "spark")
    results = [_decision(c, frame, settings, args.timings) for c in checks]
    bounds = frame_bounds(frame)
    results.append(
        {
            "check": "frame-bounds",
            "lower": bounds.lower,
            "upper": bounds.upper,
            "tight": bounds.tight,
            "parseval": bounds.parseval,
        }
    )
    return build_report("analyze", results, settings, source), 0


def handle_decide(args, settings: Settings) -> tuple:
    frame, source = _load(args, settings)
    result = _decision(args.check, frame, settings, args.timings)
    code = 0 if result["outcome"] == Outcome.YES.value else 1
    report = build_report(f"decide {args.check}", [result], settings, source)
    return report, code


def _pair_entry(pair) -> dict:
    entry = witness_to_dict(pair)
    try:
        entry["classification"] = classification_to_dict(
            classify_pair(pair.x, pair.y)
        )
    except NotClassifiable as exc:
        entry["classification"] = {
            "error": str(exc),
            "coordinate": exc.coordinate + 1,
        }
    return entry


def handle_witness(args, settings: Settings) -> tuple:
    frame, source = _load(args, settings)
    results = [_decision("wpr", frame, settings, args.timings)]
    results.append(
        {
            "check": "ambiguity-pairs",
            "pairs": [
                _pair_entry(p)
                for p in ambiguity_pairs(frame, settings.enumeration_cap)
            ],
        }
    )
    return build_report("witness", results, settings, source), 0


def handle_classify(args, settings: Settings) -> tuple:
    x, y = parse_vector(args.x), parse_vector(args.y)
    source, agrees = None, None
    if args.frame:
        frame, source = _load(args, settings)
        agrees = measurements_agree(frame.rationalized(), x, y)
        if not agrees:
            logger.warning("x and y are not an ambiguity pair of the frame")
    classification = classify_pair(x, y)
    result = {
        "check": "classify",
        "x": vector_to_list(x),
        "y": vector_to_list(y),
        "ambiguity_pair": agrees,
        "phase_retrieval_kind": phase_retrieval_from_classification(
            classification
        ),
    }
    result.update(classification_to_dict(classification))
    return build_report("classify", [result], settings, source), 0


def handle_project(args, settings: Settings) -> tuple:
    frame, source = _load(args, settings)
    if args.coords is None:
        found = projected_pr_equivalence(frame, settings.enumeration_cap)
        common = None
        if found.common_zero is not None:
            subset, coordinate = found.common_zero
            common = {
                "subset": [i + 1 for i in subset],
                "coordinate": coordinate + 1,
            }
        result = {
            "check": "projection-equivalence",
            "no_common_zero": found.no_common_zero,
            "hyperplanes_pr": found.hyperplanes_pr,
            "all_projections_pr": found.all_projections_pr,
            "agree": found.agree,
            "common_zero": common,
            "failing_projections": [
                [i + 1 for i in c] for c in found.failing_projections
            ],
            "higher_dimensional": found.higher_dimensional,
        }
        return build_report("project", [result], settings, source), 0
    projected = project_frame(frame, args.coords)
    results = [
        {
            "check": "projection",
            "coordinates": [i + 1 for i in sorted(set(args.coords))],
            "frame": frame_to_dict(projected),
        }
    ]
    for check in ("pr", "wpr"):
        results.append(_decision(check, projected, settings, args.timings))
    return build_report("project", results, settings, source), 0


def _frame_result(check: str, frame, output: str = None) -> dict:
    if output:
        write_frame(frame, output)
        logger.info("wrote {}", output)
    return {"check": check, "frame": frame_to_dict(frame)}


def handle_construct(args, settings: Settings) -> tuple:
    if args.kind == "p3":
        frame = projection_family(args.m, args.n, settings.seed)
    elif args.kind == "fullspark":
        frame = generic_full_spark(
            args.m, args.n, settings.seed, args.orthonormal_tail
        )
    else:
        frame = failing_frame_from_pair(
            parse_vector(args.x), parse_vector(args.y), settings.seed
        )
    result = _frame_result(f"construct {args.kind}", frame, args.output)
    return build_report("construct", [result], settings), 0


def handle_examples(args, settings: Settings) -> tuple:
    registry = example_registry()
    if args.action == "list":
        results = [
            {
                "check": "example",
                "name": example.name,
                "description": example.description,
                "m": example.frame.m,
                "n": example.frame.n,
                "expected": {
                    k: v.value for k, v in example.expected.items()
                },
            }
            for example in registry.values()
        ]
        return build_report("examples list", results, settings), 0
    example = registry[args.name]
    result = _frame_result("example", example.frame, args.output)
    result["name"] = example.name
    result["expected"] = {k: v.value for k, v in example.expected.items()}
    return build_report("examples get", [result], settings), 0


def _density_result(report) -> dict:
    return {
        "check": "density",
        "epsilon": report.epsilon,
        "trials": report.trials,
        "failures": report.failures,
        "fraction": report.fraction,
        "base_outcome": report.base_outcome,
        "coordinate": (
            None if report.coordinate is None else report.coordinate + 1
        ),
        "delta": report.delta,
    }


def handle_experiment(args, settings: Settings) -> tuple:
    if args.kind == "density":
        if args.frame:
            frame, source = _load(args, settings)
        else:
            frame = density_base_frame()
            source = frame_source(frame)
        config = ExperimentConfig(
            epsilon=args.epsilon or 0.0,
            trials=settings.density_trials,
            seed=settings.seed,
            max_denominator=settings.rational_denominator,
        )
        if args.epsilon is not None:
            results = [_density_result(density_experiment(frame, config))]
        else:
            table, threshold = density_sweep(frame, config, DEFAULT_SWEEP)
            results = [
                {
                    "check": "density-sweep",
                    "threshold": threshold,
                    "rows": table.to_dict(orient="records"),
                }
            ]
        return build_report("experiment density", results, settings, source), 0
    trials = args.trials or EXPERIMENT_TRIALS
    if args.kind == "p1":
        found = verify_normal_estimate(args.n, trials, settings.seed)
        result = {
            "check": "p1",
            "trials": found.trials,
            "violations": found.violations,
            "max_ratio": found.max_ratio,
        }
    else:
        found = verify_basis_perturbation(args.n, trials, settings.seed)
        result = {
            "check": "l1l3",
            "trials": found.trials,
            "distance_violations": found.distance_violations,
            "equivalence_violations": found.equivalence_violations,
            "unconditional_violations": found.unconditional_violations,
            "max_distance_ratio": found.max_distance_ratio,
            "max_unconditional_ratio": found.max_unconditional_ratio,
        }
    return build_report(f"experiment {args.kind}", [result], settings), 0


def _span(text: str) -> Subspace:
    vectors = [parse_vector(part) for part in text.split(";")]
    return Subspace.span(vectors)


def handle_distance(args, settings: Settings) -> tuple:
    first, second = _span(args.first), _span(args.second)
    result = {
        "check": "distance",
        "dimensions": [first.dim, second.dim],
        "distance": sphere_distance(first, second),
    }
    if args.samples:
        result["sampled"] = sampled_sphere_distance(
            first, second, args.samples, settings.seed
        )
    return build_report("distance", [result], settings), 0


HANDLERS = {
    "analyze": handle_analyze,
    "decide": handle_decide,
    "witness": handle_witness,
    "classify": handle_classify,
    "project": handle_project,
    "construct": handle_construct,
    "examples": handle_examples,
    "experiment": handle_experiment,
    "distance": handle_distance,
}


def run(argv=None) -> int:
    """
    Parse `argv`, run the subcommand and print its report.

    Returns (int): The exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    configure_logging(getattr(args, "verbose", False))

    # Dependency logic
    if args.export_examples:
        if not args.output_path:
            parser.print_usage(sys.stderr)
            print(
                "framelab: error: --output-path is required when "
                "--export-examples is specified.",
                file=sys.stderr,
            )
            return 2
        for path in export_examples(args.output_path):
            print(path)
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("framelab: error: a command is required", file=sys.stderr)
        return 2

    try:
        settings = _settings(args)
        report, code = HANDLERS[args.command](args, settings)
    except (FramelabError, OSError, ValueError) as exc:
        print(f"framelab: error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        sys.stdout.write(dumps_report(report))
        return code
    text = render_text(report)
    if args.command == "analyze":
        table = _summary(report["results"]).to_string(index=False)
        text += "\n" + table + "\n"
    sys.stdout.write(text)
    return code


def main() -> None:
    configure_logging()
    sys.exit(run(sys.argv[1:]))
