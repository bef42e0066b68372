"""Command-line entry point: validate, test, coverage, bench.

Exit codes: 0 conforms / all tests pass, 1 violations / failing tests,
2 usage or load errors. Reports and summaries go to stdout, logs to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from .errors import IntentShapesError
from .harness.bench import run_benchmark
from .harness.corpus import SuiteResult, discover_cases, junit_xml, run_test_corpus
from .harness.coverage import generate_coverage
from .logs import setup_logging
from .rdf.graph import Graph, PrefixMap
from .rdf.turtle import parse_turtle_file
from .shacl.loader import shapes_from_files
from .shacl.model import ShapesGraph
from .shacl.report import serialize_report
from .shacl.validator import Validator
from .tio.catalog import VocabularyCatalog, load_ontology
from .tio.library import (
    CORPUS_DIR,
    TIERS,
    expand_ttl,
    extension_files,
    load_fixture_ontology,
    load_fixture_shapes,
    ontology_files,
    resolve_shape_files,
)

logger = logging.getLogger(__name__)

DEFAULT_WARMUPS = 2
DEFAULT_REPETITIONS = 6
DEFAULT_TIER = "af"
DEFAULT_FORMAT = "turtle"
FORMATS = ("turtle", "json")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class CliConfig:
    subcommand: str
    data: list[Path] = field(default_factory=list)
    shapes: list[Path] = field(default_factory=list)
    ontology: list[Path] = field(default_factory=list)
    extensions: list[Path] = field(default_factory=list)
    include_extensions: bool = True
    tier: str = DEFAULT_TIER
    tiers: tuple[str, ...] = (DEFAULT_TIER,)
    format: str = DEFAULT_FORMAT
    verbosity: int = 0
    log_file: str | None = None
    jobs: int = 1
    module: str | None = None
    corpus: Path = CORPUS_DIR
    output_dir: Path = Path(".")
    junit: Path | None = None
    warmups: int = DEFAULT_WARMUPS
    repetitions: int = DEFAULT_REPETITIONS

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        tier = getattr(args, "tier", None)
        return cls(
            subcommand=args.command,
            data=[Path(p) for p in getattr(args, "data", [])],
            shapes=[Path(p) for p in args.shapes or []],
            ontology=[Path(p) for p in args.ontology or []],
            extensions=[Path(p) for p in args.extensions or []],
            include_extensions=not args.no_extensions,
            tier=tier or DEFAULT_TIER,
            # bench compares every tier unless one is named
            tiers=(tier,) if tier else (TIERS if args.command == "bench" else (DEFAULT_TIER,)),
            format=getattr(args, "format", DEFAULT_FORMAT),
            verbosity=args.verbose,
            log_file=args.log_file,
            jobs=max(1, getattr(args, "jobs", 1)),
            module=getattr(args, "module", None),
            corpus=Path(getattr(args, "corpus", None) or CORPUS_DIR),
            output_dir=Path(getattr(args, "output_dir", None) or "."),
            junit=Path(args.junit) if getattr(args, "junit", None) else None,
            warmups=getattr(args, "warmups", DEFAULT_WARMUPS),
            repetitions=getattr(args, "reps", DEFAULT_REPETITIONS),
        )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    common.add_argument("--log-file", help="Also write logs to this file")
    common.add_argument("--shapes", nargs="+", help="Shape files or directories (default: packaged library)")
    common.add_argument("--ontology", nargs="+", help="Ontology files or directories (default: packaged modules)")
    common.add_argument("--extensions", nargs="+", help="Extension files or directories (default: packaged mixins)")
    common.add_argument("--no-extensions", action="store_true", help="Load the baseline ontology only")

    parser = argparse.ArgumentParser(prog="intent-shapes", description="Validate intent graphs against SHACL shapes")
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", parents=[common], help="Validate data files")
    validate.add_argument("data", nargs="+", help="Turtle data files")
    validate.add_argument("--tier", choices=TIERS, default=DEFAULT_TIER)
    validate.add_argument("--format", choices=FORMATS, default=DEFAULT_FORMAT)
    validate.add_argument("--jobs", type=int, default=1, help="Validate files in parallel")

    test = subparsers.add_parser("test", parents=[common], help="Run the good/bad test corpus")
    test.add_argument("--corpus", help="Corpus root (default: packaged corpus)")
    test.add_argument("--module", help="Only run this module's tests")
    test.add_argument("--tier", choices=TIERS, default=DEFAULT_TIER)
    test.add_argument("--jobs", type=int, default=1)
    test.add_argument("--junit", help="Write JUnit XML to this path")

    coverage = subparsers.add_parser("coverage", parents=[common], help="Report vocabulary coverage")
    coverage.add_argument("--corpus", help="Corpus root used for test-exercise flags")
    coverage.add_argument("--tier", choices=TIERS, default=DEFAULT_TIER)
    coverage.add_argument("--output-dir", help="Directory for coverage.csv (default: .)")

    bench = subparsers.add_parser("bench", parents=[common], help="Benchmark validation over the corpus")
    bench.add_argument("--corpus", help="Corpus root (default: packaged corpus)")
    bench.add_argument("--module", help="Only benchmark this module's tests")
    bench.add_argument("--tier", choices=TIERS, help="Benchmark one tier (default: all)")
    bench.add_argument("--reps", type=int, default=DEFAULT_REPETITIONS, help="Timed repetitions per file")
    bench.add_argument("--warmups", type=int, default=DEFAULT_WARMUPS, help="Untimed warmup runs per file")
    bench.add_argument("--output-dir", help="Directory for bench.csv and bench.json (default: .)")
    return parser


def _uses_fixtures(config: CliConfig) -> bool:
    return not config.ontology and not config.extensions


def load_ontology_graph(config: CliConfig) -> Graph:
    if _uses_fixtures(config):
        graph, _ = load_fixture_ontology(config.include_extensions)
        return graph
    modules = expand_ttl(config.ontology) if config.ontology else ontology_files()
    extensions = []
    if config.include_extensions:
        extensions = expand_ttl(config.extensions) if config.extensions else extension_files()
    graph, _ = load_ontology([*modules, *extensions])
    return graph


def load_catalog(config: CliConfig) -> VocabularyCatalog:
    modules = expand_ttl(config.ontology) if config.ontology else ontology_files()
    extensions = []
    if config.include_extensions:
        extensions = expand_ttl(config.extensions) if config.extensions else extension_files()
    return VocabularyCatalog.from_files(modules, extensions)


def load_shapes_graph(config: CliConfig, tier: str) -> ShapesGraph:
    if not config.shapes:
        return load_fixture_shapes(tier)
    return shapes_from_files(resolve_shape_files(config.shapes, tier))


def _validate_file(validator: Validator, path: Path, fmt: str) -> tuple[str, bool]:
    data, prefixes = parse_turtle_file(path, bnode_prefix=f"{path.stem}_")
    report = validator.validate(data, prefixes=prefixes)
    names: PrefixMap = validator.prefixes.merged(prefixes)
    return serialize_report(report, fmt, names), report.conforms


def cmd_validate(config: CliConfig) -> int:
    missing = [str(p) for p in config.data if not p.is_file()]
    if missing:
        logger.error("No such file: %s", ", ".join(missing))
        return EXIT_USAGE
    validator = Validator(load_shapes_graph(config, config.tier), load_ontology_graph(config))

    with ThreadPoolExecutor(max_workers=config.jobs) as executor:
        outputs = list(executor.map(lambda p: _validate_file(validator, p, config.format), config.data))

    for path, (text, conforms) in zip(config.data, outputs):
        if len(config.data) > 1 and config.format == "turtle":
            print(f"# {path}")
        sys.stdout.write(text)
        logger.info("%s: %s", path, "conforms" if conforms else "violations")
    return EXIT_OK if all(conforms for _, conforms in outputs) else EXIT_FAILURE


def render_suite(suite: SuiteResult) -> str:
    lines = []
    frame = pd.DataFrame(suite.rows())
    if not frame.empty:
        table = (
            frame.groupby("module", sort=True)
            .agg(files=("file", "size"), passed=("passed", "sum"))
            .reset_index()
        )
        lines.append(f"{'Module':<30} {'Files':>6} {'Passed':>7}")
        lines.append("-" * 45)
        for row in table.to_dict("records"):
            lines.append(f"{row['module']:<30} {row['files']:>6} {int(row['passed']):>7}")
        lines.append("-" * 45)
    for result in suite.failures():
        lines.append(f"FAIL {result.case.name}: {result.reason()}")
    for problem in suite.unbalanced:
        lines.append(f"UNBALANCED {problem}")
    passed = len(suite.results) - len(suite.failures())
    lines.append(f"{passed}/{len(suite.results)} test files passed ({suite.tier} tier)")
    return "\n".join(lines)


def cmd_test(config: CliConfig) -> int:
    shapes = load_shapes_graph(config, config.tier)
    ontology = load_ontology_graph(config)
    suite = run_test_corpus(
        config.corpus, shapes, ontology, tier=config.tier, module=config.module, jobs=config.jobs
    )
    print(render_suite(suite))
    if config.junit is not None:
        config.junit.parent.mkdir(parents=True, exist_ok=True)
        config.junit.write_text(junit_xml(suite), encoding="utf-8")
        logger.info("JUnit report written to %s", config.junit)
    return EXIT_OK if suite.passed else EXIT_FAILURE


def cmd_coverage(config: CliConfig) -> int:
    shapes = load_shapes_graph(config, config.tier)
    report = generate_coverage(load_catalog(config), shapes, config.corpus)
    path = report.to_csv(config.output_dir / "coverage.csv")
    logger.info("Coverage written to %s", path)
    print(report.render())
    return EXIT_OK


def cmd_bench(config: CliConfig) -> int:
    cases = discover_cases(config.corpus, config.module)
    shapes_by_tier = {tier: load_shapes_graph(config, tier) for tier in config.tiers}
    result = run_benchmark(
        cases,
        shapes_by_tier,
        load_ontology_graph(config),
        warmups=config.warmups,
        repetitions=config.repetitions,
    )
    csv_path, json_path = result.write(config.output_dir)
    logger.info("Benchmark written to %s and %s", csv_path, json_path)
    print(result.render())
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "test": cmd_test,
    "coverage": cmd_coverage,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    config = CliConfig.from_args(args)
    setup_logging(config.verbosity, config.log_file)

    if config.subcommand == "bench" and (config.repetitions < 1 or config.warmups < 0):
        logger.error("--reps must be at least 1 and --warmups at least 0")
        return EXIT_USAGE
    try:
        return COMMANDS[config.subcommand](config)
    except (IntentShapesError, OSError, ValueError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
