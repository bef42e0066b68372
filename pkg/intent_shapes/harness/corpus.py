"""Good/bad test corpus runner.

Layout: ``<root>/<Module>/good/*.ttl`` must conform, ``<root>/<Module>/bad/*.ttl``
must produce every violation named in its header::

    # expect: tio:FunctionUsageArityConstraint ex:Guard "called with 0 arguments"

The focus and the quoted message substring are optional. Extra violations in a
bad file are allowed.
"""

from __future__ import annotations

import logging
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from xml.etree import ElementTree

from ..errors import CorpusError, IntentShapesError
from ..rdf.graph import Graph, PrefixMap, compact
from ..rdf.terms import Iri, Term
from ..rdf.turtle import parse_turtle
from ..shacl.model import ShapesGraph, ValidationReport, ValidationResult
from ..shacl.validator import Validator, constraint_ids

logger = logging.getLogger(__name__)

SLOW_VALIDATION_SECONDS = 1.0
POLARITIES = ("good", "bad")

_EXPECT_RE = re.compile(
    r'^#\s*expect:\s*(?P<constraint>[^\s"]+)'
    r'(?:\s+(?P<focus>[^\s"]+))?'
    r'(?:\s+"(?P<substring>(?:[^"\\]|\\.)*)")?\s*$'
)


@dataclass(frozen=True)
class Expectation:
    constraint: Term
    focus: Term | None = None
    substring: str | None = None

    def matches(self, result: ValidationResult) -> bool:
        if result.constraint_id != self.constraint:
            return False
        if self.focus is not None and result.focus_node != self.focus:
            return False
        return self.substring is None or self.substring in result.message

    def describe(self, prefixes: PrefixMap | None = None) -> str:
        text = compact(self.constraint, prefixes)
        if self.focus is not None:
            text += f" {compact(self.focus, prefixes)}"
        if self.substring is not None:
            text += f' "{self.substring}"'
        return text


@dataclass
class TestCase:
    path: Path
    module: str
    polarity: str
    expectations: tuple[Expectation, ...] = ()
    graph: Graph | None = None
    prefixes: PrefixMap | None = None
    error: str | None = None

    __test__ = False

    @property
    def name(self) -> str:
        return f"{self.module}/{self.polarity}/{self.path.name}"


@dataclass
class CaseResult:
    case: TestCase
    passed: bool
    report: ValidationReport | None = None
    missing: tuple[Expectation, ...] = ()
    duration: float = 0.0
    error: str | None = None
    exercised: frozenset[Term] = frozenset()

    @property
    def triples(self) -> int:
        return len(self.case.graph) if self.case.graph is not None else 0

    def reason(self) -> str:
        if self.error:
            return self.error
        if self.case.polarity == "good":
            return f"expected conformance, got {len(self.report or ())} results"
        if self.missing:
            return "missing expected violations: " + "; ".join(
                e.describe(self.case.prefixes) for e in self.missing
            )
        return ""


@dataclass
class SuiteResult:
    tier: str
    results: list[CaseResult] = field(default_factory=list)
    unbalanced: list[str] = field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.unbalanced and all(r.passed for r in self.results)

    def failures(self) -> list[CaseResult]:
        return [r for r in self.results if not r.passed]

    def rows(self) -> list[dict]:
        return [
            {
                "module": r.case.module,
                "polarity": r.case.polarity,
                "file": r.case.path.name,
                "passed": r.passed,
                "results": len(r.report) if r.report is not None else 0,
                "duration_ms": round(r.duration * 1000, 3),
            }
            for r in self.results
        ]


def parse_expectations(text: str, prefixes: PrefixMap) -> tuple[Expectation, ...]:
    """Read ``# expect:`` lines from the leading comment block."""

    def resolve(token: str) -> Term:
        if token.startswith("<") and token.endswith(">"):
            return Iri(token[1:-1])
        return prefixes.expand(token)

    expectations = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if not stripped.startswith("#"):
            break
        if not re.match(r"^#\s*expect:", stripped):
            continue
        match = _EXPECT_RE.match(stripped)
        if match is None:
            raise ValueError(f"Malformed expectation header: {stripped}")
        focus = match.group("focus")
        substring = match.group("substring")
        expectations.append(
            Expectation(
                constraint=resolve(match.group("constraint")),
                focus=resolve(focus) if focus else None,
                substring=substring.replace('\\"', '"') if substring is not None else None,
            )
        )
    return tuple(expectations)


def discover_cases(root: Path, module: str | None = None) -> list[TestCase]:
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(root, "corpus directory does not exist")
    cases = []
    for module_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        if module is not None and module_dir.name != module:
            continue
        for polarity in POLARITIES:
            for path in sorted((module_dir / polarity).glob("*.ttl")):
                cases.append(TestCase(path, module_dir.name, polarity))
    return cases


def load_case(case: TestCase, shape_prefixes: PrefixMap) -> TestCase:
    """Parse the file and its header; failures are recorded on the case."""
    try:
        text = case.path.read_text(encoding="utf-8")
        graph, prefixes = parse_turtle(text, bnode_prefix=f"{case.path.stem}_")
        case.graph = graph
        case.prefixes = prefixes
        case.expectations = parse_expectations(text, prefixes.merged(shape_prefixes))
    except (IntentShapesError, ValueError, OSError) as exc:
        case.error = f"{type(exc).__name__}: {exc}"
        return case
    if case.polarity == "good" and case.expectations:
        case.error = "good test files must not declare expectations"
    elif case.polarity == "bad" and not case.expectations:
        case.error = "bad test file has no '# expect:' header"
    return case


def check_case(case: TestCase, validator: Validator) -> CaseResult:
    if case.error is not None:
        return CaseResult(case, passed=False, error=case.error)
    exercised: set[Term] = set()
    start = time.perf_counter()
    try:
        report = validator.validate(case.graph, exercised=exercised, prefixes=case.prefixes)
    except IntentShapesError as exc:
        return CaseResult(case, passed=False, error=f"{type(exc).__name__}: {exc}")
    duration = time.perf_counter() - start
    if duration > SLOW_VALIDATION_SECONDS:
        logger.warning("Slow validation: %s took %.2fs", case.name, duration)

    if case.polarity == "good":
        passed, missing = report.conforms, ()
    else:
        missing = tuple(e for e in case.expectations if not any(e.matches(r) for r in report.results))
        passed = not report.conforms and not missing
    return CaseResult(case, passed, report, missing, duration, exercised=frozenset(exercised))


def shape_constraints(shapes: ShapesGraph) -> set[Term]:
    ids: set[Term] = set()
    for shape in shapes.targeted_shapes():
        ids.update(constraint_ids(shape))
    return ids


def unexpected_constraints(cases: list[TestCase], shapes: ShapesGraph) -> list[Term]:
    """Constraints no bad file expects."""
    expected = {e.constraint for c in cases if c.polarity == "bad" for e in c.expectations}
    return sorted(shape_constraints(shapes) - expected, key=str)


def unexercised_constraints(results: list[CaseResult], shapes: ShapesGraph) -> list[Term]:
    """Constraints that saw no focus node in any good file."""
    exercised = set()
    for result in results:
        if result.case.polarity == "good":
            exercised |= result.exercised
    return sorted(shape_constraints(shapes) - exercised, key=str)


class CorpusRunner:
    def __init__(self, shapes: ShapesGraph, ontology: Graph, tier: str = "af", jobs: int = 1):
        self.shapes = shapes
        self.validator = Validator(shapes, ontology)
        self.tier = tier
        self.jobs = max(1, jobs)
        self.results: list[CaseResult] = []
        self.lock = threading.Lock()

    def worker(self, cases: list[TestCase]) -> None:
        local_results = [check_case(case, self.validator) for case in cases]

        with self.lock:
            self.results.extend(local_results)

    def run(self, cases: list[TestCase], balance: bool = True) -> SuiteResult:
        start = time.perf_counter()
        suite = SuiteResult(self.tier)
        for case in cases:
            load_case(case, self.shapes.prefixes)

        if balance:
            missing_bad = unexpected_constraints(cases, self.shapes)
            if missing_bad:
                suite.unbalanced = [
                    f"no bad test expects {compact(c, self.shapes.prefixes)}" for c in missing_bad
                ]
                logger.error("Unbalanced corpus: %s", "; ".join(suite.unbalanced))
                return suite

        self.results = []
        if self.jobs == 1:
            self.worker(cases)
        else:
            batches = [cases[i :: self.jobs] for i in range(self.jobs)]
            with ThreadPoolExecutor(max_workers=self.jobs) as executor:
                futures = [executor.submit(self.worker, batch) for batch in batches if batch]
                for future in futures:
                    future.result()
        suite.results = sorted(self.results, key=lambda r: (r.case.module, r.case.polarity, r.case.path.name))

        if balance:
            suite.unbalanced = [
                f"no good test exercises {compact(c, self.shapes.prefixes)}"
                for c in unexercised_constraints(suite.results, self.shapes)
            ]
        suite.duration = time.perf_counter() - start
        logger.info(
            "Corpus run (%s tier): %d files, %d failed in %.2fs",
            self.tier,
            len(suite.results),
            len(suite.failures()),
            suite.duration,
        )
        return suite


def run_test_corpus(
    root: Path,
    shapes: ShapesGraph,
    ontology: Graph,
    *,
    tier: str = "af",
    module: str | None = None,
    jobs: int = 1,
) -> SuiteResult:
    """Validate every corpus file; the balance guard applies to full runs only."""
    cases = discover_cases(root, module)
    balance = module is None and bool(cases)
    return CorpusRunner(shapes, ontology, tier, jobs).run(cases, balance=balance)


def junit_xml(suite: SuiteResult) -> str:
    failures = suite.failures()
    root = ElementTree.Element(
        "testsuite",
        name=f"intent-shapes-{suite.tier}",
        tests=str(len(suite.results)),
        failures=str(len(failures)),
        time=f"{suite.duration:.3f}",
    )
    for result in suite.results:
        element = ElementTree.SubElement(
            root,
            "testcase",
            classname=f"{result.case.module}.{result.case.polarity}",
            name=result.case.path.stem,
            time=f"{result.duration:.3f}",
        )
        if not result.passed:
            failure = ElementTree.SubElement(element, "failure", message=result.reason())
            if result.report is not None:
                failure.text = "\n".join(r.message for r in result.report.results)
    for problem in suite.unbalanced:
        element = ElementTree.SubElement(root, "testcase", classname="corpus", name="balance")
        ElementTree.SubElement(element, "failure", message=problem)
    return ElementTree.tostring(root, encoding="unicode")
