from .bench import BenchResult, FileBench, run_benchmark
from .corpus import (
    CaseResult,
    CorpusRunner,
    Expectation,
    SuiteResult,
    TestCase,
    discover_cases,
    junit_xml,
    parse_expectations,
    run_test_corpus,
)
from .coverage import CoverageReport, generate_coverage
from .golden import GoldenCheck, check_golden, check_golden_dir, project_report

__all__ = [
    "BenchResult",
    "CaseResult",
    "CorpusRunner",
    "CoverageReport",
    "Expectation",
    "FileBench",
    "GoldenCheck",
    "SuiteResult",
    "TestCase",
    "check_golden",
    "check_golden_dir",
    "discover_cases",
    "generate_coverage",
    "junit_xml",
    "parse_expectations",
    "project_report",
    "run_benchmark",
    "run_test_corpus",
]
