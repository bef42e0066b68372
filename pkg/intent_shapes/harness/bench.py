"""Validation benchmark: W warmups then N timed repetitions per (file, tier).

Only the validation call is timed; parsing happens once per file up front.
Runs are sequential on the calling thread.
"""

from __future__ import annotations

import json
import logging
import os
import platform
import statistics
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import psutil

from ..errors import IntentShapesError
from ..logs import monitor
from ..rdf.graph import Graph
from ..rdf.turtle import parse_turtle_file
from ..shacl.model import ShapesGraph, ValidationReport
from ..shacl.validator import Validator
from .corpus import TestCase

logger = logging.getLogger(__name__)

DEFAULT_WARMUPS = 2
DEFAULT_REPETITIONS = 6
SAMPLE_COLUMNS = ["file", "module", "tier", "triples", "sample", "ms"]


def get_memory_usage() -> float:
    """Current RSS in MB."""
    process = psutil.Process(os.getpid())
    return process.memory_info().rss / 1024 / 1024


def system_info() -> dict:
    memory = psutil.virtual_memory()
    return {
        "python_version": sys.version,
        "platform": platform.platform(),
        "available_memory_mb": round(memory.available / 1024 / 1024, 1),
        "cpu_cores": psutil.cpu_count(),
    }


def violation_set(report: ValidationReport) -> frozenset[tuple[str, str, str]]:
    """Focus, constraint and message of every result; what both tiers must agree on."""
    return frozenset((str(r.focus_node), str(r.constraint_id), r.message) for r in report.results)


def time_validation(
    validator: Validator, data: Graph, warmups: int, repetitions: int
) -> tuple[list[float], ValidationReport]:
    """Milliseconds per timed run plus the report of the last run."""
    report = None
    for _ in range(warmups):
        report = validator.validate(data)
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        report = validator.validate(data)
        samples.append((time.perf_counter() - start) * 1000)
    if report is None:
        report = validator.validate(data)
    return samples, report


def _plain(value):
    # numpy scalars from pandas aggregates
    return value.item() if hasattr(value, "item") else str(value)


@dataclass
class FileBench:
    path: Path
    module: str
    tier: str
    triples: int
    samples: list[float]

    @property
    def total(self) -> float:
        return float(sum(self.samples))

    @property
    def mean(self) -> float:
        return statistics.mean(self.samples) if self.samples else 0.0

    @property
    def std(self) -> float:
        return float(np.std(self.samples, ddof=1)) if len(self.samples) > 1 else 0.0


@dataclass
class BenchResult:
    warmups: int
    repetitions: int
    files: list[FileBench] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    memory_mb: float = 0.0

    def samples_frame(self) -> pd.DataFrame:
        rows = [
            {
                "file": f"{bench.module}/{bench.path.parent.name}/{bench.path.name}",
                "module": bench.module,
                "tier": bench.tier,
                "triples": bench.triples,
                "sample": index,
                "ms": round(ms, 4),
            }
            for bench in self.files
            for index, ms in enumerate(bench.samples, start=1)
        ]
        return pd.DataFrame(rows, columns=SAMPLE_COLUMNS)

    def tiers(self) -> list[str]:
        return sorted({bench.tier for bench in self.files})

    def tier_summary(self) -> pd.DataFrame:
        """Total, mean per file and std of the per-file means, per tier."""
        rows = []
        for tier in self.tiers():
            means = [b.mean for b in self.files if b.tier == tier]
            rows.append(
                {
                    "tier": tier,
                    "files": len(means),
                    "total_ms": round(sum(b.total for b in self.files if b.tier == tier), 3),
                    "mean_ms": round(float(np.mean(means)), 4) if means else 0.0,
                    "std_ms": round(float(np.std(means, ddof=1)), 4) if len(means) > 1 else 0.0,
                }
            )
        return pd.DataFrame(rows)

    def module_summary(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [
                {"module": b.module, "tier": b.tier, "mean_ms": b.mean, "std_ms": b.std, "triples": b.triples}
                for b in self.files
            ]
        )
        if frame.empty:
            return frame
        return frame.groupby(["module", "tier"], as_index=False).agg(
            files=("mean_ms", "size"),
            mean_ms=("mean_ms", "mean"),
            std_ms=("std_ms", "mean"),
            triples=("triples", "sum"),
        )

    def overhead(self, tier: str = "af", baseline: str = "sparql") -> float | None:
        """Relative cost of ``tier`` over ``baseline`` in percent."""
        totals = {t: sum(b.total for b in self.files if b.tier == t) for t in (tier, baseline)}
        if tier not in self.tiers() or baseline not in self.tiers() or totals[baseline] == 0:
            return None
        return (totals[tier] - totals[baseline]) / totals[baseline] * 100

    def write(self, output_dir: Path) -> tuple[Path, Path]:
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        csv_path = output_dir / "bench.csv"
        self.samples_frame().to_csv(csv_path, index=False)
        json_path = output_dir / "bench.json"
        document = {
            "warmups": self.warmups,
            "repetitions": self.repetitions,
            "tiers": self.tier_summary().to_dict("records"),
            "modules": self.module_summary().to_dict("records"),
            "overhead_percent": self.overhead(),
            "tier_mismatches": self.mismatches,
            "errors": self.errors,
            "memory_mb": round(self.memory_mb, 2),
            "system_info": system_info(),
        }
        with open(json_path, "w", encoding="utf-8") as handle:
            json.dump(document, handle, indent=2, default=_plain)
        return csv_path, json_path

    def render(self) -> str:
        lines = [f"Benchmark: {self.warmups} warmups, {self.repetitions} repetitions, {len(self.files)} runs"]
        for row in self.tier_summary().to_dict("records"):
            lines.append(
                f"  {row['tier']:<8} files={row['files']:<4} total={row['total_ms']:.2f} ms "
                f"mean/file={row['mean_ms']:.3f} ms std={row['std_ms']:.3f} ms"
            )
        overhead = self.overhead()
        if overhead is not None:
            lines.append(f"  af overhead vs sparql: {overhead:+.1f}%")
        if self.mismatches:
            lines.append(f"  tier mismatches: {len(self.mismatches)}")
        for error in self.errors:
            lines.append(f"  error: {error}")
        return "\n".join(lines)


@monitor
def run_benchmark(
    cases: list[TestCase],
    shapes_by_tier: dict[str, ShapesGraph],
    ontology: Graph,
    *,
    warmups: int = DEFAULT_WARMUPS,
    repetitions: int = DEFAULT_REPETITIONS,
) -> BenchResult:
    if warmups < 0 or repetitions < 1:
        raise ValueError("warmups must be >= 0 and repetitions >= 1")
    result = BenchResult(warmups, repetitions)
    validators = {tier: Validator(shapes, ontology) for tier, shapes in shapes_by_tier.items()}
    baseline_memory = get_memory_usage()

    for case in cases:
        try:
            data, _ = parse_turtle_file(case.path, bnode_prefix=f"{case.path.stem}_")
        except IntentShapesError as exc:
            result.errors.append(f"{case.name}: {exc}")
            continue
        outcomes = {}
        for tier, validator in validators.items():
            samples, report = time_validation(validator, data, warmups, repetitions)
            result.files.append(FileBench(case.path, case.module, tier, len(data), samples))
            outcomes[tier] = violation_set(report)
        if len(set(outcomes.values())) > 1:
            result.mismatches.append(case.name)
            logger.warning("Tiers disagree on %s", case.name)

    result.memory_mb = get_memory_usage() - baseline_memory
    logger.info("Benchmarked %d files across %d tiers", len(cases), len(validators))
    return result
