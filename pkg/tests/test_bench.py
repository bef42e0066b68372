import json

import pandas as pd
import pytest

from conftest import turtle
from intent_shapes.harness.bench import SAMPLE_COLUMNS, BenchResult, FileBench, run_benchmark, time_validation
from intent_shapes.harness.corpus import discover_cases
from intent_shapes.shacl import Validator


@pytest.fixture(scope="module")
def utility_cases(corpus_dir):
    return discover_cases(corpus_dir, "Utility")


@pytest.fixture(scope="module")
def bench(utility_cases, af_shapes, sparql_shapes, ontology):
    return run_benchmark(
        utility_cases, {"af": af_shapes, "sparql": sparql_shapes}, ontology, warmups=1, repetitions=3
    )


def test_sample_counts(bench, utility_cases):
    assert len(bench.files) == len(utility_cases) * 2
    assert all(len(f.samples) == 3 for f in bench.files)
    assert all(ms >= 0 for f in bench.files for ms in f.samples)
    assert bench.errors == []


def test_tiers_agree(bench):
    assert bench.mismatches == []
    assert bench.tiers() == ["af", "sparql"]


def test_write(bench, utility_cases, tmp_path):
    csv_path, json_path = bench.write(tmp_path)
    frame = pd.read_csv(csv_path)
    assert list(frame.columns) == SAMPLE_COLUMNS
    assert len(frame) == len(utility_cases) * 2 * 3
    assert set(frame["tier"]) == {"af", "sparql"}

    document = json.loads(json_path.read_text())
    assert document["repetitions"] == 3
    assert {row["tier"] for row in document["tiers"]} == {"af", "sparql"}
    assert isinstance(document["overhead_percent"], float)
    assert "cpu_cores" in document["system_info"]


def test_render(bench):
    text = bench.render()
    assert text.startswith("Benchmark: 1 warmups, 3 repetitions")
    assert "af overhead vs sparql" in text


def test_time_validation_counts_only_timed_runs(af_shapes, ontology):
    data, _ = turtle("ex:a ex:p 1 .")
    samples, report = time_validation(Validator(af_shapes, ontology), data, warmups=0, repetitions=4)
    assert len(samples) == 4
    assert report.conforms


def test_overhead():
    result = BenchResult(0, 1)
    assert result.overhead() is None
    result.files = [
        FileBench(None, "M", "af", 1, [3.0]),
        FileBench(None, "M", "sparql", 1, [2.0]),
    ]
    assert result.overhead() == pytest.approx(50.0)
    assert result.overhead("sparql", "af") == pytest.approx(-100 / 3)


def test_statistics():
    bench = FileBench(None, "M", "af", 1, [1.0, 2.0, 3.0])
    assert bench.total == 6.0
    assert bench.mean == 2.0
    assert bench.std == pytest.approx(1.0)
    assert FileBench(None, "M", "af", 1, [5.0]).std == 0.0


def test_single_tier_has_no_overhead(utility_cases, af_shapes, ontology):
    result = run_benchmark(utility_cases[:1], {"af": af_shapes}, ontology, warmups=0, repetitions=1)
    assert result.overhead() is None
    assert len(result.samples_frame()) == 1


@pytest.mark.parametrize("warmups, repetitions", [(-1, 3), (0, 0)])
def test_bad_configuration(warmups, repetitions, af_shapes, ontology):
    with pytest.raises(ValueError):
        run_benchmark([], {"af": af_shapes}, ontology, warmups=warmups, repetitions=repetitions)
