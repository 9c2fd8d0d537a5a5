import json

import numpy as np
import pytest

from youngkit.errors import ConfigError
from youngkit.monotone import MonotoneFn, power
from youngkit.precision import bound_jp
from youngkit.quadrature import ProductKernel
from youngkit.testing import instances
from youngkit.testing.api import default_threads, run_instance, run_sweep
from youngkit.testing.measure import failed_row, measure_report, summarize, to_records
from youngkit.young import YoungInstance, check_young


IDENTITY = {
    "kind": "identity",
    "kernel": {"name": "one"},
    "f": {"domain": [0, 4], "pieces": [{"kind": "affine"}]},
    "a": 0,
    "b": 2,
    "c": 2,
}


class TestInstances:
    def test_deterministic(self):
        first = list(instances.generate("young", 5, 11))
        second = list(instances.generate("young", 5, 11))
        assert first == second
        assert first != list(instances.generate("young", 5, 12))

    def test_every_kind(self):
        for kind in instances.KINDS:
            (description,) = instances.generate(kind, 1, 0)
            assert description["kind"] == kind

    def test_invalid(self):
        with pytest.raises(ValueError):
            list(instances.generate("quartic", 1, 0))
        with pytest.raises(ValueError):
            list(instances.generate("young", 0, 0))

    def test_random_function_is_nondecreasing(self):
        rng = np.random.default_rng(42)
        xs = np.linspace(0, 2, 101)
        for _ in range(20):
            f = MonotoneFn.from_dict(instances.random_function(rng))
            values = f(xs)
            assert np.all(np.diff(values) >= -1e-12)
            assert values[0] >= 0


class TestRunInstance:
    def test_identity(self):
        (row,) = run_instance(IDENTITY, 7)
        assert row["index"] == 7
        assert row["kind"] == "identity"
        assert row["satisfied"]
        assert row["equality"]
        assert row["distance"] == 0
        assert row["agreement"] < 1e-9

    def test_unknown_kind(self):
        with pytest.raises(ConfigError) as e:
            run_instance({"kind": "nope"})
        assert e.value.field == "kind"

    def test_missing_field(self):
        with pytest.raises(ConfigError) as e:
            run_instance({"kind": "gaussian"})
        assert e.value.field == "x"


class TestMeasure:
    def test_lower_bound_row(self):
        report = bound_jp(YoungInstance(ProductKernel.one(), power(2, 0, 3), 0, 1, 2))
        row = measure_report(0, "bounds", report)
        assert row["check"] == "jp_lower"
        assert row["lhs"] == report.bound
        assert row["rhs"] == report.value
        assert row["gap"] == pytest.approx(report.value - report.bound)

    def test_summarize(self):
        inst = YoungInstance(ProductKernel.one(), power(1, 0, 4), 0, 2, 3)
        rows = [measure_report(0, "young", check_young(inst), distance=1.0), failed_row(1, "young")]
        summary = summarize(to_records(rows))
        assert summary["instances"] == 2
        assert summary["rows"] == 2
        assert summary["violations"] == 0
        assert summary["quadrature failures"] == 1
        assert summary["min separated gap"] == pytest.approx(0.5)
        assert np.isnan(summary["max equality gap"])


class TestSweep:
    def test_identity(self):
        records, summary = run_sweep("identity", 4, seed=3, threads=2)
        assert summary["violations"] == 0
        assert summary["count"] == 4
        np.testing.assert_array_equal(records["index"], np.arange(4))

    def test_thread_count_does_not_change_the_output(self, tmp_path):
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        run_sweep("gaussian", 6, seed=1, threads=1, output=str(serial))
        run_sweep("gaussian", 6, seed=1, threads=3, output=str(parallel))
        assert serial.read_bytes() == parallel.read_bytes()
        summary = tmp_path / "serial.csv.summary.json"
        assert summary.exists()
        assert json.loads(summary.read_text())["count"] == 6

    def test_json_output(self, tmp_path):
        path = tmp_path / "sweep.json"
        run_sweep("gaussian", 3, seed=5, threads=1, output=str(path), fmt="json")
        document = json.loads(path.read_text())
        assert len(document["instances"]) == 3
        assert len(document["rows"]) == 3
        assert document["summary"]["seed"] == 5

    def test_same_seed_same_bytes(self, tmp_path):
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        run_sweep("young", 5, seed=9, threads=2, output=str(first))
        run_sweep("young", 5, seed=9, threads=2, output=str(second))
        assert first.read_bytes() == second.read_bytes()
        assert (tmp_path / "first.csv.summary.json").read_bytes() == \
            (tmp_path / "second.csv.summary.json").read_bytes()

    def test_format(self):
        with pytest.raises(ValueError):
            run_sweep("gaussian", 1, fmt="xml")


class TestThreads:
    def test_from_environment(self, monkeypatch):
        monkeypatch.setenv("YOUNGKIT_THREADS", "3")
        assert default_threads() == 3

    def test_unset(self, monkeypatch):
        monkeypatch.delenv("YOUNGKIT_THREADS", raising=False)
        assert default_threads() >= 1

    @pytest.mark.parametrize("value", ["many", "0", "-2", "1.5"])
    def test_invalid(self, monkeypatch, value):
        monkeypatch.setenv("YOUNGKIT_THREADS", value)
        with pytest.raises(ConfigError) as e:
            run_sweep("gaussian", 1)
        assert e.value.field == "YOUNGKIT_THREADS"

    def test_argument_wins(self, monkeypatch):
        monkeypatch.setenv("YOUNGKIT_THREADS", "many")
        _, summary = run_sweep("gaussian", 2, seed=1, threads=1)
        assert summary["count"] == 2
