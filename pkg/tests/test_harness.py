import sys
sys.path.append('src')

import json
import os
from pathlib import Path

import pytest

from kancalc.components.harness import SUITES, run_suite, save_suite_result
from kancalc.entity.config_entity import BudgetConfig, CorpusConfig, HarnessConfig
from kancalc.exception.exception import BoundExceeded, PreconditionFailed
from kancalc.observability.metrics import CalcMetrics
from kancalc.pipeline.stage_01_order_theory import OrderTheoryPipeline
from kancalc.pipeline.stage_02_presheaves import PresheafPipeline
from kancalc.pipeline.stage_03_filtered import FilteredPipeline
from kancalc.pipeline.stage_04_grothendieck import GrothendieckPipeline
from kancalc.pipeline.stage_05_ind_objects import IndObjectPipeline


def make_config(suite, tmp_path, max_objects=1, max_morphisms=2, max_poset_size=2,
                value_bound=1, ceiling=10000, workers=1):
    return HarnessConfig(
        suite=suite,
        corpus=CorpusConfig(max_objects, max_morphisms, max_poset_size, value_bound),
        budget=BudgetConfig(ceiling, 1000, ceiling),
        workers=workers,
        report_dir=tmp_path,
    )


class TestSuites:
    def test_prod_demo_runs_three_sizes(self, tmp_path):
        """prod-demo checks N = 3, 4, 5 and all agree with the parity rule"""
        result = run_suite(make_config("prod-demo", tmp_path))
        assert result.instances == 3
        assert result.ok
        assert result.counterexample is None

    def test_p_le_on_small_monoids(self, tmp_path):
        """empty category, point, P and Z2 all satisfy the id-cone criterion"""
        result = run_suite(make_config("p-le", tmp_path))
        assert result.instances == 4
        assert result.passed == 4

    def test_poset_suite(self, tmp_path):
        """posets of size 1..3 survive glue/split and the cocartesian check"""
        result = run_suite(make_config("poset", tmp_path, max_poset_size=3))
        assert result.instances == 8
        assert result.ok

    def test_ka_ka_includes_fixed_instances(self, tmp_path):
        """P and [1] are always in the Karoubi corpus"""
        result = run_suite(make_config("ka-ka", tmp_path, max_morphisms=1))
        assert result.instances >= 3
        assert result.ok

    def test_result_carries_corpus(self, tmp_path):
        """the corpus bounds are part of the result data"""
        result = run_suite(make_config("prod-demo", tmp_path, value_bound=2))
        assert result.data["corpus"]["value_bound"] == 2
        assert result.data["description"] == SUITES["prod-demo"].description

    def test_unknown_suite(self, tmp_path):
        """an unknown suite name is a precondition failure"""
        with pytest.raises(PreconditionFailed):
            run_suite(make_config("no-such-suite", tmp_path))


class TestWorkers:
    def test_parallel_matches_serial(self, tmp_path, monkeypatch):
        """worker count does not change counts or the reported counterexample"""
        src = str(Path(__file__).resolve().parent.parent / "src")
        monkeypatch.setenv("PYTHONPATH", os.pathsep.join(filter(None, [src, os.environ.get("PYTHONPATH")])))
        serial = run_suite(make_config("poset", tmp_path, max_poset_size=3, workers=1))
        parallel = run_suite(make_config("poset", tmp_path, max_poset_size=3, workers=2))
        assert (serial.instances, serial.passed) == (parallel.instances, parallel.passed)
        assert serial.counterexample == parallel.counterexample


class TestBudgetAndMetrics:
    def test_metrics_recorded(self, tmp_path):
        """a finished suite updates the instance counter and corpus gauge"""
        metrics = CalcMetrics()
        run_suite(make_config("prod-demo", tmp_path), metrics=metrics)
        assert metrics.value("kancalc_instances_checked_total", "prod-demo") == 3
        assert metrics.value("kancalc_counterexamples_total", "prod-demo") == 0
        assert metrics.value("kancalc_corpus_size", "prod-demo") == 3

    def test_budget_exceeded(self, tmp_path):
        """a tiny enumeration ceiling stops corpus construction"""
        metrics = CalcMetrics()
        cfg = make_config("p-le", tmp_path, max_morphisms=3, ceiling=1)
        with pytest.raises(BoundExceeded):
            run_suite(cfg, metrics=metrics)
        assert metrics.value("kancalc_budget_exceeded_total", "p-le") == 1
        assert metrics.value("kancalc_instances_checked_total", "p-le") is None


class TestReports:
    def test_save_suite_result(self, tmp_path):
        """the JSON report holds counts, status and the corpus"""
        result = run_suite(make_config("prod-demo", tmp_path))
        path = save_suite_result(result, tmp_path)
        assert path == tmp_path / "prod-demo.json"
        payload = json.loads(path.read_text())
        assert payload["suite"] == "prod-demo"
        assert payload["ok"] is True
        assert payload["instances"] == payload["passed"] == 3
        assert payload["counterexample"] is None


class TestStages:
    STAGES = (OrderTheoryPipeline, PresheafPipeline, FilteredPipeline,
              GrothendieckPipeline, IndObjectPipeline)

    def test_stages_cover_every_suite_once(self):
        """each registered suite belongs to exactly one stage"""
        names = [s for stage in self.STAGES for s in stage.SUITES]
        assert sorted(names) == sorted(SUITES)
        assert len(names) == len(set(names))
