import sys
sys.path.append('src')

import json
import logging

import pytest

from kancalc.observability.logging_config import JSONFormatter, get_calc_logger, setup_logging
from kancalc.observability.metrics import CalcMetrics
from kancalc.observability.tracing import SimpleTracer, trace_function


class TestLogging:
    def test_json_formatter(self):
        """Records carry component and suite as JSON fields"""
        record = logging.LogRecord("kancalc", logging.INFO, __file__, 10, "checked %d", (3,), None)
        record.component = "harness"
        record.suite = "kan"
        record.instances = 3
        entry = json.loads(JSONFormatter().format(record))
        assert entry["message"] == "checked 3"
        assert (entry["component"], entry["suite"], entry["instances"]) == ("harness", "kan", 3)

    def test_adapter_stamps_context(self):
        """The adapter adds component and suite to every call"""
        log = get_calc_logger("kancalc.test", component="cli", suite="p-le")
        msg, kwargs = log.process("hello", {})
        assert kwargs["extra"] == {"component": "cli", "suite": "p-le"}

    def test_setup_logging_creates_files(self, tmp_path):
        """JSON, text and error logs land in the log directory"""
        root = logging.getLogger()
        saved, level = root.handlers[:], root.level
        try:
            setup_logging(log_dir=str(tmp_path))
            logging.getLogger("kancalc.test").error("boom")
            for handler in root.handlers:
                handler.flush()
            assert (tmp_path / "kancalc.json").exists()
            assert "boom" in (tmp_path / "errors.log").read_text()
        finally:
            for handler in root.handlers[:]:
                root.removeHandler(handler)
                handler.close()
            for handler in saved:
                root.addHandler(handler)
            root.setLevel(level)


class TestMetrics:
    def test_record_suite(self):
        """Instances and counterexamples are counted per suite"""
        metrics = CalcMetrics()
        metrics.record_suite("kan", 10, 8, 0.5)
        metrics.record_suite("kan", 2, 2, 0.1)
        assert metrics.value("kancalc_instances_checked_total", "kan") == 12
        assert metrics.value("kancalc_counterexamples_total", "kan") == 2
        assert metrics.value("kancalc_corpus_size", "kan") == 2

    def test_budget_counter(self):
        """Budget stops are counted"""
        metrics = CalcMetrics()
        metrics.record_budget_exceeded("p-le")
        assert metrics.value("kancalc_budget_exceeded_total", "p-le") == 1
        assert b"kancalc_budget_exceeded_total" in metrics.exposition()

    def test_registries_are_separate(self):
        """Two instances do not share counters"""
        a, b = CalcMetrics(), CalcMetrics()
        a.record_suite("poset", 1, 1, 0.0)
        assert b.value("kancalc_instances_checked_total", "poset") is None


class TestTracing:
    def test_span_records_success(self):
        """A span times its body and tags success"""
        with SimpleTracer().start_span("work") as span:
            pass
        assert span.tags["success"]
        assert span.duration >= 0

    def test_span_records_error(self):
        """Exceptions are tagged and propagate"""
        with pytest.raises(RuntimeError):
            with SimpleTracer().start_span("work") as span:
                raise RuntimeError("bad")
        assert span.tags["error"]
        assert span.tags["error_message"] == "bad"

    def test_trace_function_keeps_result(self):
        """The decorator is transparent"""
        @trace_function
        def double(x):
            return 2 * x

        assert double(4) == 8
        assert double.__name__ == "double"

    def test_tracer_keeps_recent_spans(self):
        """Only the most recent spans are retained"""
        tracer = SimpleTracer(keep=2)
        for name in ("a", "b", "c", "d"):
            with tracer.start_span(name):
                pass
        assert [s.name for s in tracer.finished][-2:] == ["c", "d"]
        assert len(tracer.finished) <= 3
