from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, generate_latest, start_http_server
import threading

from kancalc import logger

class CalcMetrics:
    def __init__(self, registry=None):
        # private registry so several harness runs in one process do not collide
        self.registry = registry or CollectorRegistry()

        self.instances_counter = Counter(
            'kancalc_instances_checked_total',
            'Instances checked by a lemma suite',
            ['suite'],
            registry=self.registry
        )

        self.counterexample_counter = Counter(
            'kancalc_counterexamples_total',
            'Counterexamples found by a lemma suite',
            ['suite'],
            registry=self.registry
        )

        self.budget_counter = Counter(
            'kancalc_budget_exceeded_total',
            'Enumerations stopped by the budget',
            ['suite'],
            registry=self.registry
        )

        self.corpus_size_gauge = Gauge(
            'kancalc_corpus_size',
            'Number of instances in the most recent corpus',
            ['suite'],
            registry=self.registry
        )

        self.suite_duration_histogram = Histogram(
            'kancalc_suite_duration_seconds',
            'Time spent running a lemma suite',
            ['suite'],
            buckets=[0.01, 0.1, 0.5, 1, 5, 10, 30, 60, 120, 300],
            registry=self.registry
        )

    def start_metrics_server(self, port=8000):
        """Start the Prometheus endpoint in a daemon thread"""
        def start_server():
            try:
                start_http_server(port, registry=self.registry)
                logger.info(f"metrics server started on port {port}")
            except Exception as e:
                logger.error(f"failed to start metrics server: {e}")

        metrics_thread = threading.Thread(target=start_server, daemon=True)
        metrics_thread.start()
        return metrics_thread

    def record_suite(self, suite, instances, passed, duration):
        self.instances_counter.labels(suite=suite).inc(instances)
        self.counterexample_counter.labels(suite=suite).inc(instances - passed)
        self.corpus_size_gauge.labels(suite=suite).set(instances)
        self.suite_duration_histogram.labels(suite=suite).observe(duration)

    def record_budget_exceeded(self, suite):
        self.budget_counter.labels(suite=suite).inc()

    def value(self, name, suite):
        return self.registry.get_sample_value(name, {'suite': suite})

    def exposition(self) -> bytes:
        return generate_latest(self.registry)
