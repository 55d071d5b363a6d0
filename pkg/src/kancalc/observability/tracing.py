import functools
import time

from kancalc import logger


class Span:
    """Wall-clock timing of one suite run or enumeration."""

    def __init__(self, name, tracer):
        self.name = name
        self.tracer = tracer
        self.tags = {}
        self.start_time = None
        self.duration = None

    def set_tag(self, key, value):
        self.tags[key] = value

    def __enter__(self):
        self.start_time = time.perf_counter()
        if self.tracer.enabled:
            logger.debug(f"[span] {self.tracer.service_name}/{self.name} started")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = time.perf_counter() - self.start_time
        if exc_type is None:
            self.tags['success'] = True
        else:
            self.tags.update({'error': True, 'error_message': str(exc_val)})
        if self.tracer.enabled:
            state = "failed" if exc_type else "finished"
            logger.info(f"[span] {self.tracer.service_name}/{self.name} {state} in {self.duration:.3f}s")
        self.tracer.finished.append(self)
        return False


class SimpleTracer:
    def __init__(self, service_name='kancalc', keep=100):
        self.service_name = service_name
        self.enabled = True
        self.keep = keep
        self.finished = []

    def start_span(self, span_name):
        del self.finished[:-self.keep or None]
        return Span(span_name, self)


tracer = SimpleTracer()


def trace_function(func):
    """Run func inside a span named after it"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with tracer.start_span(func.__name__):
            return func(*args, **kwargs)
    return wrapper
