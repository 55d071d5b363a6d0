import json
import logging
import os
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler

# record attributes copied into JSON entries when a caller sets them
CONTEXT_FIELDS = ('component', 'suite')
OPTIONAL_FIELDS = ('instances', 'passed', 'duration', 'budget', 'exit_code')

MB = 1024 * 1024


class JSONFormatter(logging.Formatter):
    """One JSON object per line, keyed for grepping by suite"""

    def format(self, record):
        entry = {
            'timestamp': datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'where': f"{record.module}.{record.funcName}:{record.lineno}",
            'pid': record.process,
        }
        for name in CONTEXT_FIELDS:
            entry[name] = getattr(record, name, 'unknown')
        entry.update({name: getattr(record, name) for name in OPTIONAL_FIELDS if hasattr(record, name)})

        if record.exc_info:
            exc_type = record.exc_info[0]
            entry['exception_type'] = exc_type.__name__ if exc_type else None
            entry['exception'] = self.formatException(record.exc_info)
        return json.dumps(entry, sort_keys=True)


class CalcLoggerAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        kwargs.setdefault('extra', {}).update(self.extra)
        return msg, kwargs


def _rotating(path, formatter, level, max_mb, backups):
    handler = RotatingFileHandler(path, maxBytes=max_mb * MB, backupCount=backups)
    handler.setFormatter(formatter)
    handler.setLevel(level)
    return handler


def setup_logging(log_level=logging.INFO, log_dir='logs'):
    """Route the root logger to kancalc.json, kancalc.log, errors.log and stderr.

    Existing root handlers are replaced. stdout is left alone: the CLI
    prints its reports there.
    """
    os.makedirs(log_dir, exist_ok=True)
    as_json = JSONFormatter()
    as_text = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s')

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(
        '%(asctime)s %(levelname)s [%(component)s:%(suite)s] %(message)s',
        defaults={name: '-' for name in CONTEXT_FIELDS}
    ))
    console.setLevel(log_level)

    handlers = [
        _rotating(os.path.join(log_dir, 'kancalc.json'), as_json, log_level, 50, 5),
        _rotating(os.path.join(log_dir, 'kancalc.log'), as_text, log_level, 50, 5),
        _rotating(os.path.join(log_dir, 'errors.log'), as_json, logging.ERROR, 10, 3),
        console,
    ]

    root = logging.getLogger()
    root.setLevel(log_level)
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    for handler in handlers:
        root.addHandler(handler)
    return root


def get_calc_logger(name, component='unknown', suite='unknown'):
    """A logger whose records carry the component and suite they come from"""
    return CalcLoggerAdapter(logging.getLogger(name), {'component': component, 'suite': suite})
