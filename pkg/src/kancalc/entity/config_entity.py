from dataclasses import dataclass
from pathlib import Path
from typing import Optional

@dataclass(frozen=True)
class BudgetConfig:
    enumeration_ceiling: int
    shape_budget: int
    functor_budget: int

@dataclass(frozen=True)
class CorpusConfig:
    max_objects: int
    max_morphisms: int
    max_poset_size: int
    value_bound: int
    shapes: str = "dim1"

@dataclass(frozen=True)
class HarnessConfig:
    suite: str
    corpus: CorpusConfig
    budget: BudgetConfig
    workers: int
    report_dir: Path
    params: Optional[dict] = None

@dataclass(frozen=True)
class NerveConfig:
    truncation: int

@dataclass(frozen=True)
class MetricsConfig:
    enabled: bool
    port: int
    tracing: bool
    log_dir: Path
