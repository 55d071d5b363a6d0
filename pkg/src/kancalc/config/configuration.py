import os
from pathlib import Path

from kancalc.constants import (
    BUDGET_ENV_VAR,
    CONFIG_FILE_PATH,
    DEFAULT_BUDGET,
    DEFAULT_SHAPE_BUDGET,
    DEFAULT_TRUNCATION,
    HARNESS_SUITES,
    PARAMS_FILE_PATH,
)
from kancalc.entity.config_entity import (
    BudgetConfig,
    CorpusConfig,
    HarnessConfig,
    MetricsConfig,
    NerveConfig,
)
from kancalc.exception.exception import ConfigurationException
from kancalc.utils.common import create_directories, read_yaml

_DEFAULT_CORPUS = {
    "max_objects": 2,
    "max_morphisms": 4,
    "max_poset_size": 4,
    "value_bound": 2,
    "shapes": "dim1",
}

class ConfigurationManager:
    """Budgets, corpus sizes and observability settings.

    YAML files are optional: a missing file leaves the defaults from
    ``kancalc.constants`` in place. KANCALC_BUDGET overrides the YAML
    enumeration ceiling, and explicit keyword overrides win over both.
    """
    def __init__(
        self,
        config_filepath = CONFIG_FILE_PATH,
        params_filepath = PARAMS_FILE_PATH):

        self.config = read_yaml(config_filepath) if os.path.exists(config_filepath) else {}
        self.params = read_yaml(params_filepath) if os.path.exists(params_filepath) else {}

    def get_budget_config(self, enumeration_ceiling: int = None) -> BudgetConfig:
        config = self.config.get("budget", {})
        ceiling = config.get("enumeration_ceiling", DEFAULT_BUDGET)
        env = os.environ.get(BUDGET_ENV_VAR)
        if env:
            try:
                ceiling = int(env)
            except ValueError as e:
                raise ConfigurationException(f"{BUDGET_ENV_VAR} must be an integer, got {env!r}") from e
        if enumeration_ceiling is not None:
            ceiling = enumeration_ceiling
        if ceiling <= 0:
            raise ConfigurationException(f"enumeration ceiling must be positive, got {ceiling}")

        budget_config = BudgetConfig(
            enumeration_ceiling=ceiling,
            shape_budget=config.get("shape_budget", DEFAULT_SHAPE_BUDGET),
            functor_budget=config.get("functor_budget", ceiling)
        )
        return budget_config

    def get_corpus_config(self, suite: str = None, **overrides) -> CorpusConfig:
        values = dict(_DEFAULT_CORPUS)
        values.update(self.config.get("corpus", {}))
        if suite is not None:
            values.update(self.params.get(suite) or {})
        values.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(values) - set(_DEFAULT_CORPUS)
        if unknown:
            raise ConfigurationException(f"unknown corpus keys {sorted(unknown)}")

        corpus_config = CorpusConfig(
            max_objects=int(values["max_objects"]),
            max_morphisms=int(values["max_morphisms"]),
            max_poset_size=int(values["max_poset_size"]),
            value_bound=int(values["value_bound"]),
            shapes=str(values["shapes"])
        )
        return corpus_config

    def get_harness_config(self, suite: str, workers: int = None, enumeration_ceiling: int = None,
                           **overrides) -> HarnessConfig:
        if suite not in HARNESS_SUITES:
            raise ConfigurationException(f"unknown suite {suite!r}; expected one of {', '.join(HARNESS_SUITES)}")
        config = self.config.get("harness", {})
        workers = workers if workers is not None else config.get("workers", 1)
        if workers == 0:
            raise ConfigurationException("workers must be nonzero")

        harness_config = HarnessConfig(
            suite=suite,
            corpus=self.get_corpus_config(suite, **overrides),
            budget=self.get_budget_config(enumeration_ceiling),
            workers=workers,
            report_dir=Path(config.get("report_dir", os.path.join("artifacts", "harness"))),
            params=dict(self.params.get(suite) or {})
        )
        return harness_config

    def get_nerve_config(self) -> NerveConfig:
        config = self.config.get("nerve", {})
        return NerveConfig(truncation=config.get("truncation", DEFAULT_TRUNCATION))

    def get_metrics_config(self) -> MetricsConfig:
        config = self.config.get("observability", {})
        log_dir = Path(config.get("log_dir", "logs"))

        metrics_config = MetricsConfig(
            enabled=bool(config.get("enable_metrics", False)),
            port=int(config.get("metrics_port", 8000)),
            tracing=bool(config.get("enable_tracing", True)),
            log_dir=log_dir
        )
        return metrics_config

    def prepare_report_dir(self, harness_config: HarnessConfig) -> Path:
        create_directories([harness_config.report_dir], verbose=False)
        return harness_config.report_dir
