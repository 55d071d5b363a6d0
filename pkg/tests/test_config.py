import sys
sys.path.append('src')

import pytest
import yaml

from kancalc.config.configuration import ConfigurationManager
from kancalc.constants import DEFAULT_BUDGET
from kancalc.exception.exception import ConfigurationException


@pytest.fixture
def config_files(tmp_path):
    config = {
        "budget": {"enumeration_ceiling": 1000, "shape_budget": 50},
        "corpus": {"max_objects": 2, "max_morphisms": 3},
        "harness": {"report_dir": str(tmp_path / "reports"), "workers": 2},
        "observability": {"enable_metrics": True, "metrics_port": 9100, "log_dir": str(tmp_path / "logs")},
    }
    params = {"p-le": {"max_objects": 1}, "kan": {"value_bound": 1}}
    config_path, params_path = tmp_path / "config.yaml", tmp_path / "params.yaml"
    config_path.write_text(yaml.safe_dump(config))
    params_path.write_text(yaml.safe_dump(params))
    return config_path, params_path


class TestBudget:
    def test_defaults_without_files(self, tmp_path):
        """Missing YAML files leave the built-in defaults"""
        cm = ConfigurationManager(tmp_path / "none.yaml", tmp_path / "none.yaml")
        assert cm.get_budget_config().enumeration_ceiling == DEFAULT_BUDGET

    def test_yaml_value(self, config_files):
        """The YAML ceiling is used when nothing overrides it"""
        budget = ConfigurationManager(*config_files).get_budget_config()
        assert budget.enumeration_ceiling == 1000
        assert budget.shape_budget == 50
        assert budget.functor_budget == 1000

    def test_environment_then_flag(self, config_files, monkeypatch):
        """KANCALC_BUDGET beats the YAML file and an explicit value beats both"""
        monkeypatch.setenv("KANCALC_BUDGET", "77")
        cm = ConfigurationManager(*config_files)
        assert cm.get_budget_config().enumeration_ceiling == 77
        assert cm.get_budget_config(5).enumeration_ceiling == 5

    @pytest.mark.parametrize("env", ["many", "1.5"])
    def test_invalid_environment(self, config_files, monkeypatch, env):
        """Non-integer budgets are configuration errors"""
        monkeypatch.setenv("KANCALC_BUDGET", env)
        with pytest.raises(ConfigurationException):
            ConfigurationManager(*config_files).get_budget_config()

    def test_non_positive(self, config_files):
        """A zero ceiling is rejected"""
        with pytest.raises(ConfigurationException):
            ConfigurationManager(*config_files).get_budget_config(0)


class TestHarnessConfig:
    def test_suite_overrides(self, config_files):
        """params.yaml overrides config.yaml per suite; keyword overrides win"""
        cm = ConfigurationManager(*config_files)
        assert cm.get_harness_config("p-le").corpus.max_objects == 1
        assert cm.get_harness_config("kan").corpus.max_objects == 2
        assert cm.get_harness_config("p-le", max_objects=3).corpus.max_objects == 3
        assert cm.get_harness_config("kan").corpus.value_bound == 1

    def test_unknown_suite(self, config_files):
        """Only the lemma suites can be configured"""
        with pytest.raises(ConfigurationException):
            ConfigurationManager(*config_files).get_harness_config("nope")

    def test_zero_workers(self, config_files):
        """Zero workers is an error; -1 means all cores"""
        cm = ConfigurationManager(*config_files)
        with pytest.raises(ConfigurationException):
            cm.get_harness_config("kan", workers=0)
        assert cm.get_harness_config("kan", workers=-1).workers == -1
        assert cm.get_harness_config("kan").workers == 2

    def test_unknown_corpus_key(self, config_files):
        """Typos in the corpus section are caught"""
        with pytest.raises(ConfigurationException):
            ConfigurationManager(*config_files).get_corpus_config(max_objets=2)

    def test_report_dir(self, config_files, tmp_path):
        """The report directory is created on demand"""
        cm = ConfigurationManager(*config_files)
        path = cm.prepare_report_dir(cm.get_harness_config("kan"))
        assert path.is_dir()
        assert path == tmp_path / "reports"

    def test_metrics_and_nerve(self, config_files):
        """Observability settings and the default nerve truncation"""
        cm = ConfigurationManager(*config_files)
        metrics = cm.get_metrics_config()
        assert metrics.enabled and metrics.port == 9100 and metrics.tracing
        assert cm.get_nerve_config().truncation == 3
