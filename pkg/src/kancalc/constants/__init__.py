import os

CONFIG_FILE_PATH = os.path.join("config", "config.yaml")
PARAMS_FILE_PATH = os.path.join("config", "params.yaml")

BUDGET_ENV_VAR = "KANCALC_BUDGET"

# enumeration ceilings used when no config file is present
DEFAULT_BUDGET = 2_000_000
DEFAULT_SHAPE_BUDGET = 200_000
DEFAULT_TRUNCATION = 3

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

REPORT_SCHEMA_VERSION = 1

HARNESS_SUITES = (
    "p-le",
    "v-le",
    "con-le",
    "filt-prop",
    "cof-le",
    "cone-le",
    "dim1-le",
    "yo-ind",
    "ka-ka",
    "lax-ind",
    "kan",
    "elements",
    "poset",
    "prod-demo",
    "groth",
)
