import os
import re
import yaml
import json
from pathlib import Path
from typing import Any, Iterable
from kancalc import logger

_RUN = re.compile(r"(\d+)")

def read_yaml(path_to_yaml: Path) -> dict:
    """Read yaml file and returns content as dict"""
    try:
        with open(path_to_yaml) as yaml_file:
            content = yaml.safe_load(yaml_file)
            logger.info(f"yaml file: {path_to_yaml} loaded successfully")
            return content or {}
    except Exception as e:
        logger.exception(e)
        raise e

def create_directories(path_to_directories: list, verbose=True):
    """Create list of directories"""
    for path in path_to_directories:
        os.makedirs(path, exist_ok=True)
        if verbose:
            logger.info(f"created directory at: {path}")

def save_json(path: Path, data: dict):
    """Save json data"""
    with open(path, "w") as f:
        json.dump(data, f, indent=4, sort_keys=True)
    logger.info(f"json file saved at: {path}")

def canonical_key(name: str) -> tuple:
    """Natural sort key: digit runs compare as integers, so "2" < "10"."""
    return tuple(
        (0, int(part)) if part.isdigit() else (1, part)
        for part in _RUN.split(str(name))
        if part != ""
    )

def canonical_sorted(names: Iterable[str]) -> list[str]:
    return sorted(names, key=canonical_key)

def mk(*parts: Any) -> str:
    """Identifier for a tuple of identifiers, e.g. mk("a", "b") == "(a,b)"."""
    return "(" + ",".join(str(p) for p in parts) + ")"

def fresh_name(base: str, taken: Iterable[str]) -> str:
    """First of base, base', base'', ... not in taken."""
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name
