"""Version-controlled golden tables shipped with the package.

The conservation-sequence tables for the four smallest intervals and the
ground-configuration tables for the three smallest ones are transcribed into
``data/*.json``; enumeration must reproduce each of them as a set.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Dict, List

__all__ = ["fixture_names", "load_fixture", "SEQUENCE_TABLES", "CONFIG_TABLES"]

SEQUENCE_TABLES = ("xi_0_1", "xi_0_2", "xi_0_3", "xi_0_4")
CONFIG_TABLES = ("upsilon_0_1", "upsilon_0_2", "upsilon_0_3")


def fixture_names() -> List[str]:
    return list(SEQUENCE_TABLES + CONFIG_TABLES)


def load_fixture(name: str) -> Dict:
    if name not in fixture_names():
        raise KeyError(f"unknown fixture table {name!r}")
    path = resources.files("nicolai.data").joinpath(f"{name}.json")
    return json.loads(path.read_text())
