"""Bundled scenario documents."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..documents import SpecDocument, loads

NAMES = ("driving-table4", "subt-table5")


@dataclass
class ScenarioBundle:
    name: str
    text: str
    document: SpecDocument

    @property
    def expected(self) -> dict:
        return self.document.metadata.get("expected", {})


def scenario_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(NAMES)}")
    return resources.files(__package__).joinpath(f"{name}.json").read_text(encoding="utf-8")


def load_scenario(name: str) -> ScenarioBundle:
    text = scenario_text(name)
    return ScenarioBundle(name, text, loads(text, strict=True))
