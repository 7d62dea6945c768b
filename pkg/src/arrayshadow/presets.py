"""Shipped scenario presets, stored as JSON files next to this module."""

from __future__ import annotations

from importlib import resources

from .runner import ScenarioConfig, parse_scenario

PRESET_NAMES = (
    "paper_fig3",
    "paper_fig4",
    "paper_fig5",
    "paper_fig6",
    "knife_edge_validation",
)


def preset_text(name: str) -> str:
    """Raw JSON of a shipped preset."""
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset '{name}'; available: {', '.join(PRESET_NAMES)}")
    return (resources.files(__package__) / "presets" / f"{name}.json").read_text()


def load_preset(name: str) -> ScenarioConfig:
    """Parse a shipped preset into a resolved config."""
    return parse_scenario(preset_text(name), source=f"preset:{name}")
