"""Bundled example app models used by the test suite and for demos."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..model import AppModel
from ..parser import parse_app


def fixture_names() -> list[str]:
    """Names of the bundled .app models, without the extension, sorted."""
    root = resources.files(__package__)
    return sorted(p.name[: -len(".app")] for p in root.iterdir() if p.name.endswith(".app"))


def fixture_path(name: str) -> Path:
    path = Path(str(resources.files(__package__) / f"{name}.app"))
    if not path.exists():
        raise FileNotFoundError(f"no bundled app model named {name!r}")
    return path


def load_fixture(name: str) -> AppModel:
    return parse_app(fixture_path(name).read_text(encoding="utf-8"))
