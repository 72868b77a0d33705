"""Shipped game fixtures: small DAG games and the recorded chess ledger."""

from __future__ import annotations

from pathlib import Path

from bidgame.games.dag import DagGame, load_dag_game

_DIR = Path(__file__).parent


def fixture_names() -> list[str]:
    return sorted(p.stem for p in _DIR.glob("*.dag"))


def fixture_path(name: str) -> Path:
    path = _DIR / f"{name}.dag"
    if not path.is_file():
        raise KeyError(f"no fixture named {name!r}; have {fixture_names()}")
    return path


def load_fixture(name: str) -> DagGame:
    return load_dag_game(fixture_path(name).read_text(), name=f"dag:@{name}")


def script_path(name: str) -> Path:
    path = _DIR / f"{name}.script"
    if not path.is_file():
        raise KeyError(f"no script named {name!r}")
    return path
