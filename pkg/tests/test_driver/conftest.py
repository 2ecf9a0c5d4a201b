from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from marangoni.config import dump_config

if TYPE_CHECKING:
    from pathlib import Path

    from marangoni.config import RunConfig


@pytest.fixture()
def config_file(run_config: RunConfig, tmp_path: Path) -> Path:
    """`run_config` written to disk."""
    path = tmp_path / "run.toml"
    path.write_text(dump_config(run_config), encoding="utf-8")
    return path
