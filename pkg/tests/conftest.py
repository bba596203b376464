from pathlib import Path

import pytest

from opcoact.core.operad import OperadPresentation
from opcoact.core.palgebra import StructureAlgebra
from opcoact.core.presets import preset
from opcoact.utils import config
from opcoact.utils.data_importer import load_algebra

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(autouse=True)
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the user data directory at a temporary path for every test."""
    data_dir = tmp_path / "opcoact-data"
    monkeypatch.setattr(config, "user_data_dir", data_dir)
    monkeypatch.setattr(config, "CONFIG_JSON", data_dir / "config.json")
    monkeypatch.delenv(config.BUDGET_ENV, raising=False)
    return data_dir


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


def algebra(name: str, operad: str, k: int | None = None) -> tuple[OperadPresentation, StructureAlgebra]:
    """A preset and one of the algebras in tests/data."""
    pres = preset(operad, k)
    return pres, load_algebra(DATA_DIR / f"{name}.json", pres)


@pytest.fixture
def l2() -> tuple[OperadPresentation, StructureAlgebra]:
    return algebra("l2", "lie")


@pytest.fixture
def abelian2() -> tuple[OperadPresentation, StructureAlgebra]:
    return algebra("abelian2", "lie")


@pytest.fixture
def graded_lie() -> tuple[OperadPresentation, StructureAlgebra]:
    return algebra("graded_lie", "glie")
