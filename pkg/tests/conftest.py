import pytest

from folia.exactmath import VarCtx


@pytest.fixture
def ctx2() -> VarCtx:
    return VarCtx(("x1", "x2"))


@pytest.fixture
def ctx3() -> VarCtx:
    return VarCtx(("x1", "x2", "x3"))
