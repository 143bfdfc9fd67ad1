import pytest

from marginal_bell.core import MarginalBellConfig, set_config


@pytest.fixture(autouse=True)
def reset_config() -> None:
    set_config(MarginalBellConfig())
