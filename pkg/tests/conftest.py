import pytest
import torch


@pytest.fixture
def anyio_backend():
    return "asyncio"


@pytest.fixture(autouse=True)
def _seed_torch():
    torch.manual_seed(0)
