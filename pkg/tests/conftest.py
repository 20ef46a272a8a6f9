import pytest

from helpers import make_ctx, make_registry


@pytest.fixture
def ctx():
    return make_ctx()


@pytest.fixture
def registry(ctx):
    return make_registry(ctx)
