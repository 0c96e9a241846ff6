import numpy as np
import pytest

from symtoep.symbol import BUILTIN_SYMBOLS, builtin_symbol

BUILTINS = sorted(BUILTIN_SYMBOLS)


@pytest.fixture(params=BUILTINS)
def builtin(request):
    return builtin_symbol(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
