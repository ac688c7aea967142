import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quadword.construction import ConstructionParams, UStream  # noqa: E402
from quadword.factors import FactorIndex, trusted_profile  # noqa: E402
from quadword.sturmian import fibonacci_stream  # noqa: E402


@pytest.fixture(scope="session")
def fib():
    return fibonacci_stream()


@pytest.fixture(scope="session")
def u8(fib):
    return UStream(ConstructionParams(fib, depth=8))


@pytest.fixture(scope="session")
def u_index(u8):
    return FactorIndex(u8.prefix(10**6))


@pytest.fixture(scope="session")
def u_profile(u_index):
    return trusted_profile(u_index.word, index=u_index)


@pytest.fixture(scope="session")
def fib_index(fib):
    return FactorIndex(fib.prefix(10**5))


@pytest.fixture(scope="session")
def fib_profile(fib_index):
    return trusted_profile(fib_index.word, index=fib_index)
