import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qrfcode import load_code
from qrfcode.pauli_core import Pauli

settings.register_profile("repo", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("repo")


@st.composite
def paulis(draw, n=None, max_n=6, phase=True):
    if n is None:
        n = draw(st.integers(1, max_n))
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    k = draw(st.integers(0, 3)) if phase else 0
    return Pauli(n, x, z, k)


@st.composite
def pauli_pairs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    return draw(paulis(n=n)), draw(paulis(n=n))


@st.composite
def pauli_triples(draw, max_n=16):
    n = draw(st.integers(1, max_n))
    return draw(paulis(n=n)), draw(paulis(n=n)), draw(paulis(n=n))


@pytest.fixture(scope="session")
def code3():
    return load_code("3qubit")


@pytest.fixture(scope="session")
def code5():
    return load_code("5qubit")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
