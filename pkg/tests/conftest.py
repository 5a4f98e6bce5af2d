import numpy as np
import pytest
from hypothesis import strategies as st

from tvhom import Pmf, ProductInstance, encode_pair

PAIR_A = ((0.5, 0.5), (0.75, 0.25))
WITNESS = ProductInstance([(0.5, 0.5), (0.5, 0.5)], [(0.7, 0.3), (0.3, 0.7)])


@pytest.fixture
def eta_a():
    return encode_pair(*PAIR_A)


@pytest.fixture
def pair_a_twice():
    return ProductInstance([PAIR_A[0]] * 2, [PAIR_A[1]] * 2)


@st.composite
def pmfs(draw, m):
    raw = draw(st.lists(st.floats(0.01, 1.0), min_size=m, max_size=m))
    p = np.asarray(raw)
    return Pmf(p / p.sum())


@st.composite
def instances(draw, max_n=4, max_m=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(2, max_m))
    Ps = [draw(pmfs(m)) for _ in range(n)]
    Qs = [draw(pmfs(m)) for _ in range(n)]
    return ProductInstance(Ps, Qs)
