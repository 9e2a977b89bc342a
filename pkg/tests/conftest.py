import numpy as np
import pytest
from hypothesis import strategies as st


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_state(rng, dim=3):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)


@st.composite
def unit_vectors(draw, dim=3):
    re = draw(st.lists(finite, min_size=dim, max_size=dim))
    im = draw(st.lists(finite, min_size=dim, max_size=dim))
    v = np.array(re) + 1j * np.array(im)
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.eye(dim, dtype=complex)[0]
        norm = 1.0
    return v / norm
