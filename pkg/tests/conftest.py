import pytest
from hypothesis import strategies as st

from algebroids.poly import Poly

NV = 2


@st.composite
def polys(draw, nvars=NV, max_degree=2):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_degree)] * nvars).filter(lambda e: sum(e) <= max_degree),
            st.integers(-4, 4),
            max_size=4,
        )
    )
    return Poly(terms, nvars)


@pytest.fixture
def xs():
    return Poly.var(0, NV), Poly.var(1, NV)
