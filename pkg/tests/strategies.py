"""Hypothesis strategies for exact scalars and forms."""

from fractions import Fraction

from hypothesis import strategies as st

from hermlab.forms import Form, exterior_algebra
from hermlab.scalars import GaussianRational

small_fraction = st.builds(Fraction, st.integers(-7, 7), st.integers(1, 7))
gaussian = st.builds(GaussianRational, small_fraction, small_fraction)
nonzero_gaussian = gaussian.filter(bool)


@st.composite
def forms(draw, n, degree=None, bidegree=None, max_terms=6):
    alg = exterior_algebra(n)
    if bidegree is not None:
        pool = list(alg.by_bidegree[tuple(bidegree)])
    elif degree is not None:
        pool = list(alg.by_degree[degree])
    else:
        pool = list(range(alg.dim))
    idxs = draw(st.lists(st.sampled_from(pool), max_size=max_terms, unique=True))
    data = {}
    for i in idxs:
        c = draw(nonzero_gaussian)
        data[i] = c
    return Form.from_data(alg, "exact", data)
