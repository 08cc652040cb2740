import random
from fractions import Fraction

import pytest

from dbv.generators import landau_ginzburg, qdelta_gap_example, square_zero_example
from dbv.series import DeformationVariable, Series


@pytest.fixture(scope="session")
def lg_x3():
    return landau_ginzburg("x^3")


@pytest.fixture(scope="session")
def square_zero():
    return square_zero_example()


@pytest.fixture(scope="session")
def qdelta_gap():
    return qdelta_gap_example()


def random_vector(algebra, rng, degree=None, window=4, span=2):
    """Random sparse vector, optionally homogeneous of the given degree."""
    keys = algebra.slice_keys(window)
    if degree is not None:
        keys = [k for k in keys if algebra.key_degree(k) == degree]
    coeffs = {}
    for k in keys:
        if rng.random() < 0.5:
            c = Fraction(rng.randint(-span, span))
            if c:
                coeffs[k] = c
    return algebra.vector(coeffs)


def random_degree_zero_series(algebra, rng, t_order=3, n_vars=2, hbar_max=0, window=3,
                              variables=None):
    """Random homogeneous degree-0 series with zero constant term.

    Variable degrees are drawn so that matching coefficient degrees exist;
    when none do for a sampled monomial the term is skipped.  Pass a shared
    `variables` tuple to make several random series combinable.
    """
    key_degrees = sorted({algebra.key_degree(k) for k in algebra.slice_keys(window)})
    if variables is None:
        variables = tuple(
            DeformationVariable(i, -rng.choice(key_degrees)) for i in range(1, n_vars + 1)
        )
    else:
        n_vars = len(variables)
    s = Series.zero(algebra, variables, t_order, None)
    for _ in range(3 * t_order):
        n = rng.randint(1, t_order)
        idx = [rng.randint(1, n_vars) for _ in range(n)]
        p = rng.randint(0, hbar_max) if hbar_max else 0
        mdeg = sum(variables[i - 1].degree for i in idx) + algebra.hbar_degree * p
        vec = random_vector(algebra, rng, degree=-mdeg, window=window)
        if vec.is_zero():
            continue
        s = s.term(idx, vec, hbar=p)
    return s


@pytest.fixture
def rng():
    return random.Random(20260808)
