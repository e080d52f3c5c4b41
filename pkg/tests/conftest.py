import numpy as np
import pytest
from hypothesis import strategies as st

from alab.laurent import LaurentPoly, parse_laurent


def poly_strategy(dims: int, max_terms: int = 5, max_exp: int = 3, max_coef: int = 5):
    exps = st.tuples(*[st.integers(-max_exp, max_exp)] * dims)
    coefs = st.integers(-max_coef, max_coef)
    return st.dictionaries(exps, coefs, max_size=max_terms).map(lambda t: LaurentPoly(dims, t))


@pytest.fixture
def P():
    return parse_laurent


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    return request.config.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
