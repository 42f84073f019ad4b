import numpy as np
import pytest
from hypothesis import settings, strategies as st

from frechet_bounds.couplings import FrechetClass
from frechet_bounds.distributions import make_distribution

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def lattice_distributions(draw, lo=-4, hi=8, max_size=5, lattice=64):
    """Distinct integer support, probabilities on the 1/lattice grid."""
    m = draw(st.integers(1, max_size))
    support = draw(st.lists(st.integers(lo, hi), min_size=m, max_size=m, unique=True))
    cuts = sorted(draw(st.lists(st.integers(1, lattice - 1), min_size=m - 1, max_size=m - 1,
                                unique=True)))
    units = np.diff([0, *cuts, lattice])
    return make_distribution(support, units / lattice)


@st.composite
def frechet_classes(draw, n_min=2, n_max=4, **kw):
    n = draw(st.integers(n_min, n_max))
    return FrechetClass(tuple(draw(lattice_distributions(**kw)) for _ in range(n)))


def bernoulli(p):
    return make_distribution([0, 1], [1 - p, p])


def uniform(values):
    return make_distribution(values, [1.0] * len(values))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def record(number, title, ok, detail=""):
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
                           + (f" ({detail})" if detail else ""))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
