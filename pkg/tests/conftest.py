import numpy as np
import pytest
from hypothesis import strategies as st

from fridge.model import FridgeParams

CANONICAL = dict(E1=1.0, E3=2.0, g=1e-3, p1=1e-4, p2=1e-4, p3=1e-4, Tc=1.0, Tr=2.0, Th=10.0)


@pytest.fixture
def canonical():
    return FridgeParams(**CANONICAL)


@pytest.fixture
def strong():
    """Coupling and rates comparable to the gaps, so every term of the state is visible."""
    return FridgeParams(E1=1.0, E3=2.0, g=0.3, p1=0.1, p2=0.2, p3=0.15, Tc=1.0, Tr=2.0, Th=10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def fridge_params(draw, g_range=(1e-4, 1e-2), p_range=(1e-5, 1e-3)):
    """Parameter sets drawn from the same ranges as ``fridge verify``."""
    E1 = draw(st.floats(0.1, 10.0))
    E3 = draw(st.floats(0.1, 10.0))
    Ts = sorted(draw(st.lists(st.floats(0.1, 20.0), min_size=3, max_size=3)))
    scale = min(E1, E3)
    g = draw(st.floats(*g_range)) * scale
    p = [draw(st.floats(*p_range)) * scale for _ in range(3)]
    return FridgeParams(E1=E1, E3=E3, g=g, p1=p[0], p2=p[1], p3=p[2], Tc=Ts[0], Tr=Ts[1], Th=Ts[2])


def random_density(rng, dim=8):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = a @ a.conj().T
    return m / np.trace(m)


def random_hermitian(rng, dim=8):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


ACCEPTANCE = []


def record(label, ok, detail=""):
    """Store one acceptance line; returns ``ok`` so callers can assert on it."""
    line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
