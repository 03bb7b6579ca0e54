import pytest
from distill.api.ratlin import RatMatrix


@pytest.fixture(autouse=True)
def default_cap(monkeypatch):
    monkeypatch.delenv("DISTILL_MCAP", raising=False)


@pytest.fixture
def M_a() -> RatMatrix:
    """Rank one, spectrum {1, 0}"""
    return RatMatrix([["1/2", "1/2"], ["1/2", "1/2"]])


@pytest.fixture
def M_b() -> RatMatrix:
    """The swap, spectrum {1, -1}"""
    return RatMatrix([[0, 1], [1, 0]])


@pytest.fixture
def M_c() -> RatMatrix:
    """Spectrum {1, 1/2}"""
    return RatMatrix([["3/4", "1/4"], ["1/4", "3/4"]])


@pytest.fixture
def M_d() -> RatMatrix:
    """Spectrum {0, 1, -1/2}"""
    return RatMatrix([[0, "1/2", "1/2"], ["1/2", "1/4", "1/4"], ["1/2", "1/4", "1/4"]])
