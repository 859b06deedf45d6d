import pytest

from maxfield import GaussianShape, IndicatorShape, RectDomain, SpectralModel


@pytest.fixture
def smith1():
    return SpectralModel(GaussianShape(1.0, 1), RectDomain(1, 1.0, 0.1))


@pytest.fixture
def smith2():
    return SpectralModel(GaussianShape(1.0, 2), RectDomain(2, 1.0, 0.25))


@pytest.fixture
def raw_indicator1():
    return SpectralModel(IndicatorShape(1.0, 1, "raw"), RectDomain(1, 1.0, 0.1))
