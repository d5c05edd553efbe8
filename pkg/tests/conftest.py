import pytest

from slitcorr.model import DoubleSlit, GaussianSpectrum, OpticalSetup, ScanGrid


@pytest.fixture(scope="session")
def setup():
    return OpticalSetup()


@pytest.fixture(scope="session")
def slit():
    return DoubleSlit()


@pytest.fixture(scope="session")
def grid():
    return ScanGrid.symmetric()


@pytest.fixture(scope="session")
def spectrum(slit):
    return GaussianSpectrum.from_normalized(0.52, slit)


@pytest.fixture(scope="session")
def broadband(slit):
    return GaussianSpectrum.from_normalized(10.0, slit)
