"""Shared fixtures: small bases and a weight-from-text shorthand."""

import pytest

from foamcalc import Generator, GeneratorBasis, parse_weight

R2 = Generator("r2", "1.4142135623730951", 16)
R3 = Generator("r3", "1.7320508075688772", 16)


@pytest.fixture
def basis():
    """Unit plus one independent generator r2."""
    return GeneratorBasis([R2])


@pytest.fixture
def basis3():
    """Unit plus two independent generators r2, r3."""
    return GeneratorBasis([R2, R3])


@pytest.fixture
def w(basis):
    """Weight parser bound to the two-generator basis."""

    def parse(text):
        return parse_weight(text, basis)

    return parse


@pytest.fixture
def w3(basis3):
    def parse(text):
        return parse_weight(text, basis3)

    return parse
