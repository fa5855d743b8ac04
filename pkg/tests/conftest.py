import cmath
import os
from fractions import Fraction

import pytest
from hypothesis import settings

from tgwa.scalars import ParameterEnv, Scalar, substitute

SEED = int(os.environ.get("TGWA_SEED", "20240611"))

settings.register_profile("tgwa", database=None, deadline=None, max_examples=60,
                          derandomize="TGWA_SEED" not in os.environ)
settings.load_profile("tgwa")


def to_complex(s: Scalar, values=None) -> complex:
    """Numerical value of a scalar; parameters are replaced by ``values`` first."""
    if values:
        s = substitute(s, {k: Scalar(Fraction(v)) for k, v in values.items()})
    if not s.is_constant():
        raise ValueError("scalar still has parameters: %s" % s)
    num, den = s.num.constant_value(), s.den.constant_value()
    return _cyc(num) / _cyc(den)


def _cyc(c) -> complex:
    z = cmath.exp(2j * cmath.pi / c.N)
    return sum(complex(float(x)) * z ** k for k, x in enumerate(c.coeffs))


@pytest.fixture
def rou12():
    return ParameterEnv(12, {"q1": "e^4", "q2": "e^3", "l12": "e^2"})


@pytest.fixture
def rho_mu():
    return Scalar.param("rho"), Scalar.param("mu")
