from __future__ import annotations

import mpmath
import pytest


@pytest.fixture(scope="session")
def oracle():
    """Independent evaluation in mpmath's ordinary (non-interval) context."""
    with mpmath.workdps(50):
        g = mpmath.euler
        C = 1 - mpmath.exp(-2)
        D = M = mpmath.mpf(160)
        CUB = 8 * mpmath.exp(2 * g)
        f = 1 + 1 / D
        mix = 25 * CUB + 20 * mpmath.exp(g) * M
        A = 2 * mpmath.exp(-g) / C * M * f
        c = mpmath.mpf(1) / 3 / 4 / (12800 * mpmath.log(5))
        eps = M**2 / (1800 * A**2 * CUB) * mpmath.exp(2 * g) / (4 * f**2 * mix)
        c_LG = C**2 * mpmath.mpf(1) / 12 * mpmath.exp(4 * g) / (
            737280000 * mpmath.log(5) * CUB * M * f**4 * mix)
        return {"A": A, "c": c, "eps": eps, "c_LG": c_LG, "C": C, "EN2": mix * A**2 / M**2}
