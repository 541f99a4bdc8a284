"""Independent brute-force references used by tests and the self-check.

Nothing here is on the production path.  :func:`direct_pmf` sums the mass
function definition term by term in arbitrary precision; `evens_pmf_table`
runs the classical linear-space three-term recurrence, which is only usable
while exp(-lam) is representable (that failure mode is exactly why the
log-space kernel exists); :func:`poisson_reference` is a from-scratch Poisson
pmf for the prob == 0 reduction checks.

Range caps are explicit module constants, never silent truncation.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from .params import DistParams

__all__ = [
    "OracleRangeError",
    "direct_pmf",
    "direct_cdf",
    "evens_pmf_table",
    "poisson_reference",
    "poisson_upper_tail",
    "DIRECT_SUM_XMAX",
    "EVENS_LAM_MAX",
]

# Largest x for which term-by-term summation is considered trustworthy (and
# affordable: the sum has x terms, each in arbitrary precision).
DIRECT_SUM_XMAX = 4000

# The linear recurrence starts from exp(-lam); beyond this it underflows.
EVENS_LAM_MAX = 700.0

_DPS = 40  # working decimal digits; results are good to ~35 significant digits


class OracleRangeError(ValueError):
    """Requested point lies outside the oracle's trustworthy range."""


def direct_pmf(x: int, params: DistParams) -> mp.mpf:
    """P(X = x) by direct summation of the defining mixture.

    exp(-lam) * sum over n = 1..x of lam**n/n! * C(x-1, n-1) *
    prob**(x-n) * (1-prob)**n, evaluated in arbitrary precision.  Returns an
    ``mpmath.mpf`` carrying far more than the 12 significant digits needed to
    validate the production path; ``float()`` it for double precision.
    """
    x = int(x)
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x > DIRECT_SUM_XMAX:
        raise OracleRangeError(f"direct_pmf supports x <= {DIRECT_SUM_XMAX}, got {x}")
    with mp.workdps(_DPS):
        lam = mp.mpf(params.lam)
        p = mp.mpf(params.prob)
        if x == 0:
            return mp.exp(-lam)
        total = mp.mpf(0)
        for n in range(1, x + 1):
            total += (
                mp.power(lam, n)
                / mp.factorial(n)
                * mp.binomial(x - 1, n - 1)
                * mp.power(p, x - n)
                * mp.power(1 - p, n)
            )
        return mp.exp(-lam) * total


def direct_cdf(x: int, params: DistParams) -> mp.mpf:
    """P(X <= x) as a plain sum of :func:`direct_pmf` values."""
    with mp.workdps(_DPS):
        return mp.fsum(direct_pmf(i, params) for i in range(int(x) + 1))


def evens_pmf_table(params: DistParams, xmax: int) -> np.ndarray:
    """pmf table from the linear-space recurrence, in double precision.

    (x+1) P(x+1) = [lam(1-p) + 2 p x] P(x) - p**2 (x-1) P(x-1), seeded with
    P(0) = exp(-lam) and P(1) = lam (1-p) exp(-lam).  Accurate while
    exp(-lam) is comfortably representable; raises :class:`OracleRangeError`
    for lam > EVENS_LAM_MAX, where the seed underflows and the recurrence is
    pure roundoff noise.
    """
    xmax = int(xmax)
    if xmax < 0:
        raise ValueError(f"xmax must be >= 0, got {xmax}")
    lam, p = params.lam, params.prob
    if lam > EVENS_LAM_MAX:
        raise OracleRangeError(
            f"evens_pmf_table requires lam <= {EVENS_LAM_MAX} (exp(-lam) "
            f"representable), got lam={lam}"
        )
    pmf = np.zeros(xmax + 1, dtype=np.float64)
    pmf[0] = math.exp(-lam)
    if xmax >= 1:
        pmf[1] = lam * (1.0 - p) * pmf[0]
    for x in range(1, xmax):
        pmf[x + 1] = ((lam * (1.0 - p) + 2.0 * p * x) * pmf[x] - p * p * (x - 1) * pmf[x - 1]) / (x + 1)
    return pmf


def poisson_reference(x: int, lam: float) -> mp.mpf:
    """Poisson pmf exp(-lam) lam**x / x! in arbitrary precision."""
    x = int(x)
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x > DIRECT_SUM_XMAX:
        raise OracleRangeError(f"poisson_reference supports x <= {DIRECT_SUM_XMAX}, got {x}")
    with mp.workdps(_DPS):
        lam_ = mp.mpf(lam)
        return mp.exp(-lam_) * mp.power(lam_, x) / mp.factorial(x)


def poisson_upper_tail(x: int, lam: float) -> mp.mpf:
    """P(N > x) for N ~ Poisson(lam), summed term by term past x."""
    x = int(x)
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    with mp.workdps(_DPS):
        lam_ = mp.mpf(lam)
        term = mp.exp(-lam_) * mp.power(lam_, x + 1) / mp.factorial(x + 1)
        total = term
        i = x + 1
        while True:
            i += 1
            term *= lam_ / i
            total += term
            if i > lam and term < total * mp.mpf(10) ** (-_DPS - 5):
                return total
