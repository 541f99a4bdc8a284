"""Log-space recurrences for the Polya-Aeppli mass and distribution functions.

Everything here works on the logarithm of the probabilities, which keeps the
tables finite and accurate far beyond the point where exp(-lam) underflows.
The linear-space three-term recurrence (see :mod:`polya_aeppli.oracle`) fails
there; these routines are the production path.

All functions are pure; tables are immutable after construction and safe to
share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import DistParams

__all__ = [
    "LogPmfTable",
    "TailTables",
    "TailConvergenceError",
    "log_pmf_table",
    "log_cdf_lower",
    "log_tail_init",
    "log_cdf_upper",
    "tail_tables",
    "MAX_TABLE_LEN",
]

# Hard cap on table length: beyond this the arrays alone are > 0.5 GiB and a
# request is almost certainly a caller bug, so fail loudly instead of paging.
MAX_TABLE_LEN = 2**26

# Tail series termination: newest term below 2**-53 of the running sum for
# three consecutive terms.  The triple check guards against slow early decay
# when the series is entered near the mode.
_LOG_TERM_EPS = -53.0 * math.log(2.0)
_TAIL_MAX_ITER = 10**6
_TAIL_CONSECUTIVE = 3


class TailConvergenceError(ArithmeticError):
    """The upper-tail series failed to converge within the iteration cap."""


@dataclass(frozen=True)
class LogPmfTable:
    """Log mass function values logp[x] for x = 0 .. xmax, logp[0] == -lam."""

    params: DistParams
    logp: np.ndarray

    def __post_init__(self) -> None:
        self.logp.setflags(write=False)

    @property
    def xmax(self) -> int:
        return len(self.logp) - 1


@dataclass(frozen=True)
class TailTables:
    """Log lower-tail g and log upper-tail h derived from one pmf table.

    g is non-decreasing with g <= 0; h is non-increasing with h <= -0.0;
    exp(g[x]) + exp(h[x]) == 1 up to rounding wherever both are representable.
    """

    g: np.ndarray
    h: np.ndarray
    source: LogPmfTable = field(repr=False)

    def __post_init__(self) -> None:
        self.g.setflags(write=False)
        self.h.setflags(write=False)


def _check_xmax(xmax: int) -> int:
    xmax = int(xmax)
    if xmax < 0:
        raise ValueError(f"xmax must be >= 0, got {xmax}")
    if xmax >= MAX_TABLE_LEN:
        raise ValueError(f"xmax={xmax} exceeds the table capacity {MAX_TABLE_LEN - 1}")
    return xmax


def _step(lam1mp: float, prob: float, x: int, l_prev: float, l_cur: float) -> float:
    """One step of the log recurrence: l(x+1) from l(x-1), l(x), for x >= 1."""
    num = lam1mp + 2.0 * prob * x - prob * prob * (x - 1) * math.exp(l_prev - l_cur)
    return l_cur + math.log(num / (x + 1))


def log_pmf_table(params: DistParams, xmax: int) -> LogPmfTable:
    """Tabulate l(x) = log P(X = x) for x = 0 .. xmax.

    Uses l(0) = -lam, l(1) = -lam + log(lam*(1-prob)) and the stable
    log-space three-term recurrence for larger x.  prob == 0 degenerates to
    the Poisson recurrence l(x+1) = l(x) + log(lam) - log(x+1); lam == 0 is
    the point mass at 0 (l(0) = 0, l(x>0) = -inf).
    """
    xmax = _check_xmax(xmax)
    lam, prob = params.lam, params.prob
    logp = np.empty(xmax + 1, dtype=np.float64)

    if lam == 0.0:
        logp[0] = 0.0
        logp[1:] = -np.inf
        return LogPmfTable(params=params, logp=logp)

    logp[0] = -lam
    if xmax >= 1:
        if prob == 0.0:
            loglam = math.log(lam)
            cur = -lam
            for x in range(1, xmax + 1):
                cur += loglam - math.log(x)
                logp[x] = cur
        else:
            lam1mp = lam * (1.0 - prob)
            logp[1] = -lam + math.log(lam1mp)
            prev, cur = logp[0], logp[1]
            for x in range(1, xmax):
                prev, cur = cur, _step(lam1mp, prob, x, prev, cur)
                logp[x + 1] = cur
    return LogPmfTable(params=params, logp=logp)


def log_cdf_lower(table: LogPmfTable) -> np.ndarray:
    """g[x] = log P(X <= x) for x = 0 .. xmax, with g[0] = -lam.

    Strict left-to-right log-sum accumulation; entries are clamped at 0.0 so
    that last-ulp drift can never push the cumulative log above log(1).
    """
    g = np.logaddexp.accumulate(table.logp)
    return np.where(g >= 0.0, 0.0, g)


def log_tail_init(table: LogPmfTable, xstart: int) -> float:
    """h(xstart) = log P(X > xstart), summed from the convergent tail series.

    Extends the log-pmf recurrence past ``xstart`` and accumulates
    log-sum-exp of l(i) for i > xstart until three consecutive terms fall
    below 2**-53 of the running sum.  Raises :class:`TailConvergenceError`
    if the cap of 10**6 terms is reached, rather than silently truncating.
    """
    xstart = int(xstart)
    if not 0 <= xstart <= table.xmax:
        raise ValueError(f"xstart must be in [0, {table.xmax}], got {xstart}")
    lam, prob = table.params.lam, table.params.prob
    if lam == 0.0:
        return -math.inf

    logp = table.logp
    lam1mp = lam * (1.0 - prob)
    poisson = prob == 0.0
    loglam = math.log(lam)

    # l(xstart) and l(xstart+1), stepping past the table end when needed.
    l_cur = float(logp[xstart])
    if xstart + 1 <= table.xmax:
        l_next = float(logp[xstart + 1])
    elif xstart == 0:
        l_next = -lam + (loglam if poisson else math.log(lam1mp))
    elif poisson:
        l_next = l_cur + loglam - math.log(xstart + 1)
    else:
        l_next = _step(lam1mp, prob, xstart, float(logp[xstart - 1]), l_cur)

    anchor = l_next  # series is accumulated relative to l(xstart+1)
    log_sum = 0.0  # first term, i = xstart+1
    small = 0
    x = xstart + 1  # index of l_next
    for _ in range(_TAIL_MAX_ITER):
        if poisson:
            l_new = l_next + loglam - math.log(x + 1)
        else:
            l_new = _step(lam1mp, prob, x, l_cur, l_next)
        delta = l_new - anchor
        small = small + 1 if delta - log_sum < _LOG_TERM_EPS else 0
        log_sum = float(np.logaddexp(log_sum, delta))
        if small >= _TAIL_CONSECUTIVE:
            h = anchor + log_sum
            return h if h < 0.0 else -0.0
        l_cur, l_next = l_next, l_new
        x += 1
    raise TailConvergenceError(
        f"upper-tail series did not converge within {_TAIL_MAX_ITER} terms "
        f"(lam={lam}, prob={prob}, xstart={xstart})"
    )


def log_cdf_upper(table: LogPmfTable, h_init: float, xstart: int) -> np.ndarray:
    """h[x] = log P(X > x) for x = 0 .. xstart, iterated downwards.

    ``h_init`` must be h(xstart) from :func:`log_tail_init`; each step adds
    one pmf value, h(i-1) = logaddexp(h(i), l(i)), so h is non-increasing by
    construction.  Entries are clamped at -0.0 (P(X > x) < 1 for x >= 0).
    """
    xstart = int(xstart)
    if not 0 <= xstart <= table.xmax:
        raise ValueError(f"xstart must be in [0, {table.xmax}], got {xstart}")
    seq = np.empty(xstart + 1, dtype=np.float64)
    seq[0] = h_init
    seq[1:] = table.logp[xstart:0:-1]
    h = np.logaddexp.accumulate(seq)[::-1]
    return np.where(h >= 0.0, -0.0, h)


def tail_tables(table: LogPmfTable) -> TailTables:
    """Both tail tables over the full index range of ``table``."""
    g = log_cdf_lower(table)
    h = log_cdf_upper(table, log_tail_init(table, table.xmax), table.xmax)
    return TailTables(g=g, h=h, source=table)
