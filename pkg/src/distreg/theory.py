"""Quantitative theory calculators: capacity, oracle bound, rate schedule.

Everything here is a direct formula evaluator.  Nothing is estimated;
the functions exist so the constants can be recomputed, cross-checked
and plugged into schedules.  The scale constant R-hat ships in two
variants that differ by a factor of five: the conservative value
15 R^4 (10 n_q + d + 18) is the default and the tighter value
3 R^4 (10 n_q + d + 18) is available through ``variant="statement"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .network import HypothesisSpaceSpec
from .polyridge import n_q as _n_q

__all__ = [
    "TheoryConstants",
    "CoveringBound",
    "RateSchedule",
    "covering_bound",
    "h2_covering_bound",
    "oracle_rhs",
    "rate_schedule",
]


def _t1(d: int, q: int, nq: int) -> float:
    return (d + q) * nq + 5 * q + 5


def _t2(d: int, q: int, nq: int) -> float:
    return 9 * (d + q) * nq + 45 * q + 190


def _r_hat(R: float, d: int, nq: int, variant: str) -> float:
    if variant == "proof":
        lead = 15.0
    elif variant == "statement":
        lead = 3.0
    else:
        raise ValueError(f"variant must be 'proof' or 'statement', got {variant!r}")
    return lead * R**4 * (10 * nq + d + 18)


@dataclass(frozen=True)
class TheoryConstants:
    """All constants of the learning-rate analysis for one configuration.

    Inputs are the geometry (d, q), the hypothesis-space radius R, the
    output bound M, the smoothness beta, and the approximation constants
    B_G, B_Q, f_sem = |f|_{C^{0,beta}}, g_lip = |g|_{C^{0,1}}.  Derived
    fields follow the closed-form algebra of the rate proof.
    """

    d: int
    q: int
    R: float
    M: float
    beta: float
    B_G: float
    B_Q: float
    f_sem: float
    g_lip: float
    variant: str = "proof"

    def __post_init__(self):
        if self.d < 1 or self.q < 1:
            raise ValueError("need d >= 1 and q >= 1")
        if min(self.R, self.M, self.B_G, self.B_Q, self.f_sem, self.g_lip) <= 0:
            raise ValueError("R, M, B_G, B_Q, f_sem, g_lip must all be positive")
        if not (0 < self.beta <= 1):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        nq = _n_q(self.d, self.q)
        t1 = _t1(self.d, self.q, nq)
        t2 = _t2(self.d, self.q, nq)
        rh = _r_hat(self.R, self.d, nq, self.variant)
        c1 = 2.0 * self.B_G**self.beta * self.f_sem + (3.0 * self.B_Q * self.g_lip) ** self.beta * self.f_sem
        b = self.beta
        M, R = self.M, self.R
        a1 = t1 * (math.log(8.0 * M * rh / c1**2) + 2.0 * b) + t2
        a2 = t1 * (math.log(40.0 * M * rh * R**2 / c1**2) + 2.0 * b + 4.0) + t2
        a3 = 115200.0 * (M + c1) ** 2 * R**8
        a4 = min(
            3.0 * c1**2 / (2048.0 * M**2 * a1),
            3.0 * c1**2 / (4096.0 * M**2 * a2),
        ) ** (1.0 / (2.0 * b + 1.0))
        a5 = 3.0 * a3 * a4 ** (2.0 * b + 16.0) / (4096.0 * M**2 * c1**2)
        a6 = 3.0 * c1**2 * a4 ** (-2.0 * b) / (4096.0 * M**2)
        a7 = (
            18.0 * c1**2 * 2.0 ** (2.0 * b) * a4 ** (-2.0 * b) * (math.log(a4) + 1.0 / (2.0 * b + 1.0))
            + 2304.0 * (4.0 * M + c1) ** 2
        )
        for name, val in (
            ("n_q", nq), ("T1", t1), ("T2", t2), ("R_hat", rh), ("C1", c1),
            ("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5),
            ("A6", a6), ("A7", a7),
        ):
            object.__setattr__(self, name, val)
        if min(self.A1, self.A2, self.A3, self.A4, self.A5, self.A6, self.A7) <= 0:
            raise ValueError("derived rate constants must be positive for this configuration")


@dataclass(frozen=True)
class CoveringBound:
    """Value of the log-covering bound plus an out-of-scale flag."""

    value: float
    eps_exceeds_scale: bool


def covering_bound(
    spec: HypothesisSpaceSpec, d: int, q: int, eps: float, variant: str = "proof"
) -> CoveringBound:
    """Log covering number bound T1 N log(R_hat / eps) + T2 N log N.

    For eps at or beyond the scale constant R_hat the first term turns
    nonpositive; the value is then clamped below at 0 and flagged.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    nq = _n_q(d, q)
    rh = _r_hat(spec.R, d, nq, variant)
    N = spec.N
    val = _t1(d, q, nq) * N * math.log(rh / eps) + _t2(d, q, nq) * N * math.log(N)
    if eps >= rh:
        return CoveringBound(value=max(val, 0.0), eps_exceeds_scale=True)
    return CoveringBound(value=val, eps_exceeds_scale=False)


def h2_covering_bound(
    spec: HypothesisSpaceSpec, d: int, q: int, eps: float, variant: str = "proof"
) -> CoveringBound:
    """Covering bound for the class of truncated second-stage functionals.

    Same closed form and constants as :func:`covering_bound`; kept
    separate because it covers a different function class.
    """
    return covering_bound(spec, d, q, eps, variant)


_LOG3 = math.log(3.0)


def oracle_rhs(
    m: int,
    n: int,
    N: int,
    eps: float,
    constants: TheoryConstants,
    h_norm: float,
    h_dist: float,
) -> float:
    """Right-hand side of the oracle inequality: sum of three exponentials.

    ``h_norm`` is the sup norm of the comparison element h and
    ``h_dist`` its squared population distance to the regression
    function.  The value is clamped at 3 since each term bounds a
    probability.
    """
    if min(m, n, N) < 1 or eps <= 0:
        raise ValueError("m, n, N must be >= 1 and eps > 0")
    T1, T2, rh = constants.T1, constants.T2, constants.R_hat
    M, R = constants.M, constants.R
    e1 = T1 * N * math.log(16.0 * M * rh / eps) + T2 * N * math.log(N) - 3.0 * m * eps / (2048.0 * M**2)
    e2 = -m * eps**2 / (2.0 * (3.0 * M + h_norm) ** 2 * (h_dist + 2.0 * eps / 3.0))
    e3 = (
        math.log(4.0 * m)
        + T1 * N * math.log(80.0 * M * rh * R**2 * N**4 / eps)
        + T2 * N * math.log(N)
        - n * eps**2 / (115200.0 * max(h_norm**2, M**2) * R**8 * N**16)
    )
    if max(e1, e2, e3) > _LOG3:
        return 3.0
    total = math.exp(e1) + math.exp(e2) + math.exp(e3)
    return min(total, 3.0)


@dataclass(frozen=True)
class RateSchedule:
    """Resolution and second-stage size prescribed for a first-stage size m."""

    N: int
    n_min: int
    restriction_ok: bool
    N_clamped: bool


def rate_schedule(
    m: int,
    beta: float,
    constants: Optional[TheoryConstants] = None,
    *,
    A4: Optional[float] = None,
    A5: Optional[float] = None,
    A6: Optional[float] = None,
) -> RateSchedule:
    """N = floor(A4 m^{1/(2b+1)}), n_min = ceil(A5 m^{(4b+17)/(2b+1)}).

    The exact constants make desk-scale N collapse to the clamp, so the
    keyword overrides let callers substitute practical multipliers while
    keeping the exponents; each override defaults to the corresponding
    constant.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not (0 < beta <= 1):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if constants is None and None in (A4, A5, A6):
        raise ValueError("provide TheoryConstants or all three overrides A4, A5, A6")
    a4 = constants.A4 if A4 is None else A4
    a5 = constants.A5 if A5 is None else A5
    a6 = constants.A6 if A6 is None else A6
    p = 1.0 / (2.0 * beta + 1.0)
    raw = a4 * m**p
    clamped = raw < 1.0
    N = max(1, int(math.floor(raw)))
    n_min = int(math.ceil(a5 * m ** ((4.0 * beta + 17.0) * p)))
    restriction_ok = math.log(4.0 * m) <= a6 * m**p
    return RateSchedule(N=N, n_min=n_min, restriction_ok=restriction_ok, N_clamped=clamped)
