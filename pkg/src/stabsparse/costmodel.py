"""Sample-count formulas and the weak/strong/exact regime map.

Counts are stabilizer-state budgets for simulating t tensored magic
states to additive error delta: the quadratic i.i.d. bound xi/delta^2,
the renormalized-ensemble bound (2+sqrt 2) xi/delta, its tightened
sqrt(2) variant, the correlated next-order bound (xi - gamma)/delta^2
and the correlated renormalized bound obtained as the positive root of

    delta^2 k^3 + 4 f k^2 - (2 xi^2 + f^2) k - f^3 = 0,

rounded up to a whole number of supplement groups.  With the optimal
supplement count f = 10 delta xi the root approaches
(sqrt(402) - 20) xi / delta ~ 0.05 xi / delta as delta -> 0, a ~68x
reduction over (2+sqrt 2) xi / delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

SQRT2 = math.sqrt(2.0)
SOTA_PREFACTOR = 2.0 + SQRT2
TIGHT_PREFACTOR = SQRT2
ASYMPTOTE_EXACT = math.sqrt(402.0) - 20.0   # ~ 0.0499377
ASYMPTOTE_ROUNDED = 0.05
CHI_EXPONENT_DEFAULT = 0.396
#: published exact stabilizer ranks for small T-gate counts
CHI_TABLE = {4: 4.0, 8: 12.0, 16: 108.0}

WEAK_CORRELATED = "WEAK_CORRELATED"
STRONG = "STRONG"
EXACT_SIM = "EXACT"


def _int_ceil(x: float) -> int:
    """Ceiling with a few-ulp guard against float noise."""
    return int(math.ceil(x - 1e-12 * max(1.0, abs(x))))


def _round_up_multiple(k: int, size: int) -> int:
    return ((k + size - 1) // size) * size


def k_sota(xi: float, delta: float) -> int:
    """(2 + sqrt 2) xi / delta, rounded up."""
    _check(xi, delta)
    return _int_ceil(SOTA_PREFACTOR * xi / delta)


def k_iid_quadratic(xi: float, delta: float) -> int:
    """xi / delta^2, rounded up."""
    _check(xi, delta)
    return _int_ceil(xi / delta**2)


def k_iid_tight(xi: float, delta: float) -> int:
    """sqrt(2) xi / delta, rounded up."""
    _check(xi, delta)
    return _int_ceil(TIGHT_PREFACTOR * xi / delta)


def k_theorem1(xi: float, delta: float, gamma: float) -> int:
    """(xi - gamma) / delta^2, rounded up; requires gamma < xi."""
    _check(xi, delta)
    if gamma >= xi:
        raise ValueError("gamma must be smaller than the extent")
    return _int_ceil((xi - gamma) / delta**2)


def _check(xi: float, delta: float) -> None:
    if xi < 1.0:
        raise ValueError("extent must be at least 1")
    if delta <= 0.0:
        raise ValueError("delta must be positive")


def optimal_beta(delta: float) -> float:
    """Numerically optimal supplement fraction beta = 10 delta^2."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    return 10.0 * delta**2


def f_t_optimal(delta: float, xi: float) -> int:
    """Supplements per seed at the optimal beta: round(10 delta xi)."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    return int(round(optimal_beta(delta) * xi / delta))


def _cubic(xi: float, delta: float, f_t: float):
    d2 = delta * delta
    c2 = 4.0 * f_t
    c1 = -(2.0 * xi * xi + f_t * f_t)
    c0 = -(f_t**3)
    return lambda k: ((d2 * k + c2) * k + c1) * k + c0


def k_correlated_raw(xi: float, delta: float, f_t: float) -> float:
    """Positive root of the cubic bound, before any integer rounding.

    The polynomial has exactly one positive root (one sign change), so a
    bisection on [0, 10 xi/delta + 10 f_t] (doubling the bracket if
    needed) finds it without touching the closed form's complex cube
    roots.  f_t = 0 reduces to sqrt(2) xi / delta.
    """
    _check(xi, delta)
    if f_t < 0:
        raise ValueError("f_t must be nonnegative")
    p = _cubic(xi, delta, float(f_t))
    lo, hi = 0.0, 10.0 * xi / delta + 10.0 * f_t + 10.0
    while p(hi) < 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if p(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def k_correlated(xi: float, delta: float, f_t: int) -> int:
    """Smallest k (a multiple of f_t + 1) satisfying the cubic bound."""
    root = k_correlated_raw(xi, delta, float(f_t))
    p = _cubic(xi, delta, float(f_t))
    k0 = max(1, int(math.ceil(root)))
    while k0 > 1 and p(k0 - 1) >= 0.0:
        k0 -= 1
    while p(k0) < 0.0:
        k0 += 1
    return _round_up_multiple(k0, f_t + 1)


@dataclass(frozen=True)
class RegimeFlags:
    """Truth values of the four cost-comparison inequalities."""

    strong_fewer_states: bool      # chi < 0.05 xi / delta
    exact_fewer_states: bool       # chi^2 < 0.05 xi / delta^3
    strong_cheaper_outcomes: bool  # (chi/delta^2)/(2+sqrt2) < 0.05 xi / delta^3
    exact_cheaper_outcomes: bool   # chi^2 < (12*0.05/(2+sqrt2)) xi / delta^3


@dataclass(frozen=True)
class RegimePoint:
    t: int
    delta: float
    xi_t: float
    chi_t: float
    flags: RegimeFlags
    cheapest: str


def chi_t(t: int, chi_exponent: float = CHI_EXPONENT_DEFAULT, table: Optional[dict] = None) -> float:
    """Stabilizer-rank model 2^(exponent * t), with optional per-t overrides."""
    if table and t in table:
        return float(table[t])
    return 2.0 ** (chi_exponent * t)


def regime(
    t: int,
    delta: float,
    xi_1: float,
    chi_exponent: float = CHI_EXPONENT_DEFAULT,
    chi_table: Optional[dict] = None,
    constant: float = ASYMPTOTE_ROUNDED,
) -> RegimePoint:
    """Evaluate the weak/strong/exact comparison at one (t, delta) cell."""
    if t < 1:
        raise ValueError("t must be at least 1")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    xi = xi_1**t
    chi = chi_t(t, chi_exponent, chi_table)
    a = constant
    flags = RegimeFlags(
        strong_fewer_states=chi < a * xi / delta,
        exact_fewer_states=chi**2 < a * xi / delta**3,
        strong_cheaper_outcomes=(chi / delta**2) / SOTA_PREFACTOR < a * xi / delta**3,
        exact_cheaper_outcomes=chi**2 < (12.0 * a / SOTA_PREFACTOR) * xi / delta**3,
    )
    if flags.exact_cheaper_outcomes:
        cheapest = EXACT_SIM
    elif flags.strong_cheaper_outcomes:
        cheapest = STRONG
    else:
        cheapest = WEAK_CORRELATED
    return RegimePoint(t=t, delta=delta, xi_t=xi, chi_t=chi, flags=flags, cheapest=cheapest)


def exact_vs_strong_crossover(
    xi_1: float,
    chi_exponent: float = CHI_EXPONENT_DEFAULT,
    constant: float = ASYMPTOTE_ROUNDED,
    t_max: int = 400,
) -> int:
    """Largest t at which exact simulation overtakes weak before strong does.

    Compares the delta thresholds of the state-count inequalities: exact
    beats weak below delta_e = (a xi / chi^2)^(1/3) and strong beats weak
    below delta_s = a xi / chi; the ordering delta_e > delta_s holds iff
    chi > (a xi)^2, which fails beyond the returned t.
    """
    last = 0
    for t in range(1, t_max + 1):
        xi = xi_1**t
        chi = 2.0 ** (chi_exponent * t)
        d_strong = constant * xi / chi
        d_exact = (constant * xi / chi**2) ** (1.0 / 3.0)
        if d_exact > d_strong:
            last = t
    return last


def outcome_crossover(
    xi_1: float,
    chi_exponent: float = CHI_EXPONENT_DEFAULT,
    constant: float = ASYMPTOTE_ROUNDED,
    t_max: int = 400,
) -> int:
    """Same ordering scan for the outcome-estimation inequality pair."""
    last = 0
    for t in range(1, t_max + 1):
        xi = xi_1**t
        chi = 2.0 ** (chi_exponent * t)
        d_strong = constant * SOTA_PREFACTOR * xi / chi
        d_exact = ((12.0 * constant / SOTA_PREFACTOR) * xi / chi**2) ** (1.0 / 3.0)
        if d_exact > d_strong:
            last = t
    return last


@dataclass(frozen=True)
class CostPoint:
    """One row of the cost map."""

    t: int
    delta: float
    xi_t: float
    chi_t: float
    k_iid_quadratic: int
    k_sota: int
    k_iid_tight: int
    k_theorem1: Optional[int]
    k_correlated: int
    k_correlated_asymptotic: int
    f_t: int
    beta: float
    cheapest_regime: str
    asymptote_constant: float = ASYMPTOTE_EXACT

    def ratio_vs_sota(self) -> float:
        return self.k_sota / self.k_correlated

    def asymptotic_ratio_vs_sota(self) -> float:
        """(2+sqrt2)/(sqrt402-20) ~ 68.4 wherever the counts are large."""
        return self.k_sota / self.k_correlated_asymptotic

    def equivalent_magic_gates_removed(self) -> float:
        """t' with xi_1^t' equal to the asymptotic-law ratio (~27 at pi/4)."""
        xi_1 = self.xi_t ** (1.0 / self.t)
        return math.log(self.asymptotic_ratio_vs_sota()) / math.log(xi_1)


def cost_point(
    t: int,
    delta: float,
    xi_1: float,
    gamma: Optional[float] = None,
    chi_exponent: float = CHI_EXPONENT_DEFAULT,
    chi_table: Optional[dict] = None,
) -> CostPoint:
    xi = xi_1**t
    f_t = f_t_optimal(delta, xi)
    reg = regime(t, delta, xi_1, chi_exponent, chi_table)
    k_th1 = None
    if gamma is not None and gamma < xi:
        k_th1 = k_theorem1(xi, delta, gamma)
    return CostPoint(
        t=t,
        delta=delta,
        xi_t=xi,
        chi_t=reg.chi_t,
        k_iid_quadratic=k_iid_quadratic(xi, delta),
        k_sota=k_sota(xi, delta),
        k_iid_tight=k_iid_tight(xi, delta),
        k_theorem1=k_th1,
        k_correlated=k_correlated(xi, delta, f_t),
        k_correlated_asymptotic=_int_ceil(ASYMPTOTE_EXACT * xi / delta),
        f_t=f_t,
        beta=optimal_beta(delta),
        cheapest_regime=reg.cheapest,
    )
