"""Extremizer experiments on the Sobolev line and log-log slope fitting.

Both experiments live at r = 2 on the exponent line 1/q + 1/p' = alpha and
drive the characteristic to infinity through a one-parameter family of
power weights. Everything is evaluated through closed-form shell sums: the
extremizing functions are powers, the family is the origin-anchored chain,
and on each dyadic shell (2^{-(l+1)}, 2^{-l}] every integrand is a pure
power, so norms reduce to geometric sums. All accumulation happens in
log2 space because truncation depths reach K ~ 2^12 * 20 where the raw
shell terms overflow double precision by thousands of orders of magnitude.

The reported tail bound per row is a one-sided geometric envelope of the
discarded shells, relative to the truncated value and already divided by
the outer norm exponent; it certifies that extending K cannot move any
reported norm by more than the stated amount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ParameterError

_LN2 = math.log(2.0)


def _log2_1m2pow(y: float) -> float:
    """log2(1 - 2^-y) for y > 0, stable for tiny and huge y."""
    if y <= 0.0:
        raise ParameterError("geometric ratio must be strictly decreasing")
    return math.log(-math.expm1(-y * _LN2)) / _LN2


def _log2_2pow_m1(x: float) -> float:
    """log2(2^x - 1) for x > 0."""
    return x + _log2_1m2pow(x)


def _v_log2_2pow_m1(x: np.ndarray) -> np.ndarray:
    return x + np.log(-np.expm1(-x * _LN2)) / _LN2


def _log2_geom_sum(n: int, d: float) -> float:
    """log2 of sum_{l=0}^{n-1} 2^{-l d} for d > 0."""
    return _log2_1m2pow(n * d) - _log2_1m2pow(d)


def _logsumexp2(logs: np.ndarray) -> float:
    m = float(np.max(logs))
    return m + math.log2(float(np.sum(np.exp2(logs - m))))


def _log2_shell_mass(m: float, l) -> float:
    """log2 of the integral of x^m over the shell (2^{-(l+1)}, 2^{-l}]."""
    return -l * (m + 1.0) + _log2_1m2pow(m + 1.0) - math.log2(m + 1.0)


class PrimalQuantities(NamedTuple):
    char: float
    fnorm: float
    af_lower: float
    af_exact: float
    tail_lower: float
    tail_exact: float


class DualQuantities(NamedTuple):
    char: float
    rhs_norm: float
    lhs_norm: float
    square_sum_bound: float
    coef_identity_max_rel: float
    tail_rhs: float
    tail_lhs: float


def primal_quantities(
    eps: float, p: float, q: float, alpha: float, k_top: int
) -> PrimalQuantities:
    """Weight x^{(1-eps)/p'}, test function x^{eps-1}, chain truncated at k_top.

    Returns the one-weight characteristic, the exact weighted norm of the
    test function, and the shell-integrated norm of the operator output in
    two versions: the single-term lower bound the shell argument uses, and
    the full square function (which can only be larger).
    """
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if k_top < 20.0 / eps:
        raise ParameterError("truncation depth below the declared tail rule")
    p_conj = p / (p - 1.0)
    log2_eps = math.log2(eps)

    char = eps ** (-q / p_conj) / (q * (1.0 - eps) / p_conj + 1.0)

    weighted_exp = p * ((1.0 - eps) / p_conj + eps - 1.0) + 1.0
    fnorm = (1.0 / weighted_exp) ** (1.0 / p)

    m = q * (1.0 - eps) / p_conj
    growth = 2.0 * (alpha - eps)
    if growth <= 0.0:
        raise ParameterError("eps must stay below alpha")
    c_shell = _log2_1m2pow(m + 1.0) - math.log2(m + 1.0)
    d_step = (m + 1.0) - q * (alpha - eps)
    if d_step <= 0.0:
        raise ParameterError("shell terms fail to decay; exponents off the line")

    # single-term lower bound: exactly geometric shells plus the flat core
    log_t0 = -q * log2_eps + c_shell
    log_shells = log_t0 + _log2_geom_sum(k_top, d_step)
    log_core_meas = -k_top * (m + 1.0) - math.log2(m + 1.0)
    log_core_low = q * (-log2_eps + k_top * (alpha - eps)) + log_core_meas
    log_s_low = _logsumexp2(np.array([log_shells, log_core_low]))
    af_lower = 2.0 ** (log_s_low / q)
    log_tail_low = log_t0 - k_top * d_step - _log2_1m2pow(d_step)
    tail_lower = 2.0 ** (log_tail_low - log_s_low) / q

    # exact square function: per-shell cumulative geometric sums
    lvec = np.arange(k_top, dtype=float)
    log_g = _v_log2_2pow_m1(growth * (lvec + 1.0)) - _log2_2pow_m1(growth)
    log_t = -q * log2_eps + (q / 2.0) * log_g + c_shell - lvec * (m + 1.0)
    log_g_core = _log2_2pow_m1(growth * (k_top + 1.0)) - _log2_2pow_m1(growth)
    log_core = q * (-log2_eps + 0.5 * log_g_core) + log_core_meas
    log_s_exact = _logsumexp2(np.append(log_t, log_core))
    af_exact = 2.0 ** (log_s_exact / q)
    # geometric majorant of the discarded shells: G_l <= 2^{growth(l+1)}/(2^growth - 1)
    log_major_k = (
        -q * log2_eps
        + (q / 2.0) * (growth * (k_top + 1.0) - _log2_2pow_m1(growth))
        + c_shell
        - k_top * (m + 1.0)
    )
    tail_exact = 2.0 ** (log_major_k - _log2_1m2pow(d_step) - log_s_exact) / q

    return PrimalQuantities(char, fnorm, af_lower, af_exact, tail_lower, tail_exact)


def dual_quantities(
    eps: float, p: float, q: float, alpha: float, k_top: int
) -> DualQuantities:
    """Weight x^{(eps-1)/q} against the square-function block sequence.

    Compares the two sides of the vector-valued estimate: lhs carries the
    cube coefficients |I_k|^{-alpha} int a_k w^q, rhs the pointwise square
    sum of the blocks a_k = eps^{1/2} |I_k|^{-eps} x^eps 1_{I_k}.
    """
    if eps >= alpha:
        raise ParameterError("the shell lower bound needs eps < alpha")
    if eps > alpha / 2.0:
        raise ParameterError(
            "eps above the recorded admissible cap alpha/2 for this experiment"
        )
    if not eps > 0.0:
        raise ParameterError("eps must be positive")
    if k_top < 20.0 / eps:
        raise ParameterError("truncation depth below the declared tail rule")
    p_conj = p / (p - 1.0)
    q_conj = q / (q - 1.0)
    log2_eps = math.log2(eps)

    char = (1.0 / eps) * (1.0 + p_conj * (1.0 - eps) / q) ** (-q / p_conj)

    square_sum_bound = eps * 2.0 ** (2.0 * eps) / math.expm1(2.0 * eps * _LN2)

    kvec = np.arange(k_top + 1, dtype=float)
    coef_a = kvec * (alpha - eps) - 0.5 * log2_eps - 1.0
    coef_b = (
        alpha * kvec
        + (0.5 * log2_eps + eps * kvec)
        + (-(2.0 * eps) * kvec - math.log2(2.0 * eps))
    )
    coef_identity_max_rel = float(
        np.max(np.abs(np.expm1((coef_a - coef_b) * _LN2)))
    )

    lvec = np.arange(k_top, dtype=float)

    # rhs: || (sum a_k^2)^{1/2} ||_{L^{q'}(w^q)}; integrand power (q'+1)eps - 1
    g_growth = 2.0 * eps
    log_g = _v_log2_2pow_m1(g_growth * (lvec + 1.0)) - _log2_2pow_m1(g_growth)
    mj = (q_conj + 1.0) * eps - 1.0
    c_j = _log2_1m2pow(mj + 1.0) - math.log2(mj + 1.0)
    log_t = (q_conj / 2.0) * (log2_eps + log_g) + c_j - lvec * (mj + 1.0)
    log_g_core = _log2_2pow_m1(g_growth * (k_top + 1.0)) - _log2_2pow_m1(g_growth)
    log_core = (q_conj / 2.0) * (log2_eps + log_g_core) - k_top * (mj + 1.0) - math.log2(
        mj + 1.0
    )
    log_s_rhs = _logsumexp2(np.append(log_t, log_core))
    rhs_norm = 2.0 ** (log_s_rhs / q_conj)
    log_major = (
        (q_conj / 2.0) * (log2_eps + g_growth * (k_top + 1.0) - _log2_2pow_m1(g_growth))
        + c_j
        - k_top * (mj + 1.0)
    )
    if q_conj <= 2.0:
        # The truncated value already contains the core integral with the
        # block sum frozen at K, so the true omission is
        # sum_{l>=K} [(eps G_l)^{q'/2} - (eps G_K)^{q'/2}] J_l; bound the
        # bracket by (eps (G_l - G_K))^{q'/2} (subadditive for q'/2 <= 1).
        jvec = np.arange(1, k_top + 1, dtype=float)
        log_delta = (q_conj / 2.0) * _v_log2_2pow_m1(g_growth * jvec) - jvec * (
            mj + 1.0
        )
        log_rest = -(k_top + 1.0) * eps - _log2_1m2pow(eps)
        log_gap = _logsumexp2(np.append(log_delta, log_rest))
    else:
        log_gap = -_log2_1m2pow(eps)
    tail_rhs = 2.0 ** (log_major + log_gap - log_s_rhs) / q_conj

    # lhs: coefficients (1/2) eps^{-1/2} 2^{k(alpha-eps)}, measure w^{-p'}
    h_growth = 2.0 * (alpha - eps)
    log_h = _v_log2_2pow_m1(h_growth * (lvec + 1.0)) - _log2_2pow_m1(h_growth)
    u = p_conj * (1.0 - eps) / q
    c_w = _log2_1m2pow(u + 1.0) - math.log2(u + 1.0)
    log_t2 = (p_conj / 2.0) * (-2.0 - log2_eps + log_h) + c_w - lvec * (u + 1.0)
    log_h_core = _log2_2pow_m1(h_growth * (k_top + 1.0)) - _log2_2pow_m1(h_growth)
    log_core2 = (p_conj / 2.0) * (-2.0 - log2_eps + log_h_core) - k_top * (
        u + 1.0
    ) - math.log2(u + 1.0)
    log_s_lhs = _logsumexp2(np.append(log_t2, log_core2))
    lhs_norm = 2.0 ** (log_s_lhs / p_conj)
    d_step = (u + 1.0) - p_conj * (alpha - eps)
    if d_step <= 0.0:
        raise ParameterError("lhs shells fail to decay; exponents off the line")
    log_major2 = (
        (p_conj / 2.0)
        * (-2.0 - log2_eps + h_growth * (k_top + 1.0) - _log2_2pow_m1(h_growth))
        + c_w
        - k_top * (u + 1.0)
    )
    tail_lhs = 2.0 ** (log_major2 - _log2_1m2pow(d_step) - log_s_lhs) / p_conj

    return DualQuantities(
        char,
        rhs_norm,
        lhs_norm,
        square_sum_bound,
        coef_identity_max_rel,
        tail_rhs,
        tail_lhs,
    )


def expected_slope(p: float, q: float, alpha: float, variant: str) -> float:
    """Predicted growth exponent of the norm quotient in the characteristic."""
    _require_sobolev_line(p, q, alpha)
    p_conj = p / (p - 1.0)
    if variant == "primal":
        return p_conj * alpha / q
    if variant == "dual":
        return alpha - 0.5
    if variant == "combined":
        return max(p_conj * alpha / q, alpha - 0.5)
    raise ParameterError(f"unknown variant {variant!r}")


def _require_sobolev_line(p: float, q: float, alpha: float) -> None:
    if not 1.0 < p <= q:
        raise ParameterError("need 1 < p <= q")
    p_conj = p / (p - 1.0)
    if abs(1.0 / q + 1.0 / p_conj - alpha) > 1e-12:
        raise ParameterError(
            "exponents must satisfy 1/q + 1/p' = alpha for the sharpness experiments"
        )


def default_eps_grid() -> tuple[float, ...]:
    return tuple(2.0**-k for k in range(4, 13))


@dataclass(frozen=True)
class SharpnessConfig:
    p: float
    q: float
    alpha: float
    variant: str
    eps_grid: tuple[float, ...] = field(default_factory=default_eps_grid)
    k_factor: float = 20.0

    def __post_init__(self):
        _require_sobolev_line(self.p, self.q, self.alpha)
        if self.variant not in ("primal", "dual"):
            raise ParameterError(f"unknown variant {self.variant!r}")
        grid = tuple(float(e) for e in self.eps_grid)
        if not grid:
            raise ParameterError("empty eps grid")
        if any(not 0.0 < e < 1.0 for e in grid):
            raise ParameterError("eps grid must lie in (0, 1)")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ParameterError("eps grid must be strictly decreasing")
        if self.k_factor < 20.0:
            raise ParameterError("truncation rule must give K >= 20/eps")
        if self.variant == "dual" and grid[0] > self.alpha / 2.0:
            raise ParameterError(
                "dual experiment restricted to eps <= alpha/2 (recorded cap)"
            )
        object.__setattr__(self, "eps_grid", grid)

    def k_of(self, eps: float) -> int:
        return math.ceil(self.k_factor / eps)


@dataclass(frozen=True, eq=False)
class SweepRow:
    eps: float
    k_top: int
    char: float
    ratio: float
    tail_bound: float
    extras: dict


def sweep(config: SharpnessConfig) -> list[SweepRow]:
    """One row per grid eps: characteristic, norm-quotient ratio, tail bound."""
    rows = []
    for eps in config.eps_grid:
        k_top = config.k_of(eps)
        if config.variant == "primal":
            pq = primal_quantities(eps, config.p, config.q, config.alpha, k_top)
            ratio = pq.af_lower / pq.fnorm
            tail = max(pq.tail_lower, pq.tail_exact)
            extras = {
                "fnorm": pq.fnorm,
                "af_lower": pq.af_lower,
                "af_exact": pq.af_exact,
            }
            rows.append(SweepRow(eps, k_top, pq.char, ratio, tail, extras))
        else:
            dq = dual_quantities(eps, config.p, config.q, config.alpha, k_top)
            ratio = dq.lhs_norm / dq.rhs_norm
            tail = max(dq.tail_rhs, dq.tail_lhs)
            extras = {
                "lhs_norm": dq.lhs_norm,
                "rhs_norm": dq.rhs_norm,
                "square_sum_bound": dq.square_sum_bound,
                "coef_identity_max_rel": dq.coef_identity_max_rel,
            }
            rows.append(SweepRow(eps, k_top, dq.char, ratio, tail, extras))
    return rows


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    max_residual: float
    eps_window: tuple[float, ...]


def fit_slope(rows: list[SweepRow], window: int = 4) -> SlopeFit:
    """Least-squares slope of log(ratio) against log(characteristic).

    Uses the `window` rows of smallest eps (the grid is decreasing, so the
    last rows); needs at least 3 points.
    """
    if window < 3 or len(rows) < window:
        raise ParameterError("degenerate fit window; need at least 3 rows")
    tail_rows = rows[-window:]
    x = np.log([r.char for r in tail_rows])
    y = np.log([r.ratio for r in tail_rows])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        max_residual=float(np.max(np.abs(resid))),
        eps_window=tuple(r.eps for r in tail_rows),
    )
