"""The sparse power operator, weighted norms, and operator-norm estimation.

The operator sends f to (sum_Q (|Q|^{-alpha} int_Q f dsigma)^r 1_Q)^{1/r}
over the members of a sparse family. Everything is evaluated exactly on
atom partitions; the only non-exact quantity is the ascent estimate of the
operator norm, which is bracketed from below by the certified indicator
bound and cross-checked on tiny instances by a sphere-grid oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ascent import CubeObjective, maximize
from .dyadic import AtomPartition, SparseFamily, atoms_of
from .errors import DegenerateInstanceError, ParameterError
from .functions import StepFunction
from .weights import ExponentConfig, Weight


def _atom_masses(w: Weight, part: AtomPartition) -> np.ndarray:
    return np.array([w.mass(a) for a in part.atoms])


def apply_sparse(
    family: SparseFamily, cfg: ExponentConfig, sigma: Weight, f: StepFunction
) -> StepFunction:
    """Pointwise value of the operator applied to f dsigma, on f's partition.

    f must live on a partition refining the family's atoms; the cube
    integrals int_Q f dsigma are then exact atom sums.
    """
    part = f.partition
    sig = _atom_masses(sigma, part)
    acc = np.zeros(len(part))
    fs = f.values * sig
    for q in family.members:
        i0, i1 = part.atom_range(q)
        cube_int = float(fs[i0:i1].sum())
        acc[i0:i1] += (q.length ** (-cfg.alpha) * cube_int) ** cfg.r
    return StepFunction(part, acc ** (1.0 / cfg.r), nonneg=True)


def lp_norm(f: StepFunction, w: Weight, p: float) -> float:
    """(sum_a |f(a)|^p w(a))^{1/p} with exact atom masses."""
    if not p > 0.0:
        raise ParameterError(f"norm exponent must be positive, got {p}")
    masses = _atom_masses(w, f.partition)
    return float(np.dot(np.abs(f.values) ** p, masses)) ** (1.0 / p)


def indicator_lower_bound(
    family: SparseFamily, cfg: ExponentConfig, omega: Weight, sigma: Weight
) -> float:
    """Certified operator-norm lower bound from indicator test functions.

    Feeds 1_Q through the full operator for every member Q and takes the
    best Rayleigh quotient; always at least the two-weight characteristic
    because the single-cube term already equals
    |Q|^{-alpha} sigma(Q) * omega(Q)^{1/q} / sigma(Q)^{1/p}.
    """
    part = atoms_of(family)
    best = 0.0
    for q in family.members:
        if sigma.mass(q) <= 0.0:
            raise DegenerateInstanceError(f"sigma has zero mass on member {q}")
        i0, i1 = part.atom_range(q)
        vals = np.zeros(len(part))
        vals[i0:i1] = 1.0
        ind = StepFunction(part, vals, nonneg=True)
        ratio = lp_norm(apply_sparse(family, cfg, sigma, ind), omega, cfg.q) / lp_norm(
            ind, sigma, cfg.p
        )
        best = max(best, ratio)
    return best


def rayleigh_objective(
    family: SparseFamily,
    cfg: ExponentConfig,
    omega: Weight,
    sigma: Weight,
    part: AtomPartition | None = None,
) -> tuple[AtomPartition, CubeObjective]:
    """The operator-norm quotient as a cube-sum objective on family atoms."""
    if part is None:
        part = atoms_of(family)
    ranges = np.array([part.atom_range(q) for q in family.members])
    gamma = np.array(
        [q.length ** (-cfg.alpha * cfg.r) for q in family.members]
    )
    obj = CubeObjective(
        gamma=gamma,
        ranges=ranges,
        sigma_atom=_atom_masses(sigma, part),
        omega_atom=_atom_masses(omega, part),
        e=cfg.r,
        t=cfg.q / cfg.r,
        s=cfg.p,
        outer=1.0 / cfg.r,
    )
    return part, obj


@dataclass(frozen=True, eq=False)
class OpNormEstimate:
    certified_lower: float
    ascent_value: float
    maximizer: StepFunction
    restarts: int
    iterations: int
    converged: bool
    seed: int


def estimate_opnorm(
    family: SparseFamily,
    cfg: ExponentConfig,
    omega: Weight,
    sigma: Weight,
    restarts: int = 16,
    max_iters: int = 5000,
    tol: float = 1e-8,
    seed: int = 0,
) -> OpNormEstimate:
    """Multi-start log-parametrized ascent on the operator-norm quotient.

    Cube indicators and the constant function are always swept as
    candidates, so the estimate never falls below the certified bound.
    """
    part, obj = rayleigh_objective(family, cfg, omega, sigma)
    lower = indicator_lower_bound(family, cfg, omega, sigma)
    cand = np.zeros((len(family) + 1, len(part)))
    for j, q in enumerate(family.members):
        i0, i1 = part.atom_range(q)
        cand[j, i0:i1] = 1.0
    cand[-1] = 1.0
    res = maximize(
        obj,
        restarts=restarts,
        max_iters=max_iters,
        tol=tol,
        seed=seed,
        extra_candidates=cand,
    )
    return OpNormEstimate(
        certified_lower=lower,
        ascent_value=res.value,
        maximizer=StepFunction(part, res.maximizer, nonneg=True),
        restarts=restarts,
        iterations=res.iterations,
        converged=res.converged,
        seed=seed,
    )


def oracle_opnorm(
    family: SparseFamily,
    cfg: ExponentConfig,
    omega: Weight,
    sigma: Weight,
    grid_res: float | None = None,
) -> float:
    """Brute-force norm on instances whose partition has at most 3 atoms.

    Scans nonnegative directions on the unit sphere of the sigma-weighted
    p-norm at angular resolution grid_res and returns the best quotient.
    """
    part, obj = rayleigh_objective(family, cfg, omega, sigma)
    n = len(part)
    if n > 3:
        raise ParameterError(f"oracle limited to 3 atoms, partition has {n}")
    sig = _atom_masses(sigma, part)
    if np.any(sig <= 0.0):
        raise DegenerateInstanceError("oracle requires positive sigma mass per atom")
    scale = sig ** (-1.0 / cfg.p)
    if n == 1:
        return float(obj.value(np.ones((1, 1)) * scale)[0])
    if grid_res is None:
        grid_res = 1e-3 if n == 2 else 2e-3
    half_pi = math.pi / 2.0
    steps = int(half_pi / grid_res) + 1
    theta = np.linspace(0.0, half_pi, steps)
    best = -np.inf
    if n == 2:
        c, s = np.cos(theta), np.sin(theta)
        f = np.stack([c, s], axis=1) ** (2.0 / cfg.p) * scale
        vals = obj.value(f)
        best = float(np.max(vals[np.isfinite(vals)]))
        return best
    phi = np.linspace(0.0, half_pi, steps)
    chunk = max(1, 200_000 // steps)
    for lo in range(0, steps, chunk):
        th = theta[lo : lo + chunk]
        ct = np.cos(th)[:, None] * np.ones_like(phi)[None, :]
        st = np.sin(th)[:, None]
        f = np.stack(
            [ct, st * np.cos(phi)[None, :], st * np.sin(phi)[None, :]], axis=2
        )
        f = f.reshape(-1, 3) ** (2.0 / cfg.p) * scale
        vals = obj.value(f)
        vals = vals[np.isfinite(vals)]
        if len(vals):
            best = max(best, float(np.max(vals)))
    return best


def theorem_rhs(
    cfg: ExponentConfig, char: float, a_sigma: float, a_omega: float
) -> float:
    """Mixed-characteristic upper-bound expression for the operator norm.

    Generic branch: char * (a_sigma^{1/q} + a_omega^{(1/r - 1/p)_+}).
    In the diagonal fractional regime p = q > r, alpha < 1 the two terms
    carry split exponents summing to 1/r on each product.
    """
    if rhs_branch(cfg) == "diagonal-fractional":
        rp = cfg.r / cfg.p
        term1 = a_omega ** ((1.0 - rp) ** 2 / cfg.r) * a_sigma ** (
            (1.0 - (1.0 - rp) ** 2) / cfg.r
        )
        term2 = a_omega ** ((1.0 - rp**2) / cfg.r) * a_sigma ** (rp**2 / cfg.r)
        return char * (term1 + term2)
    plus = max(1.0 / cfg.r - 1.0 / cfg.p, 0.0)
    return char * (a_sigma ** (1.0 / cfg.q) + a_omega**plus)


def rhs_branch(cfg: ExponentConfig) -> str:
    if cfg.p == cfg.q and cfg.p > cfg.r and cfg.alpha < 1.0:
        return "diagonal-fractional"
    return "generic"
