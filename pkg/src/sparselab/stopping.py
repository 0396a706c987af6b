"""Principal-interval (stopping-time) construction over a sparse family.

Starting from the maximal members, each principal interval F spawns as
children the maximal family members Q strictly inside F whose sigma-average
of f strictly exceeds twice the average on F. The resulting collection
controls sums of powered averages by the dyadic sigma-maximal function with
the explicit geometric constant (1 - 2^{-p})^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicInterval, Relation, SparseFamily, atoms_of, relate
from .errors import DegenerateInstanceError
from .weights import Weight, weighted_average


@dataclass(frozen=True)
class StoppingFamily:
    """Principals, the minimal-principal parent map, and stopping children."""

    family: SparseFamily
    principals: tuple[DyadicInterval, ...]
    parent: dict
    children: dict
    averages: dict

    def principal_of(self, member: DyadicInterval) -> DyadicInterval:
        return self.parent[member]


def build_principal_cubes(
    family: SparseFamily, f, sigma: Weight, factor: float = 2.0
) -> StoppingFamily:
    """Stopping construction with rule <f>_Q^sigma > factor * <f>_F^sigma.

    f is a nonnegative Weight density or StepFunction; sigma must have
    positive mass on every member.
    """
    members = family.members
    avg = {}
    for q in members:
        if sigma.mass(q) <= 0.0:
            raise DegenerateInstanceError(f"sigma has zero mass on member {q}")
        avg[q] = weighted_average(f, sigma, q)

    maximal = [
        q
        for q in members
        if not any(relate(q, other) is Relation.INSIDE for other in members)
    ]
    principals: list[DyadicInterval] = []
    children: dict = {}
    stack = list(maximal)
    while stack:
        top = stack.pop()
        principals.append(top)
        bar = factor * avg[top]
        hits = [
            q
            for q in members
            if relate(q, top) is Relation.INSIDE and avg[q] > bar
        ]
        kids = tuple(
            sorted(
                q
                for q in hits
                if not any(relate(q, other) is Relation.INSIDE for other in hits)
            )
        )
        children[top] = kids
        stack.extend(kids)
    principals.sort()

    parent = {}
    for q in members:
        containing = [p for p in principals if p.encloses(q)]
        parent[q] = max(containing, key=lambda p: p.level)
    return StoppingFamily(
        family=family,
        principals=tuple(principals),
        parent=parent,
        children=children,
        averages=avg,
    )


def principal_sum_bound(
    stopping: StoppingFamily, f, sigma: Weight, p: float
) -> dict:
    """Atomwise check of the powered-average sum against the maximal bound.

    On each atom x: sum over principals F containing x of (<f>_F^sigma)^p,
    compared with (1 - 2^{-p})^{-1} (M_sigma f(x))^p where M_sigma is the
    dyadic maximal over all family members. Returns the worst atomwise
    ratio and the integrated (sigma-measure) ratio; both should be <= 1.
    """
    family = stopping.family
    part = atoms_of(family)
    n = len(part)
    lhs = np.zeros(n)
    maxavg = np.zeros(n)
    principal_set = set(stopping.principals)
    for q in family.members:
        i0, i1 = part.atom_range(q)
        a = stopping.averages[q]
        np.maximum(maxavg[i0:i1], a, out=maxavg[i0:i1])
        if q in principal_set:
            lhs[i0:i1] += a**p
    rhs = maxavg**p / (1.0 - 2.0**-p)
    with np.errstate(divide="ignore", invalid="ignore"):
        pointwise = np.where(rhs > 0.0, lhs / rhs, 0.0)
    smass = np.array([sigma.mass(atom) for atom in part.atoms])
    lhs_int = float(np.dot(lhs, smass))
    rhs_int = float(np.dot(rhs, smass))
    return {
        "max_pointwise_ratio": float(pointwise.max()),
        "integrated_ratio": lhs_int / rhs_int if rhs_int > 0.0 else 0.0,
        "atoms": n,
    }
