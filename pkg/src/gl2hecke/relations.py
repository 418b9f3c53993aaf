"""Exact identities between double coset operators on Z[G/N] and the sequence

    0 <- Z[G/G] <- Z[G/B] <- Z[G/N] <- Z[G/N'] <- 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact import exact_rank
from .field import PrimeContext, legendre
from .group import GroupElement, sigma
from .operators import (
    CosetOperator,
    compose,
    double_coset_operator,
    identity_operator,
    matmul_exact,
    pair_operator,
    sequence_operators,
    theta_coefficients,
)
from .subgroups import build_subgroup, double_cosets, sigma_t_classes


@dataclass
class RelationReport:
    p: int
    results: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.results.items() if not v]


def through(ctx: PrimeContext, middle: str) -> CosetOperator:
    """N middle x middle N on Z[G/N]."""
    return compose(pair_operator(ctx, "N", middle), pair_operator(ctx, middle, "N"))


def sigma_minus_one_operator(ctx: PrimeContext) -> CosetOperator:
    return double_coset_operator(ctx, "N", sigma(-1, ctx.p), "N")


def pair_sum_relation(ctx: PrimeContext) -> bool:
    """(NN' x N'N) + (NN'' x N''N) + (NB x BN) = p N + (NG x GN)."""
    lhs = through(ctx, "N'") + through(ctx, "N''") + through(ctx, "B")
    rhs = identity_operator(ctx, "N").scaled(ctx.p) + through(ctx, "G")
    return bool(np.array_equal(lhs.matrix, rhs.matrix))


def sigma_square_relation(ctx: PrimeContext) -> bool:
    """N sigma_{-1} N x N sigma_{-1} N = NN'' x N''N."""
    s = sigma_minus_one_operator(ctx)
    return bool(np.array_equal(compose(s, s).matrix, through(ctx, "N''").matrix))


def expected_expansion(ctx: PrimeContext, middle: str) -> list[int]:
    """Predicted Theta-basis coefficients of N middle x middle N in N\\G/N."""
    p = ctx.p
    N = build_subgroup(ctx, "N")
    space = double_cosets(ctx, N, N)
    ident = space.index_of(GroupElement.identity(p))
    ts = sigma_t_classes(ctx)
    coeffs = [0] * len(space)
    for k, tvals in ts.items():
        t = tvals[0]
        if middle == "N'":
            coeffs[k] = int(legendre(t, p) == -1)
        elif middle == "N''":
            coeffs[k] = int(legendre(t, p) == 1)
        elif middle == "B":
            coeffs[k] = int(t == 0)
        elif middle == "G":
            coeffs[k] = 1
        else:
            raise ValueError(f"no expansion for {middle!r}")
    coeffs[ident] = {"N'": (p - 1) // 2, "N''": (p - 1) // 2, "B": 2, "G": 1}[middle]
    return coeffs


def theta_expansions(ctx: PrimeContext) -> dict[str, bool]:
    out = {}
    for middle in ("N'", "N''", "B", "G"):
        name = f"N{middle} x {middle}N"
        out[name] = theta_coefficients(through(ctx, middle)) == expected_expansion(ctx, middle)
    return out


def sigma_classes_complete(ctx: PrimeContext) -> bool:
    """N\\G/N is N together with the N sigma_t N, t != 1, t ~ 1/t."""
    N = build_subgroup(ctx, "N")
    space = double_cosets(ctx, N, N)
    ts = sigma_t_classes(ctx)
    ok = len(ts) + 1 == len(space)
    for tvals in ts.values():
        t = tvals[0]
        expect = {t} if t == 0 else {t, pow(t, -1, ctx.p)}
        ok = ok and set(tvals) == expect
    return ok


def relation_report(ctx: PrimeContext) -> RelationReport:
    rep = RelationReport(ctx.p)
    rep.results["N sigma_t N basis"] = sigma_classes_complete(ctx)
    rep.results["pair sum relation"] = pair_sum_relation(ctx)
    rep.results["sigma_-1 square relation"] = sigma_square_relation(ctx)
    rep.results.update(theta_expansions(ctx))
    return rep


@dataclass
class SequenceReport:
    p: int
    composites_zero: dict[str, bool]
    ranks: dict[str, int]
    expected_ranks: dict[str, int]
    dims: dict[str, int]

    @property
    def exact_over_q(self) -> bool:
        """Ranks and dimensions force exactness at every term."""
        r, d = self.ranks, self.dims
        return (
            r["sigma_BG"] == d["G"]
            and d["B"] - r["sigma_BG"] == r["sigma_NB"]
            and d["N"] - r["sigma_NB"] == r["sigma_N'N"]
            and r["sigma_N'N"] == d["N'"]
        )

    @property
    def ok(self) -> bool:
        return all(self.composites_zero.values()) and self.ranks == self.expected_ranks and self.exact_over_q


def sequence_report(ctx: PrimeContext) -> SequenceReport:
    p = ctx.p
    s = sequence_operators(ctx)
    zero = {
        "sigma_BG o sigma_NB": not np.any(matmul_exact(s.sigma_BG.matrix, s.sigma_NB.matrix)),
        "sigma_NB o sigma_N'N": not np.any(matmul_exact(s.sigma_NB.matrix, s.sigma_NpN.matrix)),
    }
    ranks = {
        "sigma_BG": exact_rank(s.sigma_BG.matrix),
        "sigma_NB": exact_rank(s.sigma_NB.matrix),
        "sigma_N'N": exact_rank(s.sigma_NpN.matrix),
    }
    expected = {"sigma_BG": 1, "sigma_NB": p, "sigma_N'N": (p * p - p) // 2}
    dims = {
        "G": s.sigma_BG.codomain.size,
        "B": s.sigma_BG.domain.size,
        "N": s.sigma_NB.domain.size,
        "N'": s.sigma_NpN.domain.size,
    }
    return SequenceReport(p, zero, ranks, expected, dims)
