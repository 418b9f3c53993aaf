"""Double coset operators Z[G/H] -> Z[G/K] as exact integer matrices.

Rows are indexed by codomain cosets and columns by domain cosets. Operators act
from the left; the product written ``A x B`` (first A, then B) is
``compose(A, B)`` and has matrix ``B.matrix @ A.matrix``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .field import PrimeContext
from .group import GroupElement, group_table
from .subgroups import (
    CosetSpace,
    DoubleCoset,
    Subgroup,
    build_subgroup,
    coset_space,
    double_cosets,
    generators,
)

_INT64_SAFE = 2**62


@dataclass(frozen=True, eq=False)
class CosetOperator:
    domain: CosetSpace
    codomain: CosetSpace
    matrix: np.ndarray = field(repr=False)
    label: str = ""

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __add__(self, other: "CosetOperator") -> "CosetOperator":
        _check_same_spaces(self, other)
        return CosetOperator(self.domain, self.codomain, _add(self.matrix, other.matrix),
                             f"({self.label} + {other.label})")

    def __sub__(self, other: "CosetOperator") -> "CosetOperator":
        _check_same_spaces(self, other)
        return CosetOperator(self.domain, self.codomain, _add(self.matrix, -other.matrix),
                             f"({self.label} - {other.label})")

    def scaled(self, k: int) -> "CosetOperator":
        return CosetOperator(self.domain, self.codomain, _scale(self.matrix, k), f"{k}*{self.label}")

    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def __repr__(self) -> str:
        return (f"CosetOperator({self.label or '?'}: Z[G/{self.domain.subgroup.label}] -> "
                f"Z[G/{self.codomain.subgroup.label}], shape={self.shape})")


def _check_same_spaces(f: CosetOperator, g: CosetOperator) -> None:
    if f.domain is not g.domain or f.codomain is not g.codomain:
        raise ValueError(f"operators {f.label} and {g.label} act between different spaces")


def _bound(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    if m.dtype == object:
        return max(abs(int(v)) for v in m.flat)
    return int(np.abs(m).max())


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object or _bound(a) + _bound(b) >= _INT64_SAFE:
        return a.astype(object) + b.astype(object)
    return a + b


def _scale(a: np.ndarray, k: int) -> np.ndarray:
    if a.dtype == object or _bound(a) * abs(k) >= _INT64_SAFE:
        return a.astype(object) * k
    return a * k


def matmul_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer matrix product; promotes to Python ints when int64 could overflow."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch {a.shape} @ {b.shape}")
    if a.dtype != object and b.dtype != object:
        if _bound(a) * _bound(b) * max(a.shape[1], 1) < _INT64_SAFE:
            return a @ b
    return a.astype(object) @ b.astype(object)


def _subgroup(ctx: PrimeContext, H: Subgroup | str) -> Subgroup:
    return build_subgroup(ctx, H) if isinstance(H, str) else H


def operator_from_coefficients(
    ctx: PrimeContext, H: Subgroup | str, K: Subgroup | str, coeffs: Sequence[int], label: str = ""
) -> CosetOperator:
    """The operator sum_g coeffs[g] * Theta(HgK), coefficients indexed like H\\G/K."""
    H, K = _subgroup(ctx, H), _subgroup(ctx, K)
    t = group_table(ctx)
    space = double_cosets(ctx, H, K)
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (len(space),):
        raise ValueError(f"expected {len(space)} coefficients, got shape {coeffs.shape}")
    dom, cod = coset_space(ctx, H), coset_space(ctx, K)
    # entry (xK, rH) is the coefficient of the double coset containing r^-1 x
    rel = t.mul(t.inv[dom.reps][None, :], cod.reps[:, None])
    which = space.dc_of_element[rel]
    if coeffs.dtype == object:
        matrix = coeffs[which]
    else:
        matrix = coeffs.astype(np.int64)[which]
    return CosetOperator(dom, cod, matrix, label)


def operator_of_double_coset(ctx: PrimeContext, dc: DoubleCoset) -> CosetOperator:
    space = double_cosets(ctx, build_subgroup(ctx, dc.left), build_subgroup(ctx, dc.right))
    coeffs = np.zeros(len(space), dtype=np.int64)
    coeffs[dc.index] = 1
    return operator_from_coefficients(ctx, dc.left, dc.right, coeffs, label=str(dc))


@lru_cache(maxsize=None)
def pair_operator(ctx: PrimeContext, left: str, right: str) -> CosetOperator:
    """Theta(H e K), written HK: sends H to the sum of the K-cosets inside HK."""
    space = double_cosets(ctx, build_subgroup(ctx, left), build_subgroup(ctx, right))
    t = group_table(ctx)
    e = t.element(t.identity)
    op = operator_of_double_coset(ctx, space[space.index_of(e)])
    return CosetOperator(op.domain, op.codomain, op.matrix, f"{left}{right}")


def double_coset_operator(ctx: PrimeContext, left: str, g: GroupElement, right: str) -> CosetOperator:
    space = double_cosets(ctx, build_subgroup(ctx, left), build_subgroup(ctx, right))
    op = operator_of_double_coset(ctx, space[space.index_of(g)])
    return CosetOperator(op.domain, op.codomain, op.matrix, f"{left}{g}{right}")


def identity_operator(ctx: PrimeContext, H: Subgroup | str) -> CosetOperator:
    X = coset_space(ctx, _subgroup(ctx, H))
    return CosetOperator(X, X, np.eye(X.size, dtype=np.int64), "1")


def compose(f: CosetOperator, g: CosetOperator) -> CosetOperator:
    """Apply f, then g."""
    if f.codomain is not g.domain:
        raise ValueError(
            f"cannot compose {f.label}: ->Z[G/{f.codomain.subgroup.label}] with "
            f"{g.label}: Z[G/{g.domain.subgroup.label}]->"
        )
    return CosetOperator(f.domain, g.codomain, matmul_exact(g.matrix, f.matrix),
                         f"{f.label} x {g.label}")


def theta_coefficients(op: CosetOperator) -> list[int]:
    """Coordinates of an equivariant operator in the Theta(HgK) basis."""
    ctx = op.domain.ctx
    t = group_table(ctx)
    space = double_cosets(ctx, op.domain.subgroup, op.codomain.subgroup)
    column = op.matrix[:, op.domain.coset_of[t.identity]]
    coeffs = [int(column[orbit[0]]) for orbit in space.cosets_of_dc]
    for k, orbit in enumerate(space.cosets_of_dc):
        if any(int(v) != coeffs[k] for v in column[orbit]):
            raise ValueError(f"{op.label} is not constant on double coset {space[k]}")
    return coeffs


def is_equivariant(op: CosetOperator, elements: Sequence[int] | None = None) -> bool:
    """rho_K(g) M = M rho_H(g) for the given group indices (default: generators of G)."""
    ctx = op.domain.ctx
    if elements is None:
        elements = generators(build_subgroup(ctx, "G"))
    m = op.matrix
    for g in elements:
        pd, pc = op.domain.action(g), op.codomain.action(g)
        lhs = np.empty_like(m)
        lhs[pc, :] = m  # rho_K(g) M
        rhs = m[:, pd]  # M rho_H(g): column i of M rho_H(g) is column pd[i] of M
        if not np.array_equal(lhs, rhs):
            return False
    return True


def hecke_product(
    ctx: PrimeContext, a_dc: DoubleCoset, b_dc: DoubleCoset
) -> list[Fraction]:
    """HaK x KbM expanded in the H\\G/M basis by the finite-group product formula:

    (deg KbM / |K|) * sum_k (deg HaK / deg HakbM) * HakbM.
    """
    if a_dc.right != b_dc.left:
        raise ValueError(f"{a_dc} and {b_dc} do not share the middle subgroup")
    H, K, M = (build_subgroup(ctx, s) for s in (a_dc.left, a_dc.right, b_dc.right))
    t = group_table(ctx)
    target = double_cosets(ctx, H, M)
    a, b = t.index_of(a_dc.rep), t.index_of(b_dc.rep)
    akb = t.mul(t.mul(a, K.indices), b)
    which = target.dc_of_element[akb]
    counts = np.bincount(which, minlength=len(target))
    out = []
    for k, n in enumerate(counts):
        out.append(Fraction(b_dc.degree * a_dc.degree * int(n), K.order * target[k].degree))
    return out


def averaging_operator(ctx: PrimeContext, H: Subgroup | str) -> CosetOperator:
    """|G|(1 - pr_G) on Z[G/H], i.e. |G| I - |H| J."""
    H = _subgroup(ctx, H)
    X = coset_space(ctx, H)
    n = X.size
    m = ctx.order * np.eye(n, dtype=np.int64) - H.order * np.ones((n, n), dtype=np.int64)
    return CosetOperator(X, X, m, f"|G|(1-pr_G)[{H.label}]")


class SequenceOperators(NamedTuple):
    sigma_BG: CosetOperator
    sigma_NB: CosetOperator
    sigma_NpN: CosetOperator


class DualOperators(NamedTuple):
    tau_GB: CosetOperator
    tau_BN: CosetOperator
    tau_NNp: CosetOperator


@lru_cache(maxsize=None)
def sequence_operators(ctx: PrimeContext) -> SequenceOperators:
    """(BG, |G|(1 - pr_G) NB, N'N) along 0 <- Z[G/G] <- Z[G/B] <- Z[G/N] <- Z[G/N'] <- 0."""
    s_bg = pair_operator(ctx, "B", "G")
    s_nb = compose(pair_operator(ctx, "N", "B"), averaging_operator(ctx, "B"))
    s_npn = pair_operator(ctx, "N'", "N")
    return SequenceOperators(
        CosetOperator(s_bg.domain, s_bg.codomain, s_bg.matrix, "sigma_BG"),
        CosetOperator(s_nb.domain, s_nb.codomain, s_nb.matrix, "sigma_NB"),
        CosetOperator(s_npn.domain, s_npn.codomain, s_npn.matrix, "sigma_N'N"),
    )


@lru_cache(maxsize=None)
def dual_operators(ctx: PrimeContext) -> DualOperators:
    """(GB, |G|(1 - pr_G) BN, NN') running the other way."""
    t_gb = pair_operator(ctx, "G", "B")
    t_bn = compose(pair_operator(ctx, "B", "N"), averaging_operator(ctx, "N"))
    t_nnp = pair_operator(ctx, "N", "N'")
    return DualOperators(
        CosetOperator(t_gb.domain, t_gb.codomain, t_gb.matrix, "tau_GB"),
        CosetOperator(t_bn.domain, t_bn.codomain, t_bn.matrix, "tau_BN"),
        CosetOperator(t_nnp.domain, t_nnp.codomain, t_nnp.matrix, "tau_NN'"),
    )


def epsilon_nonsplit(ctx: PrimeContext) -> CosetOperator:
    """N'N x NN' on Z[G/N']."""
    return compose(pair_operator(ctx, "N'", "N"), pair_operator(ctx, "N", "N'"))
