"""Eigenvalues of double coset operators on isotypic components.

Two independent routes are provided:

* character sums (trace formula grouped by conjugacy class, Legendre and
  Soto-Andrade sums for the operator N sigma_{-1} N);
* the matrix route, which reads the eigenvalue of an explicit equivariant
  matrix T off the traces tr(rho(g) T), one class representative at a time.

Operators are named as in `operators`: "HK x KH" acts on C[G/H].
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

from .characters import (
    TOL,
    IrredCharacter,
    MultiplicativeCharacter,
    character_table,
    decompose,
    legendre_alpha_index,
    nonsplit_components,
    steinberg_character,
    trivial_character,
    w_selected,
    x_selected,
)
from .exact import exact_determinant
from .field import PrimeContext, discrete_logs, fp_tables, legendre
from .group import ClassKind, conjugacy_classes, group_table, sigma
from .operators import CosetOperator, epsilon_nonsplit
from .subgroups import build_subgroup, degree

Number = Union[Fraction, complex]
_X = symbols("x")
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class EigenRecord:
    character: IrredCharacter
    operator: str
    value: Number
    source: str  # trace-formula, legendre, soto-andrade, v-mixed, relation, matrix-route


def as_real(x: Number, tol: float = IMAG_TOL) -> float:
    if isinstance(x, Fraction):
        return float(x)
    if abs(complex(x).imag) > tol:
        raise ValueError(f"{x} is not real")
    return complex(x).real


def round_exact(x: Number, tol: float = TOL) -> int:
    """The integer nearest x, insisting it is within tol."""
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"{x} is not an integer")
        return int(x)
    z = complex(x)
    n = round(z.real)
    if abs(z - n) > tol:
        raise ValueError(f"{z} is not within {tol} of an integer")
    return int(n)


def _weighted_sum(ctx: PrimeContext, chi: IrredCharacter, counts: np.ndarray) -> Number:
    """sum_c counts[c] * conj(chi(c)), exactly when chi is integer valued."""
    T = character_table(ctx)
    ints = T.integer_row(chi)
    if ints is not None:
        return Fraction(sum(int(n) * v for n, v in zip(counts, ints)))
    return complex(np.sum(counts * T.row(chi).conj()))


@lru_cache(maxsize=None)
def product_census(ctx: PrimeContext, left: str, right: str) -> tuple[int, ...]:
    """Class counts of the products k*h, k in K=`left`, h in H=`right`."""
    T = character_table(ctx)
    if "G" in (left, right):
        other = right if left == "G" else left
        return tuple(int(build_subgroup(ctx, other).order * s) for s in T.sizes)
    t = group_table(ctx)
    K, H = build_subgroup(ctx, left), build_subgroup(ctx, right)
    counts = np.zeros(len(T.classes), dtype=np.int64)
    step = max(1, 2_000_000 // H.order)
    for s in range(0, K.order, step):
        prods = t.mul(K.indices[s : s + step, None], H.indices[None, :])
        counts += np.bincount(t.class_of[prods].ravel(), minlength=len(counts))
    return tuple(int(c) for c in counts)


def trace_pair_operator(ctx: PrimeContext, chi: IrredCharacter, H: str, K: str) -> Number:
    """lambda_chi(HK x KH) on C[G/H]; zero when chi does not occur there."""
    mult = decompose(ctx, H).get(chi, 0)
    if not mult:
        return Fraction(0)
    Hs, Ks = build_subgroup(ctx, H), build_subgroup(ctx, K)
    e = group_table(ctx).element(group_table(ctx).identity)
    deg_hk, deg_kh = degree(ctx, Hs, e, Ks), degree(ctx, Ks, e, Hs)
    s = _weighted_sum(ctx, chi, np.array(product_census(ctx, K, H)))
    trace = chi.dim * Fraction(deg_hk * deg_kh, Hs.order * Ks.order) * s
    return _normalise(trace / (chi.dim * mult))


def _normalise(x: Number) -> Number:
    if isinstance(x, Fraction):
        return x
    return complex(x)


# --- N sigma_{-1} N -------------------------------------------------------


def sigma_minus_one_class_count(ctx: PrimeContext, t: int, n: int) -> int:
    """Elements of sigma_{-1} N in the non-scalar class with trace t, det n."""
    return 2 * (1 + legendre(t * t - 2 * n, ctx.p))


def _sigma_coset(ctx: PrimeContext, t_val: int = -1) -> np.ndarray:
    t = group_table(ctx)
    s = t.index_of(sigma(t_val % ctx.p, ctx.p))
    return t.mul(s, build_subgroup(ctx, "N").indices)


def brute_force_sigma_census(ctx: PrimeContext) -> Counter:
    """Class census of sigma_{-1} N by enumeration."""
    t = group_table(ctx)
    classes = conjugacy_classes(ctx)
    return Counter(classes[int(c)] for c in t.class_of[_sigma_coset(ctx)])


@lru_cache(maxsize=None)
def sigma_census_formula(ctx: PrimeContext) -> tuple[int, ...]:
    """Class census of sigma_{-1} N from the trace/determinant count."""
    out = []
    for c in conjugacy_classes(ctx):
        if c.kind is ClassKind.SCALAR:
            out.append(0)
            continue
        g = c.representative(ctx)
        out.append(sigma_minus_one_class_count(ctx, g.trace(), g.det()))
    return tuple(out)


def _sigma_degree_ratio(ctx: PrimeContext) -> Fraction:
    N = build_subgroup(ctx, "N")
    return Fraction(degree(ctx, N, sigma(ctx.p - 1, ctx.p), N), N.order)


def lambda_sigma_direct(ctx: PrimeContext, chi: IrredCharacter, *, census: str = "formula") -> Number:
    """lambda_chi(N sigma_{-1} N) = deg/|N| * sum over sigma_{-1} N of conj chi.

    census="formula" groups by the closed-form class counts,
    census="enumerate" classifies every element of sigma_{-1} N.
    """
    if census == "formula":
        counts = np.array(sigma_census_formula(ctx))
    elif census == "enumerate":
        t = group_table(ctx)
        n = len(character_table(ctx).classes)
        counts = np.bincount(t.class_of[_sigma_coset(ctx)], minlength=n)
    else:
        raise ValueError(f"unknown census {census!r}")
    return _normalise(_sigma_degree_ratio(ctx) * _weighted_sum(ctx, chi, counts))


def legendre_sum(ctx: PrimeContext, alpha: MultiplicativeCharacter) -> complex:
    """(1/2) sum_d alpha(d) ((1 + d^2)/p): the eigenvalue on W_{alpha, alpha^-1}."""
    p = ctx.p
    if alpha.modulus != p - 1 or not w_selected(p, alpha.index):
        raise ValueError(f"alpha_{alpha.index} is not a selected character of F_{p}^x")
    log_fp = discrete_logs(ctx)[0]
    leg = fp_tables(p)[1]
    d = np.arange(1, p)
    return complex(0.5 * np.sum(alpha.at_log(log_fp[d]) * leg[(1 + d * d) % p]))


def _fp2_grid(ctx: PrimeContext) -> tuple[np.ndarray, np.ndarray]:
    p = ctx.p
    x, y = np.divmod(np.arange(1, p * p), p)  # all (x, y) != (0, 0)
    return x, y


def _gamma_square_sum_legendre(ctx: PrimeContext) -> np.ndarray:
    """((gamma^2 + gamma^p^2)/p) = ((2(x^2 + lam y^2))/p) over F_{p^2}^x."""
    x, y = _fp2_grid(ctx)
    leg = fp_tables(ctx.p)[1]
    return leg[(2 * (x * x + ctx.lam * y * y)) % ctx.p]


def soto_andrade_sum(ctx: PrimeContext, phi: MultiplicativeCharacter) -> complex:
    """-(1/(2(p-1))) sum_gamma phi(gamma) ((gamma^2 + gamma^p^2)/p): eigenvalue on X_phi."""
    p = ctx.p
    if phi.modulus != p * p - 1 or not x_selected(p, phi.index):
        raise ValueError(f"phi_{phi.index} is not a selected character of F_{p}^2^x")
    x, y = _fp2_grid(ctx)
    log_fp2 = discrete_logs(ctx)[1]
    s = np.sum(phi.at_log(log_fp2[x * p + y]) * _gamma_square_sum_legendre(ctx))
    return complex(-s / (2 * (p - 1)))


def v_mixed_eigen(ctx: PrimeContext) -> Fraction:
    """Eigenvalue on V_alpha, alpha the quadratic character (p = 1 mod 4); exact."""
    p = ctx.p
    if p % 4 != 1:
        raise ValueError(f"p = {p} is not 1 mod 4")
    leg = fp_tables(p)[1]
    d = np.arange(1, p)
    first = int(np.sum(leg[d] * leg[(1 + d * d) % p]))
    x, y = _fp2_grid(ctx)
    norm = (x * x - ctx.lam * y * y) % p
    second = int(np.sum(leg[norm] * _gamma_square_sum_legendre(ctx)))
    return Fraction(first, 4) - Fraction(second, 4 * (p - 1))


def lambda_sigma(ctx: PrimeContext, chi: IrredCharacter) -> EigenRecord:
    """lambda_chi(N sigma_{-1} N) for a nontrivial constituent of C[G/N']."""
    p = ctx.p
    if chi.kind == "W":
        i, j = chi.params
        if (i + j) % (p - 1):
            raise ValueError(f"{chi} is not of the form W_(alpha, alpha^-1)")
        val = legendre_sum(ctx, MultiplicativeCharacter(p - 1, i))
        return EigenRecord(chi, "N sigma_-1 N", val, "legendre")
    if chi.kind == "X":
        val = soto_andrade_sum(ctx, MultiplicativeCharacter(p * p - 1, chi.params[0]))
        return EigenRecord(chi, "N sigma_-1 N", val, "soto-andrade")
    if chi.kind == "V" and chi.params == (legendre_alpha_index(p),):
        return EigenRecord(chi, "N sigma_-1 N", v_mixed_eigen(ctx), "v-mixed")
    raise ValueError(f"{chi} has no character-sum formula")


def lambda_NN_prime(ctx: PrimeContext, chi: IrredCharacter) -> EigenRecord:
    """lambda_chi(NN' x N'N) for chi in C[G/N']: p - lambda(N sigma_{-1} N)^2."""
    p = ctx.p
    if chi not in nonsplit_components(ctx):
        raise ValueError(f"{chi} does not occur in C[G/N']")
    if chi == trivial_character(p):
        return EigenRecord(chi, "NN' x N'N", Fraction(p * p - 1, 4), "relation")
    s = lambda_sigma(ctx, chi).value
    return EigenRecord(chi, "NN' x N'N", _normalise(p - s * s), "relation")


# --- matrix route -----------------------------------------------------------


def class_traces(op: CosetOperator) -> list[int]:
    """tr(rho(g) T) for a representative g of each class."""
    if op.domain is not op.codomain:
        raise ValueError("trace needs an endomorphism")
    ctx = op.domain.ctx
    t = group_table(ctx)
    m = op.matrix
    cols = np.arange(op.domain.size)
    out = []
    for c in conjugacy_classes(ctx):
        perm = op.domain.action(t.index_of(c.representative(ctx)))
        out.append(sum(int(v) for v in m[cols, perm]) if m.dtype == object else int(m[cols, perm].sum()))
    return out


def matrix_eigenvalue(op: CosetOperator, chi: IrredCharacter) -> Number:
    """Eigenvalue of an equivariant endomorphism on the chi-isotypic part.

    Uses tr(pr_chi T) = chi(1)/|G| sum_c |c| conj chi(c) tr(rho(c) T); exact
    for integer-valued chi. Requires chi to occur with multiplicity one.
    """
    ctx = op.domain.ctx
    mult = decompose(ctx, op.domain.subgroup.label).get(chi, 0)
    if mult == 0:
        raise ValueError(f"{chi} does not occur in C[G/{op.domain.subgroup.label}]")
    T = character_table(ctx)
    f = np.array(class_traces(op), dtype=object) * T.sizes.astype(object)
    s = _weighted_sum(ctx, chi, f)
    return _normalise(s / (ctx.order * mult))


def all_ones_eigenvalue(op: CosetOperator) -> int:
    """Eigenvalue on the trivial component, read off the constant row sums."""
    sums = {int(v) for v in op.matrix.sum(axis=1)}
    if len(sums) != 1:
        raise ValueError("row sums are not constant")
    return sums.pop()


# --- determinants of N'N x NN' by component ------------------------------


@dataclass
class Table2Row:
    p: int
    det_total: int | None
    det_U: int
    det_W: int
    det_X: int
    det_V: int | None
    eigenvalues: list[EigenRecord] = field(default_factory=list, repr=False)

    @property
    def component_product(self) -> int:
        return self.det_U * self.det_W * self.det_X * (self.det_V if self.det_V is not None else 1)

    @property
    def consistent(self) -> bool:
        """|det_total| equals the product of the components (vacuous without a total)."""
        return self.det_total is None or abs(self.det_total) == self.component_product


class Table2Error(ArithmeticError):
    pass


def _family_determinant(values: list[Number], dim: int) -> int:
    """prod(values)^dim where prod(values) is an integer (Galois-stable family)."""
    prod: Number = 1
    for v in values:
        prod = prod * v
    try:
        return abs(round_exact(prod)) ** dim
    except ValueError as exc:
        raise Table2Error(f"family product {prod} is not integral") from exc


def _families(ctx: PrimeContext) -> dict[str, list[IrredCharacter]]:
    out: dict[str, list[IrredCharacter]] = {"U": [], "V": [], "W": [], "X": []}
    for chi in nonsplit_components(ctx):
        out[chi.kind].append(chi)
    return out


@lru_cache(maxsize=None)
def determinant_total(ctx: PrimeContext) -> int:
    return exact_determinant(epsilon_nonsplit(ctx).matrix)


def component_determinants(ctx: PrimeContext, eig: dict[IrredCharacter, Number]) -> dict[str, int | None]:
    p = ctx.p
    fam = _families(ctx)
    out: dict[str, int | None] = {}
    out["U"] = abs(round_exact(eig[fam["U"][0]]))
    out["W"] = _family_determinant([eig[c] for c in fam["W"]], p + 1)
    out["X"] = _family_determinant([eig[c] for c in fam["X"]], p - 1)
    out["V"] = _family_determinant([eig[fam["V"][0]]], p) if fam["V"] else None
    return out


def _cyclotomic_norm(factors: list[list[int]], m: int) -> int:
    """prod_i f_i(zeta_m) for integer coefficient lists f_i; must be rational."""
    phi = Poly(cyclotomic_poly(m, _X), _X, domain="ZZ")
    acc = Poly(1, _X, domain="ZZ")
    for coeffs in factors:
        f = Poly(list(reversed(coeffs)), _X, domain="ZZ").rem(phi)
        acc = (acc * f).rem(phi)
    if acc.degree() > 0:
        raise Table2Error("family product is not rational")
    return int(acc.as_expr())


def _exponent_sum(exps: np.ndarray, weights: np.ndarray, m: int) -> list[int]:
    """sum_i weights[i] x^(exps[i] mod m) as a coefficient list."""
    return [int(v) for v in np.bincount(exps % m, weights=weights, minlength=m).astype(np.int64)]


def _square_mod(coeffs: list[int], m: int) -> list[int]:
    """coeffs^2 in Z[x]/(x^m - 1)."""
    out = [0] * m
    for i, a in enumerate(coeffs):
        if a:
            for j, b in enumerate(coeffs):
                out[(i + j) % m] += a * b
    return out


def exact_component_determinants(ctx: PrimeContext) -> dict[str, int | None]:
    """Component determinants computed in exact cyclotomic arithmetic.

    On W_(alpha, alpha^-1), lambda = p - S^2/4 with S in Z[zeta_(p-1)]; on the
    selected X_phi (phi trivial on F_p^x) lambda = p - S^2/(4(p-1)^2) with S in
    Z[zeta_(p+1)]. The product over each family is an integer.
    """
    p = ctx.p
    fam = _families(ctx)
    log_fp, log_fp2 = discrete_logs(ctx)
    leg = fp_tables(p)[1]
    out: dict[str, int | None] = {"U": (p * p - 1) // 4}

    m = p - 1
    d = np.arange(1, p)
    factors = []
    for chi in fam["W"]:
        j = chi.params[0]
        S = _exponent_sum(j * log_fp[d], leg[(1 + d * d) % p], m)
        sq = _square_mod(S, m)
        factors.append([4 * p * (k == 0) - v for k, v in enumerate(sq)])
    num = _cyclotomic_norm(factors, m) if factors else 1
    out["W"] = _exact_quotient(num, 4 ** len(factors)) ** (p + 1)

    m = p + 1
    x, y = _fp2_grid(ctx)
    weights = _gamma_square_sum_legendre(ctx)
    factors = []
    for chi in fam["X"]:
        k = chi.params[0] // (p - 1)  # phi_k has exponent a multiple of p - 1
        S = _exponent_sum(k * log_fp2[x * p + y], weights, m)
        sq = _square_mod(S, m)
        factors.append([4 * p * (p - 1) ** 2 * (i == 0) - v for i, v in enumerate(sq)])
    num = _cyclotomic_norm(factors, m) if factors else 1
    out["X"] = _exact_quotient(num, (4 * (p - 1) ** 2) ** len(factors)) ** (p - 1)

    out["V"] = abs(round_exact(p - v_mixed_eigen(ctx) ** 2)) ** p if fam["V"] else None
    return out


def _exact_quotient(a: int, b: int) -> int:
    if a % b:
        raise Table2Error(f"{a}/{b} is not an integer")
    return abs(a // b)


def charsum_eigenvalues(ctx: PrimeContext) -> list[EigenRecord]:
    return [lambda_NN_prime(ctx, chi) for chi in nonsplit_components(ctx)]


def matrix_eigenvalues(ctx: PrimeContext) -> list[EigenRecord]:
    op = epsilon_nonsplit(ctx)
    return [
        EigenRecord(chi, "N'N x NN'", matrix_eigenvalue(op, chi), "matrix-route")
        for chi in nonsplit_components(ctx)
    ]


def table2_row(ctx: PrimeContext, *, route: str = "charsum", with_total: bool = True) -> Table2Row:
    """Per-component determinants and the exact total of N'N x NN'.

    route selects the component values: "charsum" (floating character sums,
    rounded), "matrix" (eigenvalues read off the explicit matrix) or
    "cyclotomic" (character sums in exact cyclotomic arithmetic). The total
    is always the exact matrix determinant.
    """
    if route == "charsum":
        records = charsum_eigenvalues(ctx)
    elif route == "matrix":
        records = matrix_eigenvalues(ctx)
    elif route == "cyclotomic":
        records = []
    else:
        raise ValueError(f"unknown route {route!r}")
    if records:
        comps = component_determinants(ctx, {r.character: r.value for r in records})
    else:
        comps = exact_component_determinants(ctx)
    total = determinant_total(ctx) if with_total else None
    row = Table2Row(ctx.p, total, comps["U"], comps["W"], comps["X"], comps["V"], records)
    if not row.consistent:
        raise Table2Error(f"p={ctx.p}: |{total}| != product of components {row.component_product}")
    return row


# --- non-vanishing and the exactness hypotheses -----------------------------


@dataclass
class CheckReport:
    name: str
    p: int
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def nonvanishing_check(ctx: PrimeContext, *, det_total: int | None = None, tol: float = TOL) -> CheckReport:
    p = ctx.p
    rep = CheckReport("nonvanishing", p)
    for chi in nonsplit_components(ctx):
        lam = lambda_NN_prime(ctx, chi).value
        if abs(complex(lam)) <= tol:
            rep.failures.append(f"lambda_{chi}(NN' x N'N) vanishes")
        if chi != trivial_character(p):
            s = lambda_sigma(ctx, chi).value
            if abs(complex(s * s) - p) <= tol:
                rep.failures.append(f"lambda_{chi}(N sigma_-1 N)^2 = p")
    if det_total is not None:
        if det_total == 0:
            rep.failures.append("det(N'N x NN') = 0")
        rep.details["det_total"] = det_total
    return rep


def _g2_factor(ctx: PrimeContext, chi: IrredCharacter) -> int:
    return 0 if chi == trivial_character(ctx.p) else ctx.order**2


def _with_g2_factor(ctx: PrimeContext, chi: IrredCharacter, lam: Number) -> Number:
    # decide vanishing before scaling so |G|^2 does not amplify rounding noise
    if _is_zero(lam):
        return Fraction(0)
    return _g2_factor(ctx, chi) * lam


def _is_zero(x: Number, tol: float = TOL) -> bool:
    return abs(complex(x)) <= tol


@dataclass(frozen=True)
class PositionEigen:
    position: str
    character: IrredCharacter
    epsilon: Number
    delta: Number

    @property
    def hypothesis_holds(self) -> bool:
        """epsilon = 0 forces delta != 0."""
        return not _is_zero(self.epsilon) or not _is_zero(self.delta)


def position_eigenvalues(ctx: PrimeContext) -> list[PositionEigen]:
    """epsilon/delta eigenvalues along Z[G/G] <- Z[G/B] <- Z[G/N] <- Z[G/N']."""
    out = []
    for chi in decompose(ctx, "G"):
        out.append(PositionEigen("G", chi, Fraction(0), trace_pair_operator(ctx, chi, "G", "B")))
    for chi in decompose(ctx, "B"):
        eps = trace_pair_operator(ctx, chi, "B", "G")
        delta = _with_g2_factor(ctx, chi, trace_pair_operator(ctx, chi, "B", "N"))
        out.append(PositionEigen("B", chi, eps, delta))
    in_nonsplit = decompose(ctx, "N'")
    for chi in decompose(ctx, "N"):
        eps = _with_g2_factor(ctx, chi, trace_pair_operator(ctx, chi, "N", "B"))
        if chi in in_nonsplit:
            delta = lambda_NN_prime(ctx, chi).value
        else:
            delta = trace_pair_operator(ctx, chi, "N", "N'")
        out.append(PositionEigen("N", chi, eps, delta))
    for chi in in_nonsplit:
        out.append(PositionEigen("N'", chi, lambda_NN_prime(ctx, chi).value, Fraction(0)))
    return out


def exactness_hypotheses_check(ctx: PrimeContext) -> CheckReport:
    rep = CheckReport("exactness", ctx.p)
    rows = position_eigenvalues(ctx)
    for r in rows:
        if not r.hypothesis_holds:
            rep.failures.append(f"position {r.position}, {r.character}: epsilon = delta = 0")
    p = ctx.p
    U1, V1 = trivial_character(p), steinberg_character(p)
    by_key = {(r.position, r.character): r for r in rows}
    # at G and B every vanishing epsilon is matched by a nonzero delta and vice versa
    for pos in ("G", "B"):
        for chi in decompose(ctx, pos):
            r = by_key[(pos, chi)]
            if _is_zero(r.epsilon) == _is_zero(r.delta):
                rep.failures.append(f"position {pos}, {chi}: not exact")
    # at N, epsilon survives only on V1 and delta is nonzero exactly on C[G/N']
    for chi in decompose(ctx, "N"):
        r = by_key[("N", chi)]
        if _is_zero(r.epsilon) != (chi != V1):
            rep.failures.append(f"position N, {chi}: unexpected epsilon {r.epsilon}")
        if _is_zero(r.delta) != (chi == V1):
            rep.failures.append(f"position N, {chi}: unexpected delta {r.delta}")
    rep.details["rows"] = rows
    rep.details["trivial"] = U1
    return rep
