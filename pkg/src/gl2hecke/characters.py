"""Complex characters of GL_2(F_p), permutation characters and decompositions.

Multiplicative characters are indexed by an exponent j: alpha_j sends the
chosen generator to exp(2 pi i j / modulus). Irreducible characters come in
four families U, V (one alpha), W (two distinct alphas) and X (one phi of
F_{p^2}^x with phi^p != phi).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import PrimeContext, discrete_logs
from .group import ClassKind, ConjClassId, class_size, conjugacy_classes, group_table
from .subgroups import build_subgroup, coset_space

TOL = 1e-6
LABELS_MULTIPLICITY_ONE = ("G", "B", "N", "N'")
LABELS_REPORTED = ("C", "C'")


@dataclass(frozen=True, order=True)
class MultiplicativeCharacter:
    modulus: int
    index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", self.index % self.modulus)

    def at_log(self, k) -> np.ndarray | complex:
        """Value at gen^k."""
        e = (np.asarray(k) * self.index) % self.modulus
        return np.exp(2j * np.pi * e / self.modulus)

    def __mul__(self, other: "MultiplicativeCharacter") -> "MultiplicativeCharacter":
        if other.modulus != self.modulus:
            raise ValueError("characters of different groups")
        return MultiplicativeCharacter(self.modulus, self.index + other.index)

    def power(self, n: int) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.modulus, self.index * n)

    def is_trivial(self) -> bool:
        return self.index == 0


@dataclass(frozen=True, order=True)
class IrredCharacter:
    """kind in {"U", "V", "W", "X"}; params hold exponent indices."""

    kind: str
    params: tuple[int, ...]
    dim: int = field(compare=False)

    def __str__(self) -> str:
        return f"{self.kind}{list(self.params)}"


def character_dims(p: int) -> dict[str, int]:
    return {"U": 1, "V": p, "W": p + 1, "X": p - 1}


def make_character(p: int, kind: str, *params: int) -> IrredCharacter:
    """Validated, canonicalised irreducible character."""
    q = p * p - 1
    if kind in ("U", "V"):
        (j,) = params
        params = (j % (p - 1),)
    elif kind == "W":
        i, j = sorted(x % (p - 1) for x in params)
        if i == j:
            raise ValueError("W needs two distinct characters")
        params = (i, j)
    elif kind == "X":
        (k,) = params
        k %= q
        if k % (p + 1) == 0:
            raise ValueError(f"phi_{k} satisfies phi^p = phi")
        params = (min(k, k * p % q),)
    else:
        raise ValueError(f"unknown character family {kind!r}")
    return IrredCharacter(kind, params, character_dims(p)[kind])


def trivial_character(p: int) -> IrredCharacter:
    return make_character(p, "U", 0)


def steinberg_character(p: int) -> IrredCharacter:
    return make_character(p, "V", 0)


@lru_cache(maxsize=None)
def irreducible_characters(ctx: PrimeContext) -> tuple[IrredCharacter, ...]:
    p = ctx.p
    q = p * p - 1
    dims = character_dims(p)
    out = [IrredCharacter("U", (j,), 1) for j in range(p - 1)]
    out += [IrredCharacter("V", (j,), p) for j in range(p - 1)]
    out += [IrredCharacter("W", (i, j), p + 1) for i in range(p - 1) for j in range(i + 1, p - 1)]
    out += [
        IrredCharacter("X", (k,), dims["X"])
        for k in range(q)
        if k % (p + 1) and k == min(k, k * p % q)
    ]
    return tuple(out)


@dataclass(frozen=True)
class CharacterTable:
    ctx: PrimeContext
    characters: tuple[IrredCharacter, ...]
    classes: tuple[ConjClassId, ...]
    sizes: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)  # [character, class]

    def row(self, chi: IrredCharacter) -> np.ndarray:
        return self.values[self._row_index[chi]]

    def value(self, chi: IrredCharacter, c: ConjClassId) -> complex:
        return complex(self.values[self._row_index[chi], self._col_index[c]])

    @property
    def _row_index(self) -> dict[IrredCharacter, int]:
        return _index_map(self.characters)

    @property
    def _col_index(self) -> dict[ConjClassId, int]:
        return _index_map(self.classes)

    def integer_row(self, chi: IrredCharacter) -> list[int] | None:
        """Exact values if chi is integer valued, else None."""
        row = self.row(chi)
        r = np.rint(row.real)
        if np.all(np.abs(row - r) < 1e-9):
            return [int(v) for v in r]
        return None


@lru_cache(maxsize=None)
def _index_map(items: tuple) -> dict:
    return {x: i for i, x in enumerate(items)}


def _class_logs(ctx: PrimeContext, classes) -> dict[str, np.ndarray]:
    """Discrete logs of class parameters, grouped by class kind."""
    p = ctx.p
    log_fp, log_fp2 = discrete_logs(ctx)
    by_kind: dict[ClassKind, list[tuple[int, ...]]] = {k: [] for k in ClassKind}
    for c in classes:
        by_kind[c.kind].append(c.params)
    scal = np.array([x for (x,) in by_kind[ClassKind.SCALAR]])
    unip = np.array([x for (x,) in by_kind[ClassKind.UNIPOTENT]])
    split = np.array(by_kind[ClassKind.SPLIT]).reshape(-1, 2)
    ns = np.array(by_kind[ClassKind.NONSPLIT]).reshape(-1, 2)
    norm = (ns[:, 0] ** 2 - ctx.lam * ns[:, 1] ** 2) % p
    return {
        "h": log_fp[scal],
        "h2": log_fp2[scal * p],  # the same scalars inside F_{p^2}
        "b": log_fp[unip],
        "b2": log_fp2[unip * p],
        "kx": log_fp[split[:, 0]],
        "ky": log_fp[split[:, 1]],
        "gnorm": log_fp[norm],
        "g2": log_fp2[ns[:, 0] * p + ns[:, 1]],
    }


def _e(num, den) -> np.ndarray:
    return np.exp(2j * np.pi * (np.asarray(num) % den) / den)


def _row(ctx: PrimeContext, chi: IrredCharacter, L: dict[str, np.ndarray]) -> np.ndarray:
    p = ctx.p
    m, q = p - 1, p * p - 1
    zero = lambda key: np.zeros(len(L[key]), dtype=complex)  # noqa: E731
    if chi.kind in ("U", "V"):
        (j,) = chi.params
        sign = 1 if chi.kind == "U" else -1
        h = _e(2 * j * L["h"], m) * chi.dim
        b = _e(2 * j * L["b"], m) if chi.kind == "U" else zero("b")
        k = _e(j * (L["kx"] + L["ky"]), m)
        g = sign * _e(j * L["gnorm"], m)
    elif chi.kind == "W":
        i, j = chi.params
        h = (p + 1) * _e((i + j) * L["h"], m)
        b = _e((i + j) * L["b"], m)
        k = _e(i * L["kx"] + j * L["ky"], m) + _e(i * L["ky"] + j * L["kx"], m)
        g = zero("g2")
    else:
        (kk,) = chi.params
        h = (p - 1) * _e(kk * L["h2"], q)
        b = -_e(kk * L["b2"], q)
        k = zero("kx")
        g = -(_e(kk * L["g2"], q) + _e(kk * p * L["g2"], q))
    return np.concatenate([h, b, k, g])


@lru_cache(maxsize=None)
def character_table(ctx: PrimeContext) -> CharacterTable:
    classes = tuple(conjugacy_classes(ctx))
    chars = irreducible_characters(ctx)
    L = _class_logs(ctx, classes)
    values = np.array([_row(ctx, chi, L) for chi in chars])
    sizes = np.array([class_size(ctx, c) for c in classes], dtype=np.int64)
    values.setflags(write=False)
    sizes.setflags(write=False)
    return CharacterTable(ctx, chars, classes, sizes, values)


def char_value(ctx: PrimeContext, chi: IrredCharacter, c: ConjClassId) -> complex:
    return character_table(ctx).value(chi, c)


@dataclass
class OrthogonalityReport:
    row_error: float
    column_error: float
    dim_square_sum: int
    group_order: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def orthogonality_check(ctx: PrimeContext, tol: float = TOL) -> OrthogonalityReport:
    T = character_table(ctx)
    V, w = T.values, T.sizes
    n = ctx.order
    gram = (V * w) @ V.conj().T / n
    row_err = np.abs(gram - np.eye(len(V)))
    col = V.conj().T @ V
    col_expected = np.diag(n / w)
    col_err = np.abs(col - col_expected)
    failures = []
    for i, j in zip(*np.nonzero(row_err > tol)):
        failures.append(f"<{T.characters[i]}, {T.characters[j]}> = {gram[i, j]:.6g}")
    for i, j in zip(*np.nonzero(col_err > tol * n)):
        failures.append(f"column ({T.classes[i]}, {T.classes[j]}) = {col[i, j]:.6g}")
    dim_sq = sum(chi.dim**2 for chi in T.characters)
    if dim_sq != n:
        failures.append(f"sum of squared dimensions {dim_sq} != |G| = {n}")
    return OrthogonalityReport(float(row_err.max()), float(col_err.max() / n), dim_sq, n, failures)


def inner_product(ctx: PrimeContext, f: np.ndarray, chi: IrredCharacter) -> complex:
    """<f, chi> for a class function f given on the canonical classes."""
    T = character_table(ctx)
    return complex(np.sum(T.sizes * np.asarray(f) * T.row(chi).conj()) / ctx.order)


@dataclass(frozen=True)
class PermutationCharacter:
    label: str
    classes: tuple[ConjClassId, ...]
    values: tuple[int, ...]

    def as_dict(self) -> dict[ConjClassId, int]:
        return dict(zip(self.classes, self.values))


@lru_cache(maxsize=None)
def perm_character(ctx: PrimeContext, label: str) -> PermutationCharacter:
    """Number of cosets gH fixed by a representative of each class."""
    X = coset_space(ctx, build_subgroup(ctx, label))
    t = group_table(ctx)
    classes = tuple(conjugacy_classes(ctx))
    reps = np.array([t.index_of(c.representative(ctx)) for c in classes])
    moved = X.coset_of[t.mul(reps[:, None], X.reps[None, :])]
    fixed = (moved == np.arange(X.size)[None, :]).sum(axis=1)
    return PermutationCharacter(label, classes, tuple(int(v) for v in fixed))


def coset_count_identity(ctx: PrimeContext) -> bool:
    """1_{N'} + 1_B = 1_N + 1_G, class by class."""
    f = {h: np.array(perm_character(ctx, h).values) for h in ("N'", "B", "N", "G")}
    return bool(np.array_equal(f["N'"] + f["B"], f["N"] + f["G"]))


class DecompositionError(ValueError):
    pass


@lru_cache(maxsize=None)
def decompose(ctx: PrimeContext, label: str, tol: float = TOL) -> dict[IrredCharacter, int]:
    """Multiplicities of the irreducibles in C[G/H] (zero entries omitted)."""
    T = character_table(ctx)
    f = np.array(perm_character(ctx, label).values)
    raw = (T.values.conj() @ (T.sizes * f)) / ctx.order
    out = {}
    for chi, v in zip(T.characters, raw):
        m = round(v.real)
        if abs(v - m) > tol or m < 0:
            raise DecompositionError(f"<1_{label}, {chi}> = {v} is not a nonnegative integer")
        if m:
            out[chi] = int(m)
    return out


# Selection rules for the components of C[G/N'].

def w_selected(p: int, j: int) -> bool:
    """alpha_j^((p-1)/2) = 1 and alpha_j^2 != 1."""
    m = p - 1
    return (j * (m // 2)) % m == 0 and (2 * j) % m != 0


def x_selected(p: int, k: int) -> bool:
    """phi^(p+1) = 1, phi^((p+1)/2) != 1 and phi^(p-1) != 1."""
    q = p * p - 1
    return (k * (p + 1)) % q == 0 and (k * ((p + 1) // 2)) % q != 0 and (k * (p - 1)) % q != 0


def phi_trivial_on_fp(ctx: PrimeContext, k: int) -> bool:
    """phi_k restricted to F_p^x is trivial."""
    p = ctx.p
    log_fp2 = discrete_logs(ctx)[1]
    g = log_fp2[ctx.gen_fp * p]
    return (k * int(g)) % (p * p - 1) == 0


def alpha_even(ctx: PrimeContext, j: int) -> bool:
    """alpha_j(-1) = 1."""
    p = ctx.p
    log_fp = discrete_logs(ctx)[0]
    return (j * int(log_fp[p - 1])) % (p - 1) == 0


def selection_equivalences(ctx: PrimeContext) -> bool:
    """phi^(p+1) = 1 iff phi|F_p^x = 1, and alpha^((p-1)/2) = 1 iff alpha(-1) = 1."""
    p = ctx.p
    q = p * p - 1
    ok = all(((k * (p + 1)) % q == 0) == phi_trivial_on_fp(ctx, k) for k in range(q))
    m = p - 1
    return ok and all(((j * (m // 2)) % m == 0) == alpha_even(ctx, j) for j in range(m))


def legendre_alpha_index(p: int) -> int:
    """Exponent of the quadratic character of F_p^x."""
    return (p - 1) // 2


def nonsplit_components(ctx: PrimeContext) -> list[IrredCharacter]:
    """Irreducible constituents of C[G/N'] predicted by the selection rules."""
    p = ctx.p
    out = [trivial_character(p)]
    if p % 4 == 1:
        out.append(make_character(p, "V", legendre_alpha_index(p)))
    out += sorted({make_character(p, "W", j, -j) for j in range(p - 1) if w_selected(p, j)})
    q = p * p - 1
    out += sorted({make_character(p, "X", k) for k in range(q) if x_selected(p, k)})
    return out


def expected_decomposition(ctx: PrimeContext, label: str) -> dict[IrredCharacter, int]:
    p = ctx.p
    if label == "G":
        return {trivial_character(p): 1}
    if label == "B":
        return {trivial_character(p): 1, steinberg_character(p): 1}
    if label == "N'":
        return {chi: 1 for chi in nonsplit_components(ctx)}
    if label == "N":
        out = {chi: 1 for chi in nonsplit_components(ctx)}
        out[steinberg_character(p)] = 1
        return out
    raise ValueError(f"no closed-form decomposition for {label!r}")


@dataclass
class MultiplicityReport:
    p: int
    max_multiplicity: dict[str, int]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


class MultiplicityFailure(AssertionError):
    pass


def multiplicity_one_report(
    ctx: PrimeContext, *, raise_on_failure: bool = False
) -> MultiplicityReport:
    """Multiplicity one is required on G, B, N, N'; C and C' are only reported."""
    maxima, failures = {}, []
    for label in LABELS_MULTIPLICITY_ONE + LABELS_REPORTED:
        maxima[label] = max(decompose(ctx, label).values())
        if label in LABELS_MULTIPLICITY_ONE and maxima[label] > 1:
            failures.append(f"C[G/{label}] has multiplicity {maxima[label]}")
    report = MultiplicityReport(ctx.p, maxima, failures)
    if failures and raise_on_failure:
        raise MultiplicityFailure("; ".join(failures))
    return report
