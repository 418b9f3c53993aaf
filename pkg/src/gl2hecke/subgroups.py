"""Distinguished subgroups of GL_2(F_p), coset spaces and double cosets.

Every named subgroup is the stabiliser of a point, an ordered pair or an
unordered pair of points of P^1(F_{p^2}) under Moebius transformations. The
same point data labels the cosets: gH corresponds to the image g.P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import PrimeContext, fp_tables
from .group import GroupElement, GroupTable, group_table, omega, sigma

LABELS = ("G", "B", "N", "N'", "N''", "C", "C'", "C''")

# Homogeneous coordinates [X : Y] with X, Y in F_{p^2} written as (x, y) pairs.
_INF = ((1, 0), (0, 0))
_ZERO = ((0, 0), (1, 0))
_ROOT = ((0, 1), (1, 0))  # sqrt(lambda)
_NEG_ROOT = ((0, -1), (1, 0))
_ONE = ((1, 0), (1, 0))
_NEG_ONE = ((-1, 0), (1, 0))

# label -> (points, unordered?)
_DEFINING_POINTS = {
    "G": ((), False),
    "B": ((_INF,), False),
    "C": ((_INF, _ZERO), False),
    "N": ((_INF, _ZERO), True),
    "C'": ((_ROOT, _NEG_ROOT), False),
    "N'": ((_ROOT, _NEG_ROOT), True),
    "C''": ((_ONE, _NEG_ONE), False),
    "N''": ((_ONE, _NEG_ONE), True),
}


def _point_codes(ctx: PrimeContext, t: GroupTable, point) -> np.ndarray:
    """Code of g.P for every g: u*p + v for the affine point u + v*sqrt(lam), p^2 for infinity."""
    p, lam = ctx.p, ctx.lam
    inv = fp_tables(p)[0]
    (xu, xv), (yu, yv) = point
    # [X':Y'] = [aX + bY : cX + dY]
    Xu, Xv = (t.a * xu + t.b * yu) % p, (t.a * xv + t.b * yv) % p
    Yu, Yv = (t.c * xu + t.d * yu) % p, (t.c * xv + t.d * yv) % p
    norm = (Yu * Yu - lam * Yv * Yv) % p
    finite = norm != 0
    k = inv[norm]
    # X' / Y' = X' * conj(Y') / N(Y')
    u = (Xu * Yu - lam * Xv * Yv) % p * k % p
    v = (Xv * Yu - Xu * Yv) % p * k % p
    return np.where(finite, u * p + v, p * p)


@lru_cache(maxsize=None)
def _orbit_keys(ctx: PrimeContext, label: str) -> np.ndarray:
    """key[g] identifies the image of the defining points of `label` under g."""
    t = group_table(ctx)
    points, unordered = _DEFINING_POINTS[label]
    base = ctx.p * ctx.p + 1
    if not points:
        return np.zeros(t.size, dtype=np.int64)
    codes = [_point_codes(ctx, t, pt) for pt in points]
    if len(codes) == 1:
        return codes[0]
    first, second = codes
    if unordered:
        first, second = np.minimum(first, second), np.maximum(first, second)
    return first * base + second


@dataclass(frozen=True, eq=False)
class Subgroup:
    label: str
    ctx: PrimeContext
    indices: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> list[GroupElement]:
        t = group_table(self.ctx)
        return [t.element(i) for i in self.indices]

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(group_table(self.ctx).size, dtype=bool)
        m[self.indices] = True
        return m

    def __contains__(self, g: GroupElement) -> bool:
        i = group_table(self.ctx).index_of(g)
        return bool(self.mask[i])

    def __repr__(self) -> str:
        return f"Subgroup({self.label}, p={self.ctx.p}, order={self.order})"


@lru_cache(maxsize=None)
def build_subgroup(ctx: PrimeContext, label: str) -> Subgroup:
    """The stabiliser of the defining point data of `label`."""
    if label not in _DEFINING_POINTS:
        raise ValueError(f"unknown subgroup label {label!r}; expected one of {LABELS}")
    t = group_table(ctx)
    keys = _orbit_keys(ctx, label)
    idx = np.flatnonzero(keys == keys[t.identity])
    idx.setflags(write=False)
    return Subgroup(label, ctx, idx)


def subgroup_from_elements(ctx: PrimeContext, label: str, elements) -> Subgroup:
    """Wrap an explicit element list (no stabiliser data; cosets use brute force)."""
    t = group_table(ctx)
    idx = np.unique(np.array([t.index_of(g) for g in elements], dtype=np.int64))
    idx.setflags(write=False)
    return Subgroup(label, ctx, idx)


def is_closed(H: Subgroup) -> bool:
    t = group_table(H.ctx)
    mask = H.mask
    if not mask[t.identity] or not mask[t.inv[H.indices]].all():
        return False
    gens = generators(H)
    return all(mask[t.mul(H.indices, g)].all() for g in gens)


@lru_cache(maxsize=None)
def _generators(ctx: PrimeContext, label: str, key: bytes) -> tuple[int, ...]:
    t = group_table(ctx)
    indices = np.frombuffer(key, dtype=np.int64)
    member = np.zeros(t.size, dtype=bool)
    member[t.identity] = True
    count, gens = 1, []
    for h in indices:
        if count == len(indices):
            break
        if member[h]:
            continue
        gens.append(int(h))
        frontier = np.flatnonzero(member)
        while frontier.size:
            new = np.unique(np.concatenate([t.mul(frontier, g) for g in gens]))
            new = new[~member[new]]
            member[new] = True
            frontier = new
        count = int(member.sum())
    if count != len(indices) or not member[indices].all():
        raise ValueError(f"{label} is not a subgroup")
    return tuple(gens)


def generators(H: Subgroup) -> tuple[int, ...]:
    """A small generating set (group indices), greedy in canonical order."""
    return _generators(H.ctx, H.label, H.indices.tobytes())


@dataclass(frozen=True, eq=False)
class CosetSpace:
    """Left cosets gH with lexicographically least representatives."""

    subgroup: Subgroup
    reps: np.ndarray = field(repr=False)
    coset_of: np.ndarray = field(repr=False)

    @property
    def ctx(self) -> PrimeContext:
        return self.subgroup.ctx

    @property
    def size(self) -> int:
        return len(self.reps)

    def __len__(self) -> int:
        return self.size

    def index_of(self, g: GroupElement) -> int:
        return int(self.coset_of[group_table(self.ctx).index_of(g)])

    def representative(self, i: int) -> GroupElement:
        return group_table(self.ctx).element(self.reps[i])

    def action(self, g: int) -> np.ndarray:
        """Permutation of coset indices induced by left multiplication by g."""
        t = group_table(self.ctx)
        return self.coset_of[t.mul(g, self.reps)]


def _finish_coset_space(H: Subgroup, labels: np.ndarray) -> CosetSpace:
    # labels[g] = any value constant exactly on cosets
    uniq, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    # first occurrence in lexicographic order is the least element of the coset
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    reps = first[order]
    coset_of = rank[inverse.ravel()]
    reps.setflags(write=False)
    coset_of.setflags(write=False)
    return CosetSpace(H, reps, coset_of)


def brute_force_coset_labels(H: Subgroup) -> np.ndarray:
    """label[g] = least group index in gH, by multiplying through H."""
    t = group_table(H.ctx)
    g = np.arange(t.size)
    labels = np.full(t.size, t.size, dtype=np.int64)
    for h in H.indices:
        np.minimum(labels, t.mul(g, h), out=labels)
    return labels


@lru_cache(maxsize=None)
def _stabiliser_coset_space(ctx: PrimeContext, label: str) -> CosetSpace:
    return _finish_coset_space(build_subgroup(ctx, label), _orbit_keys(ctx, label))


def coset_space(ctx: PrimeContext, H: Subgroup, *, brute_force: bool = False) -> CosetSpace:
    """G/H. Named stabilisers use point images; anything else multiplies through H."""
    named = H.label in _DEFINING_POINTS and H is build_subgroup(ctx, H.label)
    if named and not brute_force:
        return _stabiliser_coset_space(ctx, H.label)
    return _finish_coset_space(H, brute_force_coset_labels(H))


@dataclass(frozen=True)
class DoubleCoset:
    left: str
    right: str
    index: int
    rep: GroupElement
    degree: int

    def __str__(self) -> str:
        return f"{self.left}{self.rep}{self.right}"


@dataclass(frozen=True, eq=False)
class DoubleCosetSpace:
    """H\\G/K: each double coset is an orbit of H on the cosets G/K."""

    H: Subgroup
    K: Subgroup
    cosets: CosetSpace
    cosets_of_dc: tuple[np.ndarray, ...]
    dc_of_coset: np.ndarray = field(repr=False)
    double_cosets: tuple[DoubleCoset, ...]

    @property
    def dc_of_element(self) -> np.ndarray:
        return self.dc_of_coset[self.cosets.coset_of]

    def __len__(self) -> int:
        return len(self.double_cosets)

    def __iter__(self):
        return iter(self.double_cosets)

    def __getitem__(self, i: int) -> DoubleCoset:
        return self.double_cosets[i]

    def index_of(self, g: GroupElement) -> int:
        return int(self.dc_of_coset[self.cosets.index_of(g)])


@lru_cache(maxsize=None)
def _double_coset_space(ctx: PrimeContext, left: str, right: str) -> DoubleCosetSpace:
    return _build_double_cosets(build_subgroup(ctx, left), build_subgroup(ctx, right))


def _build_double_cosets(H: Subgroup, K: Subgroup) -> DoubleCosetSpace:
    ctx = H.ctx
    t = group_table(ctx)
    X = coset_space(ctx, K)
    n = X.size
    perms = [X.action(g) for g in generators(H)]
    dc_of_coset = np.full(n, -1, dtype=np.int64)
    orbits = []
    # cosets are ordered by representative, so orbit discovery order is rep order
    for start in range(n):
        if dc_of_coset[start] >= 0:
            continue
        k = len(orbits)
        dc_of_coset[start] = k
        orbit, stack = [start], [start]
        while stack:
            i = stack.pop()
            for perm in perms:
                j = int(perm[i])
                if dc_of_coset[j] < 0:
                    dc_of_coset[j] = k
                    orbit.append(j)
                    stack.append(j)
        orbits.append(np.array(sorted(orbit), dtype=np.int64))
    dcs = tuple(
        DoubleCoset(H.label, K.label, k, t.element(X.reps[orb[0]]), len(orb))
        for k, orb in enumerate(orbits)
    )
    dc_of_coset.setflags(write=False)
    return DoubleCosetSpace(H, K, X, tuple(orbits), dc_of_coset, dcs)


def double_cosets(ctx: PrimeContext, H: Subgroup, K: Subgroup) -> DoubleCosetSpace:
    """Partition of G into H g K, each with least-element rep and degree."""
    if H is build_subgroup(ctx, H.label) and K is build_subgroup(ctx, K.label):
        return _double_coset_space(ctx, H.label, K.label)
    return _build_double_cosets(H, K)


def degree(ctx: PrimeContext, H: Subgroup, g: GroupElement, K: Subgroup) -> int:
    """[H : H cap gKg^-1]."""
    t = group_table(ctx)
    gi = t.index_of(g)
    conj = t.mul(t.mul(t.inv[gi], H.indices), gi)  # g^-1 h g in K  <=>  h in gKg^-1
    return H.order // int(K.mask[conj].sum())


def count_right_cosets(ctx: PrimeContext, H: Subgroup, g: GroupElement, K: Subgroup) -> int:
    """Number of distinct cosets xK inside HgK, by multiplying out HgK (oracle)."""
    t = group_table(ctx)
    hg = t.mul(H.indices, t.index_of(g))
    members = np.unique(t.mul(hg[:, None], K.indices[None, :]))
    return len(members) // K.order


def sigma_t_classes(ctx: PrimeContext) -> dict[int, tuple[int, ...]]:
    """For N\\G/N: double coset index -> the t in F_p - {1} with sigma_t in it."""
    N = build_subgroup(ctx, "N")
    space = double_cosets(ctx, N, N)
    out: dict[int, list[int]] = {}
    for t_val in range(ctx.p):
        if t_val == 1:
            continue
        out.setdefault(space.index_of(sigma(t_val, ctx.p)), []).append(t_val)
    return {k: tuple(v) for k, v in out.items()}


def sigma_t_double_coset(ctx: PrimeContext, t_val: int) -> int:
    N = build_subgroup(ctx, "N")
    return double_cosets(ctx, N, N).index_of(sigma(t_val % ctx.p, ctx.p))


def involution_outside(N: Subgroup, C: Subgroup) -> GroupElement:
    """Least element w of N - C with w^2 = 1."""
    t = group_table(N.ctx)
    outside = N.indices[~C.mask[N.indices]]
    sq = t.mul(outside, outside)
    hits = outside[sq == t.identity]
    if not hits.size:
        raise ValueError(f"no involution in {N.label} - {C.label}")
    return t.element(hits.min())


def normalizer(ctx: PrimeContext, C: Subgroup, *, brute_force: bool = False) -> np.ndarray:
    """Indices g with g C g^-1 = C; checks all of C or just its generators."""
    t = group_table(ctx)
    g = np.arange(t.size)
    ginv = t.inv
    mask = C.mask
    ok = np.ones(t.size, dtype=bool)
    for c in (C.indices if brute_force else generators(C)):
        ok &= mask[t.mul(t.mul(g, c), ginv)]
    return np.flatnonzero(ok)


def _expected_shape(ctx: PrimeContext, label: str) -> np.ndarray:
    t = group_table(ctx)
    p, lam = ctx.p, ctx.lam
    a, b, c, d = t.a, t.b, t.c, t.d
    diag = (b == 0) & (c == 0)
    anti = (a == 0) & (d == 0)
    return {
        "G": np.ones(t.size, dtype=bool),
        "B": c == 0,
        "C": diag,
        "N": diag | anti,
        "C'": (a == d) & (b == lam * c % p),
        "C''": (a == d) & (b == c),
    }[label]


@dataclass
class StructureReport:
    p: int
    checks: dict[str, bool] = field(default_factory=dict)
    involutions: dict[str, GroupElement] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


class StructuralFailure(AssertionError):
    pass


def structural_checks(ctx: PrimeContext, *, raise_on_failure: bool = True) -> StructureReport:
    """Set identities N = C u wC etc., normaliser checks and orders."""
    p = ctx.p
    t = group_table(ctx)
    rep = StructureReport(p)
    sub = {label: build_subgroup(ctx, label) for label in LABELS}
    expected_orders = {
        "G": ctx.order,
        "B": p * (p - 1) ** 2,
        "C": (p - 1) ** 2,
        "N": 2 * (p - 1) ** 2,
        "C'": p * p - 1,
        "N'": 2 * (p * p - 1),
        "C''": (p - 1) ** 2,
        "N''": 2 * (p - 1) ** 2,
    }
    for label, n in expected_orders.items():
        rep.checks[f"|{label}| = {n}"] = sub[label].order == n
        rep.checks[f"{label} closed"] = is_closed(sub[label])
    for label in ("G", "B", "C", "N", "C'", "C''"):
        rep.checks[f"{label} has expected matrix shape"] = bool(
            np.array_equal(np.flatnonzero(_expected_shape(ctx, label)), sub[label].indices)
        )
    w_prime = GroupElement(1, 0, 0, -1, p)
    for n_label, c_label, w in (
        ("N", "C", omega(p)),
        ("N'", "C'", None),
        ("N''", "C''", None),
    ):
        N, C = sub[n_label], sub[c_label]
        if w is None:
            w = involution_outside(N, C)
        rep.involutions[n_label] = w
        union = np.union1d(C.indices, t.mul(t.index_of(w), C.indices))
        rep.checks[f"{n_label} = {c_label} u w{c_label}"] = bool(np.array_equal(union, N.indices))
        if n_label != "N":
            rep.checks[f"diag(1,-1) in {n_label} - {c_label}"] = w_prime in N and w_prime not in C
        rep.checks[f"[{n_label}:{c_label}] = 2"] = N.order == 2 * C.order
        norm = normalizer(ctx, C, brute_force=p <= 7)
        rep.checks[f"{n_label} = normaliser of {c_label}"] = bool(np.array_equal(norm, N.indices))
    s = t.index_of(sigma(-1, p))
    conj = np.unique(t.mul(t.mul(s, sub["N"].indices), t.inv[s]))
    rep.checks["sigma_-1 N sigma_-1^-1 = N''"] = bool(np.array_equal(conj, sub["N''"].indices))
    if raise_on_failure and not rep.ok:
        raise StructuralFailure(f"p={p}: structural failures: {rep.failures}")
    return rep
