"""The group GL_2(F_p): elements, enumeration and conjugacy classes.

Elements are enumerated in lexicographic (a, b, c, d) order and identified
with their position in that order; `GroupTable` does vectorised arithmetic on
those integer indices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .field import Fp2Element, PrimeContext, fp_tables


@dataclass(frozen=True, order=True)
class GroupElement:
    """The matrix [a b; c d] over F_p."""

    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self) -> None:
        p = self.p
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, getattr(self, name) % p)
        if self.det() == 0:
            raise ValueError(f"singular matrix {self.entries()} mod {p}")

    @classmethod
    def identity(cls, p: int) -> "GroupElement":
        return cls(1, 0, 0, 1, p)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.p != self.p:
            raise ValueError("elements over different primes")
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return GroupElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.p)

    def inverse(self) -> "GroupElement":
        a, b, c, d = self.entries()
        k = pow(self.det(), -1, self.p)
        return GroupElement(d * k, -b * k, -c * k, a * k, self.p)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GroupElement.identity(self.p), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __repr__(self) -> str:
        return f"[{self.a} {self.b}; {self.c} {self.d}]_{self.p}"


def omega(p: int) -> GroupElement:
    return GroupElement(0, 1, 1, 0, p)


def sigma(t: int, p: int) -> GroupElement:
    """[1 1; 1 t], invertible for t != 1."""
    return GroupElement(1, 1, 1, t, p)


class ClassKind(str, Enum):
    SCALAR = "Scalar"
    UNIPOTENT = "Unipotent"
    SPLIT = "Split"
    NONSPLIT = "NonSplit"


@dataclass(frozen=True, order=True)
class ConjClassId:
    kind: ClassKind
    params: tuple[int, ...]

    def representative(self, ctx: PrimeContext) -> GroupElement:
        p = ctx.p
        if self.kind is ClassKind.SCALAR:
            (x,) = self.params
            return GroupElement(x, 0, 0, x, p)
        if self.kind is ClassKind.UNIPOTENT:
            (x,) = self.params
            return GroupElement(x, 1, 0, x, p)
        x, y = self.params
        if self.kind is ClassKind.SPLIT:
            return GroupElement(x, 0, 0, y, p)
        return GroupElement(x, ctx.lam * y, y, x, p)

    def __str__(self) -> str:
        return f"{self.kind.value}{self.params}"


def conjugacy_classes(ctx: PrimeContext) -> list[ConjClassId]:
    """All classes in canonical order: scalar, unipotent, split, non-split."""
    p = ctx.p
    out = [ConjClassId(ClassKind.SCALAR, (x,)) for x in range(1, p)]
    out += [ConjClassId(ClassKind.UNIPOTENT, (x,)) for x in range(1, p)]
    out += [
        ConjClassId(ClassKind.SPLIT, (x, y)) for x in range(1, p) for y in range(x + 1, p)
    ]
    out += [
        ConjClassId(ClassKind.NONSPLIT, (x, y)) for x in range(p) for y in range(1, (p - 1) // 2 + 1)
    ]
    return out


def class_size(ctx: PrimeContext, cls: ConjClassId) -> int:
    """Closed-form class size (used where the group is not enumerated)."""
    p = ctx.p
    return {
        ClassKind.SCALAR: 1,
        ClassKind.UNIPOTENT: p * p - 1,
        ClassKind.SPLIT: p * (p + 1),
        ClassKind.NONSPLIT: p * (p - 1),
    }[cls.kind]


@lru_cache(maxsize=None)
def _nonscalar_class_lookup(ctx: PrimeContext) -> np.ndarray:
    """Table (trace, det) -> class index for non-scalar elements."""
    p = ctx.p
    inv, leg, sqrt = fp_tables(p)
    index = {c: i for i, c in enumerate(conjugacy_classes(ctx))}
    table = np.full((p, p), -1, dtype=np.int64)
    half = inv[2]
    for t in range(p):
        for n in range(1, p):
            disc = (t * t - 4 * n) % p
            if disc == 0:
                cid = ConjClassId(ClassKind.UNIPOTENT, (int(t * half % p),))
            elif leg[disc] == 1:
                s = int(sqrt[disc])
                x, y = sorted(((t + s) * half % p, (t - s) * half % p))
                cid = ConjClassId(ClassKind.SPLIT, (int(x), int(y)))
            else:
                x = int(t * half % p)
                y = int(sqrt[(x * x - n) * inv[ctx.lam] % p])
                cid = ConjClassId(ClassKind.NONSPLIT, (x, min(y, p - y)))
            table[t, n] = index[cid]
    table.setflags(write=False)
    return table


def classify(ctx: PrimeContext, g: GroupElement) -> ConjClassId:
    if g.is_scalar():
        return ConjClassId(ClassKind.SCALAR, (g.a,))
    return conjugacy_classes(ctx)[_nonscalar_class_lookup(ctx)[g.trace(), g.det()]]


class GroupTable:
    """All of GL_2(F_p) as parallel entry arrays, indexed lexicographically."""

    def __init__(self, ctx: PrimeContext):
        p = ctx.p
        self.ctx = ctx
        self.p = p
        a, b, c, d = np.indices((p, p, p, p), dtype=np.int64).reshape(4, -1)
        keep = (a * d - b * c) % p != 0
        self.a, self.b, self.c, self.d = a[keep], b[keep], c[keep], d[keep]
        self.size = int(keep.sum())
        self._lookup = np.full(p**4, -1, dtype=np.int64)
        self._lookup[np.flatnonzero(keep)] = np.arange(self.size)
        self.identity = self.index_of(GroupElement.identity(p))
        inv = fp_tables(p)[0]
        k = inv[(self.a * self.d - self.b * self.c) % p]
        self.inv = self._index(self.d * k, -self.b * k, -self.c * k, self.a * k)
        self.trace = (self.a + self.d) % p
        self.det = (self.a * self.d - self.b * self.c) % p
        self.scalar = (self.b == 0) & (self.c == 0) & (self.a == self.d)
        table = _nonscalar_class_lookup(ctx)
        cls = table[self.trace, self.det]
        cls[self.scalar] = self.a[self.scalar] - 1
        self.class_of = cls
        for arr in (self.a, self.b, self.c, self.d, self.inv, self.trace, self.det, self.class_of):
            arr.setflags(write=False)

    def _index(self, a, b, c, d) -> np.ndarray:
        p = self.p
        code = (((a % p) * p + b % p) * p + c % p) * p + d % p
        return self._lookup[code]

    def index_of(self, g: GroupElement) -> int:
        return int(self._lookup[((g.a * self.p + g.b) * self.p + g.c) * self.p + g.d])

    def element(self, i: int) -> GroupElement:
        i = int(i)
        return GroupElement(int(self.a[i]), int(self.b[i]), int(self.c[i]), int(self.d[i]), self.p)

    def mul(self, i, j) -> np.ndarray:
        """Index of g_i * g_j, broadcasting over index arrays."""
        i, j = np.asarray(i), np.asarray(j)
        a, b, c, d = self.a[i], self.b[i], self.c[i], self.d[i]
        e, f, g, h = self.a[j], self.b[j], self.c[j], self.d[j]
        return self._index(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@lru_cache(maxsize=None)
def group_table(ctx: PrimeContext) -> GroupTable:
    return GroupTable(ctx)


def enumerate_group(ctx: PrimeContext) -> list[GroupElement]:
    t = group_table(ctx)
    return [t.element(i) for i in range(t.size)]


@lru_cache(maxsize=None)
def class_census(ctx: PrimeContext) -> dict[ConjClassId, int]:
    """Class sizes obtained by classifying every element of G."""
    t = group_table(ctx)
    classes = conjugacy_classes(ctx)
    counts = np.bincount(t.class_of, minlength=len(classes))
    return {c: int(n) for c, n in zip(classes, counts)}


def brute_force_census(ctx: PrimeContext) -> Counter:
    """Slow census through `classify` on each element (test oracle)."""
    return Counter(classify(ctx, g) for g in enumerate_group(ctx))


def fp2_of_class(ctx: PrimeContext, cls: ConjClassId) -> Fp2Element:
    """The eigenvalue x + y*sqrt(lam) of a non-split class."""
    if cls.kind is not ClassKind.NONSPLIT:
        raise ValueError(f"{cls} is not a non-split class")
    return ctx.fp2(*cls.params)
