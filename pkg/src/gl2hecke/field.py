"""Arithmetic in F_p and F_{p^2} = F_p[sqrt(lambda)]."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_PRIME = 997


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def multiplicative_order(g: int, p: int) -> int:
    g %= p
    k, x = 1, g
    while x != 1:
        x = x * g % p
        k += 1
    return k


@dataclass(frozen=True)
class Fp2Element:
    """x + y*sqrt(lam) in F_p[sqrt(lam)]."""

    x: int
    y: int
    p: int
    lam: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", self.x % self.p)
        object.__setattr__(self, "y", self.y % self.p)

    def _new(self, x: int, y: int) -> "Fp2Element":
        return Fp2Element(x, y, self.p, self.lam)

    def __add__(self, other: "Fp2Element") -> "Fp2Element":
        return self._new(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Fp2Element") -> "Fp2Element":
        return self._new(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Fp2Element":
        return self._new(-self.x, -self.y)

    def __mul__(self, other: "Fp2Element | int") -> "Fp2Element":
        if isinstance(other, int):
            return self._new(self.x * other, self.y * other)
        x = self.x * other.x + self.lam * self.y * other.y
        y = self.x * other.y + self.y * other.x
        return self._new(x, y)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Fp2Element":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self._new(1, 0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Fp2Element":
        """Frobenius image gamma^p = x - y*sqrt(lam)."""
        return self._new(self.x, -self.y)

    def norm(self) -> int:
        return (self.x * self.x - self.lam * self.y * self.y) % self.p

    def trace(self) -> int:
        return 2 * self.x % self.p

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def inverse(self) -> "Fp2Element":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in F_p^2")
        ninv = pow(n, -1, self.p)
        return self._new(self.x * ninv, -self.y * ninv)

    def code(self) -> int:
        return self.x * self.p + self.y


@dataclass(frozen=True)
class PrimeContext:
    p: int
    lam: int
    gen_fp: int
    gen_fp2: tuple[int, int]

    @property
    def order(self) -> int:
        """|GL_2(F_p)|."""
        p = self.p
        return (p * p - 1) * (p * p - p)

    def fp2(self, x: int, y: int = 0) -> Fp2Element:
        return Fp2Element(x, y, self.p, self.lam)

    @property
    def generator_fp2(self) -> Fp2Element:
        return self.fp2(*self.gen_fp2)


def _fp2_order(x: int, y: int, p: int, lam: int) -> int:
    g = Fp2Element(x, y, p, lam)
    q = p * p - 1
    # order divides q; strip prime factors
    order = q
    n, f = q, 2
    factors = []
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        factors.append(n)
    for f in factors:
        while order % f == 0 and (g ** (order // f)) == Fp2Element(1, 0, p, lam):
            order //= f
    return order


@lru_cache(maxsize=None)
def build_context(p: int) -> PrimeContext:
    """Canonical context for an odd prime p.

    lambda is the least positive non-residue, gen_fp the least primitive root and
    gen_fp2 the lexicographically least (x, y) generating F_{p^2}^x.
    """
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"p must be an int, got {type(p).__name__}")
    if p == 2:
        raise ValueError("p = 2 is not supported (characteristic 2)")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"p = {p} exceeds the supported range (p <= {MAX_PRIME})")
    lam = next(a for a in range(2, p) if legendre(a, p) == -1)
    gen_fp = next(g for g in range(1, p) if multiplicative_order(g, p) == p - 1)
    gen_fp2 = next(
        (x, y)
        for x in range(p)
        for y in range(p)
        if (x, y) != (0, 0) and _fp2_order(x, y, p, lam) == p * p - 1
    )
    return PrimeContext(p=p, lam=lam, gen_fp=gen_fp, gen_fp2=gen_fp2)


@lru_cache(maxsize=None)
def fp_tables(p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(inverse, legendre, sqrt) lookup arrays over residues mod p.

    sqrt[a] is the least square root of a, or -1 for non-residues.
    """
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    leg = np.array([legendre(a, p) for a in range(p)], dtype=np.int64)
    sqrt = np.full(p, -1, dtype=np.int64)
    for r in range(p - 1, -1, -1):
        sqrt[r * r % p] = r
    for a in range(p):
        r = sqrt[a]
        if r >= 0:
            sqrt[a] = min(r, (p - r) % p)
    for arr in (inv, leg, sqrt):
        arr.setflags(write=False)
    return inv, leg, sqrt


@lru_cache(maxsize=None)
def discrete_logs(ctx: PrimeContext) -> tuple[np.ndarray, np.ndarray]:
    """Discrete logarithm tables.

    Returns (log_fp, log_fp2): log_fp[a] for a in F_p^x w.r.t. gen_fp, and
    log_fp2[x*p + y] w.r.t. gen_fp2; entries for zero are -1.
    """
    p = ctx.p
    log_fp = np.full(p, -1, dtype=np.int64)
    x = 1
    for k in range(p - 1):
        log_fp[x] = k
        x = x * ctx.gen_fp % p
    log_fp2 = np.full(p * p, -1, dtype=np.int64)
    g = ctx.generator_fp2
    z = ctx.fp2(1, 0)
    for k in range(p * p - 1):
        log_fp2[z.code()] = k
        z = z * g
    log_fp.setflags(write=False)
    log_fp2.setflags(write=False)
    return log_fp, log_fp2
