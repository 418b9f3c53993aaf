"""Published determinant values for p <= 19 and integer factorisation helpers."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceRow:
    group_order: dict[int, int]
    total: dict[int, int]
    U: dict[int, int]
    W: dict[int, int]
    X: dict[int, int]
    V: dict[int, int] | None  # only for p = 1 mod 4


# prime -> factored values {prime factor: exponent}; {} stands for 1
REFERENCE_DETERMINANTS: dict[int, ReferenceRow] = {
    3: ReferenceRow({2: 4, 3: 1}, {2: 3}, {2: 1}, {}, {2: 2}, None),
    5: ReferenceRow({2: 5, 3: 1, 5: 1}, {2: 11, 3: 1}, {2: 1, 3: 1}, {}, {}, {2: 10}),
    7: ReferenceRow({2: 5, 3: 2, 7: 1}, {2: 20, 3: 9}, {2: 2, 3: 1}, {3: 8}, {2: 18}, None),
    11: ReferenceRow(
        {2: 4, 3: 1, 5: 2, 11: 1}, {2: 71, 3: 1, 5: 13}, {2: 1, 3: 1, 5: 1}, {5: 12}, {2: 70}, None
    ),
    13: ReferenceRow(
        {2: 5, 3: 2, 7: 1, 13: 1},
        {2: 83, 3: 15, 7: 1},
        {2: 1, 3: 1, 7: 1},
        {2: 56, 3: 14},
        {},
        {2: 26},
    ),
    17: ReferenceRow(
        {2: 9, 3: 2, 17: 1}, {2: 215, 3: 2, 19: 32}, {2: 3, 3: 2}, {2: 144}, {19: 32}, {2: 68}
    ),
    19: ReferenceRow(
        {2: 4, 3: 4, 5: 1, 19: 1},
        {2: 163, 3: 78, 5: 1, 17: 40},
        {2: 1, 3: 2, 5: 1},
        {3: 40, 17: 40},
        {2: 162, 3: 36},
        None,
    ),
}

DEFAULT_PRIMES = tuple(sorted(REFERENCE_DETERMINANTS))


def from_factors(factors: dict[int, int]) -> int:
    n = 1
    for q, e in factors.items():
        n *= q**e
    return n


def factorize(n: int, bound: int | None = None) -> dict[int, int]:
    """Trial division of |n| by primes up to `bound` (default: until done).

    Any cofactor left above the bound is returned with exponent 1.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n and (bound is None or f <= bound):
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def format_factors(factors: dict[int, int]) -> str:
    """{2: 20, 3: 9} -> "2^20 * 3^9"; the empty product is "1"."""
    if not factors:
        return "1"
    return " * ".join(f"{q}^{e}" if e > 1 else str(q) for q, e in sorted(factors.items()))


def format_int(n: int) -> str:
    sign = "-" if n < 0 else ""
    return sign + format_factors(factorize(n))
