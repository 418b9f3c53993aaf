"""Verification suites: configuration, per-prime checks and the report model."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import characters as ch
from . import eigen
from .field import MAX_PRIME, PrimeContext, build_context, is_prime
from .group import GroupElement
from .reference import REFERENCE_DETERMINANTS, DEFAULT_PRIMES, from_factors
from .relations import relation_report, sequence_report
from .subgroups import LABELS, build_subgroup, degree, double_cosets, structural_checks

CHECKS = ("structure", "dcosets", "characters", "decompose", "relations", "exactness", "nonvanishing", "table2")
MODES = ("matrix", "charsum", "both")
FORMATS = ("text", "json", "csv")
MATRIX_LIMIT = 19
THREADS_ENV = "GL2HECKE_THREADS"

PASS, FAIL, SKIP = "pass", "fail", "skip"


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


@dataclass
class SuiteConfig:
    primes: list[int] = field(default_factory=lambda: list(DEFAULT_PRIMES))
    mode: str = "both"
    checks: tuple[str, ...] = CHECKS
    fmt: str = "text"
    out: str | None = None
    allow_large: bool = False

    def validate(self) -> None:
        if not self.primes:
            raise ConfigError("no primes given")
        for p in self.primes:
            if p == 2 or not is_prime(p):
                raise ConfigError(f"{p} is not an odd prime")
            if p > MAX_PRIME:
                raise ConfigError(f"p = {p} exceeds the supported range (p <= {MAX_PRIME})")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ConfigError(f"unknown checks: {', '.join(bad)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.mode != "charsum" and not self.allow_large:
            big = [p for p in self.primes if p > MATRIX_LIMIT]
            if big:
                raise ConfigError(
                    f"matrix route limited to p <= {MATRIX_LIMIT} (got {big}); "
                    "use --allow-large or --mode charsum"
                )

    def ordered_checks(self) -> list[str]:
        return [c for c in CHECKS if c in self.checks]


@dataclass
class CheckResult:
    check: str
    status: str
    detail: str = ""
    values: dict = field(default_factory=dict)


@dataclass
class PrimeReport:
    p: int
    results: list[CheckResult]
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return FAIL if any(r.status == FAIL for r in self.results) else PASS

    def result(self, check: str) -> CheckResult | None:
        return next((r for r in self.results if r.check == check), None)


@dataclass
class VerificationReport:
    config: SuiteConfig
    primes: list[PrimeReport]

    @property
    def ok(self) -> bool:
        return all(pr.status == PASS for pr in self.primes)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


# --- individual checks --------------------------------------------------------


def _enumerates(ctx: PrimeContext, config: SuiteConfig) -> bool:
    """Checks that enumerate G run only within the matrix-route range."""
    return ctx.p <= MATRIX_LIMIT or config.allow_large


def _route_flags(mode: str) -> tuple[bool, bool]:
    return mode in ("matrix", "both"), mode in ("charsum", "both")


def check_structure(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    rep = structural_checks(ctx, raise_on_failure=False)
    orders = {label: build_subgroup(ctx, label).order for label in LABELS}
    status = PASS if rep.ok else FAIL
    return CheckResult("structure", status, "; ".join(rep.failures), {"orders": orders})


def _expected_degrees(p: int) -> list[tuple[str, str, int]]:
    """deg(HK) = number of K-cosets in HK."""
    return [
        ("N", "N'", (p - 1) // 2),
        ("N'", "N", (p + 1) // 2),
        ("N", "N''", (p - 1) // 2),
        ("N''", "N", (p - 1) // 2),
        ("B", "N", p),
        ("N", "B", 2),
        ("G", "B", p + 1),
        ("B", "G", 1),
    ]


def check_dcosets(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    p = ctx.p
    failures = []
    e = GroupElement.identity(p)
    degrees = {}
    for left, right, want in _expected_degrees(p):
        got = degree(ctx, build_subgroup(ctx, left), e, build_subgroup(ctx, right))
        degrees[left + right] = got
        if got != want:
            failures.append(f"deg({left}{right}) = {got}, expected {want}")
    # N\G/N: N plus one N sigma_t N per t != 1 up to t ~ 1/t, with known degrees
    N = build_subgroup(ctx, "N")
    space = double_cosets(ctx, N, N)
    want_count = 1 + 1 + (p - 3) // 2 + 1  # N, t=0, pairs {t, 1/t}, t=-1
    if len(space) != want_count:
        failures.append(f"|N\\G/N| = {len(space)}, expected {want_count}")
    for t_val, want in ((0, 2 * (p - 1)), (p - 1, (p - 1) // 2)):
        got = space[space.index_of(GroupElement(1, 1, 1, t_val, p))].degree
        if got != want:
            failures.append(f"deg(N sigma_{t_val} N) = {got}, expected {want}")
    for t_val in range(2, p - 1):
        got = space[space.index_of(GroupElement(1, 1, 1, t_val, p))].degree
        if got != p - 1:
            failures.append(f"deg(N sigma_{t_val} N) = {got}, expected {p - 1}")
    # degrees of H\G/K add up to [G : K]
    for left in ("B", "N", "N'", "N''"):
        for right in ("B", "N", "N'", "N''"):
            H, K = build_subgroup(ctx, left), build_subgroup(ctx, right)
            total = sum(dc.degree for dc in double_cosets(ctx, H, K))
            if total != ctx.order // K.order:
                failures.append(f"degrees of {left}\\G/{right} sum to {total}")
    status = FAIL if failures else PASS
    return CheckResult("dcosets", status, "; ".join(failures), {"degrees": degrees, "NGN": len(space)})


def check_characters(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    rep = ch.orthogonality_check(ctx)
    failures = list(rep.failures)
    if not ch.selection_equivalences(ctx):
        failures.append("selection equivalences fail")
    values = {
        "irreducibles": len(ch.irreducible_characters(ctx)),
        "dim_square_sum": rep.dim_square_sum,
        "group_order": rep.group_order,
    }
    return CheckResult("characters", FAIL if failures else PASS, "; ".join(failures[:5]), values)


def check_decompose(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    failures = []
    if not ch.coset_count_identity(ctx):
        failures.append("1_N' + 1_B != 1_N + 1_G")
    decomp = {}
    for label in ("G", "B", "N", "N'"):
        got = ch.decompose(ctx, label)
        decomp[label] = sorted(str(c) for c in got)
        if got != ch.expected_decomposition(ctx, label):
            failures.append(f"C[G/{label}] decomposition differs from the selection rules")
    mult = ch.multiplicity_one_report(ctx)
    failures += mult.failures
    values = {"decomposition": decomp, "max_multiplicity": mult.max_multiplicity}
    return CheckResult("decompose", FAIL if failures else PASS, "; ".join(failures), values)


def check_relations(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    rep = relation_report(ctx)
    return CheckResult("relations", PASS if rep.ok else FAIL, "; ".join(rep.failures), {"identities": rep.results})


def check_exactness(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    use_matrix, use_sums = _route_flags(config.mode)
    failures, values = [], {}
    if use_matrix:
        seq = sequence_report(ctx)
        values["ranks"] = seq.ranks
        values["composites_zero"] = seq.composites_zero
        if not seq.ok:
            failures.append(f"sequence: ranks {seq.ranks}, zero composites {seq.composites_zero}")
    if use_sums:
        rep = eigen.exactness_hypotheses_check(ctx)
        failures += rep.failures
        values["positions"] = {
            f"{r.position}:{r.character}": _num(r.epsilon) + " / " + _num(r.delta) for r in rep.details["rows"]
        }
    return CheckResult("exactness", FAIL if failures else PASS, "; ".join(failures), values)


def check_nonvanishing(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    use_matrix, use_sums = _route_flags(config.mode)
    failures, values = [], {}
    if use_matrix:
        det = eigen.determinant_total(ctx)
        values["det_total_nonzero"] = det != 0
        if det == 0:
            failures.append("det(N'N x NN') = 0")
    if use_sums:
        rep = eigen.nonvanishing_check(ctx)
        failures += rep.failures
        values["eigenvalues"] = {str(r.character): _num(r.value) for r in eigen.charsum_eigenvalues(ctx)}
    return CheckResult("nonvanishing", FAIL if failures else PASS, "; ".join(failures), values)


def check_table2(ctx: PrimeContext, config: SuiteConfig) -> CheckResult:
    p = ctx.p
    use_matrix, use_sums = _route_flags(config.mode)
    failures = []
    rows: dict[str, eigen.Table2Row] = {}
    try:
        if use_matrix:
            rows["matrix"] = eigen.table2_row(ctx, route="matrix")
        if use_sums:
            small = p <= MATRIX_LIMIT
            rows["charsum"] = eigen.table2_row(
                ctx, route="charsum" if small else "cyclotomic", with_total=use_matrix
            )
            if small:
                rows["cyclotomic"] = eigen.table2_row(ctx, route="cyclotomic", with_total=False)
    except (eigen.Table2Error, ValueError) as exc:
        return CheckResult("table2", FAIL, str(exc))
    main = rows.get("charsum") or rows["matrix"]
    comps = _components(main)
    for name, row in rows.items():
        if _components(row) != comps:
            failures.append(f"{name} route components {_components(row)} differ from {comps}")
    if use_matrix and use_sums:
        m = {r.character: r.value for r in rows["matrix"].eigenvalues}
        for r in rows["charsum"].eigenvalues:
            if abs(complex(m[r.character]) - complex(r.value)) > ch.TOL:
                failures.append(f"routes disagree on {r.character}: {m[r.character]} vs {r.value}")
    total = rows["matrix"].det_total if use_matrix else None
    values = {"components": {k: v for k, v in comps.items()}, "det_total": total}
    ref = REFERENCE_DETERMINANTS.get(p)
    if ref is None:
        values["reference"] = None
    else:
        want = {
            "U": from_factors(ref.U),
            "W": from_factors(ref.W),
            "X": from_factors(ref.X),
            "V": from_factors(ref.V) if ref.V is not None else None,
        }
        for k, v in want.items():
            if comps[k] != v:
                failures.append(f"column {k}: {comps[k]} != published {v}")
        if total is not None and abs(total) != from_factors(ref.total):
            failures.append(f"total {total} != published {from_factors(ref.total)}")
        values["reference"] = "match" if not failures else "mismatch"
    for row in rows.values():
        if not row.consistent:
            failures.append(f"|{row.det_total}| != product of components")
    return CheckResult("table2", FAIL if failures else PASS, "; ".join(failures), values)


def _components(row: eigen.Table2Row) -> dict[str, int | None]:
    return {"U": row.det_U, "W": row.det_W, "X": row.det_X, "V": row.det_V}


def _num(x) -> str:
    """Deterministic text form of an eigenvalue."""
    if isinstance(x, Fraction):
        return str(x)
    z = complex(x)
    if abs(z.imag) < eigen.IMAG_TOL:
        return f"{z.real:.6f}"
    return f"{z.real:.6f}{z.imag:+.6f}i"


CHECK_FUNCTIONS: dict[str, Callable[[PrimeContext, SuiteConfig], CheckResult]] = {
    "structure": check_structure,
    "dcosets": check_dcosets,
    "characters": check_characters,
    "decompose": check_decompose,
    "relations": check_relations,
    "exactness": check_exactness,
    "nonvanishing": check_nonvanishing,
    "table2": check_table2,
}

# checks that need all of G enumerated regardless of mode
_ENUMERATING = {"structure", "dcosets", "decompose", "relations"}


def _skip_reason(check: str, ctx: PrimeContext, config: SuiteConfig) -> str | None:
    if check == "relations" and config.mode == "charsum":
        return "matrix identities are not part of the charsum route"
    if check in _ENUMERATING and not _enumerates(ctx, config):
        return f"needs the full group (p > {MATRIX_LIMIT})"
    if check == "exactness" and config.mode == "charsum" and not _enumerates(ctx, config):
        return f"needs decompositions of permutation modules (p > {MATRIX_LIMIT})"
    return None


def run_prime(p: int, config: SuiteConfig) -> PrimeReport:
    ctx = build_context(p)
    start = time.perf_counter()
    results = []
    for check in config.ordered_checks():
        reason = _skip_reason(check, ctx, config)
        if reason:
            results.append(CheckResult(check, SKIP, reason))
            continue
        try:
            results.append(CHECK_FUNCTIONS[check](ctx, config))
        except Exception as exc:  # a crash inside a check is a verification failure
            results.append(CheckResult(check, FAIL, f"{type(exc).__name__}: {exc}"))
    return PrimeReport(p, results, time.perf_counter() - start)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run(config: SuiteConfig) -> VerificationReport:
    config.validate()
    primes = sorted(set(config.primes))
    workers = min(thread_count(), len(primes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda p: run_prime(p, config), primes))
    else:
        reports = [run_prime(p, config) for p in primes]
    return VerificationReport(config, reports)
