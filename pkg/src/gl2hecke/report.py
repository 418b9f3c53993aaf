"""Serialisation of verification reports as text, JSON or CSV.

JSON and CSV output is deterministic: canonical ordering, big integers as
decimal strings and no timing information.
"""

from __future__ import annotations

import csv
import io
import json

from .reference import DEFAULT_PRIMES, format_int
from .suite import VerificationReport

TABLE2_COLUMNS = ("U", "W", "X", "V")


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.6f}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _table2_fields(values: dict) -> dict:
    out = {}
    total = values.get("det_total")
    if total is not None:
        out["det_total"] = str(total)
        out["det_total_factored"] = format_int(total)
    for k, v in values.get("components", {}).items():
        out[f"det_{k}"] = None if v is None else str(v)
        out[f"det_{k}_factored"] = None if v is None else format_int(v)
    out["reference"] = values.get("reference")
    return out


def to_dict(report: VerificationReport) -> dict:
    primes = []
    for pr in report.primes:
        entry = {
            "p": pr.p,
            "status": pr.status,
            "checks": {
                r.check: {"status": r.status, "detail": r.detail, "values": _jsonable(r.values)}
                for r in pr.results
            },
        }
        t2 = pr.result("table2")
        if t2 is not None and t2.values:
            entry.update(_table2_fields(t2.values))
        primes.append(entry)
    return {
        "mode": report.config.mode,
        "checks": report.config.ordered_checks(),
        "status": "pass" if report.ok else "fail",
        "primes": primes,
    }


def to_json(report: VerificationReport) -> str:
    return json.dumps(to_dict(report), sort_keys=True, indent=2) + "\n"


def to_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "check", "status", "detail"])
    for pr in report.primes:
        for r in pr.results:
            w.writerow([pr.p, r.check, r.status, r.detail])
    return buf.getvalue()


def _format_component(v) -> str:
    return "" if v is None else format_int(v)


def to_text(report: VerificationReport, *, timing: bool = False) -> str:
    lines = []
    checks = report.config.ordered_checks()
    width = max(len(c) for c in checks)
    lines.append(f"mode: {report.config.mode}")
    lines.append("")
    header = "p".rjust(4) + "  " + "  ".join(c.ljust(width) for c in checks)
    lines.append(header)
    for pr in report.primes:
        cells = [(pr.result(c).status if pr.result(c) else "").ljust(width) for c in checks]
        lines.append((f"{pr.p:>4}  " + "  ".join(cells)).rstrip())
    rows = [(pr.p, pr.result("table2")) for pr in report.primes]
    rows = [(p, r) for p, r in rows if r is not None and r.values]
    if rows:
        lines.append("")
        lines.append("Determinants of N'N x NN' on C[G/N'] and its components")
        table = [["p", "|G|", "C[G/N']", *TABLE2_COLUMNS, "published"]]
        for p, r in rows:
            comps = r.values["components"]
            total = r.values.get("det_total")
            order = (p * p - 1) * (p * p - p)
            table.append([
                str(p),
                format_int(order),
                "" if total is None else format_int(total),
                *(_format_component(comps[k]) for k in TABLE2_COLUMNS),
                r.values.get("reference") or ("n/a" if p not in DEFAULT_PRIMES else ""),
            ])
        widths = [max(len(row[i]) for row in table) for i in range(len(table[0]))]
        for row in table:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    failures = [(pr.p, r) for pr in report.primes for r in pr.results if r.status == "fail"]
    if failures:
        lines.append("")
        lines.append("failures:")
        for p, r in failures:
            lines.append(f"  p={p} {r.check}: {r.detail}")
    if timing:
        lines.append("")
        lines.append("timing (s): " + ", ".join(f"{pr.p}={pr.seconds:.2f}" for pr in report.primes))
    lines.append("")
    lines.append("overall: " + ("PASS" if report.ok else "FAIL"))
    return "\n".join(lines) + "\n"


def emit(report: VerificationReport, fmt: str, *, timing: bool = False) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "text":
        return to_text(report, timing=timing)
    raise ValueError(f"unknown format {fmt!r}")
