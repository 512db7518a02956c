"""Command-line front end.

``classify`` reads one JSON object on stdin::

    {"n": 5, "coords": [23 integers]}
    {"n": 13, "mukai": {"r": 3, "c": 0, "s": 4}, "v": {"r": 3, "c": 0, "s": -4}}

Coordinates follow the basis order of :mod:`k3nrefl.k3n`: two E8(-1) blocks
(0..15), three hyperbolic planes (16..21) and delta (22). A Mukai class is
moved into the K3^[n] lattice along v. Without "v" the canonical
v = (1, 0, 1-n) is used; if the class is not orthogonal to it and its c is
isotropic, v = (r, c, -s) is used instead.

Integers are written as decimal strings and accepted either way.
Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from enum import Enum

from .catalog import ROW_MIN_N, CatalogEntry, all_entries, full_table, row_entries
from .effectivity import ClassificationReport, Verdict, classify
from .k3n import NS_RANK, MukaiVector, canonical_embedding, canonical_v, make_k3n, mukai_pairing, transport_class
from .lattice import square
from .suites import monodromy_invariance, reflectivity_fuzz, rs_route_equivalence, structural_invariants

EXIT_OK, EXIT_FAILURE, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# --- serialization ----------------------------------------------------------

def to_json_value(obj):
    """Integers become decimal strings; tuples become lists; enums their value."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {k: to_json_value(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json_value(v) for v in obj]
    return obj


def report_dict(report: ClassificationReport) -> dict:
    rs = report.rs
    return {
        "n": report.n,
        "degree": report.degree,
        "divisibility": report.divisibility,
        "primitive": report.primitive,
        "monodromy_reflective": report.monodromy_reflective,
        "rs": None if rs is None else {
            "pair": list(rs.pair),
            "lattice_type": rs.lattice_type.tag,
            "rs_product": rs.rs_product,
            "rho": rs.rho,
            "sigma": rs.sigma,
        },
        "numerically_exceptional": report.numerically_exceptional,
        "k": report.k,
        "divisor_multiplicity": report.divisor_multiplicity,
        "dual_multiplicity": report.dual_multiplicity,
        "chi_L": report.chi_L,
        "chi_L2": report.chi_L2,
        "verdict": report.verdict,
        "reason": report.reason,
    }


def dumps(obj) -> str:
    return json.dumps(to_json_value(obj), indent=2, ensure_ascii=False)


def _flatten(d: dict, prefix: str = ""):
    for key, value in d.items():
        if isinstance(value, dict):
            yield from _flatten(value, f"{prefix}{key}.")
        else:
            yield f"{prefix}{key}", value


def _table(rows: list[dict]) -> str:
    flat = [dict(_flatten(to_json_value(r))) for r in rows]
    if not flat:
        return ""
    cols = list(flat[0])
    cells = [[json.dumps(row.get(c)) if isinstance(row.get(c), list) else str(row.get(c)) for c in cols] for row in flat]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)) for r in cells]
    return "\n".join(line.rstrip() for line in lines)


def _key_value(d: dict) -> str:
    flat = list(_flatten(to_json_value(d)))
    width = max(len(k) for k, _ in flat)
    return "\n".join(f"{k.ljust(width)}  {json.dumps(v) if isinstance(v, list) else v}" for k, v in flat)


# --- input parsing ----------------------------------------------------------

def _int(value, what: str) -> int:
    if isinstance(value, bool):
        raise InputError(f"{what} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise InputError(f"{what} must be an integer, got {value!r}")


def _int_list(value, length: int, what: str) -> list[int]:
    if not isinstance(value, list):
        raise InputError(f"{what} must be an array")
    if len(value) != length:
        raise InputError(f"dimension mismatch: {what} has {len(value)} entries, expected {length}")
    return [_int(x, f"{what}[{i}]") for i, x in enumerate(value)]


def _mukai(obj, what: str) -> MukaiVector:
    if not isinstance(obj, dict) or set(obj) - {"r", "c", "s"} or not {"r", "s"} <= set(obj):
        raise InputError(f"{what} must be an object with keys r, c, s")
    c = obj.get("c", 0)
    c = None if not isinstance(c, list) and _int(c, f"{what}.c") == 0 else _int_list(c, NS_RANK, f"{what}.c")
    return MukaiVector.of(_int(obj["r"], f"{what}.r"), c, _int(obj["s"], f"{what}.s"))


def parse_class(data):
    """Return (n, class in Lambda_n) from a decoded classify request."""
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    if "n" not in data:
        raise InputError("missing field n")
    n = _int(data["n"], "n")
    if n < 2:
        raise InputError("n must be at least 2")
    if ("coords" in data) == ("mukai" in data):
        raise InputError("give exactly one of coords or mukai")
    if "coords" in data:
        if "v" in data:
            raise InputError("v only applies to mukai input")
        e = make_k3n(n).vector(_int_list(data["coords"], NS_RANK + 1, "coords"))
    else:
        m = _mukai(data["mukai"], "mukai")
        if "v" in data:
            v = _mukai(data["v"], "v")
        elif mukai_pairing(m, canonical_v(n)) == 0:
            v = canonical_v(n)
        else:
            v = MukaiVector(m.r, m.c, -m.s)
            if square(m.c) != 0 or mukai_pairing(v, v) != 2 * n - 2:
                raise InputError("mukai class is not orthogonal to the canonical v; supply v")
        if mukai_pairing(v, v) != 2 * n - 2:
            raise InputError(f"v must have square {2 * n - 2}")
        if mukai_pairing(m, v) != 0:
            raise InputError("mukai class is not orthogonal to v")
        try:
            e = transport_class(v, m, n)
        except (ArithmeticError, ValueError) as exc:
            raise InputError(str(exc)) from exc
    if e.is_zero():
        raise InputError("zero class")
    return n, e


# --- commands ---------------------------------------------------------------

def cmd_classify(args, stdin, stdout) -> int:
    try:
        data = json.loads(stdin.read())
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}") from exc
    n, e = parse_class(data)
    report = classify(e, canonical_embedding(n))
    out = report_dict(report)
    stdout.write((dumps(out) if args.format == "json" else _key_value(out)) + "\n")
    if args.strict and report.verdict is Verdict.NOT_REFLECTIVE:
        return EXIT_FAILURE
    return EXIT_OK


def catalog_entries(row: int | None, n_max: int | None) -> list[CatalogEntry]:
    if row is not None:
        if row not in ROW_MIN_N:
            raise InputError(f"no table row {row}; rows are 1..11")
        return row_entries(row, max(ROW_MIN_N.values()) if n_max is None else n_max)
    if n_max is None:
        return full_table()
    return [row_entries(r, n_max)[0] for r in sorted(ROW_MIN_N) if ROW_MIN_N[r] <= n_max]


def entry_dict(entry: CatalogEntry) -> dict:
    report = entry.classify()
    expected = dict(entry.expected.populated())
    if "pair" in expected:
        expected["pair"] = list(expected["pair"])
    return {
        "name": entry.name,
        "row": entry.row,
        "n": entry.n,
        "v": [entry.v.r, list(entry.v.c.coords), entry.v.s],
        "mukai": [entry.m.r, list(entry.m.c.coords), entry.m.s],
        "coords": list(entry.e.coords),
        "expected": expected,
        "computed": report_dict(report),
        "mismatches": entry.expected.mismatches(report),
        "provenance": entry.provenance,
    }


def cmd_catalog(args, stdin, stdout) -> int:
    if args.n_max is not None and args.n_max < 2:
        raise InputError("--n-max must be at least 2")
    entries = [entry_dict(e) for e in catalog_entries(args.row, args.n_max)]
    if args.format == "json":
        stdout.write(dumps(entries) + "\n")
    else:
        rows = [
            {
                "row": d["row"],
                "name": d["name"],
                "n": d["n"],
                "degree": d["computed"]["degree"],
                "div": d["computed"]["divisibility"],
                "type": d["computed"]["rs"]["lattice_type"] if d["computed"]["rs"] else "-",
                "pair": d["computed"]["rs"]["pair"] if d["computed"]["rs"] else "-",
                "verdict": d["computed"]["verdict"],
                "k": d["computed"]["k"],
                "ok": not d["mismatches"],
            }
            for d in entries
        ]
        stdout.write(_table(rows) + "\n")
    return EXIT_FAILURE if any(d["mismatches"] for d in entries) else EXIT_OK


def _n_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise InputError(f"--n-range must look like A:B, got {text!r}") from exc
    if lo < 2 or hi < lo:
        raise InputError("--n-range needs 2 <= A <= B")
    return range(lo, hi + 1)


def run_suites(seed: int, trials: int, n_values: range) -> list[dict]:
    if trials <= 0:
        return []
    entries = [e for e in all_entries() if e.n in n_values]
    results = [
        reflectivity_fuzz(n_values, trials, seed),
        rs_route_equivalence(n_values, trials, seed + 1, entries),
        monodromy_invariance(entries, trials, seed + 2),
        structural_invariants(n_values, trials, seed + 3),
    ]
    return [
        {"name": r.name, "trials": r.trials, "failures": r.failures, "details": r.details}
        for r in results
    ]


def cmd_verify(args, stdin, stdout) -> int:
    if args.trials < 0:
        raise InputError("--trials must be non-negative")
    suites = run_suites(args.seed, args.trials, _n_range(args.n_range))
    if args.format == "json":
        stdout.write(dumps({"suites": suites}) + "\n")
    else:
        stdout.write(_table([{k: s[k] for k in ("name", "trials", "failures")} for s in suites]) + "\n")
    return EXIT_FAILURE if any(s["failures"] for s in suites) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3nrefl", description="Reflective classes on K3^[n]-type lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("classify", help="classify one class read as JSON from stdin")
    add_format(p)
    p.add_argument("--strict", action="store_true", help="exit 1 when the class is not reflective")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("catalog", help="emit catalog entries with expected and computed invariants")
    add_format(p)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--row", type=int, default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="run the randomised cross-check suites")
    add_format(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--n-range", default="2:8")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin, stdout, stderr = stdin or sys.stdin, stdout or sys.stdout, stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, stdin, stdout)
    except (InputError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
