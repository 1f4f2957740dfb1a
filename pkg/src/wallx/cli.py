"""Command-line front end.

Exit codes: 0 all contracts hold, 1 a contract is violated, 2 malformed input,
3 internal error.  Reports are one JSON record per line with sorted keys, so
output is byte-identical across runs with the same inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .classes import ClassLattice, is_generic, reachable, tau, tilde_r
from .errors import (
    ConfigurationError,
    FramingWarning,
    LimitError,
    MissingEntryError,
    WallxError,
    WeightError,
    ZeroQuantumIntegerError,
)
from .kclass import master_relation_residual
from .residue import kres, limit_infinity, limit_zero
from .serialize import (
    MalformedInput,
    class_from_json,
    class_to_json,
    digest,
    dumps,
    lattice_from_json,
    loci_from_json,
    loci_to_json,
    srat_to_json,
    table_from_json,
    table_to_json,
    zrat_from_json,
    zrat_to_json,
)
from .suites import SUITES, run_suite
from .wallcross import forward_expand, invert, relation_residual

EXIT_OK, EXIT_VIOLATION, EXIT_MALFORMED, EXIT_INTERNAL = 0, 1, 2, 3


class ContractViolation(WallxError):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc


def _need(value, flag: str):
    if value is None:
        raise MalformedInput(f"{flag} is required for this subcommand")
    return value


def _lattice(args) -> ClassLattice:
    return lattice_from_json(_read_json(_need(args.lattice, "--lattice")))


def _tables(args, L: ClassLattice, count: int) -> list[tuple[dict, int | None]]:
    paths = args.table or []
    if len(paths) != count:
        raise MalformedInput(f"expected {count} --table file(s), got {len(paths)}")
    return [table_from_json(_read_json(p), L.m) for p in paths]


def _ks(args, tables, count: int) -> list[int]:
    ks = list(args.k or [])
    if not ks:
        ks = [k for _, k in tables]
    if len(ks) != count or any(k is None for k in ks):
        raise MalformedInput(f"expected {count} twist(s) via --k or the tables' \"k\" fields")
    return ks


def _targets(args, L: ClassLattice, default) -> list[tuple[int, ...]]:
    if args.targets is None:
        return sorted(default)
    data = _read_json(args.targets)
    if isinstance(data, dict):
        data = data.get("targets")
    if not isinstance(data, list):
        raise MalformedInput("targets file must be a list of classes or {\"targets\": [...]}")
    return [class_from_json(c, L.m) for c in data]


def _record(check: str, inputs, cases: int, failures: list, extra: dict | None = None) -> dict:
    rec = {
        "check": check,
        "inputs": digest(inputs),
        "cases": cases,
        "status": "FAIL" if failures else "PASS",
    }
    if failures:
        rec["failures"] = failures
    if extra:
        rec.update(extra)
    return rec


# -- subcommands -------------------------------------------------------------

def cmd_expand(args) -> tuple[list, int]:
    L = _lattice(args)
    [(vw, k_file)] = _tables(args, L, 1)
    [k] = _ks(args, [(vw, k_file)], 1)
    targets = _targets(args, L, vw)
    out = forward_expand(L, vw, k, targets)
    return [table_to_json(out, k)], EXIT_OK


def cmd_invert(args) -> tuple[list, int]:
    L = _lattice(args)
    [(tilde, k_file)] = _tables(args, L, 1)
    [k] = _ks(args, [(tilde, k_file)], 1)
    targets = _targets(args, L, tilde)
    try:
        out = invert(L, tilde, k, targets)
    except ZeroQuantumIntegerError as exc:
        raise ContractViolation(f"zero quantum integer: {exc}") from exc
    return [table_to_json(out, None)], EXIT_OK


def cmd_check_relation(args) -> tuple[list, int]:
    L = _lattice(args)
    tables = _tables(args, L, 2)
    k1, k2 = _ks(args, tables, 2)
    (t1, _), (t2, _) = tables
    common = set(t1) & set(t2)
    targets = _targets(args, L, common)
    records, status = [], EXIT_OK
    for alpha in targets:
        r = relation_residual(L, t1, t2, alpha, k1, k2)
        fails = [] if not r else [{"residual": srat_to_json(r)}]
        inputs = [L.to_json(), k1, k2, class_to_json(alpha),
                  [srat_to_json(t1[b]) for b in reachable(L, alpha) if b in t1],
                  [srat_to_json(t2[b]) for b in reachable(L, alpha) if b in t2]]
        records.append(_record("relation", inputs, 1, fails, {"class": class_to_json(alpha)}))
        if r:
            status = EXIT_VIOLATION
    return records, status


def cmd_master_check(args) -> tuple[list, int]:
    loci = loci_from_json(_read_json(args.input))
    r = master_relation_residual(loci)
    fails = [] if not r else [{"residual": srat_to_json(r)}]
    return [_record("master", loci_to_json(loci), 1, fails)], EXIT_VIOLATION if r else EXIT_OK


def cmd_residue(args) -> tuple[list, int]:
    f = zrat_from_json(_read_json(args.input))
    out = {"function": zrat_to_json(f), "kres": srat_to_json(kres(f))}
    for name, fn in (("limit_zero", limit_zero), ("limit_infinity", limit_infinity)):
        try:
            out[name] = srat_to_json(fn(f))
        except LimitError:
            out[name] = None
    return [out], EXIT_OK


def cmd_stability(args) -> tuple[list, int]:
    L = _lattice(args)
    targets = _targets(args, L, L.effective)
    records = []
    for alpha in targets:
        t = tau(L, alpha)
        records.append({
            "class": class_to_json(alpha),
            "tau": [f"{c.numerator}/{c.denominator}" for c in t.coeffs],
            "tilde_r": tilde_r(L, alpha),
            "generic": is_generic(L, L.effective, alpha),
        })
    return records, EXIT_OK


def cmd_verify(args) -> tuple[list, int]:
    results = run_suite(args.suite, args.seed, args.range, args.n)
    records = [_record(r.check, r.params, r.cases, r.failures, {"params": r.params}) for r in results]
    return records, EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


COMMANDS = {
    "expand": cmd_expand,
    "invert": cmd_invert,
    "check-relation": cmd_check_relation,
    "master-check": cmd_master_check,
    "residue": cmd_residue,
    "stability": cmd_stability,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wallx", description="Exact wall-crossing engine for framed-pair invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, lattice=False, tables=False, ks=False, targets=False):
        if lattice:
            sp.add_argument("--lattice", metavar="FILE", help="class lattice JSON")
        if tables:
            sp.add_argument("--table", metavar="FILE", action="append", help="invariant table JSON (repeatable)")
        if ks:
            sp.add_argument("--k", metavar="INT", type=int, action="append", help="framing twist (repeatable)")
        if targets:
            sp.add_argument("--targets", metavar="FILE", help="JSON list of target classes")
        sp.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    common(sub.add_parser("expand", help="pair invariants from semistable invariants"),
           lattice=True, tables=True, ks=True, targets=True)
    common(sub.add_parser("invert", help="semistable invariants from pair invariants"),
           lattice=True, tables=True, ks=True, targets=True)
    common(sub.add_parser("check-relation", help="wall-crossing relation between two pair tables"),
           lattice=True, tables=True, ks=True, targets=True)
    sp = sub.add_parser("master-check", help="residue relation for a list of fixed loci")
    sp.add_argument("input", metavar="FILE")
    common(sp)
    sp = sub.add_parser("residue", help="K-theoretic residue of a rational function in z")
    sp.add_argument("input", metavar="FILE")
    common(sp)
    common(sub.add_parser("stability", help="reduced Hilbert polynomials and genericity"),
           lattice=True, targets=True)
    sp = sub.add_parser("verify", help="run identity sweeps")
    sp.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    sp.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    sp.add_argument("--range", type=int, default=None, help="sweep bound")
    sp.add_argument("--n", type=int, default=None, help="size or case count")
    common(sp)
    return p


def _emit(records: list, out: str | None) -> None:
    text = "".join(dumps(r) + "\n" for r in records)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default", FramingWarning)
            records, status = COMMANDS[args.command](args)
    except ContractViolation as exc:
        print(f"wallx: contract violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (MalformedInput, ConfigurationError, MissingEntryError, WeightError) as exc:
        print(f"wallx: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except Exception as exc:  # noqa: BLE001 - everything else is our bug
        print(f"wallx: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(records, args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
