"""Command-line front end: mrs / solve / sweep / verify / diag-coeff."""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List

from . import lab, mrs
from .solvers import SharpConstantQuery, solve
from .weights import parse_weight


def _parse_n_list(text: str) -> List[int]:
    """Comma list "1,4,9", range "1..200" or "1..200..5", or "dyadic:25:200"."""
    text = text.strip()
    if text.startswith("dyadic:"):
        _, lo, hi = text.split(":")
        out, n = [], int(lo)
        while n <= int(hi):
            out.append(n)
            n *= 2
        return out
    if ".." in text:
        parts = text.split("..")
        if len(parts) == 2:
            return list(range(int(parts[0]), int(parts[1]) + 1))
        if len(parts) == 3:
            return list(range(int(parts[0]), int(parts[1]) + 1, int(parts[2])))
        raise ValueError(f"bad range {text!r}")
    return [int(t) for t in text.split(",") if t.strip()]


def _write_or_print(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_mrs(args) -> int:
    w = parse_weight(args.weight)
    rows = mrs.mrs_table(w, _parse_n_list(args.n))
    lines = ["n,a_n,b_n,ratio,method"]
    for r in rows:
        lines.append(f"{r.n},{r.a_n:.17g},{r.b_n:.17g},{r.ratio:.17g},{r.method}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_solve(args) -> int:
    w = parse_weight(args.weight)
    p = lab.parse_p(args.p)
    q = SharpConstantQuery(weight=w, p=p, N=args.N, n=args.n,
                           variant="restricted" if args.restricted else "full")
    res = solve(q)
    if args.json:
        payload = {
            "query": {"weight": w.spec_string(), "p": lab.format_p(p), "N": args.N,
                      "n": args.n, "variant": q.variant},
            "value": res.value,
            "extremal_coeffs": list(res.extremal.coeffs),
            "certificate": {k: v for k, v in res.certificate.items()},
            "certified": res.certified,
        }
        sys.stdout.write(json.dumps(payload) + "\n")
    else:
        sys.stdout.write(f"value = {res.value:.17g}  (certified: {res.certified})\n")
    return 0


def _cmd_sweep(args) -> int:
    w = parse_weight(args.weight)
    rows = lab.sweep(w, lab.parse_p(args.p), args.N, _parse_n_list(args.n))
    text = lab.rows_to_csv(rows)
    if args.out and args.append:
        import os
        if os.path.exists(args.out):
            with open(args.out) as fh:
                existing = fh.read()
            body = text.split("\n", 1)[1]
            with open(args.out, "w") as fh:
                fh.write(existing.rstrip("\n") + "\n" + body)
            return 0
    _write_or_print(text, args.out)
    return 0


def _cmd_verify(args) -> int:
    with open(getattr(args, "in")) as fh:
        rows = lab.rows_from_csv(fh.read())
    families: dict = {}
    for r in rows:
        families.setdefault(r.family(), []).append(r)
    ok = True
    for fam, fam_rows in sorted(families.items()):
        report = lab.verify_invariants(fam_rows)
        status = "pass" if report.passed else "FAIL"
        direction = report.details.get("ordering_direction", "?")
        sys.stdout.write(f"{fam[0]} p={lab.format_p(fam[1])} N={fam[2]}: {status}"
                         f" (ordering: {direction})\n")
        for name, val in report.checks.items():
            if not val:
                sys.stdout.write(f"  check failed: {name}\n")
        ok = ok and report.passed
    return 0 if ok else 1


def _cmd_diag_coeff(args) -> int:
    w = parse_weight(args.weight)
    rep = lab.coefficient_growth_diagnostic(w, lab.parse_p(args.p),
                                            _parse_n_list(args.n), args.kmax, args.eps)
    for k in sorted(rep.values):
        vals = " ".join(f"{v:.10g}" for v in rep.values[k])
        flag = "stable" if rep.stable[k] else "UNSTABLE"
        sys.stdout.write(f"k={k}: sup={rep.sup_per_k[k]:.10g} [{flag}] values: {vals}\n")
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mbnsharp",
                                 description="Sharp constants in weighted polynomial"
                                             " inequalities: scaling numbers, solves,"
                                             " convergence sweeps.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_mrs = sub.add_parser("mrs", help="table of scaling numbers a_n, b_n")
    p_mrs.add_argument("--weight", required=True)
    p_mrs.add_argument("--n", required=True, help="list, range, or dyadic:lo:hi")
    p_mrs.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    p_mrs.set_defaults(func=_cmd_mrs)

    p_solve = sub.add_parser("solve", help="solve one extremal problem")
    p_solve.add_argument("--weight", required=True)
    p_solve.add_argument("--p", required=True, help="positive real or 'inf'")
    p_solve.add_argument("--N", required=True, type=int)
    p_solve.add_argument("--n", required=True, type=int)
    p_solve.add_argument("--restricted", action="store_true")
    p_solve.add_argument("--json", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="convergence sweep over degrees")
    p_sweep.add_argument("--weight", required=True)
    p_sweep.add_argument("--p", required=True)
    p_sweep.add_argument("--N", required=True, type=int)
    p_sweep.add_argument("--n", required=True)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--append", action="store_true",
                         help="append rows when --out already exists")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="check invariants of a sweep CSV")
    p_verify.add_argument("--in", required=True)
    p_verify.set_defaults(func=_cmd_verify)

    p_diag = sub.add_parser("diag-coeff", help="coefficient-size stability diagnostic")
    p_diag.add_argument("--weight", required=True)
    p_diag.add_argument("--p", required=True)
    p_diag.add_argument("--kmax", required=True, type=int)
    p_diag.add_argument("--eps", required=True, type=float)
    p_diag.add_argument("--n", required=True)
    p_diag.set_defaults(func=_cmd_diag_coeff)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
