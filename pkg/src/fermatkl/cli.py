"""Batch command-line interface with machine-readable output.

Every command emits a single JSON object

    {schema_version, command, inputs, results, provenance}

on stdout (CSV for the scatter command on request).  Numbers are IEEE
doubles in shortest round-trip decimal.  Exit codes: 0 success or all
checks passed, 1 usage error, 2 numeric-check failure, 3 internal
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from .eisenstein import (
    DEFAULT_TRUNCATION,
    TruncationSpec,
    eisenstein_direct,
    fourier_eval,
    fourier_limit_eval,
    phi_coefficient,
)
from .fermat import (
    GAMMA1,
    classify_cusp_word,
    cusp_reps,
    cusp_width,
    gamma_n,
    ramification_point,
)
from .qseries import FormLabel, OrderTooSmall, expansion
from .scattering import scattering_matrix
from .sl2 import Cusp, word_to_matrix
from .special import DEFAULT_PRECISION, PrecisionConfig
from .verify import run_suite

SCHEMA_VERSION = "1"


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse 'x+yi' with decimal literals, e.g. '1+2i', '-0.5i', '2'."""
    t = text.strip().replace(" ", "").replace("j", "i")
    if not t:
        raise UsageError("empty complex literal")
    try:
        if t.endswith("i"):
            return complex(t[:-1] + "j" if t[:-1] not in ("", "+", "-") else t[:-1] + "1j")
        return complex(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def parse_cusp(text: str) -> Cusp:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return Cusp(1, 0)
    if "/" in t:
        p, q = t.split("/", 1)
        return Cusp(int(p), int(q))
    return Cusp(int(t), 1)


def parse_form_label(text: str) -> FormLabel:
    """Labels: theta2 | lambda | one_minus_lambda | g0 | g1 | ginf |
    x:N | y:N | f:KIND:J:N."""
    parts = text.strip().split(":")
    name = parts[0].lower()
    if name in ("theta2", "lambda", "one_minus_lambda", "g0", "g1", "ginf"):
        return FormLabel(name)
    if name in ("x", "y"):
        if len(parts) != 2:
            raise UsageError(f"label {text!r} needs a level, e.g. x:3")
        return FormLabel(name, int(parts[1]))
    if name == "f":
        if len(parts) != 4:
            raise UsageError(f"label {text!r} must be f:KIND:J:N")
        return FormLabel("f", int(parts[3]), parts[1].upper(), int(parts[2]))
    raise UsageError(f"unknown form label {text!r}")


def _group_of(args) -> tuple:
    if getattr(args, "group", None) == "gamma1":
        return GAMMA1
    n = args.n
    if n is None or n < 1:
        raise UsageError("--n must be a positive integer")
    return gamma_n(n)


def _provenance(trunc: TruncationSpec, cfg: PrecisionConfig, args) -> dict:
    out = {
        "c_max": trunc.c_max,
        "m_max": trunc.m_max,
        "order": trunc.order,
        "target_abs_tol": cfg.target_abs_tol,
        "euler_maclaurin_terms": cfg.euler_maclaurin_terms,
        "bessel_quadrature_nodes": cfg.bessel_quadrature_nodes,
    }
    if not args.no_timestamp:
        out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return out


def _emit(args, command: str, inputs: dict, results, trunc, cfg) -> None:
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": {k: str(v) for k, v in sorted(inputs.items())},
        "results": results,
        "provenance": _provenance(trunc, cfg, args),
    }
    json.dump(record, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _config_from(args) -> tuple[TruncationSpec, PrecisionConfig]:
    file_cfg = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
    t = dict(c_max=DEFAULT_TRUNCATION.c_max, m_max=DEFAULT_TRUNCATION.m_max,
             order=DEFAULT_TRUNCATION.order)
    p = dict(target_abs_tol=DEFAULT_PRECISION.target_abs_tol,
             euler_maclaurin_terms=DEFAULT_PRECISION.euler_maclaurin_terms,
             bessel_quadrature_nodes=DEFAULT_PRECISION.bessel_quadrature_nodes)
    t.update({k: v for k, v in file_cfg.get("truncation", {}).items() if k in t})
    p.update({k: v for k, v in file_cfg.get("precision", {}).items() if k in p})
    if args.cmax is not None:
        t["c_max"] = args.cmax
    if args.mmax is not None:
        t["m_max"] = args.mmax
    if args.order is not None:
        t["order"] = args.order
    if args.tol is not None:
        p["target_abs_tol"] = args.tol
    return TruncationSpec(**t), PrecisionConfig(**p)


def cmd_cusps(args) -> int:
    trunc, cfg = _config_from(args)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    group = gamma_n(args.n)
    rows = []
    for fc in cusp_reps(args.n):
        rp = ramification_point(fc)
        rows.append({
            "rep": str(fc.rep),
            "kind": fc.kind,
            "index": fc.index,
            "width": cusp_width(group, fc.rep),
            "ramification_point": rp.coords(),
            "beta_image": str(rp.beta_image),
        })
    _emit(args, "cusps", {"n": args.n}, {"cusps": rows}, trunc, cfg)
    return 0


def cmd_classify(args) -> int:
    trunc, cfg = _config_from(args)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    c = Cusp(args.p, args.q) if args.p is not None else parse_cusp(args.cusp)
    fc, word = classify_cusp_word(c, args.n)
    witness = word_to_matrix(word)
    _emit(args, "classify", {"cusp": c, "n": args.n}, {
        "representative": str(fc.rep),
        "kind": fc.kind,
        "index": fc.index,
        "witness_word": str(word),
        "witness_matrix": [witness.a, witness.b, witness.c, witness.d],
    }, trunc, cfg)
    return 0


def cmd_scatter(args) -> int:
    trunc, cfg = _config_from(args)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    mat = scattering_matrix(args.n, cfg)
    reps = [str(fc.rep) for fc in cusp_reps(args.n)]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        which = args.matrix
        writer.writerow(["rep"] + reps)
        for i, row in enumerate(mat):
            writer.writerow([reps[i]] + [
                repr(getattr(e, which)) for e in row])
        sys.stdout.write(buf.getvalue())
        return 0
    entries = [[{"normalized": e.normalized, "natural": e.natural,
                 "case": e.case_tag} for e in row] for row in mat]
    _emit(args, "scatter", {"n": args.n}, {"reps": reps, "entries": entries},
          trunc, cfg)
    return 0


def cmd_eisenstein(args) -> int:
    trunc, cfg = _config_from(args)
    group = _group_of(args)
    j = parse_cusp(args.cusp)
    z = parse_complex(args.z)
    s = parse_complex(args.s) if args.s else 2.0 + 0j
    if s.imag == 0:
        s = s.real
    results: dict = {}
    if args.limit:
        val = fourier_limit_eval(group, j, Cusp(1, 0), z, trunc, cfg)
        results["limit_4pi"] = [val.real, val.imag]
    else:
        if complex(s).real <= 1:
            raise UsageError("Re s must exceed 1 unless --limit is given")
        direct, tail = eisenstein_direct(group, j, z, s, trunc)
        four = fourier_eval(group, j, Cusp(1, 0), z, s, trunc, cfg)
        phi0 = phi_coefficient(group, j, Cusp(1, 0), 0, s, trunc)
        results["direct"] = [direct.real, direct.imag]
        results["direct_tail"] = tail
        results["fourier_inf_chart"] = [four.real, four.imag]
        results["phi0"] = [phi0.partial_sum.real, phi0.partial_sum.imag]
        results["phi0_tail"] = phi0.tail_estimate
    _emit(args, "eisenstein", {"group": group, "cusp": j, "z": z, "s": s},
          results, trunc, cfg)
    return 0


def cmd_verify(args) -> int:
    trunc, cfg = _config_from(args)
    ns = tuple(int(x) for x in args.ns.split(",")) if args.ns else (1, 2)
    reports = run_suite(args.suite, trunc, cfg, ns=ns, workers=args.workers)
    if args.check_id:
        reports = [r for r in reports if r.check_id == args.check_id]
    if args.check_tol is not None:
        from .verify import CheckReport
        reports = [CheckReport(r.check_id, r.parameters, r.residual,
                               args.check_tol, r.residual <= args.check_tol,
                               r.runtime_ms) for r in reports]
    payload = [r.to_json_dict(with_runtime=not args.no_timestamp) for r in reports]
    all_passed = all(r.passed for r in reports)
    _emit(args, "verify", {"suite": args.suite, "ns": ns},
          {"reports": payload, "all_passed": all_passed}, trunc, cfg)
    return 0 if all_passed else 2


def cmd_qexp(args) -> int:
    trunc, cfg = _config_from(args)
    label = parse_form_label(args.label)
    order = Fraction(args.order if args.order is not None else trunc.order)
    try:
        exp = expansion(label, order)
    except OrderTooSmall as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, "qexp", {"label": label, "order": order},
          {"denom": exp.denom, "terms": exp.dump().split("\n") if exp.coeffs else []},
          trunc, cfg)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="fermatkl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=None, help="Fermat level N")
        p.add_argument("--cmax", type=int, default=None)
        p.add_argument("--mmax", type=int, default=None)
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--config", type=str, default=None,
                       help="JSON file with truncation/precision defaults")
        p.add_argument("--no-timestamp", action="store_true")

    p = sub.add_parser("cusps", help="list the cusp system of Gamma_N")
    common(p)
    p.set_defaults(fn=cmd_cusps)

    p = sub.add_parser("classify", help="classify a cusp with witness")
    common(p)
    p.add_argument("--cusp", type=str, default=None, help="cusp as p/q or inf")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("scatter", help="scattering matrix of Gamma_N")
    common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--matrix", choices=("normalized", "natural"),
                   default="normalized", help="which matrix to print as CSV")
    p.set_defaults(fn=cmd_scatter)

    p = sub.add_parser("eisenstein", help="Eisenstein series values")
    common(p)
    p.add_argument("--group", choices=("gamma1", "gammaN"), default="gammaN")
    p.add_argument("--cusp", type=str, required=True)
    p.add_argument("--z", type=str, required=True)
    p.add_argument("--s", type=str, default="2")
    p.add_argument("--limit", action="store_true",
                   help="regularized value at s = 1 (4 pi scale)")
    p.set_defaults(fn=cmd_eisenstein)

    p = sub.add_parser("verify", help="run the verification suite")
    common(p)
    p.add_argument("--suite", choices=("fast", "full"), default="fast")
    p.add_argument("--ns", type=str, default=None, help="levels, e.g. 1,2,3")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--check-id", type=str, default=None,
                   help="restrict the report to one check id")
    p.add_argument("--check-tol", type=float, default=None,
                   help="override the pass tolerance for the selected checks")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("qexp", help="dump a q-expansion")
    common(p)
    p.add_argument("--label", type=str, required=True)
    p.set_defaults(fn=cmd_qexp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # internal error
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
