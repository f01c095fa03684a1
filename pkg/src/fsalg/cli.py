"""``fsalg`` command line.

Exit status: 0 when every case passes, 1 when some case fails, 2 on usage
or input errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Optional, Sequence

from . import coset_lattice as CL
from . import free_pdf as FP
from . import groups
from . import verify
from .free_words import (
    GeneratorSet,
    ResourceCapError,
    WordSyntaxError,
    count_words,
    cyclic_coset_scan,
    enumerate_words,
    format_word,
    parse_word,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- formatting ---------------------------------------------------------------
def _jsonable(x: Any) -> Any:
    if isinstance(x, complex):
        return x.real if x.imag == 0 else [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return _jsonable(x.item())
    return x


def _text(x: Any) -> str:
    if isinstance(x, complex):
        if x.imag == 0:
            return repr(x.real)
        return f"{x.real!r}{'+' if x.imag >= 0 else '-'}{abs(x.imag)!r}i"
    if isinstance(x, (list, tuple, dict)):
        return json.dumps(_jsonable(x), sort_keys=True)
    return str(x)


def emit(fields: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_jsonable(fields), sort_keys=True) + "\n")
    else:
        for k, v in fields.items():
            out.write(f"{k}\t{_text(v)}\n")


def emit_report(rep: verify.VerificationReport, fmt: str, timing: bool, out=None) -> None:
    out = out or sys.stdout
    n_pass, n_fail = rep.counts()
    if fmt == "json":
        doc = {
            "suite": rep.suite,
            "seed": rep.seed,
            "tol": rep.tol,
            "passed": n_pass,
            "failed": n_fail,
            "cases": [
                {"id": c.id, "anchor": c.anchor, "status": c.status, "measured": c.measured,
                 "tolerance": c.tolerance, "witness": c.witness}
                for c in rep.cases
            ],
        }
        if timing:
            doc["wall_time"] = rep.wall_time
        out.write(json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n")
        return
    out.write(f"# suite\t{rep.suite}\n# seed\t{rep.seed}\n# tol\t{rep.tol!r}\n")
    out.write("id\tstatus\tanchor\tmeasured\ttolerance\twitness\n")
    for c in rep.cases:
        wit = _text(c.witness) if c.witness is not None else "-"
        out.write(f"{c.id}\t{c.status}\t{c.anchor}\t{_text(c.measured)}\t{c.tolerance!r}\t{wit}\n")
    out.write(f"# summary\t{n_pass} pass\t{n_fail} fail\n")
    if timing:
        out.write(f"# wall_time\t{rep.wall_time:.3f}\n")


# -- subcommands --------------------------------------------------------------
def cmd_verify(args) -> int:
    rep = verify.run_suite(args.suite, seed=args.seed, tol=args.tol)
    emit_report(rep, args.format, args.timing)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _load_group(args) -> groups.GroupData:
    if args.group_file:
        return groups.load_group(args.group_file)
    if not args.name:
        raise UsageError("give a bundled group name or --group-file")
    return groups.bundled(args.name)


def cmd_group(args) -> int:
    if args.list:
        for name in groups.bundled_names():
            print(name)
        return EXIT_OK
    G = _load_group(args)
    if args.dump:
        print(json.dumps(groups.group_to_json(G)))
        return EXIT_OK
    rep = groups.validate_model(G.model, G.catalog)
    fields = {
        "name": G.name,
        "order": G.order,
        "irreps": [r.label for r in G.catalog],
        "dims": list(G.catalog.dims),
        "valid": rep.ok,
    }
    if not rep.ok:
        fields["failures"] = [f"{f.check}: {f.detail}" for f in rep.failures]
    emit(fields, args.format)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_haagerup(args) -> int:
    p = FP.HaagerupParam(args.r, args.k)
    fields: dict = {"k": p.k, "r": p.r}
    if args.eval:
        w = parse_word(args.eval, auto_reduce=args.auto_reduce)
        fields["word"] = format_word(w)
        fields["value"] = FP.haagerup_eval(p, w)
    report = args.report or ("" if args.eval else "norms")
    if report in ("norms", "all"):
        rep = FP.haagerup_l2_report(p)
        fields.update(q=rep.q, norm_sq=rep.norm_sq, in_l2=rep.in_l2)
    if report in ("power", "all"):
        fields["min_l2_power"] = FP.haagerup_min_l2_power(p)
    if report in ("chi", "all"):
        chi = FP.chi_pairing_report(p, args.n)
        fields.update(n=args.n, pairing=chi.pairing, haagerup_bound=chi.haagerup_bound, regime=chi.regime.value)
        if chi.first_violation is not None:
            fields["first_violation"] = chi.first_violation
    if report in ("gram", "all"):
        cert = FP.gram_psd_check(lambda w: FP.haagerup_eval(p, w), p.k, args.L, args.tol, args.cap)
        fields.update(word_set_size=cert.word_set_size, min_eigenvalue=cert.min_eigenvalue,
                      certificate="pass" if cert.passed else "fail")
    emit(fields, args.format)
    return EXIT_OK


def cmd_riesz(args) -> int:
    spec = FP.parse_riesz_spec(args.alphas)
    if args.power > 1:
        spec = FP.riesz_power(spec, args.power)
    fields: dict = {}
    if args.eval:
        w = parse_word(args.eval, auto_reduce=args.auto_reduce)
        fields["value"] = FP.riesz_eval(spec, w)
        if not args.classify:
            emit(fields, args.format)
            return EXIT_OK
    cl = FP.riesz_classify(spec)
    fields.update(beta=cl.beta, gamma=cl.gamma, **{"class": cl.label.value},
                  powers_all_singular=FP.powers_all_singular(spec))
    if args.L:
        cert = FP.gram_psd_check(lambda w: FP.riesz_eval(spec, w), args.k, args.L, args.tol, args.cap)
        fields["certificate"] = {"word_set_size": cert.word_set_size, "min_eigenvalue": cert.min_eigenvalue,
                                 "tolerance": cert.tolerance, "passed": cert.passed}
    emit(fields, args.format)
    return EXIT_OK


def cmd_words(args) -> int:
    if args.reduce:
        w = parse_word(args.reduce[0], auto_reduce=args.auto_reduce)
        for t in args.reduce[1:]:
            w = w * parse_word(t, auto_reduce=args.auto_reduce)
        emit({"word": format_word(w), "length": len(w)}, args.format)
        return EXIT_OK
    if args.scan:
        res = cyclic_coset_scan(GeneratorSet.first(args.k), args.L, args.N, cap=args.cap)
        fields = {"max_hits": res.max_hits, "pairs_scanned": res.pairs_scanned}
        if res.witness:
            fields["witness"] = [format_word(res.witness[0]), format_word(res.witness[1])]
        emit(fields, args.format)
        return EXIT_OK
    if args.count:
        emit({"k": args.k, "n": args.n, "count": count_words(args.k, args.n)}, args.format)
        return EXIT_OK
    words = enumerate_words(args.k, args.n, cap=args.cap)
    if args.format == "json":
        print(json.dumps([format_word(w) for w in words]))
    else:
        for w in words:
            print(format_word(w))
    return EXIT_OK


def _point(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad point {text!r}; expected comma-separated integers") from None


def cmd_coset(args) -> int:
    U = CL.load_expr(args.file)
    if args.member is not None:
        emit({"point": list(_point(args.member)), "member": CL.membership(U, _point(args.member))}, args.format)
        return EXIT_OK
    if args.extract:
        ex = CL.extract_almost_coset(U)
        wit = verify.check_extraction(U, ex)
        emit({"anchor": list(ex.coset.anchor), "basis": [list(r) for r in ex.coset.lattice.basis],
              "exceptions": [list(e) for e in ex.exceptions], "box_check": "pass" if wit is None else "fail"},
             args.format)
        return EXIT_OK if wit is None else EXIT_FAIL
    bad = CL.validate_on_box(U)
    emit({"valid": bad is None, **({"witness": list(bad)} if bad else {})}, args.format)
    return EXIT_OK if bad is None else EXIT_FAIL


# -- parser -------------------------------------------------------------------
def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--tol", type=float, default=S, help="numeric tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=S, help="random seed (default 0)")
    p.add_argument("--format", choices=("tsv", "json"), default=S, help="output format (default tsv)")
    p.add_argument("--group-file", default=S, help="JSON group file")
    p.add_argument("--cap", type=int, default=S, help="enumeration cap (default 1000000)")
    return p


def build_parser() -> argparse.ArgumentParser:
    # each parser needs its own copy: set_defaults below mutates shared actions
    parser = argparse.ArgumentParser(prog="fsalg", parents=[_common()],
                                     description="Fourier-Stieltjes algebra computations and checks.")
    parser.set_defaults(tol=1e-9, seed=0, format="tsv", group_file=None, cap=10**6)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[_common()], help="run a verification suite")
    p.add_argument("suite", choices=verify.suite_names())
    p.add_argument("--timing", action="store_true", help="append wall time (output no longer reproducible)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("group", parents=[_common()], help="inspect or validate a finite group catalog")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true", help="list bundled groups")
    p.add_argument("--dump", action="store_true", help="print the group file JSON")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("haagerup", parents=[_common()], help="Haagerup function r^|x| on F_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--report", choices=("norms", "power", "chi", "gram", "all"))
    p.add_argument("--n", type=int, default=1, help="sphere radius for --report chi")
    p.add_argument("--L", type=int, default=2, help="word length bound for --report gram")
    p.add_argument("--eval", metavar="WORD")
    p.add_argument("--auto-reduce", action="store_true")
    p.set_defaults(func=cmd_haagerup)

    p = sub.add_parser("riesz", parents=[_common()], help="free Riesz products")
    p.add_argument("--alphas", required=True, metavar="SPEC",
                   help="finite:0.5,0.3 | geometric:c=,q= | constant:c= | powerlaw:c=,p= | loglaw:c=,p=")
    p.add_argument("--eval", metavar="WORD")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--classify", action="store_true")
    p.add_argument("--k", type=int, default=2, help="rank for the Gram certificate")
    p.add_argument("--L", type=int, default=0, help="word length bound for a Gram certificate")
    p.add_argument("--auto-reduce", action="store_true")
    p.set_defaults(func=cmd_riesz)

    p = sub.add_parser("words", parents=[_common()], help="reduced words in F_k")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--count", action="store_true")
    p.add_argument("--reduce", nargs="+", metavar="WORD", help="multiply and reduce words")
    p.add_argument("--scan", action="store_true", help="cyclic coset scan for {x_1..x_k}^(+-1)")
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--auto-reduce", action="store_true")
    p.set_defaults(func=cmd_words)

    p = sub.add_parser("coset", parents=[_common()], help="coset-ring expressions over Z^d")
    p.add_argument("--file", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--extract", action="store_true")
    g.add_argument("--member", metavar="POINT")
    p.set_defaults(func=cmd_coset)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.group_file and args.command != "group":
            groups.load_group(args.group_file)  # validated even when only passed through
        return args.func(args)
    except WordSyntaxError as e:
        print(f"fsalg: word syntax error: {e}", file=sys.stderr)
    except (groups.GroupFileError, groups.CatalogInvalid, CL.CosetFileError) as e:
        print(f"fsalg: invalid input: {e}", file=sys.stderr)
    except (UsageError, ValueError, KeyError, ResourceCapError, OSError) as e:
        print(f"fsalg: {e}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
