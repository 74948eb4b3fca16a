"""Command-line entry point: ``qflag enum``, ``qflag poly`` and ``qflag verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import census
from . import forest as fo
from . import polyalg as pa
from .permnc import Permutation, enumerate_nc, is_noncrossing, noncrossing

ENUM_LIMITS = {"nc": 8, "trees": 8, "forests": 8, "faces": 7, "counts": 12}


def _emit(rows, header, fmt, out, as_json):
    if fmt == "json":
        text = json.dumps(as_json, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        lines = ["  ".join(str(x).ljust(k) for x, k in zip(r, widths)).rstrip()
                 for r in [header] + list(rows)]
        text = "\n".join(lines) + "\n"
    out.write(text)


def _forest_rows(forests):
    rows, records = [], []
    for F in forests:
        word = fo.format_word(fo.canonical_word(F))
        nc = fo.ncperm(F)
        rows.append((repr(F), F.size(), word, str(nc)))
        records.append({"forest": F.to_json(), "black": F.size(), "word": word,
                        "ncperm": nc.to_json()})
    return rows, records


def cmd_enum(args, parser, out):
    what, n = args.what, args.n
    if n < 1 or n > ENUM_LIMITS[what]:
        parser.error(f"enum {what} supports 1 <= n <= {ENUM_LIMITS[what]}")
    if what == "nc":
        ws = enumerate_nc(n)
        rows = [(str(w.perm), str(w)) for w in ws]
        records = [{"word": w.perm.to_json(), "blocks": w.to_json()} for w in ws]
        _emit(rows, ("word", "cycles"), args.format, out, records)
    elif what in ("trees", "forests"):
        forests = fo.enumerate_trees(n) if what == "trees" else fo.enumerate_forests(n)
        rows, records = _forest_rows(forests)
        _emit(rows, ("forest", "nodes", "word", "ncperm"), args.format, out, records)
    elif what == "faces":
        table = census._table_from_sizes(n, (F.size() for F in fo.enumerate_normal_forms(n)))
        rows = list(enumerate(table))
        _emit(rows, ("k", "count"), args.format, out,
              [{"k": k, "count": c} for k, c in rows])
    else:
        faces, forests = census.count_faces(n), census.count_forests(n)
        rows = [(k, f, c) for k, (f, c) in enumerate(zip(faces.by_k, forests.by_k))]
        _emit(rows, ("k", "faces", "forests"), args.format, out,
              [{"n": n, "k": k, "faces": f, "forests": c} for k, f, c in rows])
    return 0


def _parse_perm(text: str, n=None) -> Permutation:
    """One-line notation, or cycle notation such as "(321)(54)"."""
    if "(" not in text:
        return Permutation.parse(text)
    cycles = [[int(ch) for ch in part.replace(" ", "")]
              for part in text.replace(")", "").split("(") if part.strip()]
    if n is None:
        n = max((a for c in cycles for a in c), default=1)
    return Permutation.from_cycles(n, cycles)


def _forest_arg(args, parser):
    if args.reseq is not None:
        try:
            word = fo.parse_word(args.reseq)
            if not fo.is_reseq(word):
                raise ValueError("not a valid RESeq word")
            return fo.forest_from_reseq(word)
        except ValueError as e:
            parser.error(f"--reseq: {e}")
    if args.nc is not None:
        try:
            w = _parse_perm(args.nc, args.n)
        except ValueError as e:
            parser.error(f"--nc: {e}")
        if not is_noncrossing(w):
            parser.error(f"--nc: {w} is not a noncrossing partition")
        return fo.forest_for_nc(noncrossing(w))
    parser.error("give --reseq or --nc")


def cmd_poly(args, parser, out):
    if args.kind == "schubert":
        if args.w is None:
            parser.error("schubert needs --w")
        try:
            w = _parse_perm(args.w)
        except ValueError as e:
            parser.error(f"--w: {e}")
        p = pa.schubert_double(w)
    else:
        F = _forest_arg(args, parser)
        n = args.n if args.n is not None else max(F.n, 1)
        try:
            if args.kind == "forest":
                if not fo.is_plain(F):
                    raise ValueError(f"{F!r} is not an all-black interval forest")
                p = pa.forest_poly_double(F, n)
            else:
                p = pa.fundamental_double(F, n)
        except ValueError as e:
            parser.error(str(e))
    if args.format == "json":
        out.write(json.dumps({"N": p.N, "terms": p.to_json()}, sort_keys=True) + "\n")
    else:
        out.write(str(p) + "\n")
    return 0


def _report_text(rep) -> str:
    status = "PASS" if rep["passed"] else "FAIL"
    lines = [f"{status} {rep['suite']} n={rep['n']} seed={rep['seed']} "
             f"cases={rep['cases']} failures={len(rep['failures'])}"]
    for f in rep["failures"][:20]:
        lines.append("  " + json.dumps(f, sort_keys=True))
    return "\n".join(lines) + "\n"


def _report_csv(rep) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("suite", "n", "cases", "failures", "seed"))
    for m, k in sorted(rep["cases_by_n"].items(), key=lambda kv: int(kv[0])):
        fails = sum(1 for f in rep["failures"] if f["m"] == int(m))
        w.writerow((rep["suite"], m, k, fails, rep["seed"]))
    return buf.getvalue()


def cmd_verify(args, parser, out):
    try:
        rep = census.run_suite(args.suite, args.n, seed=args.seed, jobs=args.jobs)
    except ValueError as e:
        parser.error(str(e))
    if args.format == "json":
        text = census.report_json(rep) + "\n"
    elif args.format == "csv":
        text = _report_csv(rep)
    else:
        text = _report_text(rep)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(census.report_json(rep) + "\n" if args.format == "text" else text)
        out.write(_report_text(rep))
    else:
        out.write(text)
    return 0 if rep["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qflag", description="Quasisymmetric flag variety toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    fmt = dict(choices=("text", "json", "csv"), default="text")

    e = sub.add_parser("enum", help="enumerate combinatorial families")
    e.add_argument("what", choices=tuple(ENUM_LIMITS))
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--format", **fmt)

    q = sub.add_parser("poly", help="compute a polynomial")
    q.add_argument("kind", choices=("schubert", "forest", "fundamental"))
    q.add_argument("--w", help="permutation in one-line notation")
    q.add_argument("--reseq", help='word such as "r1- r1- e1"')
    q.add_argument("--nc", help='noncrossing partition, one-line ("312") or cycles ("(321)")')
    q.add_argument("--n", type=int, help="number of variables")
    q.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=census.SUITES)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--format", **fmt)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "enum":
            return cmd_enum(args, parser, out)
        if args.command == "poly":
            return cmd_poly(args, parser, out)
        return cmd_verify(args, parser, out)
    except SystemExit as e:
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
