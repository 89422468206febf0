"""Command-line interface.

Every subcommand writes one JSON document (to ``--output`` or stdout) and a
short human-readable summary to stderr.  Exit codes: 0 success, 1 domain or
usage error, 2 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import bmp, grothendieck, ks, quiver, strata, weyl
from .exact import is_prime

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2
SCHEMA_DIR = Path(__file__).parent / "schemas"
DEFAULT_MAX_UNKNOWNS = 6000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    quiver_path: str | None = None
    dim: tuple[int, ...] | None = None
    p: int | None = None
    budget: float | None = None
    output: str | None = None
    threads: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.threads is not None and self.threads <= 0:
            raise ValueError("thread count must be positive")


def _dimvec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension vector {text!r}")


def _perm(text: str) -> weyl.Permutation:
    try:
        return weyl.Permutation.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="klrtorsion", description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--output", help="write JSON here instead of stdout")
    ap.add_argument("--threads", type=int, default=None, help="worker threads (default: $KLRTORSION_THREADS or 2)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_quiver(p, dim=True):
        p.add_argument("--quiver", default="a5.qv", help="quiver description file (default: bundled a5.qv)")
        if dim:
            p.add_argument("--dim", type=_dimvec, required=True, help="dimension vector, e.g. 2,4,4,4,2")

    with_quiver(sub.add_parser("roots", help="positive roots of a Dynkin quiver"), dim=False)

    st = sub.add_parser("strata", help="orbit strata of a representation space")
    stsub = st.add_subparsers(dest="action", required=True, parser_class=_Parser)
    with_quiver(stsub.add_parser("enumerate"))
    o = stsub.add_parser("order")
    with_quiver(o)
    o.add_argument("--lam", required=True, help="multisegment, e.g. '[1,2]+2[3,3]'")
    o.add_argument("--mu", required=True)
    i = stsub.add_parser("info")
    with_quiver(i)
    i.add_argument("--lam", required=True)

    sc = sub.add_parser("seqcount", help="number of vertex sequences with content d")
    sc.add_argument("--dim", type=_dimvec, required=True)

    kl = sub.add_parser("klpoly", help="Kazhdan-Lusztig polynomial P_{y,w}")
    kl.add_argument("--y", type=_perm, required=True)
    kl.add_argument("--w", type=_perm, required=True)
    kl.add_argument("--n", type=int)

    z = sub.add_parser("zelevinsky", help="double-flag strata <-> permutations")
    mode = z.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-perm", metavar="MULTISEGMENT")
    mode.add_argument("--to-multisegment", metavar="PERM", type=_perm)
    z.add_argument("--n", type=int, help="S_n (needed with --to-perm)")

    k = sub.add_parser("ks", help="Kashiwara-Saito point counts")
    ksub = k.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = ksub.add_parser("count")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--method", choices=["brute", "stratified"], default="stratified")
    d = ksub.add_parser("dimension")
    d.add_argument("--samples", type=_dimvec, default=ks.DEFAULT_SAMPLES)
    d.add_argument("--holdout", type=int, default=ks.DEFAULT_HOLDOUT)
    d.add_argument("--budget", type=float, default=None, help="wall-clock seconds")

    b = sub.add_parser("bmp", help="moment-graph sheaves")
    bsub = b.add_subparsers(dest="action", required=True, parser_class=_Parser)
    pr = bsub.add_parser("probe")
    pr.add_argument("--y", type=_perm, required=True)
    pr.add_argument("--w", type=_perm, required=True)
    pr.add_argument("--p", type=int, required=True)
    pr.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    pr.add_argument("--max-unknowns", type=int, default=DEFAULT_MAX_UNKNOWNS,
                    help="largest linear system attempted (size budget)")

    dm = sub.add_parser("decomp-matrix", help="characteristic-zero decomposition matrix, A_{2n-1}")
    dm.add_argument("--n", type=int, required=True)

    pi = sub.add_parser("predict-identity", help="format the modular identity of a DIVERGENT probe report")
    pi.add_argument("--report", required=True, help="JSON report from 'bmp probe'")
    pi.add_argument("--lower", default="pi", help="'pi', 'sigma' or NAME=MULTISEGMENT")
    pi.add_argument("--upper", default="sigma")
    with_quiver(pi, dim=False)
    pi.add_argument("--dim", type=_dimvec, default=strata.KS_DIM)
    return ap


# -- subcommands ---------------------------------------------------------------


def _load(args) -> quiver.Quiver:
    return quiver.load_quiver(args.quiver)


def cmd_roots(args):
    q = _load(args)
    roots = quiver.positive_roots(q)
    out = {"quiver": q.to_text(), "type": q.dynkin_type, "count": len(roots), "roots": [list(r) for r in roots]}
    if q.is_type_a:
        out["intervals"] = [[q.vertices[q.line[a]], q.vertices[q.line[b]]] for a, b in map(q.interval, roots)]
    return out, f"{q.dynkin_type}: {len(roots)} positive roots"


def _info_json(info: strata.StratumInfo) -> dict:
    return {
        "dimension": info.dimension,
        "codimension": info.codimension,
        "ambient_dimension": info.ambient_dimension,
        "group_dimension": info.group_dimension,
        "endomorphism_dimension": info.endomorphism_dimension,
    }


def cmd_strata(args):
    q = _load(args)
    if args.action == "enumerate":
        found = strata.enumerate_strata(q, args.dim)
        rows = [dict(s.to_json(), **_info_json(strata.stratum_info(s, check_ext=False))) for s in found]
        return {"dim": list(args.dim), "count": len(found), "strata": rows}, f"{len(found)} strata"
    lam = strata.parse_multisegment(q, args.lam)
    if lam.dim != args.dim:
        raise ValueError(f"--lam has dimension vector {lam.dim}, not {args.dim}")
    if args.action == "info":
        return {"lambda": lam.to_json(), **_info_json(strata.stratum_info(lam))}, str(lam)
    mu = strata.parse_multisegment(q, args.mu)
    leq = strata.closure_leq(lam, mu)
    rank_leq = strata.rank_function_leq(lam, mu) if q.is_equioriented() else None
    out = {"lambda": lam.to_json(), "mu": mu.to_json(), "closure_leq": leq, "rank_function_leq": rank_leq}
    return out, f"mu in closure(lambda): {leq}"


def cmd_seqcount(args):
    c = strata.enumerate_seq_count(args.dim)
    return {"dim": list(args.dim), "count": str(c)}, f"|Seq(d)| = {c}"


def cmd_klpoly(args):
    y, w = args.y, args.w
    if args.n is not None and (y.n != args.n or w.n != args.n):
        raise ValueError(f"permutations are not in S_{args.n}")
    p = weyl.kl_polynomial(y, w)
    out = {
        "y": str(y),
        "w": str(w),
        "length_y": weyl.length(y),
        "length_w": weyl.length(w),
        "bruhat_leq": weyl.bruhat_leq(y, w),
        "P": str(p),
    }
    return out, f"P_{{{y},{w}}} = {p}"


def cmd_zelevinsky(args):
    if args.to_multisegment is not None:
        w = args.to_multisegment
        lam = weyl.multisegment_of_permutation(w)
        return {"perm": str(w), "n": w.n, "multisegment": lam.to_json()}, f"{w} -> {lam}"
    if args.n is None:
        raise ValueError("--to-perm needs --n")
    q = weyl.zelevinsky_quiver(args.n)
    lam = strata.parse_multisegment(q, args.to_perm)
    w = weyl.zelevinsky_permutation(lam)
    return {"perm": str(w), "n": w.n, "multisegment": lam.to_json()}, f"{lam} -> {w}"


def cmd_ks(args):
    if args.action == "count":
        fn = ks.count_points_bruteforce if args.method == "brute" else ks.count_points_stratified
        n = fn(args.q)
        return {"q": args.q, "count": n, "method": args.method}, f"|S(F_{args.q})| = {n}"
    deadline = None if args.budget is None else time.monotonic() + args.budget
    try:
        est = ks.dimension_estimate(args.samples, args.holdout, deadline)
    except TimeoutError as exc:
        return {"budget_exhausted": True, "reason": str(exc)}, str(exc), EXIT_BUDGET
    return est.to_json(), f"degree {est.degree}"


def cmd_bmp(args):
    report = bmp.torsion_probe(
        args.y,
        args.w,
        args.p,
        budget=args.budget,
        max_unknowns=args.max_unknowns,
        threads=args.threads,
    )
    msg = (
        f"[{args.y}, {args.w}]: {report.interval_stats['vertices']} vertices, "
        f"{report.interval_stats['edges']} edges; verdict {report.verdict}"
    )
    code = EXIT_BUDGET if report.budget_exhausted else EXIT_OK
    return report.to_json(), msg, code


def cmd_decomp(args):
    d = grothendieck.char0_decomposition_matrix(args.n)
    return d.to_json(), f"{len(d.labels)} x {len(d.labels)} matrix"


def _labelled(text: str, q, dim) -> grothendieck.LabelledStratum:
    if text == "pi":
        return grothendieck.LabelledStratum("π", strata.ks_pi())
    if text == "sigma":
        return grothendieck.LabelledStratum("σ", strata.ks_sigma())
    if "=" not in text:
        raise ValueError(f"label {text!r} must be 'pi', 'sigma' or NAME=MULTISEGMENT")
    name, ms = text.split("=", 1)
    lam = strata.parse_multisegment(q, ms)
    if lam.dim != tuple(dim):
        raise ValueError(f"{ms} has dimension vector {lam.dim}, not {tuple(dim)}")
    return grothendieck.LabelledStratum(name, lam)


def cmd_predict(args):
    data = json.loads(Path(args.report).read_text())
    report = bmp.ComparisonReport.from_json(data)
    q = _load(args)
    lower = _labelled(args.lower, q, args.dim)
    upper = _labelled(args.upper, q, args.dim)
    out = grothendieck.predicted_modular_identity(report, lower, upper)
    return out, out["decomposition"]


COMMANDS = {
    "roots": cmd_roots,
    "strata": cmd_strata,
    "seqcount": cmd_seqcount,
    "klpoly": cmd_klpoly,
    "zelevinsky": cmd_zelevinsky,
    "ks": cmd_ks,
    "bmp": cmd_bmp,
    "decomp-matrix": cmd_decomp,
    "predict-identity": cmd_predict,
}


def schema_path(command: str, action: str | None = None) -> Path:
    """Schema file describing the JSON written by ``command [action]``."""
    name = command if action is None else f"{command}-{action}"
    if command == "bmp":
        name = "bmp-probe"
    return SCHEMA_DIR / f"{name}.json"


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        RunConfig(
            args.command,
            quiver_path=getattr(args, "quiver", None),
            dim=getattr(args, "dim", None),
            p=getattr(args, "p", None),
            budget=getattr(args, "budget", None),
            output=args.output,
            threads=args.threads,
        )
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    doc, msg, *rest = result
    code = rest[0] if rest else EXIT_OK
    text = dumps(doc)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(msg, file=sys.stderr)
    if code == EXIT_BUDGET:
        print("budget exhausted; partial report written", file=sys.stderr)
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
