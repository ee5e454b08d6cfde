"""Command-line front end: ``uniserial {cg,soc,factorize,hom,explore-s1}``.

Exit codes: 0 ok, 2 bad arguments / invalid spec / dimension cap,
3 oracle and closed form disagree, 4 graded socle of a non-bigraded module,
5 factor recovery asked for m = 2, 6 no factor pair fits the signature.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .clebsch import DomainError, cg2
from .exact import format_scalar, simplify
from .factorize import (
    AmbiguousM2,
    MultipleCandidates,
    NoCandidate,
    SocleSignature,
    recover,
    signature_of,
)
from .gmod import SpecInvalid, UniserialSpec, build, parse_spec
from .socle import NotBigraded, graded_socle, intertwiner_dim, socle_report, tensor
from .theory import ZTypeSpec, hom_dim, s1_conjecture, soc_closed, soc_series_closed

__all__ = ["main", "build_parser", "RunConfig", "explore_s1", "S1Row", "max_dim"]

EXIT_OK, EXIT_ARGS, EXIT_DISAGREE, EXIT_NOT_BIGRADED, EXIT_M2, EXIT_NO_CANDIDATE = 0, 2, 3, 4, 5, 6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m: Optional[int] = None
    specs: tuple = ()
    method: str = "oracle"
    output: str = "json"
    workers: int = 1

    def __post_init__(self):
        if self.method not in ("oracle", "closed", "both"):
            raise UsageError(f"unknown method {self.method!r}")
        if self.method != "oracle":
            for s in self.specs:
                if not s.is_ztype:
                    raise UsageError(f"method {self.method} needs type-Z specs, got {s}")


def max_dim() -> int:
    raw = os.environ.get("UNISERIAL_MAX_DIM", "5000")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"UNISERIAL_MAX_DIM must be an integer, got {raw!r}") from None


def _check_dim(T) -> None:
    cap = max_dim()
    if T.dim > cap:
        raise UsageError(f"tensor dimension {T.dim} exceeds UNISERIAL_MAX_DIM={cap}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _ms(c: Counter) -> list[int]:
    return sorted(c.elements())


# ---------------------------------------------------------------------------
# cg


def cmd_cg(args) -> int:
    try:
        vals = [int(x) for x in args.values]
    except ValueError:
        raise UsageError("cg takes six doubled integers: 2j1 2m1 2j2 2m2 2j3 2m3") from None
    try:
        print(format_scalar(cg2(*vals)))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK


# ---------------------------------------------------------------------------
# soc


def _witness_json(w) -> dict:
    items = sorted(w.q_unitary.items())
    lead = next((x for _, x in items if x), None)
    q = {}
    for B, x in items:
        key = ",".join(map(str, B)) if isinstance(B, tuple) else str(B)
        q[key] = format_scalar(simplify(x / lead)) if lead is not None else "0"
    return {"weight": w.weight, "degree": w.degree, "q": q}


def _closed_report(V: ZTypeSpec, W: ZTypeSpec, series: bool, graded: bool) -> dict:
    pred = soc_closed(V, W)
    out = {"socle": _ms(pred.total)}
    if graded:
        out["graded"] = {str(t): _ms(c) for t, c in sorted(pred.graded.items())}
    if series:
        ser = soc_series_closed(V, W)
        out["series"] = None if ser is None else [_ms(c) for c in ser]
    return out


def cmd_soc(args) -> int:
    left, right = parse_spec(args.left, args.m), parse_spec(args.right, args.m)
    cfg = RunConfig("soc", args.m, (left, right), args.method)
    out = {"m": args.m, "left_spec": str(left), "right_spec": str(right), "method": cfg.method,
           "conjectural": False}
    oracle = closed = None
    if cfg.method in ("oracle", "both"):
        T = tensor(build(left), build(right))
        _check_dim(T)
        rep = socle_report(T, series=args.series, graded=args.graded, witnesses=args.witnesses)
        oracle = rep.to_json()
        if args.witnesses:
            oracle["witnesses"] = [_witness_json(w) for w in rep.witnesses]
    if cfg.method in ("closed", "both"):
        closed = _closed_report(ZTypeSpec.from_spec(left), ZTypeSpec.from_spec(right), args.series, args.graded)
    code = EXIT_OK
    if cfg.method == "both":
        agree = oracle["socle"] == closed["socle"]
        if args.graded:
            agree = agree and oracle["graded"] == closed["graded"]
        if args.series and closed["series"] is not None:
            agree = agree and oracle["series"] == closed["series"]
        out.update(oracle)
        out["closed"] = closed
        out["agreement"] = agree
        if not agree:
            code = EXIT_DISAGREE
    else:
        out.update(oracle if oracle is not None else closed)
    print(_dump(out))
    return code


# ---------------------------------------------------------------------------
# factorize


def _weights(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _signature(args) -> SocleSignature:
    if args.signature:
        with open(args.signature) if args.signature != "-" else sys.stdin as fh:
            try:
                return SocleSignature.from_json(json.load(fh))
            except (KeyError, ValueError, TypeError) as exc:
                raise UsageError(f"bad signature JSON: {exc}") from None
    if args.left or args.right:
        if not (args.left and args.right and args.m):
            raise UsageError("--left and --right need each other and --m")
        left, right = parse_spec(args.left, args.m), parse_spec(args.right, args.m)
        T = tensor(build(left), build(right))
        _check_dim(T)
        return signature_of(T)
    if args.m is None or args.soc is None or args.soc_dual is None or args.lam is None:
        raise UsageError("give --signature, --left/--right, or all of --m --soc --soc-dual --lambda")
    try:
        return SocleSignature(args.m, args.lam, _weights(args.soc), _weights(args.soc_dual))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_factorize(args) -> int:
    sig = _signature(args)
    try:
        res = recover(sig)
    except AmbiguousM2 as exc:
        print(f"ambiguous: {exc}", file=sys.stderr)
        if exc.candidates:
            print("validated candidates: " + "; ".join(str(c) for c in exc.candidates), file=sys.stderr)
        return EXIT_M2
    except NoCandidate as exc:
        print(f"no candidate: {exc}", file=sys.stderr)
        return EXIT_NO_CANDIDATE
    except MultipleCandidates as exc:
        print(f"uniqueness violated: {exc}: " + "; ".join(str(c) for c in exc.candidates), file=sys.stderr)
        return EXIT_DISAGREE
    if args.json:
        print(_dump({"signature": sig.to_json(), **res.to_json()}))
    else:
        print(str(res))
    return EXIT_OK


# ---------------------------------------------------------------------------
# hom


def cmd_hom(args) -> int:
    V, W = parse_spec(args.source, args.m), parse_spec(args.target, args.m)
    cfg = RunConfig("hom", args.m, (V, W), args.method)
    vals = {}
    if cfg.method in ("oracle", "both"):
        MV, MW = build(V), build(W)
        if MV.dim * MW.dim > max_dim():
            raise UsageError(f"Hom dimension {MV.dim * MW.dim} exceeds UNISERIAL_MAX_DIM={max_dim()}")
        vals["oracle"] = intertwiner_dim(MV, MW)
    if cfg.method in ("closed", "both"):
        vals["closed"] = hom_dim(ZTypeSpec.from_spec(V), ZTypeSpec.from_spec(W))
    if cfg.method == "both":
        if vals["oracle"] != vals["closed"]:
            print(_dump({"m": args.m, "from": str(V), "to": str(W), **vals, "agreement": False}))
            return EXIT_DISAGREE
    print(next(iter(vals.values())))
    return EXIT_OK


# ---------------------------------------------------------------------------
# explore-s1


@dataclass
class S1Row:
    m: int
    a: int
    b: int
    c: int
    d: int
    oracle: str
    conjecture: str
    boundary: bool

    @property
    def match(self) -> bool:
        return self.oracle == self.conjecture

    def cells(self) -> list:
        conj = self.conjecture + (";boundary" if self.boundary else "")
        return [self.m, self.a, self.b, self.c, self.d, self.oracle, conj, str(self.match).lower()]


def _s1_text(c: Counter) -> str:
    ws = sorted(c.elements(), reverse=True)
    return "+".join(f"V({w})" for w in ws) if ws else "0"


def length_two(m: int, bound: int) -> list[tuple[int, int]]:
    """Layer pairs ``[a, b]`` (socle first) of all length-two uniserials with ``a, b <= bound``."""
    out = []
    for a in range(bound + 1):
        for b in range(bound + 1):
            try:
                UniserialSpec("E", m, (a, b))
            except SpecInvalid:
                continue
            out.append((a, b))
    return out


def _s1_row(item) -> S1Row:
    m, (a, b), (c, d) = item
    T = tensor(build(UniserialSpec("E", m, (a, b))), build(UniserialSpec("E", m, (c, d))))
    oracle = graded_socle(T)[1]
    conj = s1_conjecture((a, b), (c, d), m)
    text = "0" if conj.weight is None else f"V({conj.weight})"
    return S1Row(m, a, b, c, d, _s1_text(oracle), text, conj.boundary)


def explore_s1(m: int, bound: Optional[int] = None, workers: int = 1) -> list[S1Row]:
    """Oracle ``S_1`` against the conjectured case list, over ordered length-two pairs."""
    bound = 2 * m if bound is None else bound
    pairs = length_two(m, bound)
    items = [(m, p, q) for p in pairs for q in pairs if p[0] < q[0] or (p[0] == q[0] and p[1] <= q[1])]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_s1_row, items, chunksize=16))
    else:
        rows = [_s1_row(it) for it in items]
    return sorted(rows, key=lambda r: (r.m, r.a, r.b, r.c, r.d))


def write_s1_csv(rows: list[S1Row], fh) -> dict:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["m", "a", "b", "c", "d", "oracle_S1", "conjecture_S1", "match"])
    for r in rows:
        w.writerow(r.cells())
    summary = {
        "rows": len(rows),
        "matches": sum(r.match for r in rows),
        "mismatches": sum(not r.match for r in rows),
        "boundary": sum(r.boundary for r in rows),
    }
    w.writerow(["summary", "", "", "", "", f"rows={summary['rows']}",
                f"boundary={summary['boundary']}", f"mismatches={summary['mismatches']}"])
    return summary


def cmd_explore(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be positive")
    rows = explore_s1(args.m, args.max, args.workers)
    if args.out == "-":
        summary = write_s1_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            summary = write_s1_csv(rows, fh)
    print(_dump({"m": args.m, "conjectural": True, **summary}), file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uniserial", description="Uniserial modules of sl(2) ⋉ V(m): socles, factors, intertwiners.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("cg", help="Clebsch-Gordan coefficient from doubled arguments")
    q.add_argument("values", nargs=6, metavar="2j", help="2j1 2m1 2j2 2m2 2j3 2m3")
    q.set_defaults(func=cmd_cg)

    q = sub.add_parser("soc", help="socle of a tensor product of two uniserials")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--method", choices=["oracle", "closed", "both"], default="oracle")
    q.add_argument("--series", action="store_true", help="full socle series")
    q.add_argument("--graded", action="store_true", help="split the socle by total layer degree")
    q.add_argument("--witnesses", action="store_true", help="include highest-weight vectors")
    q.set_defaults(func=cmd_soc)

    q = sub.add_parser("factorize", help="recover type-Z factors from socle data")
    q.add_argument("--m", type=int)
    q.add_argument("--soc", help="highest weights of soc(U), comma separated")
    q.add_argument("--soc-dual", dest="soc_dual", help="highest weights of soc(U*), comma separated")
    q.add_argument("--lambda", dest="lam", type=int, help="highest weight of U")
    q.add_argument("--signature", help="signature JSON file ('-' for stdin)")
    q.add_argument("--left", help="compute the signature from a spec pair instead")
    q.add_argument("--right")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_factorize)

    q = sub.add_parser("hom", help="dimension of Hom between two uniserials")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--from", dest="source", required=True)
    q.add_argument("--to", dest="target", required=True)
    q.add_argument("--method", choices=["oracle", "closed", "both"], default="oracle")
    q.set_defaults(func=cmd_hom)

    q = sub.add_parser("explore-s1", help="compare S_1 of length-two pairs with the conjectured list")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--max", type=int, default=None, help="parameter bound (default 2m)")
    q.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(func=cmd_explore)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, SpecInvalid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except NotBigraded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_BIGRADED


if __name__ == "__main__":
    sys.exit(main())
