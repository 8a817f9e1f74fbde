"""Command-line front end.

Exit codes:

    0  success
    1  any other error (bad arguments, size cap, non-member decomposition, ...)
    2  game file could not be parsed
    3  not extendable while --extremes (or --bounds/--decompose for symconv) was requested
    4  incomplete game is not partially symmetric
    5  extension set unbounded while --bounds/--extremes was requested
    6  interval bounds cross
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import positive as pos
from . import symconvex as sc
from .errors import (
    CrossedBounds,
    Infeasible,
    NotExtendable,
    NotSymmetric,
    PdcgError,
    StructureMismatch,
    Unbounded,
)
from .game import Game, canonical_order, classify, fmt, inverse_mobius, midpoint_check, reduce_symmetric
from .gamefile import ParseError, format_rational as fr, load, to_json_object
from .incomplete import IncompleteGame, interval_hull, reduce_partially_symmetric

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_NOT_EXTENDABLE = 3
EXIT_NOT_SYMMETRIC = 4
EXIT_UNBOUNDED = 5
EXIT_CROSSED = 6


class Report:
    """Collects human lines and the machine record side by side."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = []
        self.data: dict = {}

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def render(self) -> str:
        if self.machine:
            return json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        return "\n".join(self.lines) + "\n"


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _load_complete(path: str) -> Game:
    return load(path).to_game()


def _load_incomplete(path: str) -> IncompleteGame:
    gf = load(path)
    if not gf.had_empty:
        _warn(f"{path}: empty coalition not listed; inserted with value 0")
    return gf.to_incomplete()


def _sized(n: int, s) -> Game:
    return Game(n, tuple(s[bin(S).count("1")] for S in range(1 << n)))


def _table(header, rows) -> list[str]:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]


def _bound(x) -> str:
    return "inf" if x is None else fr(x)


# -- classify ---------------------------------------------------------------

def _describe_witness(g: Game, name: str, w) -> str:
    if name == "monotonic":
        S, T = w
        return f"v({fmt(S)}) = {fr(g[S])} > v({fmt(T)}) = {fr(g[T])}"
    if name == "superadditive":
        S, T = w
        return f"v({fmt(S)}) + v({fmt(T)}) = {fr(g[S] + g[T])} > v({fmt(S | T)}) = {fr(g[S | T])}"
    if name == "convex":
        i, S, T = w
        bit = 1 << (i - 1)
        return (f"player {i} adds {fr(g[S | bit] - g[S])} to {fmt(S)} "
                f"but {fr(g[T | bit] - g[T])} to {fmt(T)}")
    if name == "positive":
        T, d = w
        return f"d({fmt(T)}) = {fr(d)}"
    S, T = w
    return f"v({fmt(S)}) = {fr(g[S])} != v({fmt(T)}) = {fr(g[T])}"


def cmd_classify(args, rep: Report) -> int:
    g = _load_complete(args.game)
    report = classify(g)
    flags = {}
    witnesses = {}
    for name in ("monotonic", "superadditive", "convex", "positive", "symmetric"):
        ok = getattr(report, name)
        flags[name] = ok
        if ok:
            rep.say(f"{name}: yes")
        else:
            text = _describe_witness(g, name, report.witness[name])
            witnesses[name] = text
            rep.say(f"{name}: no ({text})")
    mid = midpoint_check(g)
    if mid is None:
        rep.say("midpoint: holds")
        mid_data = None
    else:
        S, i, j = mid
        lo, hi = S & ~(1 << (i - 1)), S | (1 << (j - 1))
        rep.say(f"midpoint: fails at S={fmt(S)}, i={i}, j={j}: "
                f"({fr(g[lo])} + {fr(g[hi])})/2 < {fr(g[S])}")
        mid_data = {"S": fmt(S), "i": i, "j": j}
    rep.data = {"command": "classify", "flags": flags, "witnesses": witnesses,
                "midpoint_violation": mid_data, "game": to_json_object(g)}
    return EXIT_OK


# -- positive ---------------------------------------------------------------

def _route(inc: IncompleteGame):
    """Closed form for disjoint or down-closed K when it applies, else None."""
    for name, fn in (("disjoint", pos.pos_disjoint_case), ("down-closed", pos.pos_downclosed_case)):
        try:
            return name, fn(inc)
        except StructureMismatch:
            continue
        except NotExtendable:
            return name, None
    return "general", None


def _collection_text(coll) -> str:
    return ", ".join(f"d({fmt(T)}) = {fr(coll.dividends[T])}" for T in coll.support)


def _collection_data(coll, n) -> dict:
    return {
        "dividends": [{"coalition": fmt(T), "value": fr(coll.dividends[T])} for T in coll.support],
        "game": to_json_object(coll.game(n)),
    }


def _symmetric_section(inc: IncompleteGame, rep: Report) -> None:
    """Per-size bounds over symmetric positive extensions and the lower game's dividends."""
    r = reduce_partially_symmetric(inc)
    try:
        low = pos.lower_game_positivity_regression(r)
    except Infeasible:
        rep.say("symmetric: no symmetric positive extension")
        rep.data["symmetric"] = None
        return
    b = pos.sp_per_coalition_bounds(r)
    rep.say("symmetric bounds:")
    rows = [(m, fr(b.lower[m]), _bound(b.upper[m])) for m in range(r.n + 1)]
    rep.lines += ["  " + line for line in _table(["size", "lower", "upper"], rows)]
    rep.say("lower game size dividends: " + " ".join(fr(x) for x in low.size_dividends))
    if low.positive:
        rep.say("lower game positive: yes")
    else:
        m = low.negative_size
        rep.say(f"lower game positive: no (size {m} dividend {fr(low.size_dividends[m])})")
    rep.data["symmetric"] = {
        "lower": to_json_object(low.lower.expand()),
        "upper": [_bound(u) for u in b.upper],
        "size_dividends": [fr(x) for x in low.size_dividends],
        "lower_positive": low.positive,
    }


def cmd_positive(args, rep: Report) -> int:
    inc = _load_incomplete(args.game)
    n = inc.n
    verdict = pos.pos_extendable(inc)
    route, closed = _route(inc)
    rep.data = {"command": "positive", "route": route, "extendable": verdict.extendable}
    if closed is None and route != "general" and verdict.extendable:
        raise AssertionError("closed form and Farkas verdict disagree")
    rep.say("EXTENDABLE" if verdict.extendable else "NOT EXTENDABLE")
    rep.say(f"route: {route}")

    if args.certificate:
        if verdict.extendable:
            d = verdict.d
            rep.say("witness dividends:")
            for T in sorted(d.support(), key=lambda T: (bin(T).count("1"), T)):
                rep.say(f"  ({fmt(T)}, {fr(d[T])})")
            rep.data["witness"] = to_json_object(inverse_mobius(d))
        else:
            y = verdict.y
            rep.say("certificate y:")
            for S in inc.nonempty():
                rep.say(f"  ({fmt(S)}, {fr(y.get(S, 0))})")
            sums = [sum((y.get(S, 0) for S in inc.nonempty() if S & T == T), Fraction(0))
                    for T in range(1, 1 << n)]
            obj = sum((y.get(S, 0) * inc[S] for S in inc.nonempty()), Fraction(0))
            ok = pos.certificate_holds(inc, y)
            rep.say(f"dual rows: {len(sums)} checked, minimum {fr(min(sums))} >= 0")
            rep.say(f"objective: sum y(S) v(S) = {fr(obj)} <= -1")
            rep.say(f"certificate verified: {'yes' if ok else 'no'}")
            rep.data["certificate"] = [{"coalition": fmt(S), "value": fr(y.get(S, 0))}
                                       for S in inc.nonempty()]
            rep.data["certificate_objective"] = fr(obj)
            rep.data["certificate_verified"] = ok

    if args.bounds:
        if not verdict.extendable:
            rep.say("bounds: none (no positive extension)")
        else:
            if closed is not None:
                lower = closed.lower.values
                upper = closed.upper.values
                label = "closed form"
            else:
                env = pos.positive_envelope(inc, jobs=args.jobs)
                lower, upper = env.lower, env.upper
                label = "envelope"
            rep.say(f"bounds ({label}):")
            rows = [(fmt(S), fr(lower[S]), _bound(upper[S])) for S in canonical_order(n)]
            rep.lines += ["  " + line for line in _table(["coalition", "lower", "upper"], rows)]
            rep.data["bounds"] = {
                "kind": label,
                "lower": to_json_object(Game(n, lower)),
                "upper": to_json_object(IncompleteGame(n, {S: u for S, u in enumerate(upper) if u is not None})),
            }

    if args.symmetric:
        _symmetric_section(inc, rep)

    if args.extremes:
        if not verdict.extendable:
            return EXIT_NOT_EXTENDABLE
        if inc.grand not in inc:
            rep.say("extreme games: unbounded (v(N) unknown)")
            return EXIT_UNBOUNDED
        ext = closed.extremes if closed is not None else pos.pos_extreme_games(inc)
        rep.say(f"extreme games: {len(ext)}")
        for k, (coll, _) in enumerate(ext.items, start=1):
            rep.say(f"  {k}: {_collection_text(coll)}")
        rep.data["extremes"] = [_collection_data(coll, n) for coll, _ in ext.items]
    return EXIT_OK


# -- symconv ----------------------------------------------------------------

def cmd_symconv(args, rep: Report) -> int:
    inc = _load_incomplete(args.game)
    try:
        r = reduce_partially_symmetric(inc)
    except NotSymmetric as exc:
        rep.say(f"NOT PARTIALLY SYMMETRIC: v({exc.first}) != v({exc.second})")
        rep.data = {"command": "symconv", "partially_symmetric": False,
                    "witness": [exc.first, exc.second]}
        return EXIT_NOT_SYMMETRIC
    sig = r.sigma
    rep.data = {"command": "symconv", "partially_symmetric": True, "players": r.n,
                "known": {str(k): fr(v) for k, v in sig.items()}}
    rep.say("known sizes: " + ", ".join(f"sigma({k})={fr(v)}" for k, v in sig.items()))
    triple = sc.sc_violating_triple(r)
    wants = args.bounds or args.extremes or args.decompose
    if triple is not None:
        k1, k2, k3 = triple
        chord = sig[k1] + (sig[k3] - sig[k1]) * Fraction(k2 - k1, k3 - k1)
        rep.say(f"NOT EXTENDABLE: sigma({k2})={fr(sig[k2])} > {fr(chord)} via ({k1},{k2},{k3})")
        rep.data.update(extendable=False, triple=list(triple))
        return EXIT_NOT_EXTENDABLE if wants else EXIT_OK
    rep.say("EXTENDABLE")
    bounded = sc.sc_bounded(r)
    rep.say(f"bounded: {'yes' if bounded else 'no'}")
    rep.data.update(extendable=True, bounded=bounded)
    if (args.bounds or args.extremes) and not bounded:
        rep.say("the set of symmetric convex extensions is unbounded")
        return EXIT_UNBOUNDED

    if args.bounds:
        b = sc.sc_bounds(r)
        rep.say("bounds:")
        rows = [(k, fr(b.lower[k]), fr(b.upper[k])) for k in range(r.n + 1)]
        rep.lines += ["  " + line for line in _table(["size", "lower", "upper"], rows)]
        rep.data["bounds"] = {"lower": to_json_object(_sized(r.n, b.lower)),
                              "upper": to_json_object(_sized(r.n, b.upper))}

    if args.extremes:
        ext = sc.sc_extreme_games(r)
        rep.say(f"extreme games: {len(ext)}")
        rows = [(f"s^{k}", *map(fr, ext.extremes[k].s)) for k in sorted(ext.extremes)]
        rows.append(("upper", *map(fr, ext.upper_game.s)))
        rep.lines += ["  " + line for line in _table(["game", *map(str, range(r.n + 1))], rows)]
        rep.data["extremes"] = [{"name": f"s^{k}", "game": to_json_object(ext.extremes[k].expand())}
                                for k in sorted(ext.extremes)]
        rep.data["extremes"].append({"name": "upper", "game": to_json_object(ext.upper_game.expand())})

    if args.decompose:
        g = _load_complete(args.decompose)
        s = reduce_symmetric(g)
        dec = sc.sc_decompose(s, r)
        rep.say("decomposition:")
        for k in sorted(dec.gaps):
            rep.say(f"  alpha(s^{k})={fr(dec.gaps[k])}")
        rep.say(f"  alpha(upper)={fr(dec.upper)}")
        rep.data["decomposition"] = {**{f"s^{k}": fr(a) for k, a in dec.gaps.items()},
                                     "upper": fr(dec.upper)}
    return EXIT_OK


# -- interval ---------------------------------------------------------------

def cmd_interval(args, rep: Report) -> int:
    lo = _load_complete(args.lower)
    hi = _load_complete(args.upper)
    try:
        iv = interval_hull(lo, hi)
    except CrossedBounds as exc:
        rep.say(f"CROSSED BOUNDS at {exc.coalition}: lower {fr(exc.lower)} > upper {fr(exc.upper)}")
        rep.data = {"command": "interval", "crossed": {"coalition": exc.coalition,
                                                      "lower": fr(exc.lower), "upper": fr(exc.upper)}}
        return EXIT_CROSSED
    rows = [(fmt(S), f"[{fr(iv.lower[S])}, {fr(iv.upper[S])}]") for S in canonical_order(iv.n)]
    rep.lines += _table(["coalition", "interval"], rows)
    rep.data = {"command": "interval", "lower": to_json_object(lo), "upper": to_json_object(hi)}
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdcg", description="Exact tools for complete and incomplete cooperative games.")
    p.add_argument("--machine", action="store_true", help="emit deterministic JSON instead of text")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="class flags of a complete game")
    c.add_argument("game")
    c.set_defaults(func=cmd_classify)

    q = sub.add_parser("positive", help="positive extensions of an incomplete game")
    q.add_argument("game")
    q.add_argument("--certificate", action="store_true", help="print the witness or Farkas certificate")
    q.add_argument("--extremes", action="store_true", help="list the extreme games")
    q.add_argument("--bounds", action="store_true", help="per-coalition lower and upper values")
    q.add_argument("--symmetric", action="store_true",
                   help="per-size bounds over symmetric positive extensions (partially symmetric input)")
    q.add_argument("--jobs", type=int, default=1, help="worker processes for LP envelopes")
    q.set_defaults(func=cmd_positive)

    s = sub.add_parser("symconv", help="symmetric convex extensions of a partially symmetric game")
    s.add_argument("game")
    s.add_argument("--bounds", action="store_true", help="per-size lower and upper values")
    s.add_argument("--extremes", action="store_true", help="the upper game and one lower-touching game per unknown size")
    s.add_argument("--decompose", metavar="FILE", help="complete symmetric game to decompose")
    s.set_defaults(func=cmd_symconv)

    i = sub.add_parser("interval", help="interval game spanned by a lower and an upper game")
    i.add_argument("lower")
    i.add_argument("upper")
    i.set_defaults(func=cmd_interval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rep = Report(args.machine)
    try:
        code = args.func(args, rep)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Unbounded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except NotSymmetric as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SYMMETRIC
    except (PdcgError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    rep.data["exit_code"] = code
    sys.stdout.write(rep.render())
    return code
