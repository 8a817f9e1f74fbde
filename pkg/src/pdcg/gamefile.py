"""Game files.

Two syntaxes describe the same record. The line-oriented one::

    # comment
    players 3
    kind complete          # optional: complete | incomplete
    {1} 1
    {1,2} 4/3
    {} 0                   # optional, always 0

and a JSON object ``{"players": 3, "kind": "complete", "entries":
[{"coalition": [1, 2], "value": "4/3"}, ...]}``. Values are integers or
``p/q`` strings; output always uses lowest terms and omits ``/1``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import PdcgError
from .game import Coalition, Game, canonical_key, canonical_order, coalition, fmt, members
from .incomplete import IncompleteGame

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_ENTRY = re.compile(r"^(\s*)\{([^}]*)\}(\s+)(\S+)\s*$")


class ParseError(PdcgError):
    def __init__(self, message, line=None, column=None, source="<input>"):
        self.line = line
        self.column = column
        self.source = source
        where = source if line is None else f"{source}:{line}:{column}"
        super().__init__(f"{where}: {message}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational number: {text!r}")
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class GameFile:
    players: int
    entries: dict   # coalition bitmask -> Fraction, empty coalition excluded
    kind: Optional[str] = None
    had_empty: bool = False

    @property
    def complete(self) -> bool:
        return len(self.entries) == (1 << self.players) - 1

    def to_game(self) -> Game:
        if not self.complete:
            missing = next(S for S in canonical_order(self.players)[1:] if S not in self.entries)
            raise ParseError(f"complete game expected; coalition {fmt(missing)} is missing")
        return Game.from_mapping(self.players, self.entries)

    def to_incomplete(self) -> IncompleteGame:
        return IncompleteGame(self.players, dict(self.entries))


def _check_kind(gf: GameFile, err):
    if gf.kind not in (None, "complete", "incomplete"):
        raise err(f"unknown kind {gf.kind!r}")
    if gf.kind == "complete" and not gf.complete:
        missing = next(S for S in canonical_order(gf.players)[1:] if S not in gf.entries)
        raise err(f"kind is complete but coalition {fmt(missing)} is missing")


def parse_text(text: str, source: str = "<input>") -> GameFile:
    players = None
    kind = None
    entries = {}
    had_empty = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        head = line.split()
        if head[0] == "players":
            if len(head) != 2 or not head[1].isdigit():
                raise ParseError("expected 'players <n>'", lineno, col0, source)
            if players is not None:
                raise ParseError("duplicate 'players' line", lineno, col0, source)
            players = int(head[1])
            continue
        if head[0] == "kind":
            if len(head) != 2:
                raise ParseError("expected 'kind complete|incomplete'", lineno, col0, source)
            kind = head[1]
            if kind not in ("complete", "incomplete"):
                raise ParseError(f"unknown kind {kind!r}", lineno, line.index(kind) + 1, source)
            continue
        m = _ENTRY.match(line)
        if not m:
            raise ParseError("expected '{i,j,...} <value>'", lineno, col0, source)
        if players is None:
            raise ParseError("'players <n>' must come before the entries", lineno, col0, source)
        body_col = len(m.group(1)) + 2
        members_ = []
        for part in m.group(2).split(","):
            tok = part.strip()
            if not tok and m.group(2).strip() == "":
                break
            if not tok.isdigit() or not 1 <= int(tok) <= players:
                raise ParseError(f"bad player {tok!r} (players are 1..{players})", lineno, body_col, source)
            members_.append(int(tok))
        if len(set(members_)) != len(members_):
            raise ParseError("player listed twice in a coalition", lineno, body_col, source)
        value_col = m.start(4) + 1
        try:
            value = parse_rational(m.group(4))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, value_col, source) from None
        S = coalition(members_)
        if S == 0:
            if value != 0:
                raise ParseError("the empty coalition must have value 0", lineno, value_col, source)
            if had_empty:
                raise ParseError("duplicate coalition {}", lineno, col0, source)
            had_empty = True
            continue
        if S in entries:
            raise ParseError(f"duplicate coalition {fmt(S)}", lineno, col0, source)
        entries[S] = value
    if players is None:
        raise ParseError("missing 'players <n>' line", source=source)
    gf = GameFile(players, entries, kind, had_empty)
    _check_kind(gf, lambda msg: ParseError(msg, source=source))
    return gf


def from_json_object(obj, source: str = "<input>") -> GameFile:
    def err(msg):
        return ParseError(msg, source=source)

    if not isinstance(obj, dict) or not isinstance(obj.get("players"), int) or isinstance(obj.get("players"), bool):
        raise err("expected an object with an integer 'players' field")
    players = obj["players"]
    entries = {}
    had_empty = False
    for idx, e in enumerate(obj.get("entries", [])):
        if not isinstance(e, dict) or not isinstance(e.get("coalition"), list):
            raise err(f"entry {idx}: expected {{'coalition': [...], 'value': ...}}")
        mem = e["coalition"]
        if any(not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= players for i in mem):
            raise err(f"entry {idx}: players must be integers in 1..{players}")
        if len(set(mem)) != len(mem):
            raise err(f"entry {idx}: player listed twice")
        raw = e.get("value")
        if isinstance(raw, bool) or not isinstance(raw, (int, str)):
            raise err(f"entry {idx}: value must be an integer or a 'p/q' string")
        try:
            value = parse_rational(str(raw))
        except ValueError as exc:
            raise err(f"entry {idx}: {exc}") from None
        S = coalition(mem)
        if S == 0:
            if value != 0:
                raise err("the empty coalition must have value 0")
            had_empty = True
            continue
        if S in entries:
            raise err(f"entry {idx}: duplicate coalition {fmt(S)}")
        entries[S] = value
    gf = GameFile(players, entries, obj.get("kind"), had_empty)
    _check_kind(gf, err)
    return gf


def parse(text: str, source: str = "<input>") -> GameFile:
    stripped = text.lstrip()
    if source.endswith(".json") or stripped.startswith('{"') or stripped.startswith("{\n"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
        return from_json_object(obj, source)
    return parse_text(text, source)


def load(path: str) -> GameFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), path)


# -- writing ----------------------------------------------------------------

def _entries_of(values: dict) -> list[tuple[Coalition, Fraction]]:
    return sorted(((S, v) for S, v in values.items() if S), key=lambda it: canonical_key(it[0]))


def _as_mapping(obj) -> tuple[int, dict, str]:
    if isinstance(obj, Game):
        return obj.n, {S: obj[S] for S in range(1, 1 << obj.n)}, "complete"
    if isinstance(obj, IncompleteGame):
        return obj.n, dict(obj.values), "incomplete"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_text(obj) -> str:
    n, values, kind = _as_mapping(obj)
    lines = [f"players {n}", f"kind {kind}"]
    lines += [f"{fmt(S)} {format_rational(v)}" for S, v in _entries_of(values)]
    return "\n".join(lines) + "\n"


def to_json_object(obj) -> dict:
    n, values, kind = _as_mapping(obj)
    return {
        "players": n,
        "kind": kind,
        "entries": [{"coalition": list(members(S)), "value": format_rational(v)} for S, v in _entries_of(values)],
    }
