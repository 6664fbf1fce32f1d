"""Reading and writing profiles, margin edge lists and violation witnesses.

Profile text format::

    candidates: a,b,c,d,e
    69: d | a | c | e | b
    3: a,b | c | d,e

Blank lines and ``#`` comments are ignored. The JSON form is
``{"candidates": [...], "ballots": [{"count": k, "tiers": [[...], ...]}]}``.
A witness file is a profile file followed by an optional ``delta:`` section in
the same ballot syntax and ``key: value`` metadata lines before it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .axioms import ViolationWitness
from .margins import MarginMatrix
from .profiles import Profile, ProfileError, Ranking


class FormatError(ValueError):
    """Input that does not parse; the message names the source and line."""

    def __init__(self, source: str, line: int | None, msg: str):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {msg}")
        self.source = source
        self.line = line


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _parse_ballot(line: str, no: int, source: str) -> tuple[int, Ranking]:
    head, sep, body = line.partition(":")
    if not sep:
        raise FormatError(source, no, f"expected 'COUNT: tier | tier ...', got {line!r}")
    try:
        count = int(head)
    except ValueError:
        raise FormatError(source, no, f"count {head.strip()!r} is not an integer") from None
    if count < 0:
        raise FormatError(source, no, "negative count")
    body = body.strip()
    if not body:
        raise FormatError(source, no, "empty ranking")
    try:
        tiers = tuple(tuple(c.strip() for c in t.split(",") if c.strip()) for t in body.split("|"))
        if "|" not in body and "," not in body:
            r = Ranking.parse(body)
        else:
            r = Ranking(tiers)
    except ProfileError as e:
        raise FormatError(source, no, str(e)) from None
    return count, r


def _candidates_line(line: str, no: int, source: str) -> tuple[str, ...]:
    key, _, rest = line.partition(":")
    if key.strip().lower() != "candidates":
        raise FormatError(source, no, "first line must be 'candidates: a,b,...'")
    cands = tuple(c.strip() for c in rest.split(",") if c.strip())
    if not cands:
        raise FormatError(source, no, "empty candidate list")
    if len(set(cands)) != len(cands):
        raise FormatError(source, no, "duplicate candidate")
    return cands


def _build(cands, entries, source) -> Profile:
    for no, _, r in entries:
        if r.candidates != frozenset(cands):
            raise FormatError(source, no, f"ranking {r} does not rank exactly {','.join(cands)}")
    try:
        return Profile.from_counts(cands, [(k, r) for _, k, r in entries])
    except ProfileError as e:
        raise FormatError(source, None, str(e)) from None


def parse_profile_text(text: str, source: str = "<text>") -> Profile:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError(source, None, "empty profile")
    cands = _candidates_line(lines[0][1], lines[0][0], source)
    entries = [(no, *_parse_ballot(line, no, source)) for no, line in lines[1:]]
    return _build(cands, entries, source)


def parse_profile_json(text: str, source: str = "<json>") -> Profile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(source, e.lineno, e.msg) from None
    if not isinstance(doc, dict) or "candidates" not in doc or "ballots" not in doc:
        raise FormatError(source, None, "expected an object with 'candidates' and 'ballots'")
    cands = tuple(doc["candidates"])
    entries = []
    for i, b in enumerate(doc["ballots"]):
        try:
            entries.append((None, int(b["count"]), Ranking(tuple(tuple(t) for t in b["tiers"]))))
        except (KeyError, TypeError, ValueError, ProfileError) as e:
            raise FormatError(source, None, f"ballot {i}: {e}") from None
    for i, (_, k, _) in enumerate(entries):
        if k < 0:
            raise FormatError(source, None, f"ballot {i}: negative count")
    return _build(cands, entries, source)


def read_profile(path: str | Path) -> Profile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(str(path), None, e.strerror or str(e)) from None
    if text.lstrip().startswith("{"):
        return parse_profile_json(text, str(path))
    return parse_profile_text(text, str(path))


def format_ranking(r: Ranking) -> str:
    return " | ".join(",".join(t) for t in r.tiers)


def profile_to_text(p: Profile) -> str:
    lines = [f"candidates: {','.join(p.candidates)}"]
    lines += [f"{k}: {format_ranking(r)}" for r, k in _display_order(p)]
    return "\n".join(lines) + "\n"


def _display_order(p: Profile):
    return sorted(p.ballots, key=lambda rk: (-rk[1], rk[0]))


def profile_to_json(p: Profile) -> dict:
    return {
        "candidates": list(p.candidates),
        "ballots": [{"count": k, "tiers": [list(t) for t in r.tiers]} for r, k in _display_order(p)],
    }


# margin edge lists ---------------------------------------------------------------


def parse_edge_list(text: str, source: str = "<edges>", candidates=None) -> MarginMatrix:
    """``x y weight`` per line (weight may be negative or zero).

    An optional ``candidates:`` header adds candidates that have no edges.
    """
    edges = {}
    cands = list(candidates) if candidates else []
    for no, line in _content_lines(text):
        if line.lower().startswith("candidates"):
            cands = list(_candidates_line(line, no, source))
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(source, no, f"expected 'x y weight', got {line!r}")
        x, y, w = parts
        try:
            w = int(w)
        except ValueError:
            raise FormatError(source, no, f"weight {w!r} is not an integer") from None
        if x == y:
            raise FormatError(source, no, "self-loop")
        if (x, y) in edges or (y, x) in edges:
            raise FormatError(source, no, f"pair {x},{y} given twice")
        edges[(x, y)] = w
        cands += [c for c in (x, y) if c not in cands]
    if not cands:
        raise FormatError(source, None, "no edges")
    try:
        return MarginMatrix.from_edges(tuple(cands), edges)
    except (ValueError, KeyError) as e:
        raise FormatError(source, None, str(e)) from None


def read_edge_list(path: str | Path) -> MarginMatrix:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(str(path), None, e.strerror or str(e)) from None
    return parse_edge_list(text, str(path))


def edge_list_text(m: MarginMatrix) -> str:
    return "".join(f"{x} {y} {w}\n" for (x, y), w in sorted(m.edges().items()))


def matrix_text(m: MarginMatrix) -> str:
    width = max(4, max(len(str(int(v))) for v in m.m.ravel()) + 1)
    head = " " * 3 + "".join(f"{c:>{width}}" for c in m.candidates)
    rows = [f"{c:<3}" + "".join(f"{int(v):>{width}}" for v in m.m[i]) for i, c in enumerate(m.candidates)]
    return "\n".join([head, *rows]) + "\n"


def matrix_to_json(m: MarginMatrix) -> dict:
    return {
        "candidates": list(m.candidates),
        "matrix": np.asarray(m.m).tolist(),
        "edges": [[x, y, w] for (x, y), w in sorted(m.edges().items())],
    }


# witnesses ------------------------------------------------------------------------

_META = ("axiom", "method", "focus", "removed", "clones", "mode", "n", "before", "after")


def witness_to_text(w: ViolationWitness) -> str:
    meta = {
        "axiom": w.axiom,
        "method": w.method,
        "focus": w.focus,
        "removed": w.removed,
        "clones": ",".join(sorted(w.clones)) if w.clones else None,
        "mode": w.mode,
        "n": w.n,
        "before": ",".join(sorted(w.before)),
        "after": ",".join(sorted(w.after)),
    }
    lines = [f"# {k}: {v}" for k, v in meta.items() if v is not None]
    out = "\n".join(lines) + "\n" + profile_to_text(w.base)
    if w.delta is not None:
        out += "delta:\n" + "".join(f"{k}: {format_ranking(r)}\n" for r, k in _display_order(w.delta))
    return out


def split_delta_section(text: str) -> tuple[str, str | None, int]:
    """Split at a ``delta:`` line; returns (profile part, delta part, delta line offset)."""
    lines = text.splitlines()
    for i, raw in enumerate(lines):
        if raw.split("#", 1)[0].strip().lower() == "delta:":
            return "\n".join(lines[:i]), "\n".join(lines[i + 1 :]), i + 1
    return text, None, 0


def parse_delta(text: str, candidates, source: str = "<delta>", offset: int = 0) -> list[tuple[int, Ranking]]:
    """Ballot lines (no header) checked against ``candidates``."""
    out = []
    for no, line in _content_lines(text):
        if line.lower().startswith("candidates"):
            continue
        k, r = _parse_ballot(line, no + offset, source)
        if r.candidates != frozenset(candidates):
            raise FormatError(source, no + offset, f"ranking {r} does not rank exactly {','.join(candidates)}")
        if k == 0:
            continue
        out.append((k, r))
    return out


def read_witness(path: str | Path) -> tuple[Profile, list[tuple[int, Ranking]], dict]:
    """A profile file with optional delta section; metadata comes from ``# key: value`` lines."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(str(path), None, e.strerror or str(e)) from None
    head, delta, offset = split_delta_section(text)
    meta = {}
    for raw in head.splitlines():
        s = raw.strip()
        if s.startswith("#") and ":" in s:
            k, _, v = s[1:].partition(":")
            if k.strip() in _META:
                meta[k.strip()] = v.strip()
    p = parse_profile_text(head, str(path))
    ballots = parse_delta(delta, p.candidates, str(path), offset) if delta is not None else []
    return p, ballots, meta
