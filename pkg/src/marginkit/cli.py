"""Command-line entry point.

Exit codes: 0 pass / found, 1 violation / not found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import axioms as ax
from .formats import (
    FormatError,
    edge_list_text,
    format_ranking,
    matrix_text,
    matrix_to_json,
    parse_delta,
    parse_profile_text,
    profile_to_json,
    profile_to_text,
    read_edge_list,
    read_profile,
    split_delta_section,
    witness_to_text,
)
from .margins import defensible_set, margin_matrix
from .methods import METHOD_IDS, TieExplosion, get_method
from .profiles import ProfileError, Ranking, enumerate_linear_orders, enumerate_weak_orders
from .replay import theorems as thm
from .search import CANDIDATE_LABELS, SEARCH_MODES, SearchBudget, hunt_violations, instance_violation
from .synth import DEFAULT_CAP, Infeasible, SynthesisError, mcgarvey_debord_realize, minimize_profile

JOBS_ENV = "MARGINKIT_JOBS"
DEFAULT_REPLAY_N = (1, 2)


class UsageError(Exception):
    pass


def _emit(args, structured: dict, text: str) -> None:
    if args.format == "structured":
        sys.stdout.write(json.dumps(structured, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _braces(xs) -> str:
    return "{" + ", ".join(sorted(xs)) + "}"


def _load_profile_with_delta(path: str):
    """A profile file whose optional ``delta:`` section is returned separately."""
    try:
        text = open(path).read()
    except OSError as e:
        raise FormatError(path, None, e.strerror or str(e)) from None
    if text.lstrip().startswith("{"):
        return read_profile(path), []
    head, delta, offset = split_delta_section(text)
    p = parse_profile_text(head, path)
    return p, (parse_delta(delta, p.candidates, path, offset) if delta is not None else [])


# verbs ------------------------------------------------------------------------


def cmd_verify_paper(args) -> int:
    theorems = thm.THEOREMS if args.theorem == "all" else (args.theorem,)
    modes = ("linear", "weak") if args.mode == "both" else (args.mode,)
    ns = (args.n,) if args.n is not None else DEFAULT_REPLAY_N
    reports = []
    for t in theorems:
        for mode in modes:
            for n in ns if t in ("thm2", "thm4") else (1,):
                reports.append(thm.run_theorem(t, mode, n))
    ok = all(r.passed for r in reports)
    text = "\n\n".join(r.to_text(timing=args.timing) for r in reports)
    text += f"\n\n{sum(r.passed for r in reports)}/{len(reports)} replays verified\n"
    _emit(args, {"passed": ok, "reports": [r.to_dict(timing=args.timing) for r in reports]}, text)
    return 0 if ok else 1


def cmd_margins(args) -> int:
    m = margin_matrix(read_profile(args.file))
    _emit(args, matrix_to_json(m), matrix_text(m) + "\n" + edge_list_text(m))
    return 0


def cmd_defensible(args) -> int:
    d = defensible_set(read_profile(args.file))
    _emit(args, {"defensible": sorted(d)}, _braces(d))
    return 0


def cmd_winners(args) -> int:
    p = read_profile(args.file)
    w = get_method(args.method)(p)
    _emit(args, {"method": args.method, "winners": sorted(w)}, _braces(w))
    return 0


_BALLOT_AXIOMS = {
    "positive-involvement": ax.check_positive_involvement_instance,
    "negative-involvement": ax.check_negative_involvement_instance,
    "strict-positive-involvement": ax.check_strict_positive_involvement,
    "positive-negative-involvement": ax.check_positive_negative_involvement,
    "bullet-vote-positive-involvement": ax.check_bullet_vote_positive_involvement,
}


def cmd_check_axiom(args) -> int:
    p, inline = _load_profile_with_delta(args.file)
    if args.delta:
        d_text = open(args.delta).read() if os.path.exists(args.delta) else None
        if d_text is None:
            raise FormatError(args.delta, None, "no such file")
        _, d_sec, off = split_delta_section(d_text)
        inline = parse_delta(d_sec if d_sec is not None else d_text, p.candidates, args.delta, off)
    axiom = args.axiom
    if axiom in _BALLOT_AXIOMS and inline:
        verdict = ax.PASS
        for _, r in inline:
            try:
                verdict = _BALLOT_AXIOMS[axiom](args.method, p, r)
            except ProfileError as e:
                raise UsageError(str(e)) from None
            if not verdict:
                break
    elif axiom == "independence-of-clones" and args.clones:
        if not args.remove:
            raise UsageError("--remove is required with --clones")
        try:
            verdict = ax.check_independence_of_clones(args.method, p, args.remove, args.clones.split(","))
        except ProfileError as e:
            raise UsageError(str(e)) from None
    else:
        budget = SearchBudget(delta_mode=args.mode, n=args.n)
        verdict = instance_violation(args.method, axiom, p, budget)
        if verdict is None:
            verdict = ax.PASS
    status = "pass (vacuous)" if verdict and verdict.vacuous else ("pass" if verdict else "violation")
    doc = {"method": args.method, "axiom": axiom, "status": status}
    text = f"{args.method} / {axiom}: {status}"
    if not verdict:
        doc["witness"] = witness_to_text(verdict.witness)
        text += "\n" + verdict.witness.describe()
    _emit(args, doc, text)
    return 0 if verdict else 1


def cmd_hunt(args) -> int:
    budget = SearchBudget(
        max_candidates=args.max_candidates,
        min_candidates=min(args.min_candidates, args.max_candidates),
        max_voters=args.max_voters,
        mode=args.search,
        samples=args.samples,
        seed=args.seed,
        ballots=args.ballots,
        delta_mode=args.mode,
        n=args.n,
        max_weight=args.max_weight,
        jobs=args.jobs,
    )
    res = hunt_violations(args.method, args.axiom, budget)
    doc = {
        "method": args.method,
        "axiom": args.axiom,
        "search": args.search,
        "seed": args.seed,
        "found": res.found,
        "examined": res.examined,
        "complete": res.complete,
        "skipped": res.skipped,
    }
    text = res.summary()
    if res.found:
        w = witness_to_text(res.witness)
        doc["witness"] = w
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(w)
        else:
            text += "\n" + w
    _emit(args, doc, text)
    return 0 if res.found else 1


def _read_pool(path: str) -> list[Ranking]:
    """A profile file (its rankings) or one ranking per line."""
    text = open(path).read()
    if text.lstrip().lower().startswith(("candidates", "{")):
        return [r for r, _ in read_profile(path).ballots]
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(Ranking.parse(line) if "|" not in line else Ranking(
                tuple(tuple(c.strip() for c in t.split(",") if c.strip()) for t in line.split("|"))))
        except ProfileError as e:
            raise FormatError(path, no, str(e)) from None
    if not out:
        raise FormatError(path, None, "empty pool")
    return out


def cmd_synthesize(args) -> int:
    t = read_edge_list(args.target)
    note = {}
    try:
        if args.pool:
            pool = _read_pool(args.pool)
            for r in pool:
                if r.candidates != frozenset(t.candidates):
                    raise UsageError(f"pool ranking {r} does not rank exactly {','.join(t.candidates)}")
            res = minimize_profile(t, pool, cap=args.cap)
            p = res.profile
            note = {"route": "branch-and-bound", "optimal": res.optimal, "explored": res.explored}
        else:
            p = mcgarvey_debord_realize(t)
            note = {"route": "mcgarvey-debord"}
    except Infeasible as e:
        _emit(args, {"found": False, "reason": str(e), "within_cap": e.within_cap}, f"infeasible: {e}")
        return 1
    except SynthesisError as e:
        raise UsageError(str(e)) from None
    note["voters"] = p.num_voters
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(profile_to_text(p))
    prov = " ".join(f"{k}={str(v).lower() if isinstance(v, bool) else v}" for k, v in note.items())
    text = f"# {prov}\n" + ("" if args.out else profile_to_text(p))
    _emit(args, {"found": True, **note, "profile": profile_to_json(p)}, text)
    return 0


def cmd_enumerate(args) -> int:
    k = args.candidates
    if not 1 <= k <= 7:
        raise UsageError("--candidates must be between 1 and 7")
    cands = tuple(CANDIDATE_LABELS[:k])
    rs = enumerate_linear_orders(cands) if args.kind == "linear" else enumerate_weak_orders(cands)
    if args.format == "structured":
        _emit(args, {"kind": args.kind, "count": len(rs), "rankings": [[list(t) for t in r.tiers] for r in rs]}, "")
    else:
        out = sys.stdout
        for r in rs:
            out.write(format_ranking(r) + "\n")
    return 0


# parser -----------------------------------------------------------------------


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{s!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--jobs", type=_positive, default=_default_jobs(),
                        help=f"worker processes (default from ${JOBS_ENV}, else 1)")

    ap = argparse.ArgumentParser(prog="marginkit", description="Margin-based voting analysis.")
    sub = ap.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify-paper", parents=[common], help="replay the impossibility sequences")
    v.add_argument("--theorem", choices=("all", *thm.THEOREMS), default="all")
    v.add_argument("--mode", choices=("linear", "weak", "both"), default="both")
    v.add_argument("--n", type=_positive, default=None, help="scale for thm2/thm4 (default: 1 and 2)")
    v.add_argument("--timing", action="store_true", help="include elapsed times (not byte-stable)")
    v.set_defaults(func=cmd_verify_paper)

    for name, func, hlp in (
        ("margins", cmd_margins, "print the margin matrix and edge list"),
        ("defensible", cmd_defensible, "print the defensible set"),
    ):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("file")
        s.set_defaults(func=func)

    w = sub.add_parser("winners", parents=[common], help="winner set of a method")
    w.add_argument("--method", choices=METHOD_IDS, required=True)
    w.add_argument("file")
    w.set_defaults(func=cmd_winners)

    c = sub.add_parser("check-axiom", parents=[common], help="check one axiom instance")
    c.add_argument("--method", choices=METHOD_IDS, required=True)
    c.add_argument("--axiom", choices=ax.AXIOM_IDS, required=True)
    c.add_argument("--delta", help="ballots to add (ballot lines, optionally after 'delta:')")
    c.add_argument("--mode", choices=("linear", "weak"), default="linear", help="added-ballot domain")
    c.add_argument("--n", type=_positive, default=2, help="ballot bound for n-resolvability")
    c.add_argument("--clones", help="comma-separated clone set for independence-of-clones")
    c.add_argument("--remove", help="clone to delete for independence-of-clones")
    c.add_argument("file")
    c.set_defaults(func=cmd_check_axiom)

    h = sub.add_parser("hunt", parents=[common], help="search for a violation")
    h.add_argument("--method", choices=METHOD_IDS, required=True)
    h.add_argument("--axiom", choices=ax.AXIOM_IDS, required=True)
    h.add_argument("--max-candidates", type=_positive, default=3)
    h.add_argument("--min-candidates", type=_positive, default=2)
    h.add_argument("--max-voters", type=_positive, default=9)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--search", choices=SEARCH_MODES, default="exhaustive")
    h.add_argument("--samples", type=_positive, default=1000)
    h.add_argument("--ballots", choices=("linear", "weak"), default="linear", help="base-profile domain")
    h.add_argument("--mode", choices=("linear", "weak"), default="linear", help="added-ballot domain")
    h.add_argument("--n", type=_positive, default=2)
    h.add_argument("--max-weight", type=_positive, default=5)
    h.add_argument("--out", help="write the witness file here")
    h.set_defaults(func=cmd_hunt)

    s = sub.add_parser("synthesize", parents=[common], help="realize target margins as a profile")
    s.add_argument("--target", required=True, help="edge list, 'x y weight' per line")
    s.add_argument("--pool", help="rankings to draw from (enables exact minimization)")
    s.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    s.add_argument("--out", help="write the profile file here")
    s.set_defaults(func=cmd_synthesize)

    e = sub.add_parser("enumerate", parents=[common], help="list rankings")
    e.add_argument("--candidates", type=_positive, required=True)
    e.add_argument("--kind", choices=("linear", "weak"), default="linear")
    e.set_defaults(func=cmd_enumerate)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (FormatError, UsageError, ProfileError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except TieExplosion as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
