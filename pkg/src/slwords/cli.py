"""Command line: decompose, gentest, diameter, graph, bench.

Exit codes: 0 success / verified, 1 verified false (e.g. X does not
generate), 2 usage error, 3 resource cap, 4 internal invariant breach.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys

from .algebra import Field, Matrix, random_sl
from .transvection import PreconditionError, Transvection

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP, EXIT_INTERNAL = range(5)


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _field_override(args, obj: dict) -> dict:
    """Apply --field to an input object; refuse conflicting declarations."""
    if args.field is None:
        if "field" not in obj:
            raise UsageError("input has no field; pass --field")
        return obj
    F = Field.parse(args.field)
    if "field" in obj and Field.from_json(obj["field"]) != F:
        raise UsageError("--field disagrees with the field declared in the input")
    return dict(obj, field=F.to_json())


def _load_genset(args, path: str):
    from .pipeline.genset import GenSet, GenSetError

    try:
        return GenSet.from_json(_field_override(args, _load_json(path)))
    except (GenSetError, ValueError, PreconditionError) as exc:
        raise UsageError(f"bad generating set: {exc}") from exc


def _load_target(args, path: str, X) -> Matrix:
    obj = _load_json(path)
    F = X.field
    rows = obj.get("rows") if isinstance(obj, dict) else obj
    try:
        g = Matrix(F, [[F.coerce(a) for a in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad target matrix: {exc}") from exc
    if g.n != X.n:
        raise UsageError("target dimension differs from the generating set")
    return g


def _load_transvections(args, path: str) -> list[Transvection]:
    obj = _field_override(args, _load_json(path))
    try:
        F = Field.from_json(obj["field"])
        return [Transvection.from_json(t, F) for t in obj["transvections"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad transvection set: {exc}") from exc


# commands -------------------------------------------------------------------


def cmd_decompose(args) -> int:
    from .pipeline import Pipeline, StageFailure, word_evaluate, word_from_json, word_to_json

    X = _load_genset(args, args.gens)
    g = _load_target(args, args.target, X)
    try:
        P = Pipeline(X, cap_rounds=args.cap_rounds, cap_elements=args.cap_elements)
        d = P.decompose(g)
    except StageFailure as exc:
        _emit(_dumps({"error": exc.to_json()}), None)
        return {"cap": EXIT_CAP, "not_generating": EXIT_FALSE, "precondition": EXIT_USAGE}.get(exc.kind, EXIT_INTERNAL)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from exc
    word_json = word_to_json(d.word, X.field)
    # re-verify from the serialized form, as a reader of the file would
    ok = word_evaluate(word_from_json(json.loads(json.dumps(word_json)), X), X) == g
    _emit(_dumps(word_json), args.out)
    ledger = d.ledger.to_json()
    ledger["verified"] = ok
    if args.ledger:
        _emit(_dumps(ledger), args.ledger)
    elif args.out not in (None, "-"):
        _emit(_dumps(ledger), None)
    return EXIT_OK if ok else EXIT_INTERNAL


_VERDICT_EXIT = {
    "SL": EXIT_OK,
    "not_irreducible": EXIT_FALSE,
    "Sp": EXIT_FALSE,
    "F2_unresolved_irreducible": EXIT_FALSE,
    "inconclusive": EXIT_CAP,
}


def cmd_gentest(args) -> int:
    from .gentest import ClassificationError, classify

    S = _load_transvections(args, args.set)
    try:
        v = classify(S, cap_cycles=args.cap_cycles)
    except ClassificationError as exc:
        _emit(_dumps({"error": str(exc)}), None)
        return EXIT_INTERNAL
    except PreconditionError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_dumps(v.to_json()), args.out)
    return _VERDICT_EXIT[v.verdict]


def _genset_from_args(args):
    from .oracle import sample_genset

    if args.gens:
        return _load_genset(args, args.gens)
    if args.n is None or args.p is None:
        raise UsageError("pass --gens FILE or --n and --p")
    return sample_genset(args.n, args.p, args.profile, args.seed)


def cmd_diameter(args) -> int:
    from .oracle import ClosureOverflow, bfs_diameter

    X = _genset_from_args(args)
    try:
        d, g = bfs_diameter(X, cap=args.cap)
    except ClosureOverflow as exc:
        _emit(_dumps({"error": "overflow", "message": str(exc), "cap": exc.cap}), None)
        return EXIT_CAP
    except PreconditionError as exc:
        raise UsageError(str(exc)) from exc
    F = X.field
    _emit(_dumps({"diameter": d, "eccentric": [[F.dump(a) for a in r] for r in g.rows]}), args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    from .tgraph import build_graph, to_dot

    S = _load_transvections(args, args.set)
    _emit(to_dot(build_graph(S)), args.out)
    return EXIT_OK


BENCH_COLUMNS = ["n", "p", "profile", "trial", "seed"] + [f"len_{s}" for s in ("Y0", "Y1", "Y2", "Y3", "Y4", "Y5", "T")] + [
    "gauss_ops", "total_length", "bfs_distance", "verified"]


def bench_rows(n: int, p: int, trials: int, seed: int, profile: str, bfs_limit: int = 500_000,
               cap_rounds=None, cap_elements=50_000):
    """One row per trial; trial t uses the derived seed (seed, t)."""
    from .oracle import bfs_distance, sample_genset, sl_order
    from .pipeline import Pipeline, word_evaluate

    for trial in range(trials):
        tseed = random.Random(f"bench/{seed}/{trial}").randrange(2 ** 31)
        X = sample_genset(n, p, profile, tseed)
        g = random_sl(X.field, n, random.Random(tseed))
        d = Pipeline(X, cap_rounds=cap_rounds, cap_elements=cap_elements).decompose(g)
        stages = {s["name"]: s["max_length"] for s in d.ledger.stages}
        dist = bfs_distance(X, g) if sl_order(n, p) <= bfs_limit else ""
        row = {"n": n, "p": p, "profile": profile, "trial": trial, "seed": tseed}
        row.update({f"len_{k}": stages[k] for k in ("Y0", "Y1", "Y2", "Y3", "Y4", "Y5", "T")})
        row.update(gauss_ops=d.ledger.gauss_ops, total_length=d.length, bfs_distance=dist,
                   verified=int(word_evaluate(d.word, X) == g))
        yield row


def cmd_bench(args) -> int:
    from .pipeline import StageFailure

    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    try:
        for row in bench_rows(args.n, args.p, args.trials, args.seed, args.profile,
                              cap_rounds=args.cap_rounds, cap_elements=args.cap_elements):
            w.writerow(row)
    except StageFailure as exc:
        _emit(_dumps({"error": exc.to_json()}), None)
        return EXIT_CAP if exc.kind == "cap" else EXIT_INTERNAL
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slwords", description="Short words for SL(n, p) over generating sets with a transvection.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="prime:p or rationals (checked against the input files)")
    common.add_argument("--cap-rounds", type=int, default=None, help="growth rounds for the first stage (default n^2)")
    common.add_argument("--cap-elements", type=int, default=50_000, help="element cap for the first stage")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", "-o", default=None, help="output file (default stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="word for a target matrix")
    p.add_argument("--gens", required=True, help="generating set JSON")
    p.add_argument("--target", required=True, help="target matrix JSON ({'rows': ...} or a list of rows)")
    p.add_argument("--ledger", default=None, help="write the stage ledger here")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("gentest", parents=[common], help="classify the group generated by transvections")
    p.add_argument("--set", required=True, help="JSON {'field', 'transvections': [{'v', 'phi'}, ...]}")
    p.add_argument("--cap-cycles", type=int, default=200_000)
    p.set_defaults(func=cmd_gentest)

    p = sub.add_parser("diameter", parents=[common], help="Cayley graph diameter by BFS")
    p.add_argument("--gens", default=None)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--profile", default="with_transvection")
    p.add_argument("--cap", type=int, default=5_000_000)
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("graph", parents=[common], help="DOT export of a transvection graph")
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("bench", parents=[common], help="CSV of word lengths on seeded instances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--profile", default="with_transvection")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"slwords: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, PreconditionError) as exc:
        print(f"slwords: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"slwords: internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
