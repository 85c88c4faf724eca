"""``mxl`` command line: batch verification campaigns, single instances, replay.

Exit codes: 0 success, 1 violation found, 2 invalid input, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from importlib import resources
from math import comb
from pathlib import Path

from .campaigns import (
    IDENTITIES,
    Caps,
    conjecture_item,
    identities_item,
    replay_record,
    robustness_item,
    select_families,
)
from .catalog import BUNDLED_FIXTURES, default_catalog
from .exchange import ExchangeInstance, InvalidInstance, brute_force_exchange, exchange_bound, find_exchange
from .io import ParseError, load_instance, load_matroid_file
from .matroid import DEFAULT_BUDGET, BudgetExceeded, ExplicitMatroid, check_exchange_axiom, check_rank_axioms

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3
MAX_N = 12


class JsonlWriter:
    """Serializes records to one stream; safe to share between threads."""

    def __init__(self, path: str | None):
        self._fh = open(path, "w") if path else sys.stdout
        self._own = bool(path)
        self._lock = threading.Lock()

    def write(self, record: dict):
        line = json.dumps(record, sort_keys=True)
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()

    def close(self):
        if self._own:
            self._fh.close()


def parse_seed_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        out = range(int(lo), int(hi) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed range must look like a..b, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("seed range is empty")
    return out


def fixture_path(name: str) -> Path:
    """A path as given, or a bundled fixture by file name."""
    p = Path(name)
    if p.exists() or name not in BUNDLED_FIXTURES:
        return p
    return Path(str(resources.files("mxl") / "fixtures" / name))


def config_digest(args: argparse.Namespace) -> str:
    cfg = {k: (f"{v.start}..{v.stop - 1}" if isinstance(v, range) else v)
           for k, v in sorted(vars(args).items()) if k not in ("func", "out", "jobs")}
    return hashlib.sha256(json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _caps(args) -> Caps:
    caps = Caps(r=args.cap_r, n=args.cap_n, xy=args.cap_xy, k=getattr(args, "cap_k", 5))
    if caps.r < 1 or caps.n <= caps.r or caps.xy < 0:
        raise ValueError("caps need 1 <= cap-r < cap-n and cap-xy >= 0")
    if caps.n > MAX_N or comb(caps.n, min(caps.r, caps.n // 2)) > args.budget:
        raise BudgetExceeded(f"cap-n {caps.n} with cap-r {caps.r} exceeds the enumeration budget")
    return caps


def _run_campaign(args, worker, bad_verdicts) -> int:
    writer = JsonlWriter(args.out)
    digest = config_digest(args)
    tally: dict[str, int] = {}
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                records = pool.map(worker, args.seed_range, chunksize=16)
                for rec in records:
                    rec["config"] = digest
                    tally[rec["verdict"]] = tally.get(rec["verdict"], 0) + 1
                    writer.write(rec)
        else:
            for seed in args.seed_range:
                rec = worker(seed)
                rec["config"] = digest
                tally[rec["verdict"]] = tally.get(rec["verdict"], 0) + 1
                writer.write(rec)
        writer.write({"summary": dict(sorted(tally.items())), "config": digest, "command": args.command,
                      "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())})
    finally:
        writer.close()
    return EXIT_VIOLATION if any(tally.get(v) for v in bad_verdicts) else EXIT_OK


def cmd_verify_identities(args) -> int:
    caps = _caps(args)
    which = tuple(args.identities.split(",")) if args.identities else IDENTITIES
    unknown = set(which) - set(IDENTITIES)
    if unknown:
        raise ValueError(f"unknown identities {sorted(unknown)}")
    worker = partial(identities_item, field_name=args.field or "Q", caps=caps, which=which)
    return _run_campaign(args, worker, ("fail",))


def cmd_conjecture(args) -> int:
    if args.cap_r > 6:
        raise ValueError("conjecture campaigns take rank cap <= 6")
    caps = _caps(args)
    families = select_families(caps.r, caps.n, args.field)
    if not families:
        raise ValueError("no catalog family fits the caps")
    worker = partial(conjecture_item, families=families, caps=caps, mode=args.mode)
    return _run_campaign(args, worker, ("counterexample",))


def cmd_robustness(args) -> int:
    caps = _caps(args)
    families = select_families(caps.n, caps.n, args.field)
    if not families:
        raise ValueError("no catalog family fits the caps")
    worker = partial(robustness_item, families=families, caps=caps, policy=args.policy)
    return _run_campaign(args, worker, ("fail",))


def cmd_exchange(args) -> int:
    data = load_instance(fixture_path(args.instance))
    m = data["matroid"]
    inst = ExchangeInstance(m, data["A"], data["B"], data["X"], data["Y"])
    before = m.calls
    pair = find_exchange(inst)
    out = {"instance": str(args.instance), "pair": pair.to_json(), "oracle_calls": m.calls - before,
           "bound": exchange_bound(m, inst.A, inst.B, inst.X, inst.Y)}
    try:
        feasible = brute_force_exchange(inst, budget=args.budget)
        out["brute_force"] = {
            "feasible_pairs": len(feasible),
            "contains_output": any(p.U == pair.U and p.V == pair.V for p in feasible),
            "min_size": min(p.size for p in feasible),
        }
    except BudgetExceeded as exc:
        out["brute_force"] = {"skipped": str(exc)}
    writer = JsonlWriter(args.out)
    writer.write(out)
    writer.close()
    bf = out["brute_force"]
    return EXIT_VIOLATION if bf.get("contains_output") is False else EXIT_OK


def cmd_axioms(args) -> int:
    m = load_matroid_file(fixture_path(args.path), validate=False)
    if isinstance(m, ExplicitMatroid):
        rep = check_exchange_axiom(m)
        kind = "exchange"
    else:
        if m.n > 16 and args.samples is None:
            raise BudgetExceeded("exhaustive rank-axiom check needs n <= 16; pass --samples")
        rep = check_rank_axioms(m, args.samples if args.samples is not None else "exhaustive")
        kind = "rank"
    writer = JsonlWriter(args.out)
    writer.write({"path": str(args.path), "axioms": kind, "checked": rep.checked,
                  "violations": rep.violations[:20],
                  "violation_count": len(rep.violations), "verdict": "pass" if rep.ok else "fail"})
    writer.close()
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_catalog(args) -> int:
    print("families:")
    for spec in default_catalog():
        print(f"  {spec}")
    print("fixtures:")
    for name, desc in BUNDLED_FIXTURES.items():
        print(f"  {name:<24} {desc}")
    return EXIT_OK


def cmd_replay(args) -> int:
    mismatches = 0
    checked = 0
    writer = JsonlWriter(args.out)
    try:
        with open(args.path) as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"line {lineno}: {exc}") from None
                if "summary" in rec:
                    continue
                verdict = replay_record(rec)
                checked += 1
                same = verdict == rec.get("verdict")
                mismatches += not same
                writer.write({"line": lineno, "command": rec["command"], "stored": rec.get("verdict"),
                              "replayed": verdict, "match": same})
    finally:
        writer.close()
    return EXIT_VIOLATION if mismatches else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mxl", description="Exact checks of matroid exchange theorems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeds="0..199", r=4, n=8, xy=2):
        p.add_argument("--seed-range", type=parse_seed_range, default=parse_seed_range(seeds))
        p.add_argument("--field", default=None, help="Q, QT, GF2, GF(3), ...")
        p.add_argument("--cap-r", type=int, default=r)
        p.add_argument("--cap-n", type=int, default=n)
        p.add_argument("--cap-xy", type=int, default=xy)
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument("--out")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("verify-identities", help="determinant identity campaign")
    common(p)
    p.add_argument("--identities", help=f"comma list from {','.join(IDENTITIES)}")
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("conjecture", help="equitable exchange sampling campaign")
    common(p, seeds="0..999", r=5, n=10, xy=3)
    p.add_argument("--mode", choices=("conjecture", "full", "weak"), default="conjecture")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("robustness", help="noisy local search campaign")
    common(p, seeds="0..499", r=5, n=10, xy=0)
    p.add_argument("--cap-k", type=int, default=5)
    p.add_argument("--policy", choices=("adversarial", "random"), default="adversarial")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("exchange", help="certified exchange on one instance file")
    p.add_argument("instance", help="instance JSON path or bundled fixture name")
    p.add_argument("--out")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_exchange)

    p = sub.add_parser("axioms", help="check the axioms of a matroid file")
    p.add_argument("path", help="matrix, graph or explicit file, or bundled fixture name")
    p.add_argument("--samples", type=int, default=None, help="sample this many pairs instead of exhaustive")
    p.add_argument("--out")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("catalog", help="list families and bundled fixtures")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("replay", help="recompute verdicts of a JSONL result file")
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"mxl: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, InvalidInstance, FileNotFoundError, ValueError) as exc:
        print(f"mxl: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
