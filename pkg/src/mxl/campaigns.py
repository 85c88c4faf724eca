"""Per-item workers for the batch commands.

Each worker takes plain data (seed plus caps), is deterministic, and returns a
JSON-ready record holding everything needed to re-check it.  ``replay_record``
recomputes the verdict of a stored record from its payload alone.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import ExactMatrix, field_from_name, random_matrix
from .catalog import build_family, default_catalog, parse_family
from .exchange import (
    Counterexample,
    ExchangeInstance,
    PreconditionError,
    equitability_exchange_search,
    random_instance,
)
from .io import matroid_from_json, matroid_to_json
from .localsearch import check_robustness, run_trace
from .matroid import enumerate_basis_masks
from .pluecker import (
    CharacteristicViolation,
    MuTable,
    verify_laplace_exchange,
    verify_main_gp,
    verify_multiple_gp,
    verify_ultra_gp,
)
from .subsets import members, subsets_of_size

IDENTITIES = ("multiple", "laplace", "main", "ultra")


@dataclass(frozen=True)
class Caps:
    r: int = 4
    n: int = 8
    xy: int = 2
    k: int = 5


# ---------------------------------------------------------------------------
# identities


def identity_matrix_for(seed: int, field_name: str, caps: Caps):
    """Random matrix with A, B that share few columns; A and B are redrawn a few times to be bases."""
    f = field_from_name(field_name)
    rng = random.Random(f"identities|{f.name}|{seed}")
    r = rng.randint(1, caps.r)
    n = rng.randint(min(2 * r, caps.n), caps.n) if caps.n > r else r + 1
    lo = max(0, 2 * r - n)
    shared = rng.randint(lo, max(lo, r // 3))
    for _ in range(20):
        M = random_matrix(f, r, n, rng)
        A = rng.sample(range(n), r)
        rest = [e for e in range(n) if e not in A]
        B = sorted(rng.sample(A, shared) + rng.sample(rest, r - shared))
        A = sorted(A)
        if not f.is_zero(f.det(M.columns(A))) and not f.is_zero(f.det(M.columns(B))):
            break
    return M, A, B


def check_identities(M: ExactMatrix, A, B, cap_xy: int, which=IDENTITIES) -> dict:
    """Run the selected identities for every X, Y up to ``cap_xy`` elements."""
    t = MuTable(M, A, B)
    counts = {name: 0 for name in which}
    failures, violations = [], 0
    for nx in range(min(cap_xy, len(t.a_only)) + 1):
        for X in subsets_of_size(t.a_only, nx):
            if "multiple" in which:
                rep = verify_multiple_gp(M, A, B, X, t)
                counts["multiple"] += 1
                if not rep.ok:
                    failures.append(rep.to_json())
            for ny in range(min(cap_xy, len(t.b_only)) + 1):
                for Y in subsets_of_size(t.b_only, ny):
                    reps = []
                    if "laplace" in which and nx > ny:
                        reps.append(("laplace", verify_laplace_exchange(M, A, B, X, Y, t)))
                    if "main" in which:
                        reps.append(("main", verify_main_gp(M, A, B, X, Y, t)))
                    if "ultra" in which:
                        for p in range(ny, nx + 1):
                            try:
                                reps.append(("ultra", verify_ultra_gp(M, A, B, X, Y, p, t)))
                            except CharacteristicViolation:
                                violations += 1
                    for name, rep in reps:
                        counts[name] += 1
                        if not rep.ok:
                            failures.append(rep.to_json())
    return {"counts": counts, "failures": failures, "characteristic_violations": violations}


def identities_item(seed: int, field_name: str, caps: Caps, which=IDENTITIES) -> dict:
    M, A, B = identity_matrix_for(seed, field_name, caps)
    res = check_identities(M, A, B, caps.xy, which)
    f = M.field
    return {
        "command": "verify-identities",
        "seed": seed,
        "field": f.name,
        "matrix": [[f.to_json(x) for x in row] for row in M.rows],
        "A": A,
        "B": B,
        "cap_xy": caps.xy,
        "identities": list(which),
        **res,
        "verdict": "fail" if res["failures"] else "pass",
    }


def _replay_identities(rec: dict) -> str:
    f = field_from_name(rec["field"])
    M = ExactMatrix([[f.parse(str(x)) for x in row] for row in rec["matrix"]], f)
    res = check_identities(M, rec["A"], rec["B"], rec["cap_xy"], tuple(rec["identities"]))
    return "fail" if res["failures"] else "pass"


# ---------------------------------------------------------------------------
# conjecture sampler


def family_size(spec: str) -> tuple[int, int]:
    """(rank, ground set size) of a catalog family."""
    kind, args = parse_family(spec)
    if kind == "uniform":
        return int(args[0]), int(args[1])
    if kind == "free":
        return int(args[0]), int(args[0])
    if kind == "graphic":
        v = int(args[0][1:])
        return v - 1, v * (v - 1) // 2
    if kind == "linear":
        return int(args[1]), int(args[2])
    raise ValueError(f"unknown family {spec!r}")


def select_families(cap_r: int, cap_n: int, field_name: str | None = None) -> list[str]:
    """Catalog families within the caps; a field restricts to linear families over it."""
    out = []
    for spec in default_catalog():
        r, n = family_size(spec)
        if r > cap_r or n > cap_n:
            continue
        if field_name:
            kind, args = parse_family(spec)
            if kind != "linear" or field_from_name(args[0]) is not field_from_name(field_name):
                continue
        out.append(spec)
    return out


def conjecture_item(seed: int, families: list[str], caps: Caps, mode: str = "conjecture") -> dict:
    """One random instance; ``mode`` is conjecture (every p), full (p = |X|) or weak (p = |X| - 1, no bound)."""
    spec = families[seed % len(families)]
    try:
        inst = random_instance(spec, seed, (1, max(1, caps.xy)), (0, caps.xy))
    except PreconditionError as exc:
        return {"command": "conjecture", "seed": seed, "family": spec, "mode": mode,
                "results": [], "verdict": "skipped", "reason": str(exc)}
    # keep |Y| within the range where the statement applies
    room = len(inst.X) - 1 if mode == "weak" else len(inst.X)
    if len(inst.Y) > max(room, 0):
        inst = ExchangeInstance(inst.matroid, inst.A, inst.B, inst.X, sorted(inst.Y)[:max(room, 0)])
    nx, ny = len(inst.X), len(inst.Y)
    if mode == "conjecture":
        ps, search = list(range(ny, nx + 1)), "conjecture"
    elif mode == "full":
        ps, search = [nx], "conjecture"
    elif mode == "weak":
        ps, search = ([nx - 1] if nx - 1 >= ny else []), "weak"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    results, counter = [], None
    for p in ps:
        out = equitability_exchange_search(inst, p, search)
        if isinstance(out, Counterexample):
            counter = out.to_json()
            results.append({"p": p, "found": False})
            break
        results.append({"p": p, "found": True, "U": sorted(out.U), "V": sorted(out.V)})
    rec = {
        "command": "conjecture",
        "seed": seed,
        "family": spec,
        "mode": mode,
        "instance": inst.to_json(),
        "results": results,
        "verdict": "counterexample" if counter else ("pass" if ps else "skipped"),
    }
    if counter:
        rec["counterexample"] = counter
    return rec


def _replay_conjecture(rec: dict) -> str:
    if "instance" not in rec:
        return "skipped"
    d = rec["instance"]
    inst = ExchangeInstance(matroid_from_json(d["matroid"]), d["A"], d["B"], d["X"], d["Y"])
    search = "weak" if rec["mode"] == "weak" else "conjecture"
    if not rec["results"]:
        return "skipped"
    for r in rec["results"]:
        if isinstance(equitability_exchange_search(inst, r["p"], search), Counterexample):
            return "counterexample"
    return "pass"


# ---------------------------------------------------------------------------
# robustness


def robustness_item(seed: int, families: list[str], caps: Caps, policy: str = "adversarial") -> dict:
    rng = random.Random(f"robustness|{seed}")
    spec = families[seed % len(families)]
    m = build_family(spec, rng)
    w = [rng.randint(-10, 10) for _ in range(m.n)]
    bases = enumerate_basis_masks(m)
    b0 = members(rng.choice(bases))
    k = rng.randint(0, caps.k)
    schedule = [rng.randint(0, 3) for _ in range(k)]
    payload = {"matroid": matroid_to_json(m), "weights": w, "B0": list(b0), "k": k,
               "schedule": schedule, "policy": policy, "trace_seed": seed}
    verdict, detail = _robustness_verdict(payload)
    return {"command": "robustness", "seed": seed, "family": spec, **payload, **detail, "verdict": verdict}


def _robustness_verdict(payload: dict):
    m = matroid_from_json(payload["matroid"])
    w, b0, k = payload["weights"], payload["B0"], payload["k"]
    trace = run_trace(m, w, b0, k, payload["schedule"], payload["policy"], payload["trace_seed"])
    rep = check_robustness(trace)
    exact = check_robustness(run_trace(m, w, b0, k, 0))
    ok = rep.ok and trace.check_invariants() and exact.final_value == exact.ball_max
    detail = {
        "B_sequence": [sorted(b) for b in trace.bases],
        "errors": [str(e) for e in trace.errors],
        "k_neighborhood_max": str(rep.ball_max),
        "slack": str(rep.slack),
        "exact_trace_value": str(exact.final_value),
    }
    return ("pass" if ok else "fail"), detail


def _replay_robustness(rec: dict) -> str:
    return _robustness_verdict(rec)[0]


REPLAYERS = {
    "verify-identities": _replay_identities,
    "conjecture": _replay_conjecture,
    "robustness": _replay_robustness,
}


def replay_record(rec: dict) -> str:
    """Recompute the verdict of a stored record."""
    cmd = rec.get("command")
    if cmd not in REPLAYERS:
        raise ValueError(f"record has no replayable command: {cmd!r}")
    return REPLAYERS[cmd](rec)
