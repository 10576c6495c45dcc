"""Command-line experiment harness.

Subcommands: ``train`` (end-to-end version-space training trials), ``verify``
(property suites over the counting circuits), ``sweep`` (quantum vs classical
query scaling on planted instances), ``andor`` (two-level AND-OR evaluation),
``gen-dataset`` (planted dataset files).  Output is JSON lines (one object
per trial) or CSV for sweeps; identical configuration and seed give
byte-identical output.  Exit codes: 0 all checks pass, 1 property violation,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .andor import AndOrInstance, evaluate_direct, evaluate_via_search, load_instance
from .baselines import brute_force_g, classical_version_space_search
from .counting import phase_gap_bound_check, g_tilde_readout, l_bits
from .oracles import (
    OracleHandle,
    TruthTable,
    apply_phase_oracle,
    controlled_phase_oracle_identity_gap,
    from_perceptron,
    load_truth_table,
)
from .perceptron import (
    generate_planted_dataset,
    geometric_margin,
    in_version_space,
    load_dataset,
    sample_hyperplanes,
    save_dataset,
)
from .search import BEQConfig, multi_criterion_search, train_perceptron
from .statevec import new_uniform


def _emit(stream, obj) -> None:
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def _beq_config(args) -> BEQConfig:
    return BEQConfig(verify_repeats=args.verify_repeats, max_rounds=args.max_rounds)


def _add_search_flags(parser) -> None:
    parser.add_argument("--verify-repeats", type=int, default=15,
                        help="odd majority-vote width for candidate verification")
    parser.add_argument("--max-rounds", type=int, default=3,
                        help="full cutoff schedules before giving up")


# -- train ---------------------------------------------------------------------


def _train_trial(payload):
    (trial, seed, dataset_path, n, m, gamma, epsilon, c, verify_repeats, max_rounds) = payload
    cfg = BEQConfig(verify_repeats=verify_repeats, max_rounds=max_rounds)
    if dataset_path is not None:
        data = load_dataset(dataset_path)
    else:
        data, _ = generate_planted_dataset(n, m, gamma, rng_seed=seed)
    result = train_perceptron(data, epsilon, cfg, rng_seed=seed, c=c)
    ok = result.found and in_version_space(data, result.plane)
    return {
        "trial": trial,
        "seed": seed,
        "n": data.n_points,
        "m": data.dim,
        "gamma": data.claimed_margin,
        "K": result.sampled,
        "found": result.found,
        "index": result.outcome.result,
        "in_version_space": bool(ok) if result.found else None,
        "failure": result.failure_kind,
        "queries": result.outcome.queries,
    }


def cmd_train(args, out) -> int:
    if args.dataset is None and (args.n is None or args.m is None or args.gamma is None):
        print("train: provide --dataset or all of --n/--m/--gamma", file=sys.stderr)
        return 2
    if args.gamma is not None and not (0.0 < args.gamma < 1.0):
        print(f"train: gamma must be in (0, 1), got {args.gamma}", file=sys.stderr)
        return 2
    if not (0.0 < args.epsilon < 1.0):
        print(f"train: epsilon must be in (0, 1), got {args.epsilon}", file=sys.stderr)
        return 2
    payloads = [
        (t, args.seed + t, args.dataset, args.n, args.m, args.gamma,
         args.epsilon, args.c_constant, args.verify_repeats, args.max_rounds)
        for t in range(args.trials)
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_train_trial, payloads))
    else:
        rows = [_train_trial(p) for p in payloads]
    successes = 0
    for row in rows:
        successes += bool(row["in_version_space"])
        _emit(out, row)
    _emit(out, {"summary": True, "trials": args.trials,
                "success_fraction": successes / args.trials})
    return 0


# -- verify --------------------------------------------------------------------


def _random_table(rng, n_max: int, k_max: int, force_close_column: bool = False) -> TruthTable:
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, k_max + 1))
    rows, cols = 1 << n, 1 << k
    density = rng.uniform(0.2, 0.95)
    bits = (rng.random((rows, cols)) < density).astype(np.uint8)
    # keep the sweep interesting: sometimes plant an all-ones column and
    # sometimes the hardest nearly-all-ones column
    if force_close_column or rng.random() < 0.4:
        j = int(rng.integers(0, cols))
        bits[:, j] = 1
        bits[int(rng.integers(0, rows)), j] = 0
    if rng.random() < 0.5:
        bits[:, int(rng.integers(0, cols))] = 1
    return TruthTable(bits)


def _sign_fidelity_sweep(rng, tables: int, n_max: int, k_max: int, fault_l: bool):
    violations = []
    checked = 0
    for t in range(tables):
        table = _random_table(rng, n_max, k_max, force_close_column=fault_l)
        handle = OracleHandle(table)
        l = (handle.n + 1) // 2 if fault_l else l_bits(handle.n)
        l = max(1, l)
        g = np.zeros(1 << handle.k, dtype=np.uint8)
        g[: handle.n_cols] = brute_force_g(handle)
        for j in range(1 << handle.k):
            checked += 1
            readout = g_tilde_readout(j, handle, l=l)
            expected_sign = -1 if g[j] else +1
            bad_sign = readout.sign != expected_sign
            bad_fid = readout.fidelity < 2.0 / 3.0
            bad_exact = g[j] == 1 and abs(readout.fidelity - 1.0) > 1e-9
            if bad_sign or bad_fid or bad_exact:
                violations.append({
                    "table": t, "n": handle.n, "k": handle.k, "j": j, "l": l,
                    "g": int(g[j]), "sign": readout.sign,
                    "fidelity": readout.fidelity,
                })
    return checked, violations


def _phase_gap_sweep(n_max: int):
    violations = []
    checked = 0
    for n in range(1, n_max + 1):
        for m in range(1, (1 << n) + 1):
            checked += 1
            if not phase_gap_bound_check(n, m):
                violations.append({"n": n, "m": m})
    return checked, violations


def _oracle_identity_sweep(rng, tables: int):
    violations = []
    for t in range(tables):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(1, min(5, 9 - n)))
        bits = (rng.random((1 << n, 1 << k)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
        table = TruthTable(bits)
        gap = controlled_phase_oracle_identity_gap(table)
        handle = OracleHandle(table)
        layout = handle.layout(l=1, scratch=True)
        state = new_uniform(layout)
        before = handle.ledger.snapshot()
        apply_phase_oracle(state, layout, handle)
        mid = handle.ledger.snapshot()
        apply_phase_oracle(state, layout, handle, controls=(layout.phase_qubits[0],))
        after = handle.ledger.snapshot()
        plain_cost = mid["bit_oracle"] - before["bit_oracle"]
        ctrl_cost = after["bit_oracle"] - mid["bit_oracle"]
        if gap > 1e-10 or plain_cost != 1 or ctrl_cost != 2:
            violations.append({
                "table": t, "n": n, "k": k, "gap": gap,
                "plain_bit_cost": plain_cost, "controlled_bit_cost": ctrl_cost,
            })
    return tables, violations


def cmd_verify(args, out) -> int:
    rng = np.random.default_rng(args.seed)
    any_violation = False

    checked, violations = _sign_fidelity_sweep(
        rng, args.tables, args.n_max, args.k_max, args.inject_precision_fault
    )
    _emit(out, {"suite": "sign_and_fidelity", "checked": checked,
                "violations": len(violations),
                "forced_low_precision": bool(args.inject_precision_fault)})
    for v in violations[:10]:
        _emit(out, {"violation": "sign_and_fidelity", **v})
    any_violation |= bool(violations)

    if not args.inject_precision_fault:
        checked, violations = _phase_gap_sweep(args.gap_n_max)
        _emit(out, {"suite": "phase_gap_bound", "checked": checked,
                    "violations": len(violations)})
        for v in violations[:10]:
            _emit(out, {"violation": "phase_gap_bound", **v})
        any_violation |= bool(violations)

        checked, violations = _oracle_identity_sweep(rng, args.identity_tables)
        _emit(out, {"suite": "controlled_oracle_identity", "checked": checked,
                    "violations": len(violations)})
        for v in violations[:10]:
            _emit(out, {"violation": "controlled_oracle_identity", **v})
        any_violation |= bool(violations)

    _emit(out, {"summary": True, "ok": not any_violation})
    return 1 if any_violation else 0


# -- sweep ---------------------------------------------------------------------


def _single_solution_instance(n_points: int, n_planes: int, gamma: float, seed):
    """Planted dataset plus a candidate list holding exactly one
    version-space member (the planted plane, at a seeded position)."""
    rng = np.random.default_rng(seed)
    data, planted = generate_planted_dataset(n_points, 2, gamma, rng_seed=int(rng.integers(2**63)))
    position = int(rng.integers(0, n_planes))
    planes = []
    while len(planes) < n_planes - 1:
        for cand in sample_hyperplanes(n_planes, 2, int(rng.integers(2**63))):
            if not in_version_space(data, cand):
                planes.append(cand)
                if len(planes) == n_planes - 1:
                    break
    planes.insert(position, planted)
    return data, planes, position


def _sweep_trial(payload):
    (n_points, n_planes, gamma, seed, verify_repeats, max_rounds) = payload
    cfg = BEQConfig(verify_repeats=verify_repeats, max_rounds=max_rounds)
    data, planes, _ = _single_solution_instance(n_points, n_planes, gamma, seed)
    table = from_perceptron(data, planes)
    handle = OracleHandle(table)
    outcome = multi_criterion_search(handle, cfg, rng_seed=seed)
    sound = (not outcome.found) or bool(brute_force_g(handle)[outcome.index])
    classical = classical_version_space_search(OracleHandle(table))
    return {
        "quantum_bits": outcome.queries["bit_oracle"],
        "classical": classical.queries["classical_f"],
        "found": outcome.found,
        "sound": sound,
    }


def _fit_slope(sizes, medians) -> float:
    return float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])


def cmd_sweep(args, out) -> int:
    n_grid = [int(v) for v in args.n_grid.split(",")]
    k_grid = [int(v) for v in args.k_grid.split(",")]
    if not n_grid or not k_grid:
        print("sweep: empty grid", file=sys.stderr)
        return 2
    cells = [(n, k) for n in n_grid for k in k_grid]
    writer = csv.writer(out)
    writer.writerow(["kind", "N", "K", "gamma", "trials",
                     "median_quantum_bit_queries", "median_classical_queries",
                     "found_rate", "sound", "slope_axis", "slope"])
    results = {}
    payload_groups = {}
    for idx, (n_points, n_planes) in enumerate(cells):
        payload_groups[(n_points, n_planes)] = [
            (n_points, n_planes, args.gamma, args.seed + 10_000 * idx + t,
             args.verify_repeats, args.max_rounds)
            for t in range(args.trials)
        ]
    for cell, payloads in payload_groups.items():
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                rows = list(pool.map(_sweep_trial, payloads))
        else:
            rows = [_sweep_trial(p) for p in payloads]
        qmed = float(np.median([r["quantum_bits"] for r in rows]))
        cmed = float(np.median([r["classical"] for r in rows]))
        found = sum(r["found"] for r in rows) / len(rows)
        sound = all(r["sound"] for r in rows)
        results[cell] = (qmed, cmed, found, sound)
        writer.writerow(["cell", cell[0], cell[1], args.gamma, args.trials,
                         qmed, cmed, found, sound, "", ""])
    exit_code = 0
    if not all(res[3] for res in results.values()):
        exit_code = 1
    for axis, grid, fixed_grid in (("N", n_grid, k_grid), ("K", k_grid, n_grid)):
        if len(grid) < 2 or len(fixed_grid) != 1:
            continue
        fixed = fixed_grid[0]
        sizes = grid
        meds = [results[(n, fixed) if axis == "N" else (fixed, n)][0] for n in sizes]
        slope = _fit_slope(sizes, meds)
        writer.writerow(["fit", "", "", args.gamma, args.trials, "", "", "", "", axis, slope])
    return exit_code


# -- andor ---------------------------------------------------------------------


def cmd_andor(args, out) -> int:
    cfg = _beq_config(args)
    if args.table is not None:
        # oracle-only experiment straight from a truth-table file
        table = load_truth_table(args.table)
        handle = OracleHandle(table)
        outcome = multi_criterion_search(handle, cfg, rng_seed=args.seed)
        direct = int(brute_force_g(handle).any())
        via = int(outcome.found and outcome.index < table.n_cols)
        _emit(out, {"N": table.n_rows, "K": table.n_cols, "direct": direct,
                    "via_search": via, "agree": direct == via,
                    "index": outcome.result, "queries": outcome.queries})
        return 0
    if args.file is not None:
        inst = load_instance(args.file)
        direct = evaluate_direct(inst)
        via, outcome = evaluate_via_search(inst, cfg, rng_seed=args.seed)
        _emit(out, {"N": inst.n_rows, "K": inst.n_cols, "direct": direct,
                    "via_search": via, "agree": direct == via,
                    "index": outcome.result, "queries": outcome.queries})
        return 0
    n, k, count = (int(v) for v in args.random.split(","))
    rng = np.random.default_rng(args.seed)
    agreements = 0
    for t in range(count):
        z = (rng.random(n * k) < rng.uniform(0.2, 0.95)).astype(np.uint8)
        inst = AndOrInstance(n, k, z)
        direct = evaluate_direct(inst)
        via, outcome = evaluate_via_search(inst, cfg, rng_seed=int(rng.integers(2**63)))
        agree = direct == via
        agreements += agree
        _emit(out, {"instance": t, "direct": direct, "via_search": via,
                    "agree": agree, "queries": outcome.queries})
    _emit(out, {"summary": True, "instances": count,
                "agreement_fraction": agreements / count})
    return 0


# -- gen-dataset ---------------------------------------------------------------


def cmd_gen_dataset(args, out) -> int:
    if not (0.0 < args.gamma < 1.0):
        print(f"gen-dataset: gamma must be in (0, 1), got {args.gamma}", file=sys.stderr)
        return 2
    data, planted = generate_planted_dataset(args.n, args.m, args.gamma, rng_seed=args.seed)
    save_dataset(data, args.out_file)
    _emit(out, {
        "file": args.out_file, "n": data.n_points, "m": data.dim,
        "gamma": data.claimed_margin,
        "planted_margin": geometric_margin(data, planted),
        "planted_w": [float(v) for v in planted.w], "planted_b": planted.b,
    })
    return 0


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvstrain",
        description="Quantum version-space perceptron training: simulator and benchmarks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run end-to-end training trials")
    p.add_argument("--dataset", help="dataset file (header 'N M gamma')")
    p.add_argument("--n", type=int, help="points per generated dataset")
    p.add_argument("--m", type=int, help="feature dimension")
    p.add_argument("--gamma", type=float, help="planted margin")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--c-constant", type=float, default=2.0,
                   help="constant in K = ceil(c ln(1/eps) / gamma)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    _add_search_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tables", type=int, default=50)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--gap-n-max", type=int, default=12)
    p.add_argument("--identity-tables", type=int, default=20)
    p.add_argument("--inject-precision-fault", action="store_true",
                   help="force the phase register down to ceil(n/2) bits; the "
                        "sweep is then expected to report violations")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="query scaling: quantum vs classical")
    p.add_argument("--n-grid", default="8,16,32,64")
    p.add_argument("--k-grid", default="8")
    p.add_argument("--gamma", type=float, default=0.2)
    p.add_argument("--trials", type=int, default=9)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    _add_search_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("andor", help="evaluate two-level AND-OR instances")
    p.add_argument("--file", help="instance file ('N K' header, one 0/1 line)")
    p.add_argument("--table", help="truth-table file ('N K' header, N bit rows)")
    p.add_argument("--random", help="N,K,COUNT random batch")
    p.add_argument("--seed", type=int, required=True)
    _add_search_flags(p)
    p.set_defaults(func=cmd_andor)

    p = sub.add_parser("gen-dataset", help="write a planted dataset file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-file", required=True)
    p.set_defaults(func=cmd_gen_dataset)
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    if getattr(args, "command", None) == "andor":
        sources = sum(v is not None for v in (args.file, args.table, args.random))
        if sources != 1:
            print("andor: provide exactly one of --file / --table / --random",
                  file=sys.stderr)
            return 2
    stream = out if out is not None else sys.stdout
    try:
        return args.func(args, stream)
    except (ValueError, OSError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
