"""Command line interface: gen / run / bench / verify / adaptive.

Outputs are replayable: identical configuration and seed produce
byte-identical files (pass --timing to include wall-clock times, which
breaks that property).
"""

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import kernels
from .adaptive import adapt_random_greedy, adaptive_ratio_bound
from .batched import batched_random_greedy
from .generate import generate_instance, random_explicit_system, random_symmetric_objective
from .greedy import (
    MultiGreedyConfig,
    accelerated_random_multi_greedy,
    random_multi_greedy,
    ratio_bound,
    repeated_greedy,
    standard_greedy,
)
from .io import build_adaptive, load_instance, parse_spec
from .rng import make_rng
from .verify import exhaustive_max, monte_carlo_ratio_check

ALGORITHMS = {}


def _register(name, *aliases):
    def deco(fn):
        ALGORITHMS[name] = fn
        for a in aliases:
            ALGORITHMS[a] = fn
        return fn

    return deco


def _auto_p(k):
    return 2.0 / (1.0 + math.sqrt(k))


@_register("standard_greedy", "greedy")
def _run_greedy(bundle, args, rng):
    return standard_greedy(bundle.objective, bundle.system)


@_register("random_multi_greedy", "rmg")
def _run_rmg(bundle, args, rng):
    k = bundle.system.declared_k
    cfg = MultiGreedyConfig(args.l or 2, args.p or _auto_p(k))
    return random_multi_greedy(bundle.objective, bundle.system, cfg, rng)


@_register("accelerated_random_multi_greedy", "ramg")
def _run_ramg(bundle, args, rng):
    k = bundle.system.declared_k
    cfg = MultiGreedyConfig(args.l or 2, args.p or _auto_p(k), args.epsilon)
    return accelerated_random_multi_greedy(bundle.objective, bundle.system, cfg, rng)


@_register("ramg_plus")
def _run_ramg_plus(bundle, args, rng):
    # acceptance probability resampled uniformly from (0.9, 1) every run
    p = float(rng.uniform(0.9, 1.0))
    cfg = MultiGreedyConfig(args.l or 2, p, args.epsilon)
    return accelerated_random_multi_greedy(bundle.objective, bundle.system, cfg, rng)


@_register("repeated_greedy", "repg")
def _run_repg(bundle, args, rng):
    k = bundle.system.declared_k
    ell = args.l or max(1, math.ceil(math.sqrt(k)))
    return repeated_greedy(bundle.objective, bundle.system, ell, rng)


@_register("batched_random_greedy", "brg")
def _run_brg(bundle, args, rng):
    k = bundle.system.declared_k
    p = args.p or 1.0 / (1.0 + math.sqrt(k + 1))
    return batched_random_greedy(bundle.objective, bundle.system, p, args.epsilon, rng)


def _resolve_algorithm(name):
    if name not in ALGORITHMS:
        valid = sorted(set(ALGORITHMS))
        raise SystemExit(f"unknown algorithm {name!r}; valid ids: {', '.join(valid)}")
    return ALGORITHMS[name]


def _parse_sweep(text):
    # name=lo:hi:step, inclusive bounds
    try:
        name, rng_part = text.split("=")
        lo, hi, step = (int(x) for x in rng_part.split(":"))
    except ValueError:
        raise SystemExit(f"bad sweep spec {text!r}; expected name=lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise SystemExit(f"empty sweep range in {text!r}")
    return name, list(range(lo, hi + 1, step))


def _build_bundle(args, sweep_override=None):
    params = dict(sweep_override or {})
    if args.objective.startswith("generate:"):
        _, kind, n = args.objective.split(":")
        return generate_instance(kind, int(n), args.seed, **params)
    bundle = load_instance(args.objective, args.constraint, args.seed)
    if params:
        from .io import build_system

        cspec, _ = parse_spec(args.constraint)
        cspec.update(params)
        bundle.system = build_system(cspec, bundle.ground)
    return bundle


def _emit_runs(args, rows):
    os.makedirs(args.out, exist_ok=True)
    runs_path = os.path.join(args.out, "runs.jsonl")
    with open(runs_path, "w") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    groups = {}
    for row in rows:
        groups.setdefault((row["algorithm"], row["sweep_value"]), []).append(row)
    summary_path = os.path.join(args.out, "summary.csv")
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["algorithm", "sweep_name", "sweep_value", "trials", "mean_value", "stderr_value",
             "mean_value_queries", "mean_independence_queries"]
        )
        for (alg, sv), rs in sorted(groups.items()):
            vals = np.array([r["value"] for r in rs])
            stderr = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
            w.writerow(
                [alg, rs[0]["sweep_name"], sv, len(rs), repr(float(vals.mean())), repr(stderr),
                 repr(float(np.mean([r["value_queries"] for r in rs]))),
                 repr(float(np.mean([r["independence_queries"] for r in rs])))]
            )
    print(f"wrote {runs_path} and {summary_path}")


def _run_cells(args, algorithms):
    sweep_name, sweep_values = (None, [None]) if not args.sweep else _parse_sweep(args.sweep)
    rows = []
    for sv in sweep_values:
        override = {sweep_name: sv} if sweep_name else None
        bundle = _build_bundle(args, override)
        for alg_name in algorithms:
            fn = _resolve_algorithm(alg_name)
            for trial in range(args.trials):
                rng = make_rng(args.seed, "cell", str(sv), alg_name, trial)
                t0 = time.perf_counter()
                rep = fn(bundle, args, rng)
                wall = (time.perf_counter() - t0) * 1e3
                if rep.solution and not bundle.system.is_independent(rep.solution):
                    raise AssertionError("emitted solution failed constraint revalidation")
                row = {
                    "algorithm": alg_name,
                    "sweep_name": sweep_name,
                    "sweep_value": sv,
                    "trial": trial,
                    "seed": args.seed,
                    "value": rep.value,
                    "value_queries": rep.value_queries,
                    "independence_queries": rep.independence_queries,
                    "steps": rep.steps,
                    "wall_ms": wall if args.timing else None,
                    "solution": sorted(int(u) for u in rep.solution),
                }
                if rep.ledger is not None:
                    row["rounds"] = rep.ledger.to_dict()
                rows.append(row)
    return rows


def cmd_run(args):
    rows = _run_cells(args, [args.algorithm])
    _emit_runs(args, rows)


def cmd_bench(args):
    if args.kernels:
        return _bench_kernels(args)
    algos = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    rows = _run_cells(args, algos)
    _emit_runs(args, rows)


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def _bench_kernels(args):
    """Compare the compiled and pure-python kernel backends on one instance."""
    if "compiled" not in kernels.available_backends():
        print("compiled kernel backend not built; nothing to compare")
        return
    n = args.n or 400
    bundle = generate_instance("image", n, args.seed, m=n)
    results = {}
    repeats = max(3, args.trials)
    for backend in ("python", "compiled"):
        kernels.set_backend(backend)
        cfg = MultiGreedyConfig(2, _auto_p(bundle.system.declared_k), args.epsilon)
        t_ramg = min(
            _timed(lambda: accelerated_random_multi_greedy(bundle.objective, bundle.system, cfg, make_rng(args.seed)))
            for _ in range(repeats)
        )
        rep = accelerated_random_multi_greedy(bundle.objective, bundle.system, cfg, make_rng(args.seed))
        t_brg = min(
            _timed(lambda: batched_random_greedy(bundle.objective, bundle.system, 0.5, args.epsilon, make_rng(args.seed)))
            for _ in range(repeats)
        )
        rep_b = batched_random_greedy(bundle.objective, bundle.system, 0.5, args.epsilon, make_rng(args.seed))
        results[backend] = (t_ramg, t_brg, rep.value, rep_b.value)
    kernels.set_backend("")
    print(f"kernel benchmark on image n={n} (seconds, best of {repeats})")
    print(f"{'backend':<10}{'ramg':>10}{'brg':>10}{'ramg value':>16}{'brg value':>16}")
    for backend, (t1, t2, v1, v2) in results.items():
        print(f"{backend:<10}{t1:>10.3f}{t2:>10.3f}{v1:>16.6f}{v2:>16.6f}")
    sp1 = results["python"][0] / results["compiled"][0]
    sp2 = results["python"][1] / results["compiled"][1]
    print(f"speedup: ramg {sp1:.1f}x, brg {sp2:.1f}x")


def cmd_verify(args):
    """Monte-Carlo ratio check against a brute-force optimum, as JSON."""
    rng = make_rng(args.seed, "verify-instance")
    system = random_explicit_system(rng, args.n, args.k)
    objective = random_symmetric_objective(rng, args.n, "coverage-diversity")
    opt = exhaustive_max(objective, system)
    k = system.declared_k
    name = args.algorithm
    fn = _resolve_algorithm(name)

    if name in ("standard_greedy", "greedy"):
        bound = float(k + 1)
    elif name in ("batched_random_greedy", "brg"):
        p = args.p or 1.0 / (1.0 + math.sqrt(k + 1))
        bound = ((1 + args.epsilon) ** 2 * k + 1.0 / p + args.epsilon) / (1.0 - p)
    else:
        variant = "accelerated" if name in ("accelerated_random_multi_greedy", "ramg", "ramg_plus") else "plain"
        bound = ratio_bound(args.l or 2, args.p or _auto_p(k), k, variant, args.epsilon)

    class _B:
        pass

    bundle = _B()
    bundle.objective = objective
    bundle.system = system

    report = monte_carlo_ratio_check(
        lambda r: fn(bundle, args, r).value,
        opt.optimum_value,
        bound,
        args.trials,
        make_rng(args.seed, "verify-trials"),
        algorithm=name,
    )
    out = report.to_dict()
    out.update({"n": args.n, "k": k, "optimum": opt.optimum_value})
    print(json.dumps(out))
    if not report.passed:
        sys.exit(1)


def cmd_adaptive(args):
    """Run the adaptive policy over generated realizations; JSON lines out."""
    if args.objective.startswith("generate:"):
        _, kind, n = args.objective.split(":")
        if kind != "social":
            raise SystemExit("adaptive runs support generate:social:<n>")
        bundle = generate_instance("social", int(n), args.seed)
        inst, system = bundle.adaptive, bundle.system
    else:
        spec, base = parse_spec(args.objective)
        inst = build_adaptive(spec, base)
        from .io import build_system
        from .systems import GroundSet

        cspec, _ = parse_spec(args.constraint)
        system = build_system(cspec, GroundSet(inst.n))
    k = system.declared_k
    p = args.p or 1.0 / (1.0 + math.sqrt(k + 1))
    lines = []
    values = []
    for t in range(args.realizations):
        phi = inst.draw_realization(make_rng(args.seed, "state", t))
        trace = adapt_random_greedy(
            inst,
            system,
            p,
            phi,
            make_rng(args.seed, "coin", t),
            mc_rng=make_rng(args.seed, "mc", t),
        )
        values.append(trace.value)
        lines.append(
            {
                "realization": t,
                "value": trace.value,
                "selected": sorted(int(u) for u in trace.selected),
                "considered": len(trace.records),
            }
        )
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    for line in lines:
        print(json.dumps(line))
    print(
        json.dumps(
            {
                "mean_value": mean,
                "stderr": stderr,
                "realizations": args.realizations,
                "accept_prob": p,
                "ratio_bound": adaptive_ratio_bound(p, k) if 0 < p < 1 else None,
            }
        )
    )


def cmd_gen(args):
    bundle = generate_instance(args.kind, args.n, args.seed)
    os.makedirs(args.out, exist_ok=True)

    def write(name, text):
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(text)

    if args.kind in ("movie", "image"):
        feats = bundle.ground.payload["features"]
        if args.kind == "movie":
            labels = bundle.ground.payload["labels"]
            label_strs = [";".join(sorted(ls)) for ls in labels]
        else:
            label_strs = [str(int(c)) for c in bundle.ground.payload["categories"]]
        rows = [
            ",".join([str(u), label_strs[u]] + [repr(float(x)) for x in feats[u]])
            for u in range(bundle.ground.n)
        ]
        write("features.csv", "\n".join(rows) + "\n")
        if args.kind == "movie":
            write(
                "objective.json",
                json.dumps({"type": "coverage_diversity", "features": "features.csv", "decay": 0.2}) + "\n",
            )
            write(
                "constraint.json",
                json.dumps({"type": "multilabel", "per_label_cap": 10, "global_cap": bundle.meta["m"]}) + "\n",
            )
        else:
            cats = [int(c) for c in bundle.ground.payload["categories"]]
            write(
                "objective.json",
                json.dumps({"type": "image_summary", "features": "features.csv"}) + "\n",
            )
            write(
                "constraint.json",
                json.dumps(
                    {"type": "partition", "categories": cats, "caps": 5, "global_cap": bundle.meta["m"]}
                ) + "\n",
            )
    elif args.kind in ("social", "random-cut"):
        edges = bundle.ground.payload["edges"]
        write("edges.txt", "\n".join(f"{u} {v} {repr(w)}" for u, v, w in edges) + "\n")
        if args.kind == "social":
            write(
                "objective.json",
                json.dumps(
                    {
                        "type": "social_revenue",
                        "edges": "edges.txt",
                        "n_products": bundle.meta["n_products"],
                        "alpha_seed": args.seed,
                    }
                ) + "\n",
            )
            write(
                "constraint.json",
                json.dumps(
                    {
                        "type": "social",
                        "n_nodes": args.n,
                        "n_products": bundle.meta["n_products"],
                        "q": bundle.meta["q"],
                        "m": bundle.meta["m"],
                    }
                ) + "\n",
            )
            write(
                "adaptive.json",
                json.dumps(
                    {"type": "social", "edges": "edges.txt", "n_products": bundle.meta["n_products"]}
                ) + "\n",
            )
        else:
            write("objective.json", json.dumps({"type": "cut", "edges": "edges.txt"}) + "\n")
            write("constraint.json", json.dumps({"type": "cardinality", "d": bundle.meta["d"]}) + "\n")
    print(f"wrote {args.kind} instance (n={args.n}, seed={args.seed}) to {args.out}")


def _add_common(p):
    p.add_argument("--l", type=int, default=None, help="number of candidate solutions")
    p.add_argument("--p", type=float, default=None, help="acceptance probability (default: ratio-optimal)")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--objective", default="generate:movie:120", help="spec path, inline JSON, or generate:kind:n")
    p.add_argument("--constraint", default=None, help="constraint spec path or inline JSON")
    p.add_argument("--sweep", default=None, help="name=lo:hi:step over a constraint parameter")
    p.add_argument("--out", default="out")
    p.add_argument("--timing", action="store_true", help="include wall_ms (breaks byte replay)")


def main(argv=None):
    ap = argparse.ArgumentParser(prog="ksysmax", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="run one algorithm over a sweep x trials grid")
    _add_common(p_run)
    p_run.add_argument("--algorithm", default="accelerated_random_multi_greedy")
    p_run.set_defaults(fn=cmd_run)

    p_bench = sub.add_parser("bench", help="compare algorithms, or kernel backends with --kernels")
    _add_common(p_bench)
    p_bench.add_argument("--algorithms", default="accelerated_random_multi_greedy,repeated_greedy")
    p_bench.add_argument("--kernels", action="store_true")
    p_bench.add_argument("--n", type=int, default=None)
    p_bench.set_defaults(fn=cmd_bench)

    p_verify = sub.add_parser("verify", help="Monte-Carlo ratio check vs a brute-force optimum")
    _add_common(p_verify)
    p_verify.add_argument("--algorithm", default="random_multi_greedy")
    p_verify.add_argument("--n", type=int, default=9)
    p_verify.add_argument("--k", type=int, default=1)
    p_verify.set_defaults(fn=cmd_verify)

    p_adapt = sub.add_parser("adaptive", help="adaptive policy over generated realizations")
    _add_common(p_adapt)
    p_adapt.add_argument("--realizations", type=int, default=20)
    p_adapt.set_defaults(fn=cmd_adaptive)

    p_gen = sub.add_parser("gen", help="write a synthetic instance to disk")
    p_gen.add_argument("--kind", required=True, choices=["movie", "image", "social", "random-cut"])
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default="instance")
    p_gen.set_defaults(fn=cmd_gen)

    args = ap.parse_args(argv)
    args.fn(args)


if __name__ == "__main__":
    main()
