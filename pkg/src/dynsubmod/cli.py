"""Command line entry point: ``dynsubmod run|gen-stream|gen-oracle``."""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys

from .errors import SpecError
from .harness import RunConfig, RunError, run
from .oracles import random_coverage_spec, random_graphic_spec, random_partition_spec
from .streams import format_stream, generate_stream, parse_gen_spec


def _clamp(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(",")
    return int(lo), int(hi)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynsubmod", description="Fully dynamic submodular maximization runs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="drive the solver over a stream and write a JSONL report")
    r.add_argument("--constraint", choices=["cardinality", "matroid"], required=True)
    r.add_argument("--k", type=int, help="cardinality bound; defaults to the matroid rank")
    r.add_argument("--epsilon", type=float, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--oracle", required=True, help="oracle spec JSON file")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--stream", help="stream file of '+ id' / '- id' lines")
    src.add_argument("--gen", help="generator spec, e.g. random_mix:n=50,ops=400,p=0.3")
    r.add_argument("--check-invariants", action="store_true")
    r.add_argument("--baseline", choices=["greedy", "exact"])
    r.add_argument("--baseline-every", type=int, default=1)
    r.add_argument("--out", help="JSONL report path (default: stdout)")
    r.add_argument("--float-tol", type=float, default=0.0)
    r.add_argument("--uniformity-trials", type=int, default=0)
    r.add_argument("--clamp", type=_clamp, help="restrict guess indices to LO,HI")

    g = sub.add_parser("gen-stream", help="write a generated stream file")
    g.add_argument("spec", help="e.g. sliding_window:n=10,ops=30,w=4")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")

    o = sub.add_parser("gen-oracle", help="write a random oracle spec")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--universe", type=int, default=40)
    o.add_argument("--max-cover", type=int, default=6)
    o.add_argument("--matroid", choices=["none", "uniform", "partition", "graphic"], default="none")
    o.add_argument("--rank", type=int, default=3, help="uniform rank or max block capacity")
    o.add_argument("--blocks", type=int, default=3)
    o.add_argument("--vertices", type=int, default=6)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out")
    return p


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = RunConfig(constraint=args.constraint, epsilon=args.epsilon, oracle=args.oracle, k=args.k,
                            seed=args.seed, stream=args.stream, gen=args.gen,
                            check_invariants=args.check_invariants, baseline=args.baseline,
                            baseline_every=args.baseline_every, out=args.out, float_tol=args.float_tol,
                            uniformity_trials=args.uniformity_trials, clamp=args.clamp)
            report = run(cfg)
            if args.out is None:
                _emit("".join(line + "\n" for line in report.lines()), None)
        elif args.command == "gen-stream":
            kw = parse_gen_spec(args.spec)
            kw.setdefault("seed", args.seed)
            _emit(format_stream(generate_stream(**kw)), args.out)
        else:
            rng = random.Random(args.seed)
            spec: dict = {"function": random_coverage_spec(args.n, args.universe, args.max_cover, rng)}
            if args.matroid == "uniform":
                spec["matroid"] = {"type": "uniform", "k": args.rank}
            elif args.matroid == "partition":
                spec["matroid"] = random_partition_spec(args.n, args.blocks, args.rank, rng)
            elif args.matroid == "graphic":
                spec["matroid"] = random_graphic_spec(args.n, args.vertices, rng)
            _emit(json.dumps(spec, sort_keys=True) + "\n", args.out)
    except (SpecError, RunError, ValueError, OSError) as exc:
        print(f"dynsubmod: error: {exc}", file=sys.stderr)
        return 2
    return 0
