"""Mean oracle queries per update as the ground set grows.

    python3 scripts/query_scaling.py --sizes 500 2000 8000 --seeds 16
"""
import argparse
import json
import statistics

from dynsubmod.experiments import query_scaling_trial


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--constraint", choices=["cardinality", "matroid"], default="cardinality")
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 8000])
    ap.add_argument("--seeds", type=int, default=16)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--epsilon", type=float, default=1.0)
    ap.add_argument("--window", type=int, default=200)
    ap.add_argument("--jsonl", action="store_true", help="print one record per trial")
    args = ap.parse_args()

    means = {}
    for n in args.sizes:
        trials = [query_scaling_trial(n, s, args.constraint, args.k, args.epsilon, args.window)
                  for s in range(args.seeds)]
        if args.jsonl:
            for t in trials:
                print(json.dumps(t, sort_keys=True))
        q = [t["mean_queries"] for t in trials]
        means[n] = statistics.mean(q)
        light = sum(t["light_deletes"] for t in trials)
        cost = sum(t["light_delete_queries"] for t in trials)
        print(f"n={n:6d}  mean={means[n]:8.1f}  sd={statistics.pstdev(q):7.1f}  "
              f"light deletes={light} (queries {cost})", flush=True)
    print(f"max/min ratio of means: {max(means.values()) / min(means.values()):.2f}")


if __name__ == "__main__":
    main()
