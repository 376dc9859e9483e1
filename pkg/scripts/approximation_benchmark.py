"""Worst observed ratio of the maintained solution to the exact optimum on small random streams."""
import argparse
import random
from collections import defaultdict
from fractions import Fraction

from dynsubmod.experiments import approximation_stream, random_bundle, random_events


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--constraint", choices=["cardinality", "matroid"], default="cardinality")
    ap.add_argument("--streams", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--seed", default="bench")
    args = ap.parse_args()

    worst = defaultdict(lambda: 1.0)
    failures = steps = 0
    for s in range(args.streams):
        rng = random.Random(f"{args.seed}:{s}")
        n = rng.randint(4, args.max_n)
        eps = rng.choice([Fraction(1, 2), 1])
        if args.constraint == "cardinality":
            k = rng.choice([2, 3, 4])
            bundle = random_bundle(rng, n)
            key = (f"k={k}", f"eps={eps}")
        else:
            family = rng.choice(["uniform", "partition", "graphic"])
            k = None
            bundle = random_bundle(rng, n, family, rank=rng.randint(1, 4))
            key = (family, f"eps={eps}")
        out = approximation_stream(bundle, args.constraint, k, eps, random_events(rng, n), s)
        worst[key] = min(worst[key], out.worst_ratio)
        failures += len(out.bound_failures)
        steps += out.steps
    for key in sorted(worst):
        print(f"{' '.join(key):24s} worst ratio {worst[key]:.3f}")
    print(f"{steps} steps, {failures} below the guaranteed fraction of OPT")


if __name__ == "__main__":
    main()
