"""Chi-square check that a rebuilt level picks its element uniformly from its pool."""
import argparse
import random

from dynsubmod.cardinality_core import CardinalityInstance
from dynsubmod.leveling import chi_square_uniform, rebuild_choice_counts
from dynsubmod.matroid_core import MatroidInstance
from dynsubmod.oracles import CoverageOracle, CoverageSpec, UniformMatroid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pool", type=int, default=8, help="size of the rebuilt pool R_2")
    ap.add_argument("--trials", type=int, default=4000)
    args = ap.parse_args()

    n = args.pool + 1
    f = CoverageOracle(CoverageSpec(n, {e: {e} for e in range(n)}))
    for name, inst in (("cardinality", CardinalityInstance(f, 4, 8, random.Random(0))),
                       ("matroid", MatroidInstance(f, UniformMatroid(4), 1, 1, random.Random(0)))):
        inst.init(range(n))
        counts = rebuild_choice_counts(inst, 2, args.trials, seed=name)
        stat, p = chi_square_uniform(counts, inst.levels[2].R)
        print(f"{name:12s} |R_2|={len(inst.levels[2].R)} chi2={stat:.2f} p={p:.4f} "
              f"counts={[counts[e] for e in sorted(inst.levels[2].R)]}")


if __name__ == "__main__":
    main()
