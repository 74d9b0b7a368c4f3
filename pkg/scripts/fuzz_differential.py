#!/usr/bin/env python3
"""Randomized differential testing: the product-construction filter must
agree with the brute-force enumeration oracle on every instance, and the
restricted acceptance rules must agree with the general rule whenever
their preconditions hold."""

import argparse
import random
import sys

from locgram.engine import (
    accepts,
    accepts_case_a,
    accepts_case_b,
    filter as filter_lattice,
    filter_oracle,
)
from locgram.lattice import enumerate_paths, language_equal
from locgram.randgen import random_instance


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=300)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--mode", choices=["general", "simple", "oii"], default="general")
    parser.add_argument("--paths-per-instance", type=int, default=30)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    for trial in range(args.trials):
        inst = random_instance(rng, mode=args.mode)
        if args.mode == "general":
            left = filter_lattice(inst.grammar, inst.lattice)
            right = filter_oracle(inst.grammar, inst.lattice)
            if not language_equal(left, right):
                print(f"MISMATCH seed={args.seed} trial={trial} text={inst.text!r}")
                print(f"grammar: {inst.grammar}")
                return 1
        else:
            paths = enumerate_paths(inst.lattice, 200).paths[: args.paths_per_instance]
            for p in paths:
                general = accepts(inst.grammar, p, inst.lattice)
                restricted = (
                    accepts_case_a(inst.grammar, p, inst.lattice)
                    if args.mode == "simple"
                    else accepts_case_b(inst.grammar, p, inst.lattice)
                )
                if restricted != general:
                    print(f"DISAGREEMENT seed={args.seed} trial={trial} text={inst.text!r}")
                    print(f"grammar: {inst.grammar}")
                    return 1
    print(f"OK ({args.trials} {args.mode} instances, seed={args.seed})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
