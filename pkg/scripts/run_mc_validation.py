#!/usr/bin/env python3
"""Monte Carlo cross-check of the analytic error probability.

Runs the trial-level simulator against the stage recursion for a grid of
configurations and prints one line per configuration with the z-score
|p_hat - P_E| / sigma.  Everything is seeded; rerunning reproduces the table
byte for byte.

    python scripts/run_mc_validation.py --trials 1000000 --seed 1
"""

import argparse
import math
import sys

from pidr import (
    IDEAL,
    NONIDEAL,
    Priors,
    Rng,
    operating_point_from_nbar,
    simulate_cascade,
    strategy_identical,
    strategy_nested,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    eq = Priors.equal()
    rng = Rng(args.seed)
    print("preset    strategy   N  nbar   P_E            p_hat          z")
    worst = 0.0
    for preset_name, params in (("ideal", IDEAL), ("nonideal", NONIDEAL)):
        for strategy_name, strategy in (("identical", strategy_identical),
                                        ("nested", strategy_nested)):
            for n in (1, 2, 3):
                for nbar in (0.5, 1.0):
                    op = operating_point_from_nbar(nbar)
                    part, res = strategy(n, op, eq, params)
                    mc = simulate_cascade(part, op, eq, params, args.trials, rng)
                    sigma = math.sqrt(
                        res.p_error * (1.0 - res.p_error) / args.trials
                    )
                    z = abs(mc.p_hat - res.p_error) / sigma
                    worst = max(worst, z)
                    print(f"{preset_name:<9} {strategy_name:<10} {n}  "
                          f"{nbar:<4}  {res.p_error:.6e}   {mc.p_hat:.6e}   {z:5.2f}")
    print(f"worst z = {worst:.2f} (4-sigma criterion: "
          f"{'PASS' if worst <= 4.0 else 'FAIL'})")
    return 0 if worst <= 4.0 else 1


if __name__ == "__main__":
    sys.exit(main())
