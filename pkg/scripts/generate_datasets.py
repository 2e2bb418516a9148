#!/usr/bin/env python3
"""Regenerate every benchmark dataset into results/ via the CLI.

Produces:
  results/success_table_n{3,4,5}.csv   closed-form success probabilities
  results/montecarlo_n{3,4,5}.csv      seeded 1e6-trial outcome frequencies
  results/fidelity_sweep_{uniform,basis_average}.csv   20x20 gate-fidelity surfaces
  results/homodyne_curves.csv          quadrature distributions and error summary
  results/run_n5_realistic.json        one seeded realistic five-photon run
"""

import json
import sys
from pathlib import Path

from entconv.cli import main

RESULTS = Path(__file__).resolve().parent.parent / "results"
SEED = 20260810


def write_config(path: Path, data: dict) -> str:
    path.write_text(json.dumps(data, indent=2) + "\n")
    return str(path)


def run(argv: list[str]) -> None:
    code = main(argv)
    if code != 0:
        sys.exit(f"command failed ({code}): {' '.join(argv)}")


def main_script() -> None:
    RESULTS.mkdir(exist_ok=True)

    for n in (3, 4, 5):
        run(["success-table", "--n", str(n), "--rounds", "8",
             "--out", str(RESULTS / f"success_table_n{n}.csv")])

    for n in (3, 4, 5):
        config = write_config(
            RESULTS / f"_mc_n{n}.json",
            {"protocol": {"n_photons": n, "max_iterations": 8}, "seed": SEED, "trials": 1_000_000},
        )
        run(["montecarlo", "--config", config, "--out", str(RESULTS / f"montecarlo_n{n}.csv")])

    sweep_config = write_config(
        RESULTS / "_sweep.json",
        {
            "protocol": {"n_photons": 3},
            "sweep": {"g_over_kappa": [0.5, 10.0], "g_over_gamma": [0.5, 10.0], "steps": 20},
            "seed": SEED,
        },
    )
    for mode in ("uniform", "basis-average"):
        run(["sweep-fidelity", "--config", sweep_config, "--input", mode,
             "--out", str(RESULTS / f"fidelity_sweep_{mode.replace('-', '_')}.csv")])

    run(["homodyne-curves", "--out", str(RESULTS / "homodyne_curves.csv")])

    realistic_config = write_config(
        RESULTS / "_run5.json",
        {
            "protocol": {
                "n_photons": 5,
                "max_iterations": 8,
                "gate_mode": "realistic",
                "params": {"g": 0.3, "kappa": 26.0, "gamma": 0.0004},
            },
            "seed": SEED,
        },
    )
    run(["run", "--config", realistic_config, "--out", str(RESULTS / "run_n5_realistic.json")])

    print(f"datasets written to {RESULTS}")


if __name__ == "__main__":
    main_script()
