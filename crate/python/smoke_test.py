#!/usr/bin/env python3
"""Smoke test for the fdb_engine extension module.

Build the module first:

    cargo build --release -p fdb-py --features extension-module

then run this script from anywhere; it locates the shared object in
target/release and imports it under the module name `fdb_engine`.
"""

import importlib.util
import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libfdb_engine.so",
        ROOT / "target" / "release" / "fdb_engine.so",
        ROOT / "target" / "release" / "libfdb_engine.dylib",
    ]
    for so in candidates:
        if so.exists():
            spec = importlib.util.spec_from_file_location("fdb_engine", so)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("fdb_engine shared object not found; build fdb-py first")


def main():
    fdb = load_module()

    # Base valuation for 2017, reported figures in bn EUR.
    rep = fdb.base_report(2017)
    assert abs(rep["fdb"] - 47.16) < 0.01, rep
    assert abs(rep["eps"] - 2.92) < 0.01, rep
    assert rep["lb"] <= rep["fdb"] <= rep["ub"]

    # Article 91 off raises both bounds by the surplus fund (10.4 bn).
    raw = fdb.base_report(2017, article91=False)
    assert abs((raw["lb"] - rep["lb"]) - 10.4) < 1e-9

    # Sensitivities: halved vols and doubled guarantees both lower the value.
    rows = fdb.sensitivities(2017, ["iv*0.5", "gamma*2.0"])
    assert rows[0]["dfdb"] < 0.0 and rows[1]["dfdb"] < 0.0, rows

    # Calibration from market aggregates.
    gamma, nph, gph = fdb.calibrate(2018)
    assert abs(gamma - 0.0075) < 5e-4, gamma
    assert abs(gph - 0.712) < 5e-3, gph

    # Bachelier pricing: parity call - put = D * (F - k).
    call, put = fdb.caplet_floorlet(5, 0.01, 0.004, 0.005, 0.95)
    assert math.isclose(call - put, 0.95 * (0.01 - 0.004), rel_tol=0, abs_tol=1e-12)

    # Short Monte Carlo run: bounds must bracket the simulated value.
    sim = fdb.simulate(2017, paths=2000, seed=7)
    assert sim["bracket_ok"], sim
    assert abs(sim["no_leakage_residual"]) < 1e-9, sim

    print("smoke test passed")


if __name__ == "__main__":
    main()
