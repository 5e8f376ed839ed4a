#!/usr/bin/env python3
"""Operator values along s -> 1 against the local sublaplacian limit.

Runs the pointwise limit sweep for a polynomial cutoff profile and, in the
same pass, the robustness sweep of the inequality constants on a small mesh
with smooth positive exterior data.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from hfrac import cli

CONFIG = {
    "n": 1,
    "p": 2.0,
    "f": "poly-cutoff",
    "f_amplitude": 1.0,
    "f_radius": 1.0,
    "points": [[0.0, 0.0, 0.0]],
    "s_list": [0.7, 0.8, 0.9, 0.95, 0.99],
    "g": "gaussian-bump",
    "g_width": 0.6,
    "h": 0.3,
    "radius": 0.8,
    "r_ext": 1.1,
    "r": 0.17,
    "R": 1.02,
    "robust_s_list": [0.6, 0.7, 0.8, 0.9],
    "quad_per_decade": 24,
    "quad_angular": 512,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/asymptotics", help="output directory")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg_path = out / "asymptotics_config.json"
    cfg_path.write_text(json.dumps(CONFIG, indent=2) + "\n")

    rc = cli.main(["asymptotics", "--config", str(cfg_path),
                   "--out", str(out), "--seed", str(args.seed)])
    if rc != 0:
        return rc

    print(f"asymptotics run written to {out}/")
    for name in sorted(p.name for p in out.iterdir()):
        print(f"  {name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
