#!/usr/bin/env python3
"""Inequality constants across three lattice spacings on one geometry.

The harnack pipeline solves the same Dirichlet problem at every spacing in
h_list and reports each check per spacing, so the output table doubles as a
quick mesh-dependence study of the measured constants.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from hfrac import cli

CONFIG = {
    "n": 1,
    "s": 0.5,
    "p": 2.0,
    "h": 0.3,
    "h_list": [0.3, 0.25, 0.2],
    "radius": 0.8,
    "r_ext": 1.1,
    "f": "constant",
    "f_value": 1.0,
    "g": "constant",
    "g_value": 0.0,
    "r": 0.17,
    "R": 1.02,
    "t_list": [1.0],
    "delta_list": [0.5],
    "q": 1.5,
    "d": 0.1,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/refinement", help="output directory")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg_path = out / "refinement_config.json"
    cfg_path.write_text(json.dumps(CONFIG, indent=2) + "\n")

    rc = cli.main(["harnack", "--config", str(cfg_path),
                   "--out", str(out), "--seed", str(args.seed)])
    if rc != 0:
        return rc

    print(f"refinement run written to {out}/")
    for name in sorted(p.name for p in out.iterdir()):
        print(f"  {name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
