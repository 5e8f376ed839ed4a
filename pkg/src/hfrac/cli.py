"""Batch command-line front end: eval | solve | harnack | asymptotics.

Each command reads one validated flat JSON config, writes CSV files plus JSON
mirrors into the output directory, and is byte-deterministic in
(config, seed).  Exit codes: 0 success, 2 config error, 3 numerical
non-convergence, 4 geometry-guard violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional

import numpy as np

from . import config as configlib
from . import group, harnack, operators, profiles, solver
from .errors import ConfigError, ConvergenceError, DegenerateCheckError, GeometryError


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _jval(value):
    if value is None or isinstance(value, (str, bool)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return float(value)


def _meta_line(cfg, what: str) -> str:
    return (
        f"hfrac {cfg.command} {what}; units: Heisenberg coordinates "
        f"(x,y,t) and dimensionless values; config sha256 {cfg.config_hash()}"
    )


def _write_csv(path: str, meta: str, header: list, rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow([meta])
        wr.writerow(header)
        for row in rows:
            wr.writerow([_fmt(v) for v in row])


def _write_json(path: str, cfg, header: list, rows: list) -> None:
    payload = {
        "config": cfg.as_dict(),
        "config_hash": cfg.config_hash(),
        "rows": [
            {k: _jval(v) for k, v in zip(header, row)} for row in rows
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _coord_header(n: int) -> list:
    cols = [f"x{i + 1}" for i in range(n)]
    cols += [f"y{i + 1}" for i in range(n)]
    cols.append("t")
    return cols


def _effective_g_far(cfg, gprof) -> float:
    # a nonzero config g_far overrides the profile's own far value
    return cfg.g_far if cfg.g_far != 0.0 else float(gprof.far_value)


def _build_mesh(cfg, h: Optional[float] = None) -> solver.Mesh:
    return solver.build_mesh(
        h=cfg.h if h is None else h, radius=cfg.radius, r_ext=cfg.r_ext,
        n=cfg.n, center=np.asarray(cfg.center, dtype=float),
    )


def cmd_eval(cfg) -> int:
    u = cfg.make_profile("f")
    s_values = cfg.s_list or [cfg.s]
    header = _coord_header(cfg.n) + [
        "s", "p", "value", "error_estimate", "pv_value",
    ]
    # value is the operator value (normalized fractional sublaplacian for
    # p = 2 with the gauge norm, the raw PV otherwise); pv_value is the
    # unnormalized PV emitted alongside as a cross-check column for p = 2
    rows = []
    for s in s_values:
        params = cfg.frac_params(s)
        for pt in cfg.points:
            xi = np.asarray(pt, dtype=float)
            ov = operators.evaluate_operator(u, xi, params, cfg.quad())
            pv_value = ""
            if params.p == 2.0 and cfg.norm == "koranyi":
                pv_value = operators.p_operator(u, xi, params, cfg.quad())
            rows.append(list(pt) + [s, cfg.p, ov.value, ov.error_estimate, pv_value])
    meta = _meta_line(cfg, "operator values")
    _write_csv(os.path.join(cfg.out, "eval.csv"), meta, header, rows)
    _write_json(os.path.join(cfg.out, "eval.json"), cfg, header, rows)
    return 0


def cmd_solve(cfg) -> int:
    mesh = _build_mesh(cfg)
    params = cfg.frac_params()
    fprof = cfg.make_profile("f")
    gprof = cfg.make_profile("g")
    prob = solver.Problem(
        mesh=mesh, params=params, f=fprof, g=gprof,
        g_far=_effective_g_far(cfg, gprof),
    )
    K = solver.assemble_kernel(mesh, params)
    shell = solver.far_field_weights(mesh, params)
    sol = solver.solve(prob, K, shell)

    header = _coord_header(cfg.n) + ["value"]
    rows = [list(map(float, node)) + [val] for node, val in zip(mesh.nodes, sol.values)]
    meta = _meta_line(cfg, "solution snapshot")
    _write_csv(os.path.join(cfg.out, "solution.csv"), meta, header, rows)
    _write_json(os.path.join(cfg.out, "solution.json"), cfg, header, rows)

    log = sol.energy_log if sol.energy_log else [sol.energy]
    log_header = ["iteration", "energy"]
    log_rows = [[i, e] for i, e in enumerate(log)]
    meta = _meta_line(cfg, "convergence log")
    _write_csv(os.path.join(cfg.out, "convergence.csv"), meta, log_header, log_rows)

    sum_header = [
        "nodes", "interior", "iterations", "converged",
        "residual", "rel_residual", "energy",
    ]
    sum_rows = [[
        mesh.num_nodes, len(mesh.interior_idx), sol.iterations, sol.converged,
        sol.residual, sol.rel_residual, sol.energy,
    ]]
    meta = _meta_line(cfg, "solve summary")
    _write_csv(os.path.join(cfg.out, "summary.csv"), meta, sum_header, sum_rows)
    _write_json(os.path.join(cfg.out, "summary.json"), cfg, sum_header, sum_rows)
    return 0 if sol.converged else 3


def _f_sup_ball(fprof, mesh: solver.Mesh, xi0, R: float) -> float:
    mask = mesh.ball_mask(xi0, R) & mesh.interior
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(np.asarray(fprof(mesh.nodes[mask]), dtype=float))))


def cmd_harnack(cfg) -> int:
    h_values = cfg.h_list or [cfg.h]
    s_values = cfg.s_list or [cfg.s]
    fprof = cfg.make_profile("f")
    gprof = cfg.make_profile("g")
    xi0 = np.asarray(cfg.center, dtype=float)
    header = [
        "check", "h", "s", "t", "c_star", "lhs", "inf", "sup",
        "tail", "chi", "f_norm", "ok",
    ]
    rows = []
    all_converged = True
    for h in h_values:
        mesh = _build_mesh(cfg, h)
        for s in s_values:
            params = cfg.frac_params(s)
            K = solver.assemble_kernel(mesh, params)
            shell = solver.far_field_weights(mesh, params)
            prob = solver.Problem(
                mesh=mesh, params=params, f=fprof, g=gprof,
                g_far=_effective_g_far(cfg, gprof),
            )
            sol = solver.solve(prob, K, shell)
            all_converged = all_converged and sol.converged

            rep = harnack.harnack_constant(sol, fprof, params, xi0, cfg.r, cfg.R)
            rows.append([
                "harnack", h, s, "", rep.c_star, rep.lhs, rep.inf, rep.sup,
                rep.tail_neg, rep.chi, rep.f_norm, "",
            ])
            for t in cfg.t_list:
                wrep = harnack.weak_harnack_check(
                    sol, fprof, params, xi0, cfg.r, cfg.R, t
                )
                rows.append([
                    "weak", h, s, t, wrep.c_star, wrep.lhs, wrep.inf, wrep.sup,
                    wrep.tail_neg, wrep.chi, wrep.f_norm, "",
                ])
            for delta in cfg.delta_list:
                brep = harnack.boundedness_check(
                    sol, params, xi0, cfg.R / 2.0, delta
                )
                rows.append([
                    "boundedness", h, s, delta, brep.c_star, brep.lhs, "",
                    brep.lhs, brep.tail_term, "", "", brep.ok,
                ])
            crep = harnack.caccioppoli_check(
                sol, params, xi0, cfg.R / 2.0, cfg.R, cfg.q, cfg.d,
                profiles.gauge_cutoff(cfg.R / 2.0, n=cfg.n),
                f_norm=_f_sup_ball(fprof, mesh, xi0, cfg.R),
            )
            rows.append([
                "caccioppoli", h, s, cfg.q, crep.ratio, crep.lhs, "", "",
                crep.tail_term, "", "", "",
            ])
            trep = harnack.tail_control_check(
                sol, fprof, params, xi0, cfg.r, cfg.R
            )
            rows.append([
                "tail-control", h, s, "", trep.c_star, trep.lhs_tail, "",
                trep.sup, trep.tail_term, "", "", "",
            ])
    meta = _meta_line(cfg, "inequality reports")
    _write_csv(os.path.join(cfg.out, "harnack.csv"), meta, header, rows)
    _write_json(os.path.join(cfg.out, "harnack.json"), cfg, header, rows)
    return 0 if all_converged else 3


def cmd_asymptotics(cfg) -> int:
    u = cfg.make_profile("f")
    xi = np.asarray(cfg.points[0], dtype=float)
    s_values = cfg.s_list or [0.7, 0.8, 0.9, 0.95, 0.99]
    pts = operators.asymptotics_sweep(u, xi, s_values, n=cfg.n, quad=cfg.quad())
    a_header = ["s", "frac_value", "limit_value", "abs_error", "error_estimate"]
    a_rows = [
        [p.s, p.frac_value, p.limit_value, p.abs_error, p.error_estimate]
        for p in pts
    ]
    meta = _meta_line(cfg, "operator limit sweep")
    _write_csv(os.path.join(cfg.out, "asymptotics.csv"), meta, a_header, a_rows)
    _write_json(os.path.join(cfg.out, "asymptotics.json"), cfg, a_header, a_rows)

    mesh = _build_mesh(cfg)
    gprof = cfg.make_profile("g")
    xi0 = np.asarray(cfg.center, dtype=float)
    rrows = harnack.robustness_sweep(
        mesh, gprof, cfg.robust_s_list, xi0, cfg.r, cfg.R,
        g_far=_effective_g_far(cfg, gprof),
    )
    r_header = [
        "s", "c_star", "tail_coefficient", "c_star_weak", "tail_neg", "tail_term",
    ]
    r_rows = [
        [row.s, row.c_star_harnack, row.tail_coefficient,
         row.c_star_weak, row.tail_neg, row.tail_term]
        for row in rrows
    ]
    meta = _meta_line(cfg, "robustness sweep")
    _write_csv(os.path.join(cfg.out, "robustness.csv"), meta, r_header, r_rows)
    _write_json(os.path.join(cfg.out, "robustness.json"), cfg, r_header, r_rows)
    return 0


_DISPATCH = {
    "eval": cmd_eval,
    "solve": cmd_solve,
    "harnack": cmd_harnack,
    "asymptotics": cmd_asymptotics,
}


def _error_line(code: int, exc: Exception) -> None:
    msg = " ".join(str(exc).split()).replace('"', "'")
    sys.stderr.write(
        f'hfrac-error code={code} kind={type(exc).__name__} message="{msg}"\n'
    )


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hfrac",
        description="Nonlocal p-operators on the first Heisenberg group: "
        "evaluation, Dirichlet solves, and inequality reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in configlib.COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")
        p.add_argument("--threads", type=int, default=None,
                       help="BLAS thread cap (0 leaves the default)")
    args = parser.parse_args(argv)
    try:
        cfg = configlib.load(
            args.config,
            overrides={
                "command": args.command, "out": args.out,
                "seed": args.seed, "threads": args.threads,
            },
        )
        os.makedirs(cfg.out, exist_ok=True)
        if cfg.threads > 0:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=cfg.threads):
                return _DISPATCH[cfg.command](cfg)
        return _DISPATCH[cfg.command](cfg)
    except ConfigError as exc:
        _error_line(2, exc)
        return 2
    except (ConvergenceError, DegenerateCheckError) as exc:
        _error_line(3, exc)
        return 3
    except GeometryError as exc:
        _error_line(4, exc)
        return 4


if __name__ == "__main__":
    sys.exit(main())
