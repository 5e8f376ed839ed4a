"""Empirical verification of the quantitative estimates for nonnegative solutions.

Each check evaluates both sides of one inequality on a discrete solution and
reports the smallest single constant that turns it into an equality, plus the
per-term minimal constants for diagnosis.  Nothing here proves an estimate:
the value of a check is finiteness and stability of the measured constant
under mesh refinement, together with the exactly-zero tail term whenever the
data is nonnegative everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import group, operators, solver
from .errors import DegenerateCheckError, GeometryError
from .operators import FracParams
from .solver import DiscreteFunction, Problem

_TIE = 1e-9   # relative slack on ball inclusions and equality checks

NodeData = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, float]


@dataclass
class BallStats:
    """Weighted sup/inf and power means of a mesh function over a gauge ball."""

    center: np.ndarray
    radius: float
    sup: float
    inf: float
    means: dict
    count: int


def _ball_idx(u: DiscreteFunction, xi0, r: float, interior_only: bool = True):
    mask = u.mesh.ball_mask(np.asarray(xi0, dtype=float), r)
    if interior_only:
        mask = mask & u.mesh.interior
    return np.nonzero(mask)[0]


def ball_stats(
    u: DiscreteFunction, xi0, r: float, exponents: Sequence[float] = ()
) -> BallStats:
    """Discrete sup, inf, and (weighted mean of u^a)^(1/a) over interior nodes in B_r."""
    idx = _ball_idx(u, xi0, r)
    if len(idx) == 0:
        raise GeometryError("ball contains no interior nodes at this resolution")
    vals = u.values[idx]
    w = u.mesh.weights[idx]
    wsum = float(np.sum(w))
    means = {}
    for a in exponents:
        a = float(a)
        if a <= 0:
            raise ValueError("mean exponents must be positive")
        if vals.min() < 0 and not a.is_integer():
            raise ValueError("fractional mean exponent requires nonnegative values")
        means[a] = float(np.sum(w * vals ** a) / wsum) ** (1.0 / a)
    return BallStats(
        center=np.asarray(xi0, dtype=float), radius=r,
        sup=float(vals.max()), inf=float(vals.min()), means=means, count=len(idx),
    )


@dataclass
class HarnackReport:
    """Both sides of a sup/mean-versus-inf inequality and the measured constants.

    lhs is the left side (the sup for the strong form, the t-mean for the weak
    form); c_star is the single scalar applied to every right-hand term
    simultaneously; per_term holds the minimal constant each term would need
    alone, inf for a vanishing term.
    """

    params: FracParams
    xi0: np.ndarray
    r: float
    R: float
    h: float
    sup: float
    inf: float
    lhs: float
    tail_neg: float
    f_norm: float
    chi: float
    regime: str
    t: Optional[float]
    c_star: float
    per_term: dict


def _require_inclusion(factor: float, r: float, R: float) -> None:
    if factor * r > R * (1.0 + _TIE):
        raise GeometryError(
            f"ball inclusion B_{factor:g}r within B_R fails: "
            f"{factor:g}*{r:g} > {R:g}"
        )


def _require_nonneg(u: DiscreteFunction, xi0, R: float) -> None:
    idx = _ball_idx(u, xi0, R, interior_only=False)
    if len(idx) == 0:
        return
    vals = u.values[idx]
    tol = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    if float(vals.min()) < -tol:
        raise ValueError("function must be nonnegative on the reference ball")


def _f_sup(f: NodeData, u: DiscreteFunction, xi0, R: float) -> float:
    idx = _ball_idx(u, xi0, R)
    fv = solver._sample(f, u.mesh)
    if len(idx) == 0:
        return 0.0
    return float(np.max(np.abs(fv[idx])))


def _min_constant(lhs: float, terms: Sequence[float]) -> float:
    denom = float(sum(terms))
    if denom == 0.0:
        if lhs > 0.0:
            raise DegenerateCheckError(
                "inequality unverifiable at this resolution: "
                "every right-hand term vanishes while the left side is positive"
            )
        return 0.0
    return lhs / denom


def _per_term(lhs: float, named_terms: dict) -> dict:
    out = {}
    for name, term in named_terms.items():
        if term > 0.0:
            out[name] = lhs / term
        else:
            out[name] = 0.0 if lhs == 0.0 else float("inf")
    return out


def harnack_constant(
    u: DiscreteFunction,
    f: NodeData,
    params: FracParams,
    xi0,
    r: float,
    R: float,
    tail_weight: float = 1.0,
) -> HarnackReport:
    """Minimal constant closing  sup <= c*(inf + scaled tail + source term)  on B_r.

    Requires u >= 0 on B_R and the inclusion of B_6r in B_R.  tail_weight
    multiplies the tail term; the s-robustness sweep passes (1 - s) there.
    """
    _require_inclusion(6.0, r, R)
    _require_nonneg(u, xi0, R)
    xi0 = np.asarray(xi0, dtype=float)
    stats = ball_stats(u, xi0, r)
    exponent = params.sp / (params.p - 1.0)
    tail_neg = u.negative_part().tail(xi0, R, params)
    f_norm = _f_sup(f, u, xi0, R)
    terms = {
        "inf": stats.inf,
        "tail": tail_weight * (r / R) ** exponent * tail_neg,
        "source": r ** exponent * f_norm ** (1.0 / (params.p - 1.0)),
    }
    c_star = _min_constant(stats.sup, list(terms.values()))
    return HarnackReport(
        params=params, xi0=xi0, r=r, R=R, h=u.mesh.h,
        sup=stats.sup, inf=stats.inf, lhs=stats.sup,
        tail_neg=tail_neg, f_norm=f_norm, chi=0.0, regime=params.regime,
        t=None, c_star=c_star, per_term=_per_term(stats.sup, terms),
    )


def chi_term(params: FracParams, r: float, f_norm: float, t: float) -> float:
    """Source contribution to the weak form, regime-dependent in (s, p, Q)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if f_norm < 0:
        raise ValueError("f_norm must be nonnegative")
    if t <= 0:
        raise ValueError("t must be positive")
    Q, sp, p, s = params.Q, params.sp, params.p, params.s
    if sp < Q:
        t_max = Q * (p - 1.0) / (Q - sp)
        if t >= t_max:
            raise ValueError(f"t must lie below Q(p-1)/(Q-sp) = {t_max:g}")
        if f_norm == 0.0:
            return 0.0
        return r ** (Q * sp / (t * (Q - sp))) * f_norm ** (Q / (t * (Q - sp)))
    if params.epsilon is None:
        raise ValueError("epsilon must be set when sp >= Q")
    eps = params.epsilon
    t_max = (p - 1.0) * s / eps
    if t >= t_max:
        raise ValueError(f"t must lie below (p-1)s/eps = {t_max:g}")
    if f_norm == 0.0:
        return 0.0
    return r ** (Q * (s - eps) / (t * eps)) * f_norm ** (s / (t * eps))


def weak_harnack_check(
    u: DiscreteFunction,
    f: NodeData,
    params: FracParams,
    xi0,
    r: float,
    R: float,
    t: float,
    tail_weight: float = 1.0,
) -> HarnackReport:
    """Minimal constant closing  t-mean over B_r <= c*(inf over B_1.5r + tail + chi)."""
    _require_inclusion(6.0, r, R)
    _require_nonneg(u, xi0, R)
    xi0 = np.asarray(xi0, dtype=float)
    f_norm = _f_sup(f, u, xi0, R)
    chi = chi_term(params, r, f_norm, t)  # validates t for the regime
    stats = ball_stats(u, xi0, r, exponents=[t])
    lhs = stats.means[t]
    inf_wide = ball_stats(u, xi0, 1.5 * r).inf
    exponent = params.sp / (params.p - 1.0)
    tail_neg = u.negative_part().tail(xi0, R, params)
    terms = {
        "inf": inf_wide,
        "tail": tail_weight * (r / R) ** exponent * tail_neg,
        "chi": chi,
    }
    c_star = _min_constant(lhs, list(terms.values()))
    return HarnackReport(
        params=params, xi0=xi0, r=r, R=R, h=u.mesh.h,
        sup=stats.sup, inf=inf_wide, lhs=lhs,
        tail_neg=tail_neg, f_norm=f_norm, chi=chi, regime=params.regime,
        t=t, c_star=c_star, per_term=_per_term(lhs, terms),
    )


@dataclass
class BoundednessReport:
    lhs: float
    tail_term: float
    mean_term: float
    gamma: float
    delta: float
    c_star: float
    rhs: float
    ok: bool


def boundedness_check(
    u: DiscreteFunction, params: FracParams, xi0, r: float, delta: float
) -> BoundednessReport:
    """Interpolated sup bound: sup over B_r/2 against delta*Tail(u_+) plus a p-mean.

    The delta exponent is gamma = (p-1)Q/(s p^2); c_star is the smallest
    constant on the mean term making the bound hold.
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    xi0 = np.asarray(xi0, dtype=float)
    p = params.p
    gamma = (p - 1.0) * params.Q / (params.sp * p)
    sup_half = ball_stats(u, xi0, 0.5 * r).sup
    tail_pos = u.positive_part().tail(xi0, 0.5 * r, params)
    idx = _ball_idx(u, xi0, r)
    w = u.mesh.weights[idx]
    pos = np.clip(u.values[idx], 0.0, None)
    mean_p = float(np.sum(w * pos ** p) / np.sum(w)) ** (1.0 / p)
    slack = sup_half - delta * tail_pos
    if mean_p > 0.0:
        c_star = max(0.0, slack) * delta ** gamma / mean_p
    elif slack <= 0.0:
        c_star = 0.0
    else:
        raise DegenerateCheckError(
            "inequality unverifiable at this resolution: "
            "positive-part mean vanishes while the left side is positive"
        )
    rhs = delta * tail_pos + c_star / delta ** gamma * mean_p
    return BoundednessReport(
        lhs=sup_half, tail_term=delta * tail_pos, mean_term=mean_p,
        gamma=gamma, delta=delta, c_star=c_star, rhs=rhs,
        ok=sup_half <= rhs * (1.0 + _TIE) + 1e-300,
    )


@dataclass
class CaccioppoliReport:
    lhs: float
    kernel_term: float
    tail_term: float
    load_term: float
    rhs: float
    ratio: float


def caccioppoli_check(
    u: DiscreteFunction,
    params: FracParams,
    xi0,
    r: float,
    R: float,
    q: float,
    d: float,
    phi: Callable[[np.ndarray], np.ndarray],
    f_norm: float = 0.0,
) -> CaccioppoliReport:
    """Energy of the cutoff power w = (u+d)^((p-q)/p) against its structural bound.

    lhs is the double kernel sum of |w phi|-differences over B_r x B_r; the
    right side collects the sup-kernel term, the d^(1-p)-scaled tail term, and
    the d^(1-q)-scaled load term.  ratio = lhs/rhs is the measured constant.
    """
    p = params.p
    if not 1.0 < q < p:
        raise ValueError("q must lie strictly between 1 and p")
    if d <= 0:
        raise ValueError("the positivity shift d must be positive")
    if f_norm < 0:
        raise ValueError("f_norm must be nonnegative")
    _require_nonneg(u, xi0, R)
    xi0 = np.asarray(xi0, dtype=float)
    idx = _ball_idx(u, xi0, r, interior_only=False)
    if len(idx) == 0:
        raise GeometryError("ball contains no nodes at this resolution")
    mesh = u.mesh
    wts = mesh.weights[idx]
    wfun = (u.values[idx] + d) ** ((p - q) / p)
    phi_v = np.asarray(phi(mesh.nodes[idx]), dtype=float)
    local = mesh.local[idx]
    diff = group.group_mul(group.group_inv(local)[None, :, :], local[:, None, :])
    dist = params.norm.value(diff)
    np.putmask(dist, dist == 0.0, np.inf)
    kern = dist ** (-params.kernel_exponent) * wts[:, None] * wts[None, :]
    prod = wfun * phi_v
    lhs = float(np.sum(kern * np.abs(prod[:, None] - prod[None, :]) ** p))
    sup_w = np.maximum(wfun[:, None], wfun[None, :])
    kernel_term = float(
        np.sum(kern * sup_w ** p * np.abs(phi_v[:, None] - phi_v[None, :]) ** p)
    )
    tail_neg = u.negative_part().tail(xi0, R, params)
    tail_term = d ** (1.0 - p) * R ** (-params.sp) * tail_neg ** (p - 1.0)
    load_term = d ** (1.0 - q) * r ** params.Q * f_norm
    rhs = kernel_term + tail_term + load_term
    if rhs > 0.0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0.0 else float("inf")
    return CaccioppoliReport(
        lhs=lhs, kernel_term=kernel_term, tail_term=tail_term,
        load_term=load_term, rhs=rhs, ratio=ratio,
    )


def level_set_measure(u: DiscreteFunction, ball, k: float) -> float:
    """Weighted measure of the closed superlevel set {u >= k} inside the ball."""
    xi0, r = ball
    idx = _ball_idx(u, xi0, r, interior_only=False)
    vals = u.values[idx]
    return float(np.sum(u.mesh.weights[idx][vals >= k]))


@dataclass
class PositivityReport:
    lhs_measure: float
    total_measure: float
    fraction: float
    cbar: float
    bound: float
    ok: bool
    threshold: float
    tail_neg: float
    inf_4r: float
    delta_empirical: float
    delta_formula: float


def positivity_expansion_check(
    u: DiscreteFunction,
    f: NodeData,
    params: FracParams,
    xi0,
    r: float,
    R: float,
    k: float,
    sigma: float,
    delta: float,
    c1: float = 1.0,
) -> PositivityReport:
    """Density of {u >= k} on B_6r propagates to smallness of a low sublevel set.

    Requires the density hypothesis measure(B_6r cap {u >= k}) >= sigma
    measure(B_6r) and the inclusion of B_8r in B_R.  Reports the measured
    cbar in the sublevel bound, the empirically largest delta for which
    inf over B_4r >= delta*k - (r/R)^(sp/(p-1)) Tail(u_-), and the explicit
    exponential delta formula evaluated at the measured cbar for comparison
    (it is existential, not sharp, and typically underflows to zero).
    """
    _require_inclusion(8.0, r, R)
    if not 0.0 < delta < 0.25:
        raise ValueError("delta must lie in (0, 1/4)")
    if not 0.0 < sigma <= 1.0:
        raise ValueError("sigma must lie in (0, 1]")
    xi0 = np.asarray(xi0, dtype=float)
    idx6 = _ball_idx(u, xi0, 6.0 * r, interior_only=False)
    if len(idx6) == 0:
        raise GeometryError("ball contains no nodes at this resolution")
    w6 = u.mesh.weights[idx6]
    vals6 = u.values[idx6]
    total = float(np.sum(w6))
    super_measure = float(np.sum(w6[vals6 >= k]))
    if super_measure < sigma * total * (1.0 - _TIE):
        raise DegenerateCheckError(
            f"density hypothesis fails: measure fraction "
            f"{super_measure / total:.4g} below sigma = {sigma:g}"
        )
    exponent = params.sp / (params.p - 1.0)
    tail_neg = u.negative_part().tail(xi0, R, params)
    threshold = 2.0 * delta * k - 0.5 * (r / R) ** exponent * tail_neg
    lhs_measure = float(np.sum(w6[vals6 <= threshold]))
    log_factor = math.log(1.0 / (2.0 * delta))
    cbar = lhs_measure * sigma * log_factor / total
    bound = cbar / (sigma * log_factor) * total
    idx4 = _ball_idx(u, xi0, 4.0 * r, interior_only=False)
    inf_4r = float(np.min(u.values[idx4]))
    offset = (r / R) ** exponent * tail_neg
    grid = np.linspace(1e-3, 0.2499, 250)
    admissible = grid[inf_4r >= grid * k - offset - 1e-300]
    delta_empirical = float(admissible.max()) if len(admissible) else 0.0
    Q, sp, s, p = params.Q, params.sp, params.s, params.p
    arg = cbar * c1 ** ((Q - sp) / sp) * 2.0 ** ((Q / p + s + 2.0) * Q * (Q - sp) / (p * s * s)) / sigma
    delta_formula = 0.25 * math.exp(-arg) if arg < 745.0 else 0.0
    return PositivityReport(
        lhs_measure=lhs_measure, total_measure=total,
        fraction=lhs_measure / total, cbar=cbar, bound=bound,
        ok=lhs_measure <= bound * (1.0 + _TIE) + 1e-300,
        threshold=threshold, tail_neg=tail_neg, inf_4r=inf_4r,
        delta_empirical=delta_empirical, delta_formula=delta_formula,
    )


@dataclass
class TailControlReport:
    lhs_tail: float
    sup: float
    tail_term: float
    source_term: float
    rhs: float
    c_star: float
    per_term: dict


def tail_control_check(
    u: DiscreteFunction,
    f: NodeData,
    params: FracParams,
    xi0,
    r: float,
    R: float,
) -> TailControlReport:
    """Minimal constant bounding Tail(u_+; xi0, r) by the local sup plus tail and source."""
    if not 0.0 < r < R:
        raise GeometryError("radii must satisfy 0 < r < R")
    _require_nonneg(u, xi0, R)
    xi0 = np.asarray(xi0, dtype=float)
    lhs = u.positive_part().tail(xi0, r, params)
    stats = ball_stats(u, xi0, r)
    exponent = params.sp / (params.p - 1.0)
    tail_neg = u.negative_part().tail(xi0, R, params)
    f_norm = _f_sup(f, u, xi0, R)
    terms = {
        "sup": stats.sup,
        "tail": (r / R) ** exponent * tail_neg,
        "source": r ** exponent * f_norm ** (1.0 / (params.p - 1.0)),
    }
    c_star = _min_constant(lhs, list(terms.values()))
    return TailControlReport(
        lhs_tail=lhs, sup=stats.sup, tail_term=terms["tail"],
        source_term=terms["source"], rhs=float(sum(terms.values())),
        c_star=c_star, per_term=_per_term(lhs, terms),
    )


@dataclass
class GeometricIterReport:
    hypothesis_ok: bool
    recursion_ok: bool
    threshold_ok: bool
    threshold: float
    bounds: list
    limit_zero: bool


def iter_lemma_geometric(
    c0: float, b: float, beta: float, A: Sequence[float]
) -> GeometricIterReport:
    """Fast-geometric-decay lemma on a finite sequence.

    If A_{j+1} <= c0 b^j A_j^(1+beta) and A_0 <= c0^(-1/beta) b^(-1/beta^2),
    then A_j <= b^(-j/beta) A_0 termwise.  Bounds are only asserted when the
    hypothesis holds.
    """
    if c0 <= 0 or b <= 1 or beta <= 0:
        raise ValueError("need c0 > 0, b > 1, beta > 0")
    arr = np.asarray(A, dtype=float)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("A must be a nonempty sequence")
    if arr.min() < 0:
        raise ValueError("sequence terms must be nonnegative")
    threshold = c0 ** (-1.0 / beta) * b ** (-1.0 / beta ** 2)
    recursion_ok = all(
        arr[j + 1] <= c0 * b ** j * arr[j] ** (1.0 + beta) * (1.0 + 1e-12) + 1e-300
        for j in range(len(arr) - 1)
    )
    threshold_ok = arr[0] <= threshold * (1.0 + 1e-12)
    hypothesis_ok = recursion_ok and threshold_ok
    if hypothesis_ok:
        bounds = [
            bool(arr[j] <= b ** (-j / beta) * arr[0] * (1.0 + 1e-12) + 1e-300)
            for j in range(len(arr))
        ]
        limit_zero = all(bounds)
    else:
        bounds = []
        limit_zero = False
    return GeometricIterReport(
        hypothesis_ok=hypothesis_ok, recursion_ok=recursion_ok,
        threshold_ok=threshold_ok, threshold=threshold,
        bounds=bounds, limit_zero=limit_zero,
    )


@dataclass
class InterpolationIterReport:
    premise_ok: bool
    rho_bound_ok: bool
    constant: float


def iter_lemma_interpolation(
    g, c1: float, c2: float, theta: float, zeta: float
) -> InterpolationIterReport:
    """Absorption lemma for a sampled nonnegative function on an interval.

    g is a pair (ts, gs) of sample points and values.  The premise
    g(t) <= c1 (tau - t)^(-theta) + c2 + zeta g(tau) is checked on all sampled
    pairs t < tau; the conclusion g(rho) <= c (c1 (T1 - rho)^(-theta) + c2)
    uses the standard absorption constant c(theta, zeta), which is 1 at
    zeta = 0 and at least 1/(1 - zeta) in general.  The conclusion is only
    asserted by the lemma when the premise holds.
    """
    if c1 < 0 or c2 < 0:
        raise ValueError("c1 and c2 must be nonnegative")
    if theta <= 0:
        raise ValueError("theta must be positive")
    if not 0.0 <= zeta < 1.0:
        raise ValueError("zeta must lie in [0, 1)")
    ts, gs = (np.asarray(a, dtype=float) for a in g)
    if len(ts) < 2 or np.any(np.diff(ts) <= 0):
        raise ValueError("need at least two strictly increasing sample points")
    if gs.min() < 0:
        raise ValueError("g must be nonnegative")
    premise_ok = True
    for i in range(len(ts) - 1):
        gap = ts[i + 1 :] - ts[i]
        rhs = c1 * gap ** (-theta) + c2 + zeta * gs[i + 1 :]
        if np.any(gs[i] > rhs * (1.0 + 1e-12) + 1e-300):
            premise_ok = False
            break
    if zeta == 0.0:
        constant = 1.0
    else:
        lam = (2.0 * zeta / (1.0 + zeta)) ** (1.0 / theta)
        constant = max(
            (1.0 - lam) ** (-theta) * 2.0 / (1.0 - zeta), 1.0 / (1.0 - zeta)
        )
    T1 = ts[-1]
    gap = T1 - ts[:-1]
    bound = constant * (c1 * gap ** (-theta) + c2)
    rho_bound_ok = bool(np.all(gs[:-1] <= bound * (1.0 + 1e-12) + 1e-300))
    return InterpolationIterReport(
        premise_ok=premise_ok, rho_bound_ok=rho_bound_ok, constant=constant
    )


@dataclass
class RobustnessRow:
    s: float
    c_star_harnack: float
    c_star_weak: float
    tail_coefficient: float
    tail_neg: float
    tail_term: float


def robustness_sweep(
    mesh: solver.Mesh,
    g: NodeData,
    s_list: Sequence[float],
    xi0,
    r: float,
    R: float,
    t: float = 1.0,
    g_far: float = 0.0,
) -> list:
    """Harnack and weak-Harnack constants for the linear problem along s -> 1.

    Solves the p = 2, f = 0 problem with fixed exterior data for each s and
    measures both constants with the tail term weighted by (1 - s), whose
    coefficient (1 - s)(r/R)^(2s) drives the tail contribution to zero in the
    limit while the constants stay bounded.
    """
    s_arr = [float(s) for s in s_list]
    if any(b <= a for a, b in zip(s_arr, s_arr[1:])):
        raise ValueError("s_list must be strictly increasing")
    if s_arr and not 0.0 < s_arr[0] < 1.0 or s_arr and s_arr[-1] >= 1.0:
        raise ValueError("s values must lie in (0, 1)")
    xi0 = np.asarray(xi0, dtype=float)
    rows = []
    for s in s_arr:
        params = FracParams(n=mesh.n, s=s, p=2.0)
        K = solver.assemble_kernel(mesh, params)
        shell = solver.far_field_weights(mesh, params)
        prob = Problem(mesh=mesh, params=params, f=0.0, g=g, g_far=g_far)
        sol = solver.solve_linear(prob, K, shell)
        hrep = harnack_constant(
            sol, 0.0, params, xi0, r, R, tail_weight=1.0 - s
        )
        wrep = weak_harnack_check(
            sol, 0.0, params, xi0, r, R, t, tail_weight=1.0 - s
        )
        coeff = (1.0 - s) * (r / R) ** (2.0 * s)
        rows.append(
            RobustnessRow(
                s=s, c_star_harnack=hrep.c_star, c_star_weak=wrep.c_star,
                tail_coefficient=coeff, tail_neg=hrep.tail_neg,
                tail_term=coeff * hrep.tail_neg,
            )
        )
    return rows
