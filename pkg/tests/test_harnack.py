"""Ball statistics, the inequality checkers, and the iteration lemmas."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hfrac import (
    DegenerateCheckError,
    DiscreteFunction,
    FracParams,
    GeometryError,
    ball_stats,
    boundedness_check,
    caccioppoli_check,
    chi_term,
    harnack_constant,
    iter_lemma_geometric,
    iter_lemma_interpolation,
    level_set_measure,
    positivity_expansion_check,
    robustness_sweep,
    tail_control_check,
    weak_harnack_check,
)
from hfrac import profiles, solver

from conftest import ORIGIN, REF


def _const(mesh, c):
    return DiscreteFunction(
        mesh=mesh, values=np.full(mesh.num_nodes, float(c)), far_value=float(c)
    )


def test_ball_stats_constant(mesh_default):
    stats = ball_stats(_const(mesh_default, 2.0), ORIGIN, 0.5,
                       exponents=[0.5, 1.0, 2.0])
    assert stats.sup == 2.0 and stats.inf == 2.0
    for m in stats.means.values():
        assert np.isclose(m, 2.0, rtol=1e-12)
    expected = np.count_nonzero(
        mesh_default.ball_mask(ORIGIN, 0.5) & mesh_default.interior
    )
    assert stats.count == expected


def test_ball_stats_validation(mesh_default):
    u = _const(mesh_default, 1.0)
    # center between lattice points, radius below the spacing
    with pytest.raises(GeometryError):
        ball_stats(u, np.array([0.11, 0.07, 0.013]), 1e-6)
    with pytest.raises(ValueError):
        ball_stats(u, ORIGIN, 0.5, exponents=[-1.0])
    neg = _const(mesh_default, -1.0)
    with pytest.raises(ValueError):
        ball_stats(neg, ORIGIN, 0.5, exponents=[0.5])
    # integer exponents stay legal for signed values
    assert ball_stats(neg, ORIGIN, 0.5, exponents=[2.0]).means[2.0] > 0


@settings(max_examples=25)
@given(seed=st.integers(0, 10_000))
def test_power_means_monotone(mesh_default, seed):
    rng = np.random.default_rng(seed)
    u = DiscreteFunction(
        mesh=mesh_default,
        values=rng.uniform(0.1, 5.0, mesh_default.num_nodes),
    )
    stats = ball_stats(u, ORIGIN, 0.7, exponents=[0.5, 1.0, 2.0, 4.0])
    seq = [stats.means[a] for a in (0.5, 1.0, 2.0, 4.0)]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(seq, seq[1:]))
    assert stats.inf <= seq[0] and seq[-1] <= stats.sup


def test_harnack_constant_on_constant(mesh_default):
    rep = harnack_constant(_const(mesh_default, 3.0), 0.0, REF, ORIGIN, 0.24, 1.45)
    assert rep.c_star == 1.0
    assert rep.tail_neg == 0.0 and rep.f_norm == 0.0
    assert rep.per_term["inf"] == 1.0
    assert rep.regime == "subcritical" and rep.t is None


def test_harnack_guards(mesh_default):
    u = _const(mesh_default, 1.0)
    with pytest.raises(GeometryError):
        harnack_constant(u, 0.0, REF, ORIGIN, 0.3, 1.0)
    with pytest.raises(ValueError):
        harnack_constant(_const(mesh_default, -1.0), 0.0, REF, ORIGIN, 0.24, 1.45)
    # a single positive spike over zeros: sup > 0 with every term zero
    vals = np.zeros(mesh_default.num_nodes)
    vals[np.all(mesh_default.local == 0.0, axis=1)] = 1.0
    spike = DiscreteFunction(mesh=mesh_default, values=vals)
    with pytest.raises(DegenerateCheckError):
        harnack_constant(spike, 0.0, REF, ORIGIN, 0.24, 1.45)


def test_harnack_scale_invariance(source_solutions):
    u = source_solutions["coarse"]
    scaled = DiscreteFunction(
        mesh=u.mesh, values=2.7 * u.values, far_value=2.7 * u.far_value
    )
    a = harnack_constant(u, 0.0, REF, ORIGIN, 0.224, 1.35)
    b = harnack_constant(scaled, 0.0, REF, ORIGIN, 0.224, 1.35)
    assert np.isclose(a.c_star, b.c_star, rtol=1e-12)


def test_chi_term_subcritical():
    # t cap is Q(p-1)/(Q-sp) = 4/3 at the reference parameters
    with pytest.raises(ValueError):
        chi_term(REF, 0.5, 1.0, 4.0 / 3.0)
    assert chi_term(REF, 0.5, 0.0, 1.0) == 0.0
    got = chi_term(REF, 0.5, 2.0, 1.0)
    assert np.isclose(got, 0.5 ** (4.0 / 3.0) * 2.0 ** (4.0 / 3.0), rtol=1e-12)
    for bad in [(0.0, 1.0, 1.0), (0.5, -1.0, 1.0), (0.5, 1.0, 0.0)]:
        with pytest.raises(ValueError):
            chi_term(REF, *bad)


def test_chi_term_supercritical():
    no_eps = FracParams(n=1, s=0.9, p=5.0)
    assert no_eps.regime == "supercritical"
    with pytest.raises(ValueError):
        chi_term(no_eps, 0.5, 1.0, 1.0)
    params = FracParams(n=1, s=0.9, p=5.0, epsilon=0.5)
    # cap becomes (p-1)s/eps = 7.2
    with pytest.raises(ValueError):
        chi_term(params, 0.5, 1.0, 7.2)
    got = chi_term(params, 0.5, 2.0, 1.0)
    pred = 0.5 ** (4.0 * 0.4 / 0.5) * 2.0 ** (0.9 / 0.5)
    assert np.isclose(got, pred, rtol=1e-12)


def test_weak_harnack_on_constant(mesh_default):
    rep = weak_harnack_check(_const(mesh_default, 2.0), 0.0, REF,
                             ORIGIN, 0.24, 1.45, t=1.0)
    assert np.isclose(rep.c_star, 1.0, rtol=1e-12)
    assert rep.chi == 0.0 and rep.t == 1.0
    # t validation runs even for a zero source
    with pytest.raises(ValueError):
        weak_harnack_check(_const(mesh_default, 2.0), 0.0, REF,
                           ORIGIN, 0.24, 1.45, t=2.0)


def test_boundedness_on_constant(mesh_default):
    u = _const(mesh_default, 1.0)
    with pytest.raises(ValueError):
        boundedness_check(u, REF, ORIGIN, 0.8, 0.0)
    with pytest.raises(ValueError):
        boundedness_check(u, REF, ORIGIN, 0.8, 1.1)
    rep = boundedness_check(u, REF, ORIGIN, 0.8, 1.0)
    assert rep.gamma == 2.0
    # the full tail of a positive constant dominates the sup outright
    assert rep.c_star == 0.0 and rep.ok


def test_caccioppoli_validation(flip_solution):
    phi = profiles.gauge_cutoff(0.23)
    for q in (1.0, 2.0, 2.5):
        with pytest.raises(ValueError):
            caccioppoli_check(flip_solution, REF, ORIGIN, 0.23, 1.4, q, 0.1, phi)
    with pytest.raises(ValueError):
        caccioppoli_check(flip_solution, REF, ORIGIN, 0.23, 1.4, 1.5, 0.0, phi)
    with pytest.raises(ValueError):
        caccioppoli_check(flip_solution, REF, ORIGIN, 0.23, 1.4, 1.5, 0.1, phi,
                          f_norm=-1.0)


def test_caccioppoli_shift_scaling(flip_solution):
    # tail goes like d^(1-p), load like d^(1-q)
    phi = profiles.gauge_cutoff(0.23)
    args = (flip_solution, REF, ORIGIN, 0.23, 1.4, 1.5)
    rep1 = caccioppoli_check(*args, 0.1, phi, f_norm=2.0)
    rep2 = caccioppoli_check(*args, 0.2, phi, f_norm=2.0)
    assert rep1.tail_term > 0.0
    assert np.isclose(rep1.tail_term / rep2.tail_term, 2.0, rtol=1e-12)
    assert np.isclose(rep1.load_term / rep2.load_term, 2.0 ** 0.5, rtol=1e-12)


def test_caccioppoli_constant_saturates(mesh_default):
    # constant u makes lhs equal the sup-kernel term and kills the rest
    rep = caccioppoli_check(_const(mesh_default, 1.0), REF, ORIGIN,
                            0.5, 1.2, 1.5, 0.1, profiles.gauge_cutoff(0.5))
    assert rep.tail_term == 0.0 and rep.load_term == 0.0
    assert np.isclose(rep.ratio, 1.0, rtol=1e-10)
    assert rep.ratio <= 1.0 + 1e-10


def test_level_set_measure(mesh_default):
    u = _const(mesh_default, 1.0)
    ball = (ORIGIN, 0.8)
    idx = np.nonzero(mesh_default.ball_mask(ORIGIN, 0.8))[0]
    total = float(np.sum(mesh_default.weights[idx]))
    # closed superlevel set: equality counts
    assert level_set_measure(u, ball, 1.0) == total
    assert level_set_measure(u, ball, 1.0 + 1e-12) == 0.0
    rng = np.random.default_rng(11)
    v = DiscreteFunction(
        mesh=mesh_default, values=rng.normal(size=mesh_default.num_nodes)
    )
    ms = [level_set_measure(v, ball, k) for k in np.linspace(-2, 2, 9)]
    assert all(b <= a for a, b in zip(ms, ms[1:]))


def test_positivity_on_constant(mesh_default):
    u = _const(mesh_default, 1.0)
    rep = positivity_expansion_check(u, 0.0, REF, ORIGIN, 0.18, 1.45,
                                     k=1.0, sigma=0.5, delta=0.1)
    assert rep.fraction == 0.0 and rep.cbar == 0.0 and rep.ok
    assert rep.inf_4r == 1.0
    assert rep.delta_empirical == pytest.approx(0.2499)


def test_positivity_guards(mesh_default):
    u = _const(mesh_default, 1.0)
    with pytest.raises(GeometryError):
        positivity_expansion_check(u, 0.0, REF, ORIGIN, 0.2, 1.5,
                                   k=1.0, sigma=0.5, delta=0.1)
    with pytest.raises(ValueError):
        positivity_expansion_check(u, 0.0, REF, ORIGIN, 0.18, 1.45,
                                   k=1.0, sigma=0.5, delta=0.3)
    with pytest.raises(ValueError):
        positivity_expansion_check(u, 0.0, REF, ORIGIN, 0.18, 1.45,
                                   k=1.0, sigma=1.5, delta=0.1)
    # density hypothesis fails when k sits above the sup
    with pytest.raises(DegenerateCheckError):
        positivity_expansion_check(u, 0.0, REF, ORIGIN, 0.18, 1.45,
                                   k=2.0, sigma=0.5, delta=0.1)


def test_positivity_stable_under_refinement(peak_solutions, peak_profile):
    rp = 0.168
    coarse = peak_solutions["coarse"]
    mask = coarse.mesh.ball_mask(ORIGIN, 6 * rp)
    k = float(np.quantile(coarse.values[mask], 0.4))
    reps = {
        name: positivity_expansion_check(
            sol, peak_profile, REF, ORIGIN, rp, 1.35, k, sigma=0.25, delta=0.1
        )
        for name, sol in peak_solutions.items()
    }
    for rep in reps.values():
        assert rep.ok
        assert rep.delta_empirical >= rep.delta_formula
    drift = abs(reps["coarse"].cbar - reps["fine"].cbar) / reps["coarse"].cbar
    assert drift <= 0.25


def test_tail_control_constant(mesh_default):
    params = FracParams(n=1, s=0.6, p=2.0)
    rep = tail_control_check(_const(mesh_default, 1.0), 0.0, params,
                             ORIGIN, 0.6, 1.35)
    # lhs is the discrete tail of 1, sup is 1, the rest vanishes
    assert rep.tail_term == 0.0 and rep.source_term == 0.0
    assert np.isclose(rep.c_star, np.pi ** 2 / 0.6, rtol=0.04)
    zero = tail_control_check(
        DiscreteFunction(mesh=mesh_default,
                         values=np.zeros(mesh_default.num_nodes)),
        0.0, params, ORIGIN, 0.6, 1.35,
    )
    assert zero.lhs_tail == 0.0 and zero.c_star == 0.0
    with pytest.raises(GeometryError):
        tail_control_check(_const(mesh_default, 1.0), 0.0, params,
                           ORIGIN, 1.35, 0.6)


def test_tail_control_stable_under_refinement(source_solutions):
    reps = {
        name: tail_control_check(sol, 1.0, REF, ORIGIN, 0.6, 1.35)
        for name, sol in source_solutions.items()
    }
    drift = abs(reps["coarse"].c_star - reps["fine"].c_star) / reps["coarse"].c_star
    assert drift <= 0.20


def test_iter_geometric_edges():
    rep = iter_lemma_geometric(1.0, 2.0, 1.0, np.zeros(6))
    assert rep.hypothesis_ok and rep.limit_zero and all(rep.bounds)
    # starting term above the smallness threshold voids the conclusion
    rep = iter_lemma_geometric(1.0, 2.0, 1.0, [0.6, 0.1])
    assert rep.threshold == 0.5
    assert not rep.threshold_ok and not rep.hypothesis_ok
    assert rep.bounds == [] and not rep.limit_zero
    for bad in [(0.0, 2.0, 1.0, [0.1]), (1.0, 1.0, 1.0, [0.1]),
                (1.0, 2.0, 0.0, [0.1]), (1.0, 2.0, 1.0, []),
                (1.0, 2.0, 1.0, [-0.1])]:
        with pytest.raises(ValueError):
            iter_lemma_geometric(*bad)


def test_iter_interpolation_edges():
    ts = np.linspace(0.0, 1.0, 6)
    rep = iter_lemma_interpolation((ts, np.zeros(6)), 1.0, 1.0, 1.0, 0.0)
    assert rep.premise_ok and rep.rho_bound_ok and rep.constant == 1.0
    # a spike the premise cannot produce
    rep = iter_lemma_interpolation(([0.0, 1.0], [1e6, 0.0]), 0.0, 0.0, 1.0, 0.0)
    assert not rep.premise_ok
    for bad in [((ts, np.zeros(6)), -1.0, 0.0, 1.0, 0.0),
                ((ts, np.zeros(6)), 0.0, 0.0, 0.0, 0.0),
                ((ts, np.zeros(6)), 0.0, 0.0, 1.0, 1.0),
                (([0.0], [0.0]), 0.0, 0.0, 1.0, 0.0),
                (([0.0, 0.0], [0.0, 0.0]), 0.0, 0.0, 1.0, 0.0),
                ((ts, -np.ones(6)), 0.0, 0.0, 1.0, 0.0)]:
        with pytest.raises(ValueError):
            iter_lemma_interpolation(*bad)


def test_robustness_sweep_constant_data():
    mesh = solver.build_mesh(0.3, 0.8, 1.1)
    rows = robustness_sweep(mesh, 1.0, [0.6, 0.9], ORIGIN, 0.17, 1.02)
    assert [row.s for row in rows] == [0.6, 0.9]
    for row in rows:
        # nonnegative data has no negative tail anywhere
        assert row.tail_neg == 0.0 and row.tail_term == 0.0
        assert np.isclose(row.c_star_harnack, 1.0, rtol=1e-12)
        assert np.isclose(row.c_star_weak, 1.0, rtol=1e-12)
        pred = (1.0 - row.s) * (0.17 / 1.02) ** (2.0 * row.s)
        assert row.tail_coefficient == pred
    assert np.isclose(rows[1].tail_coefficient,
                      0.1 * (1.0 / 6.0) ** 1.8, rtol=1e-12)
    # rerunning reproduces every row bit for bit
    assert robustness_sweep(mesh, 1.0, [0.6, 0.9], ORIGIN, 0.17, 1.02) == rows


def test_robustness_sweep_validation():
    mesh = solver.build_mesh(0.3, 0.8, 1.1)
    with pytest.raises(ValueError):
        robustness_sweep(mesh, 1.0, [0.9, 0.6], ORIGIN, 0.17, 1.02)
    with pytest.raises(ValueError):
        robustness_sweep(mesh, 1.0, [0.5, 1.0], ORIGIN, 0.17, 1.02)
