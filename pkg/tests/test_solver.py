"""Time stepping: outcomes, comparison structure, scheme agreement."""

import numpy as np
import pytest

from vhjlab.exponents import ProblemParams, RegimeMismatch
from vhjlab.gridop import RadialGrid, Regularization, stable_dt
from vhjlab.solver import (
    Bump,
    Custom,
    DataShapeError,
    FastDecay,
    FatTail,
    Outcome,
    SolverConfig,
    detect_extinction,
    extinction_time,
    run,
)

P_A = ProblemParams(1, 2.0, 0.5)
P_B = ProblemParams(2, 1.8, 0.6)
P_C = ProblemParams(2, 1.8, 0.85)


def test_zero_data_is_extinct_at_time_zero():
    grid = RadialGrid(1, 4.0, 64)
    res = run(P_A, grid, Regularization(eps=1e-3),
              Custom(P_A, lambda r: np.zeros_like(r)),
              SolverConfig(t_end=1.0, tol_ext=1e-9))
    assert res.outcome is Outcome.EXTINCT
    assert res.T_e_est == 0.0
    assert res.n_steps == 0


def test_sup_decreases_and_state_stays_nonnegative():
    grid = RadialGrid(1, 4.0, 256)
    ic = Bump(P_A, m=1 / 96, R0=1.0)
    assert ic.flat_certified
    res = run(P_A, grid, Regularization(eps=1e-5), ic,
              SolverConfig(t_end=0.02, tol_ext=1e-9, snapshot_times=(0.005, 0.01)))
    assert res.outcome is Outcome.HORIZON_REACHED
    assert np.all(np.diff(res.series["sup"]) <= 1e-14)
    for u in res.snapshots["u"]:
        assert np.all(u >= 0.0)


def test_radial_monotonicity_is_preserved():
    grid = RadialGrid(1, 4.0, 256)
    ic = Bump(P_A, m=1 / 96, R0=1.0)
    res = run(P_A, grid, Regularization(eps=1e-5), ic,
              SolverConfig(t_end=0.02, tol_ext=1e-9, snapshot_times=(0.01,)))
    for u in res.snapshots["u"]:
        assert np.all(np.diff(u) <= 1e-12 * res.sup0)


def test_ordered_data_stays_ordered_with_shared_steps():
    # same fixed dt for both runs: the discrete comparison principle
    grid = RadialGrid(1, 4.0, 64)
    reg = Regularization(eps=1e-2)
    lo = Bump(P_A, m=1 / 96, R0=1.0)
    hi = Bump(P_A, m=1 / 48, R0=1.0)
    dt = 0.25 * min(stable_dt(grid, P_A, reg, lo.sample(grid.r_cells)),
                    stable_dt(grid, P_A, reg, hi.sample(grid.r_cells)))
    times = (0.002, 0.004, 0.006)
    kw = dict(t_end=0.008, tol_ext=1e-12, fixed_dt=dt, snapshot_times=times)
    r_lo = run(P_A, grid, reg, lo, SolverConfig(**kw))
    r_hi = run(P_A, grid, reg, hi, SolverConfig(**kw))
    for ul, uh in zip(r_lo.snapshots["u"], r_hi.snapshots["u"]):
        assert np.all(uh - ul >= -1e-10)


def test_semi_implicit_tracks_explicit():
    grid = RadialGrid(1, 4.0, 128)
    reg = Regularization(eps=1e-2)
    ic = Bump(P_A, m=1 / 96, R0=1.0)
    kw = dict(t_end=0.01, tol_ext=1e-12)
    r_ex = run(P_A, grid, reg, ic, SolverConfig(scheme="explicit", **kw))
    dt = 0.5 * stable_dt(grid, P_A, reg, ic.sample(grid.r_cells))
    r_si = run(P_A, grid, reg, ic, SolverConfig(scheme="semi_implicit", max_dt=dt, **kw))
    assert r_ex.outcome is Outcome.HORIZON_REACHED
    assert r_si.outcome is Outcome.HORIZON_REACHED
    diff = np.max(np.abs(r_ex.u_final - r_si.u_final))
    assert diff <= 1e-3 * r_ex.sup0


def test_vanishing_regularization_is_cauchy():
    # halving eps repeatedly must contract the end states: the eps-flows
    # converge to a limit rather than drifting
    grid = RadialGrid(1, 4.0, 256)
    ic = Bump(P_A, m=1.0, R0=1.0)
    finals = []
    for eps in (0.016, 0.008, 0.004, 0.002):
        res = run(P_A, grid, Regularization(eps=eps), ic,
                  SolverConfig(t_end=0.05, tol_ext=1e-12))
        assert res.outcome is Outcome.HORIZON_REACHED
        finals.append(res.u_final)
    d = [np.max(np.abs(a - b)) for a, b in zip(finals, finals[1:])]
    # the dominant eps-error enters through the absorption near the support
    # edge and scales like eps^q = sqrt(eps): each halving gains ~0.71
    assert d[1] <= 0.8 * d[0]
    assert d[2] <= 0.8 * d[1]


def test_extinction_detection_on_synthetic_history():
    t = np.arange(0.0, 0.79999, 2e-5)
    sup = (0.8 - t) ** 2
    est = extinction_time(t, sup, 1e-8)
    # the crossing itself is at 0.8 - 1e-4; the true vanishing at 0.8
    assert abs(est - 0.7999) <= 2e-5
    assert abs(est - 0.8) <= 1.2e-4
    assert extinction_time(t, sup, 1e-12) is None
    assert detect_extinction(0.0, 1.0, 1.0, 0.0, 1e-6) == 1.0


def test_divergence_is_reported():
    grid = RadialGrid(1, 4.0, 64)
    reg = Regularization(eps=1e-2)
    ic = Bump(P_A, m=1 / 96, R0=1.0)
    dt = 50.0 * stable_dt(grid, P_A, reg, ic.sample(grid.r_cells))
    res = run(P_A, grid, reg, ic,
              SolverConfig(t_end=1.0, fixed_dt=dt, max_steps=10_000, tol_ext=1e-12))
    assert res.outcome is Outcome.DIVERGED


def test_semi_implicit_extinction_small_eps():
    # the p < 2 path with eps far below the explicit scheme's comfort zone
    grid = RadialGrid(2, 4.0, 256)
    ic = Bump(P_B, m=6e-7, R0=1.0)
    res = run(P_B, grid, Regularization(eps=1e-9), ic,
              SolverConfig(t_end=1.0, scheme="semi_implicit", tol_ext=1e-10))
    assert res.outcome is Outcome.EXTINCT
    assert 0.0 < res.T_e_est < 0.02
    assert np.all(np.diff(res.series["sup"]) <= 1e-16)


def test_snapshots_land_on_requested_times():
    grid = RadialGrid(1, 4.0, 128)
    res = run(P_A, grid, Regularization(eps=1e-3), Bump(P_A, m=1 / 96, R0=1.0),
              SolverConfig(t_end=0.02, tol_ext=1e-12, snapshot_times=(0.004, 0.011)))
    t = res.snapshots["t"]
    assert abs(t[1] - 0.004) <= 1e-12
    assert abs(t[2] - 0.011) <= 1e-12
    assert t[0] == 0.0 and abs(t[-1] - 0.02) <= 1e-12


def test_series_gradient_column():
    grid = RadialGrid(1, 4.0, 128)
    res = run(P_A, grid, Regularization(eps=1e-3), Bump(P_A, m=1 / 96, R0=1.0),
              SolverConfig(t_end=0.01, tol_ext=1e-12, series_gradient_power=0.75))
    col = res.series["grad_pow_sup"]
    assert col.shape == res.series["t"].shape
    assert np.all(np.isfinite(col)) and np.all(col[1:] > 0)


def test_data_validation():
    with pytest.raises(DataShapeError):
        Bump(P_A, m=0.0, R0=1.0)
    with pytest.raises(RegimeMismatch):
        Bump(P_C, m=1.0, R0=1.0)           # no default power outside q < p-1
    assert Bump(P_C, m=1.0, R0=1.0, power=2.0).power == 2.0
    with pytest.raises(DataShapeError):
        FastDecay(P_A, C=1.0, theta=0.9)   # threshold is 1 here
    FastDecay(P_A, C=1.0, theta=1.0)       # equality is the borderline case
    with pytest.raises(DataShapeError):
        FatTail(P_A, C=1.0, rho=1.0)       # fat means strictly below
    FatTail(P_A, C=1.0, rho=0.5)
    grid = RadialGrid(1, 4.0, 64)
    with pytest.raises(DataShapeError):
        run(P_A, grid, Regularization(eps=1e-3),
            Custom(P_A, lambda r: r - 1.0), SolverConfig(t_end=0.1))
    with pytest.raises(RegimeMismatch):
        run(P_B, grid, Regularization(eps=1e-3),
            Bump(P_B, m=1e-7, R0=1.0), SolverConfig(t_end=0.1))


def test_flat_certificate_depends_on_amplitude():
    lo = Bump(P_A, m=1 / 96, R0=1.0)
    hi = Bump(P_A, m=1.0, R0=1.0)
    assert lo.flat_certified and not hi.flat_certified
    assert lo.amplitude_bound == hi.amplitude_bound
    # kappa / (2 R0)^omega with kappa = 1/12, omega = 3
    assert abs(lo.amplitude_bound - 1 / 96) <= 1e-15
