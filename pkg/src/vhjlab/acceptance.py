"""The numbered verification battery behind ``vhjlab verify``.

Thirteen criteria, each measuring one advertised behavior of the package
end to end: exponent algebra, closed-form certificates, one-step scheme
structure, and the extinction phenomenology of three reference
configurations.  A Battery instance caches the reference runs so
criteria that share a simulation do not pay for it twice; the full
battery finishes in minutes on one desktop core.

Every quantitative bar lives here, spelled out at the check site, so a
failure message always names the measured value and the band it missed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .analysis import (
    check_domination,
    fit_exponent,
    gradient_quotient,
    j_diagnostic,
    support_radius,
)
from .closedform import (
    SelfSimSuper,
    certify_sign,
    find_A0,
    make_shrink_super,
    make_tail_sub,
    operator_terms,
)
from .exponents import ProblemParams, derive_constants
from .gridop import RadialGrid, Regularization, default_eps, discrete_rhs, stable_dt
from .solver import (
    Bump,
    FastDecay,
    FatTail,
    Outcome,
    SolverConfig,
    run,
)

PROBLEM_A = ProblemParams(1, 2.0, 0.5)
PROBLEM_B = ProblemParams(2, 1.8, 0.6)
PROBLEM_C = ProblemParams(2, 1.8, 0.85)

# Regularization for the reference runs.  The grid-tied default
# (dr^(2/3), about 1.6e-2 at M = 2048) is a continuation schedule, not a
# production setting: at that size the smoothed absorption is blunted
# near the support edge and the matching extinction tolerance lands
# above the bump's own amplitude.  A fixed 1e-7 sits four decades below
# the smallest gradients these runs resolve, so the regularized and
# ideal dynamics are indistinguishable at the tolerances checked here.
EPS_REFERENCE = 1e-7
# Runs built on the singular diffusion (p < 2) go through the
# semi-implicit scheme, whose step size is limited by the absorption
# slope ~ eps^(q-1); 1e-6 keeps those runs fast while staying far below
# every feature the criteria measure.
EPS_SINGULAR = 1e-6

BUMP_M = 1.0 / 96.0
BUMP_R0 = 1.0


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    details: dict

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {flag} [{self.elapsed:7.1f}s] {self.title}"

    def as_dict(self) -> dict:
        return {"number": self.number, "title": self.title,
                "passed": bool(self.passed), "elapsed": self.elapsed,
                "details": self.details}


SUITES = {
    "algebra": (1,),
    "closedform": (2, 3),
    "scheme": (4,),
    "phenomena": (5, 6, 7, 8, 9, 10, 11, 12, 13),
    "all": tuple(range(1, 14)),
}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x]
    return x


class Battery:
    """Runs numbered criteria, sharing the reference simulations."""

    def __init__(self, seed: int = 17):
        self.seed = seed
        self._cache: dict = {}

    def _memo(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    # ----- shared reference runs ---------------------------------------

    def run_bump_a(self, M: int):
        """Reference bump on the p = 2 configuration, gradient column on."""
        def build():
            grid = RadialGrid(1, 4.0, M)
            reg = Regularization(eps=EPS_REFERENCE)
            ic = Bump(PROBLEM_A, m=BUMP_M, R0=BUMP_R0)
            gp = (PROBLEM_A.p - PROBLEM_A.q - 1.0) / (PROBLEM_A.p - PROBLEM_A.q)
            cfg = SolverConfig(t_end=0.3, scheme="explicit",
                               tol_ext=1e-7, tol_pos=1e-7, series_stride=4,
                               series_gradient_power=gp,
                               series_gradient_floor=1e-5)
            return run(PROBLEM_A, grid, reg, ic, cfg)
        return self._memo(("bump_a", M), build)

    def run_bump_b(self, M: int):
        """Same bump recipe on the singular-diffusion configuration."""
        def build():
            grid = RadialGrid(2, 4.0, M)
            reg = Regularization(eps=EPS_SINGULAR)
            ic = Bump(PROBLEM_B, m=BUMP_M, R0=BUMP_R0)
            gp = (PROBLEM_B.p - PROBLEM_B.q - 1.0) / (PROBLEM_B.p - PROBLEM_B.q)
            cfg = SolverConfig(t_end=2.0, scheme="semi_implicit",
                               tol_ext=1e-8, tol_pos=1e-8, series_stride=4,
                               series_gradient_power=gp,
                               series_gradient_floor=1e-4)
            return run(PROBLEM_B, grid, reg, ic, cfg)
        return self._memo(("bump_b", M), build)

    def shrink_super(self):
        return self._memo("sigma", lambda: make_shrink_super(
            PROBLEM_A, decay_C=1.0, decay_theta=3.0, sup_u0=1.0))

    def run_shrink(self):
        """Slow-decay data, positive across the whole truncated grid."""
        def build():
            grid = RadialGrid(1, 32.0, 2048)
            reg = Regularization(eps=EPS_REFERENCE)
            ic = FastDecay(PROBLEM_A, C=1.0, theta=3.0)
            cfg = SolverConfig(t_end=0.05, scheme="explicit",
                               tol_ext=1e-9, tol_pos=1e-5, series_stride=16,
                               snapshot_times=(0.005, 0.01, 0.02))
            return run(PROBLEM_A, grid, reg, ic, cfg)
        return self._memo("shrink", build)

    def run_fat(self):
        def build():
            grid = RadialGrid(1, 16.0, 2048)
            reg = Regularization(eps=EPS_REFERENCE)
            ic = FatTail(PROBLEM_A, C=1.0, rho=0.5)
            cfg = SolverConfig(t_end=1.0, scheme="explicit",
                               tol_ext=1e-9, tol_pos=1e-9, series_stride=32,
                               snapshot_times=tuple(np.linspace(0.1, 1.0, 10)))
            return run(PROBLEM_A, grid, reg, ic, cfg)
        return self._memo("fat", build)

    def run_complete(self):
        """Complete-extinction configuration, snapshots pinned to T_e."""
        def build():
            grid = RadialGrid(2, 4.0, 2048)
            reg = Regularization(eps=EPS_SINGULAR)
            ic = Bump(PROBLEM_C, m=1.0, R0=1.0, power=2)
            probe = SolverConfig(t_end=10.0, scheme="semi_implicit",
                                 tol_ext=1e-6, tol_pos=1e-6, series_stride=64)
            first = run(PROBLEM_C, grid, reg, ic, probe)
            if first.outcome is not Outcome.EXTINCT:
                return first
            snaps = tuple(float(f) * first.T_e_est
                          for f in np.linspace(0.05, 0.95, 19))
            cfg = SolverConfig(t_end=10.0, scheme="semi_implicit",
                               tol_ext=1e-6, tol_pos=1e-6, series_stride=64,
                               snapshot_times=snaps)
            return run(PROBLEM_C, grid, reg, ic, cfg)
        return self._memo("complete", build)

    def run_border(self):
        """Tail decay exactly on the fast/fat threshold, singular config."""
        def build():
            grid = RadialGrid(2, 16.0, 2048)
            reg = Regularization(eps=EPS_SINGULAR)
            c = derive_constants(PROBLEM_B)
            ic = FastDecay(PROBLEM_B, C=1.0, theta=c.decay_threshold)
            cfg = SolverConfig(t_end=50.0, scheme="semi_implicit",
                               tol_ext=1e-8, tol_pos=1e-8, series_stride=64,
                               snapshot_times=(0.5, 1.0, 2.0, 4.0, 8.0))
            return run(PROBLEM_B, grid, reg, ic, cfg)
        return self._memo("border", build)

    def run_lifted(self, M: int):
        """Bump plus a constant positivity lift, counterterm off.

        The lift eps^0.249 stays inside the admissible lift window while
        leaving the bump two decades above the positivity filter, and
        switching the counterterm off makes the flat background decay at
        the exact rate eps^q, so the filter drift over the run is known.
        """
        def build():
            base = self.run_bump_a(M)
            t_end = 0.9 * base.T_e_est
            grid = RadialGrid(1, 4.0, M)
            reg = Regularization(eps=EPS_REFERENCE, counterterm=False)
            ic = Bump(PROBLEM_A, m=BUMP_M, R0=BUMP_R0)
            lift = EPS_REFERENCE ** 0.249
            tol_pos = (lift + 1e-5) / 10.0
            snaps = tuple(float(f) * t_end for f in np.linspace(0.05, 1.0, 20))
            cfg = SolverConfig(t_end=t_end, scheme="explicit",
                               tol_ext=1e-9, tol_pos=tol_pos, series_stride=64,
                               snapshot_times=snaps, lift=lift)
            return run(PROBLEM_A, grid, reg, ic, cfg)
        return self._memo(("lifted", M), build)

    def horizon_profile(self):
        """Certified decaying envelope for the border-decay run."""
        def build():
            A0, _ = find_A0(PROBLEM_B)
            A = 0.5 * A0
            # initial ordering W(0, .) >= u0 is tightest at the origin,
            # where it reads T^2 A >= 1; five percent of headroom
            T = 1.05 * (1.0 / A) ** 0.5
            return SelfSimSuper(PROBLEM_B, A=A, T=T), A0
        return self._memo("horizon", build)

    # ----- criteria -----------------------------------------------------

    def criterion_1(self) -> CriterionResult:
        """Derived-exponent identities across the single-point range."""
        t0 = time.time()
        rng = np.random.default_rng(self.seed)
        n_triples = 10_000
        worst = 0.0
        worst_triple = None
        for _ in range(n_triples):
            N = int(rng.integers(1, 6))
            p_lo = max(2.0 * N / (N + 1.0), 1.0) + 0.05
            p = float(rng.uniform(p_lo, 2.0))
            q = float(rng.uniform(0.05 * (p - 1.0), 0.95 * (p - 1.0)))
            c = derive_constants(ProblemParams(N, p, q))
            pairs = (
                (c.omega, c.gamma_sigma),
                (c.omega * c.alpha1, q / (1.0 - q)),
                (c.alpha_ss - 1.0, q * (c.alpha_ss + c.beta_ss)),
            )
            for a, b in pairs:
                err = abs(a - b) / max(1.0, abs(a), abs(b))
                if err > worst:
                    worst, worst_triple = err, (N, p, q)
        passed = worst <= 1e-12
        return CriterionResult(1, "derived-exponent identities", passed,
                               time.time() - t0,
                               {"n_triples": n_triples, "worst_error": worst,
                                "tolerance": 1e-12, "worst_triple": worst_triple})

    def criterion_2(self) -> CriterionResult:
        """The steady power-law barrier solves the operator exactly."""
        t0 = time.time()
        rng = np.random.default_rng(self.seed + 1)
        from .closedform import Barrier
        n_sets = 100
        worst = 0.0
        worst_at = None
        for _ in range(n_sets):
            N = int(rng.integers(1, 6))
            p_lo = max(2.0 * N / (N + 1.0) + 0.05, 1.3)
            p = float(rng.uniform(p_lo, 2.0))
            q = float(rng.uniform(0.05, p - 1.0 - 0.15))
            barrier = Barrier(ProblemParams(N, p, q))
            r = 10.0 ** rng.uniform(-3.0, 3.0, size=200)
            (dt, diff, drift, absorb), _ = operator_terms(barrier, 1.0, r)
            scale = np.abs(dt) + np.abs(diff) + np.abs(drift) + np.abs(absorb)
            rel = np.abs(dt + diff + drift + absorb) / scale
            k = int(np.argmax(rel))
            if rel[k] > worst:
                worst, worst_at = float(rel[k]), (N, p, q, float(r[k]))
        passed = worst <= 1e-12
        return CriterionResult(2, "steady barrier solves the operator exactly",
                               passed, time.time() - t0,
                               {"n_sets": n_sets, "points_per_set": 200,
                                "worst_residual": worst, "tolerance": 1e-12,
                                "worst_at": worst_at})

    def criterion_3(self) -> CriterionResult:
        """Sign certificates for the three comparison profiles."""
        t0 = time.time()
        rng = np.random.default_rng(self.seed + 2)
        sigma = self.shrink_super()
        cert_sigma = certify_sign(
            sigma, box=(1e-3, 0.999 * sigma.t0, 1.0001 * sigma.R, 1e3),
            sense="super", tol=1e-10, rng=rng)
        tail = make_tail_sub(PROBLEM_A, T=2.0)
        cert_tail = certify_sign(
            tail, box=(1e-3, 0.999 * 2.0, 1e-3, 1e3),
            sense="sub", tol=1e-10, rng=rng)
        W, A0 = self.horizon_profile()
        W2 = SelfSimSuper(PROBLEM_B, A=0.5 * A0, T=2.0)
        cert_w = certify_sign(
            W2, box=(1e-3, 0.999 * 2.0, 1e-4, 1e3),
            sense="super", tol=1e-10, rng=rng)
        passed = cert_sigma.passed and cert_tail.passed and cert_w.passed
        return CriterionResult(3, "closed-form sign certificates", passed,
                               time.time() - t0,
                               {"shrink_envelope": cert_sigma.as_dict(),
                                "tail_floor": cert_tail.as_dict(),
                                "decaying_envelope": cert_w.as_dict()})

    # -- one-step scheme structure --

    @staticmethod
    def _smooth_states(rng, grid: RadialGrid, n: int, knots: int = 9):
        """Nonnegative piecewise-linear fields with log-uniform amplitude."""
        kr = np.linspace(0.0, grid.r_max, knots)
        vals = rng.uniform(-0.4, 1.0, size=(n, knots))
        amp = 10.0 ** rng.uniform(-3.0, 0.0, size=(n, 1))
        rows = np.asarray([np.interp(grid.r_cells, kr, v) for v in vals])
        return np.clip(rows, 0.0, None) * amp

    @staticmethod
    def _explicit_step(problem, grid, reg, u, dt):
        return np.maximum(u + dt * discrete_rhs(grid, problem, reg, u), 0.0)

    def criterion_4(self) -> CriterionResult:
        """Comparison, maximum principle, shape preservation, per step.

        One explicit step under the stability bound, checked on random
        data for both reference parameter sets; four properties, a
        thousand trials each, slack 1e-10 relative to the field size.
        """
        t0 = time.time()
        rng = np.random.default_rng(self.seed + 3)
        slack = 1e-10
        trials_per_config = 500
        stats = {"comparison": 0.0, "max_principle": 0.0,
                 "radial_monotone": 0.0, "single_cell_ordering": 0.0}
        for problem in (PROBLEM_A, PROBLEM_B):
            grid = RadialGrid(problem.N, 4.0, 256)
            reg = Regularization(eps=default_eps(grid))
            n = trials_per_config

            # ordered fields stay ordered
            u = self._smooth_states(rng, grid, n)
            v = u + self._smooth_states(rng, grid, n)
            dt = stable_dt(grid, problem, reg, np.vstack((u, v)))
            u1 = self._explicit_step(problem, grid, reg, u, dt)
            v1 = self._explicit_step(problem, grid, reg, v, dt)
            scale = np.maximum(1.0, v.max(axis=1, keepdims=True))
            stats["comparison"] = max(stats["comparison"],
                                      float(((u1 - v1) / scale).max()))

            # bounds: nonnegative, and the sup can only creep by the
            # counterterm's eps^q dt
            w = self._smooth_states(rng, grid, n)
            dtw = stable_dt(grid, problem, reg, w)
            w1 = self._explicit_step(problem, grid, reg, w, dtw)
            allowance = reg.eps ** problem.q * dtw
            over = (w1.max(axis=1) - w.max(axis=1) - allowance) / np.maximum(
                1.0, w.max(axis=1))
            stats["max_principle"] = max(stats["max_principle"],
                                         float(over.max()),
                                         float(-w1.min()))

            # radially decreasing data stays decreasing
            s = np.sort(self._smooth_states(rng, grid, n), axis=1)[:, ::-1]
            dts = stable_dt(grid, problem, reg, s)
            s1 = self._explicit_step(problem, grid, reg, s, dts)
            scale = np.maximum(1.0, s.max(axis=1, keepdims=True))
            stats["radial_monotone"] = max(stats["radial_monotone"],
                                           float((np.diff(s1, axis=1) / scale).max()))

            # the update is monotone in every single input cell
            a = self._smooth_states(rng, grid, n)
            b = a.copy()
            cols = rng.integers(0, grid.M, size=n)
            b[np.arange(n), cols] += rng.uniform(0.01, 0.5, size=n)
            dtab = stable_dt(grid, problem, reg, np.vstack((a, b)))
            a1 = self._explicit_step(problem, grid, reg, a, dtab)
            b1 = self._explicit_step(problem, grid, reg, b, dtab)
            scale = np.maximum(1.0, b.max(axis=1, keepdims=True))
            stats["single_cell_ordering"] = max(stats["single_cell_ordering"],
                                                float(((a1 - b1) / scale).max()))

        passed = all(v <= slack for v in stats.values())
        details = {"worst_violation": stats, "slack": slack,
                   "trials_per_property": 2 * trials_per_config, "M": 256}
        return CriterionResult(4, "one-step scheme structure on random data",
                               passed, time.time() - t0, details)

    def criterion_5(self) -> CriterionResult:
        """Reference bump dies in finite time at the fitted rate."""
        t0 = time.time()
        res2 = self.run_bump_a(2048)
        res4 = self.run_bump_a(4096)
        extinct = (res2.outcome is Outcome.EXTINCT
                   and res4.outcome is Outcome.EXTINCT)
        fit = fit_exponent(res2.series["t"], res2.series["sup"], res2.T_e_est)
        in_band = 1.4 <= fit.exponent <= 2.1
        drift = abs(res4.T_e_est - res2.T_e_est) / res2.T_e_est if extinct else np.inf
        passed = extinct and in_band and drift <= 0.03
        return CriterionResult(
            5, "reference bump goes extinct at the fitted rate", passed,
            time.time() - t0,
            {"outcome": res2.outcome.value, "T_e": res2.T_e_est,
             "T_e_refined": res4.T_e_est, "T_e_drift": drift,
             "T_e_drift_bar": 0.03, "sup_exponent": fit.exponent,
             "exponent_band": (1.4, 2.1), "fit_points": fit.n_points})

    def criterion_6(self) -> CriterionResult:
        """Support collapses to a point at the fitted rate."""
        t0 = time.time()
        res = self.run_bump_a(2048)
        fit = fit_exponent(res.series["t"], res.series["support_radius"],
                           res.T_e_est, floor=0.0)
        lo, hi = 1.0 / 6.0 - 0.1, 2.0 / 3.0 + 0.1
        final_support = float(res.series["support_radius"][-1])
        bar = 5.0 * res.grid.dr
        passed = (lo <= fit.exponent <= hi) and final_support <= bar
        return CriterionResult(
            6, "support collapses to a point at the fitted rate", passed,
            time.time() - t0,
            {"support_exponent": fit.exponent, "exponent_band": (lo, hi),
             "final_support": final_support, "final_support_bar": bar,
             "fit_points": fit.n_points})

    def criterion_7(self) -> CriterionResult:
        """Support never leaves the initial ball, at every stored step."""
        t0 = time.time()
        res = self.run_bump_a(2048)
        bar = BUMP_R0 + 2.0 * res.grid.dr
        worst = float(np.max(res.series["support_radius"]))
        ic = Bump(PROBLEM_A, m=BUMP_M, R0=BUMP_R0)
        passed = bool(ic.flat_certified and worst <= bar)
        return CriterionResult(
            7, "support never leaves the initial ball", passed,
            time.time() - t0,
            {"flat_certified": ic.flat_certified, "max_support": worst,
             "bar": bar, "n_steps_checked": int(len(res.series["t"]))})

    def criterion_8(self) -> CriterionResult:
        """Everywhere-positive slow-decay data shrinks to a bounded set.

        Four checks: the data clears the positivity tolerance on the
        whole grid, the support radius decreases through every stored
        step, the certified envelope dominates the run on its validity
        box, and the support has dropped below half the domain by
        t = 0.01.  The last check measures an honest failure: at that
        time this data has burned its tail to about 2e-4 at half-domain,
        an order of magnitude above the largest admissible positivity
        tolerance, so the support genuinely is still wider; it crosses
        the half-domain mark near t = 0.05.
        """
        t0 = time.time()
        res = self.run_shrink()
        grid = res.grid
        u0 = np.asarray(res.snapshots["u"][0])
        data_positive = bool(np.min(u0) > res.tol_pos)

        rad = res.series["support_radius"]
        decreasing = bool(np.all(np.diff(rad) <= 1e-12))

        k = int(np.argmin(np.abs(res.snapshots["t"] - 0.01)))
        support_at_probe = support_radius(grid, res.snapshots["u"][k], res.tol_pos)
        target = grid.r_max / 2.0
        early_enough = support_at_probe < target

        # first series time at which the support is inside the target
        inside = np.nonzero(rad < target)[0]
        cross_time = float(res.series["t"][inside[0]]) if inside.size else None

        sigma = self.shrink_super()
        dom = check_domination(
            grid, res.snapshots["t"], np.asarray(res.snapshots["u"]), sigma,
            sense="upper", tol=10.0 * EPS_REFERENCE ** PROBLEM_A.q,
            r_window=(1.0001 * sigma.R, grid.r_max))

        passed = data_positive and decreasing and early_enough and dom.passed
        return CriterionResult(
            8, "slow-decay tail shrinks to a bounded set", passed,
            time.time() - t0,
            {"data_positive": data_positive, "support_decreasing": decreasing,
             "support_at_t0.01": support_at_probe, "target": target,
             "probe_ok": early_enough, "half_domain_cross_time": cross_time,
             "domination": dom.as_dict()})

    def criterion_9(self) -> CriterionResult:
        """Fat-tail data stays positive past the horizon."""
        t0 = time.time()
        res = self.run_fat()
        grid = res.grid
        T = 2.0
        # the tail floor must start below the data everywhere on the
        # grid; the binding cell fixes the offset, with five percent of
        # margin and never less than twice the certified minimum
        tail0 = make_tail_sub(PROBLEM_A, T=T)
        b = tail0.b
        need = float(np.max((T ** 2 * (1.0 + grid.r_cells ** 2) ** 0.25) ** 2
                            - b * grid.r_cells ** 2))
        tail = make_tail_sub(PROBLEM_A, T=T, a=max(2.0 * tail0.a_min, 1.05 * need))
        u0 = np.asarray(res.snapshots["u"][0])
        ordering = float(np.min(u0 - tail.value(0.0, grid.r_cells)))

        dom = check_domination(
            grid, res.snapshots["t"], np.asarray(res.snapshots["u"]), tail,
            sense="lower", tol=10.0 * EPS_REFERENCE ** PROBLEM_A.q,
            r_window=(0.0, grid.r_max / 2.0))
        half = grid.r_cells <= grid.r_max / 2.0
        final_min = float(np.asarray(res.snapshots["u"][-1])[half].min())
        survived = res.outcome is Outcome.HORIZON_REACHED
        passed = (ordering >= 0.0 and dom.passed and final_min > 0.0
                  and survived)
        return CriterionResult(
            9, "fat-tail data survives past the horizon", passed,
            time.time() - t0,
            {"outcome": res.outcome.value, "initial_ordering_margin": ordering,
             "tail_offset": tail.a, "domination": dom.as_dict(),
             "min_at_horizon_inner_half": final_min,
             "floor_at_horizon_center": float(tail.value(1.0, np.array([1e-9]))[0])})

    def criterion_10(self) -> CriterionResult:
        """Complete extinction keeps the whole ball positive to the end."""
        t0 = time.time()
        res = self.run_complete()
        extinct = res.outcome is Outcome.EXTINCT
        grid = res.grid
        half = grid.r_cells <= grid.r_max / 2.0
        checked, failures = 0, 0
        first_min = None
        if extinct:
            for tt, uu in zip(res.snapshots["t"], res.snapshots["u"]):
                if tt <= 0.0:
                    continue
                uu = np.asarray(uu)
                if first_min is None:
                    first_min = float(uu[half].min())
                if uu.max() <= 1e3 * res.tol_ext:
                    continue       # near extinction, positivity released
                checked += 1
                if uu[half].min() <= res.tol_pos:
                    failures += 1
        passed = extinct and checked > 0 and failures == 0 and (
            first_min is not None and first_min > res.tol_pos)
        return CriterionResult(
            10, "complete extinction keeps the ball positive", passed,
            time.time() - t0,
            {"outcome": res.outcome.value, "T_e": res.T_e_est,
             "snapshots_checked": checked, "positivity_failures": failures,
             "min_at_first_snapshot": first_min, "tol_pos": res.tol_pos})

    def criterion_11(self) -> CriterionResult:
        """Gradient envelope is finite and refinement-stable, both configs."""
        t0 = time.time()
        details = {}
        passed = True
        for label, runner, problem in (("p2", self.run_bump_a, PROBLEM_A),
                                       ("singular", self.run_bump_b, PROBLEM_B)):
            envs = {}
            for M in (2048, 4096):
                res = runner(M)
                quot = gradient_quotient(res.series["t"],
                                         res.series["grad_pow_sup"],
                                         res.sup0, problem)
                envs[M] = float(np.max(quot))
            drift = abs(envs[4096] / envs[2048] - 1.0)
            ok = np.isfinite(envs[2048]) and np.isfinite(envs[4096]) and drift <= 0.2
            passed = passed and bool(ok)
            details[label] = {"envelope_M2048": envs[2048],
                              "envelope_M4096": envs[4096],
                              "drift": drift, "drift_bar": 0.2}
        return CriterionResult(11, "gradient envelope is refinement-stable",
                               passed, time.time() - t0, details)

    def criterion_12(self) -> CriterionResult:
        """Flatness floor persists and the probed flux balance holds."""
        t0 = time.time()
        details = {}
        ratios = {}
        probes_ok = True
        for M in (2048, 4096):
            res = self.run_lifted(M)
            diag = j_diagnostic(res.grid, PROBLEM_A, res.snapshots["t"],
                                res.snapshots["u"], res.tol_pos, R0=BUMP_R0)
            later = diag.delta[diag.t > 0.0]
            ratios[M] = float(np.min(later) / diag.delta[0])
            probes_ok = probes_ok and diag.passed
            details[f"M{M}"] = {"delta0": float(diag.delta[0]),
                                "inf_delta": float(np.min(later)),
                                "ratio": ratios[M],
                                "probe_max_excess": diag.max_excess,
                                "probe_passed": diag.passed,
                                "delta_probe": diag.delta_probe}
        floor_ok = all(r >= 0.5 for r in ratios.values())
        drift = abs(ratios[4096] / ratios[2048] - 1.0)
        details["ratio_drift"] = drift
        details["ratio_drift_bar"] = 0.2
        passed = floor_ok and drift <= 0.2 and probes_ok
        return CriterionResult(12, "flatness floor and flux balance persist",
                               passed, time.time() - t0, details)

    def criterion_13(self) -> CriterionResult:
        """Borderline-decay run dies before the certified horizon."""
        t0 = time.time()
        W, _ = self.horizon_profile()
        rng = np.random.default_rng(self.seed + 4)
        cert = certify_sign(W, box=(1e-3, 0.999 * W.T, 1e-4, 50.0),
                            sense="super", tol=1e-10, rng=rng)
        res = self.run_border()
        grid = res.grid
        u0 = np.asarray(res.snapshots["u"][0])
        ordering = float(np.min(W.value(0.0, grid.r_cells) - u0))
        dom = check_domination(
            grid, res.snapshots["t"], np.asarray(res.snapshots["u"]), W,
            sense="upper", tol=10.0 * EPS_SINGULAR ** PROBLEM_B.q)
        extinct = res.outcome is Outcome.EXTINCT
        bounded = extinct and res.T_e_est <= W.T
        passed = cert.passed and ordering >= 0.0 and dom.passed and bounded
        return CriterionResult(
            13, "extinction beats the certified horizon", passed,
            time.time() - t0,
            {"outcome": res.outcome.value, "T_e": res.T_e_est,
             "horizon": W.T, "initial_ordering_margin": ordering,
             "certificate": cert.as_dict(), "domination": dom.as_dict()})

    # ----- orchestration -------------------------------------------------

    def run_criteria(self, numbers=None) -> list:
        numbers = tuple(numbers) if numbers is not None else SUITES["all"]
        results = []
        for n in numbers:
            fn = getattr(self, f"criterion_{n}")
            res = fn()
            res.details = _jsonable(res.details)
            results.append(res)
        return results


def run_suite(name: str, seed: int = 17) -> list:
    """Run one named suite and return its CriterionResults."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return Battery(seed=seed).run_criteria(SUITES[name])
