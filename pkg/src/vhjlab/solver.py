"""Time integration of the regularized radial flow.

Two steppers share the spatial operator from gridop:

explicit       forward Euler with a per-step stability bound; monotone
               under the default eps = dr^(2/3) tie, cheapest at p = 2
               where the mobility is constant.
semi_implicit  backward Euler on the diffusion with mobilities frozen at
               the current gradients (a tridiagonal solve per step), the
               gradient source kept explicit.  Removes the eps^(p-2)
               diffusion restriction that strangles explicit stepping at
               p < 2 with small eps.

Runs end in one of three ways: the sup norm falls below tol_ext (extinct,
with the crossing time estimated by log-linear interpolation), the horizon
t_end arrives first, or the state escapes upward (diverged: the scheme was
driven outside its stability region).  Negative undershoots at the support
edge are clamped to zero; the continuum solution is nonnegative and the
clamp keeps the discrete one comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.linalg import solve_banded

from .exponents import (
    ProblemParams,
    Regime,
    RegimeMismatch,
    classify_regime,
    derive_constants,
)
from .gridop import (
    RadialGrid,
    Regularization,
    face_gradient,
    mobility,
    discrete_rhs,
    source_rate,
    stable_dt,
)


from .analysis import support_radius


class DataShapeError(ValueError):
    """Initial data incompatible with the requested tail class."""


# --------------------------------------------------------------------------
# initial data
# --------------------------------------------------------------------------

class Bump:
    """Compactly supported cap m (R0^2 - r^2)_+^power.

    In the single-point regime the default power is the barrier exponent
    omega, and the data is certified flat (single-point extinction
    territory) when m <= kappa / (2 R0)^omega: then u0 lies below every
    translate of the critical cone along its support edge.  Outside that
    regime a power must be given explicitly and no certificate attaches.
    """

    kind = "bump"

    def __init__(self, problem: ProblemParams, m: float, R0: float,
                 power: Optional[float] = None):
        if m <= 0 or R0 <= 0:
            raise DataShapeError(f"need m > 0 and R0 > 0, got m = {m}, R0 = {R0}")
        self.problem = problem
        self.m = float(m)
        self.R0 = float(R0)
        self.flat_certified = False
        self.amplitude_bound = None
        single_point = (classify_regime(problem.N, problem.p, problem.q)
                        is Regime.SINGLE_POINT)
        if power is None:
            if not single_point:
                raise RegimeMismatch(
                    "default bump power is the barrier exponent, defined only for "
                    "q < p-1; give power explicitly")
            power = derive_constants(problem).omega
        self.power = float(power)
        if single_point:
            c = derive_constants(problem)
            # certificate attaches whenever the resolved power is the
            # barrier exponent, however it was requested
            if self.power == c.omega:
                self.amplitude_bound = c.kappa / (2.0 * R0) ** c.omega
                self.flat_certified = self.m <= self.amplitude_bound

    def sample(self, r):
        core = np.maximum(self.R0 ** 2 - np.asarray(r, dtype=float) ** 2, 0.0)
        return self.m * core ** self.power

    def sup(self) -> float:
        return self.m * self.R0 ** (2.0 * self.power)

    def describe(self) -> dict:
        return {"kind": self.kind, "m": self.m, "R0": self.R0, "power": self.power,
                "flat_certified": self.flat_certified,
                "amplitude_bound": self.amplitude_bound}


class FastDecay:
    """Algebraic tail C (1 + r^2)^(-theta/2) with theta at or above q/(1-q).

    Fast enough for instantaneous shrinking (strictly above the threshold)
    and for the borderline finite-time extinction bound (equality allowed).
    """

    kind = "fast_decay"

    def __init__(self, problem: ProblemParams, C: float, theta: float):
        thr = problem.q / (1.0 - problem.q)
        if C <= 0:
            raise DataShapeError(f"need C > 0, got {C}")
        if theta < thr:
            raise DataShapeError(
                f"tail exponent {theta} below the fast-decay threshold q/(1-q) = {thr}")
        self.problem = problem
        self.C = float(C)
        self.theta = float(theta)

    def sample(self, r):
        return self.C * (1.0 + np.asarray(r, dtype=float) ** 2) ** (-self.theta / 2.0)

    def sup(self) -> float:
        return self.C

    def describe(self) -> dict:
        return {"kind": self.kind, "C": self.C, "theta": self.theta}


class FatTail:
    """Algebraic tail C (1 + r^2)^(-rho/2) with rho strictly below q/(1-q):
    too much mass at infinity for extinction in finite time."""

    kind = "fat_tail"

    def __init__(self, problem: ProblemParams, C: float, rho: float):
        thr = problem.q / (1.0 - problem.q)
        if C <= 0:
            raise DataShapeError(f"need C > 0, got {C}")
        if not 0.0 <= rho < thr:
            raise DataShapeError(
                f"fat-tail exponent must sit in [0, q/(1-q)) = [0, {thr}), got {rho}")
        self.problem = problem
        self.C = float(C)
        self.rho = float(rho)

    def sample(self, r):
        return self.C * (1.0 + np.asarray(r, dtype=float) ** 2) ** (-self.rho / 2.0)

    def sup(self) -> float:
        return self.C

    def describe(self) -> dict:
        return {"kind": self.kind, "C": self.C, "rho": self.rho}


class Custom:
    """Arbitrary nonnegative radial data from a callable r -> u0(r)."""

    kind = "custom"

    def __init__(self, problem: ProblemParams, fn: Callable, label: str = "custom"):
        self.problem = problem
        self.fn = fn
        self.label = label

    def sample(self, r):
        u = np.asarray(self.fn(np.asarray(r, dtype=float)), dtype=float)
        if np.any(u < 0):
            raise DataShapeError("custom data must be nonnegative")
        return u

    def sup(self) -> float:
        return np.nan  # unknown without a grid

    def describe(self) -> dict:
        return {"kind": self.kind, "label": self.label}


# --------------------------------------------------------------------------
# run configuration and result
# --------------------------------------------------------------------------

class Outcome(Enum):
    EXTINCT = "extinct"
    HORIZON_REACHED = "horizon_reached"
    DIVERGED = "diverged"


@dataclass
class SolverConfig:
    """Knobs for a single run; None tolerances resolve against eps.

    tol_ext defaults to 10 eps^min(q, gamma_lift), the floor below which
    the regularized dynamics cannot distinguish a state from zero; tol_pos
    defaults to tol_ext.  series_stride thins the time series, snapshots
    are taken at the listed times (plus start and final state).
    lift adds a constant floor to the data (for diagnostics on strictly
    positive states); fixed_dt bypasses the adaptive bound, for controlled
    comparisons only.
    """

    t_end: float
    scheme: str = "explicit"
    safety: float = 0.5
    tol_ext: Optional[float] = None
    tol_pos: Optional[float] = None
    series_stride: int = 8
    snapshot_times: tuple = ()
    lift: float = 0.0
    fixed_dt: Optional[float] = None
    max_dt: Optional[float] = None
    max_steps: int = 200_000_000
    divergence_factor: float = 2.0
    absorption: bool = True
    outer: str = "dirichlet0"
    series_gradient_power: Optional[float] = None
    series_gradient_floor: float = 0.0

    def __post_init__(self):
        if self.scheme not in ("explicit", "semi_implicit"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.series_stride < 1:
            raise ValueError("series_stride must be >= 1")

    def resolve_tols(self, problem: ProblemParams, reg: Regularization) -> tuple:
        if self.tol_ext is not None:
            te = self.tol_ext
        else:
            g = reg.gamma_lift
            if g is None:
                from .gridop import default_gamma_lift
                g = default_gamma_lift(problem)
            te = 10.0 * reg.eps ** min(problem.q, g)
        tp = self.tol_pos if self.tol_pos is not None else te
        return float(te), float(tp)


@dataclass
class RunResult:
    outcome: Outcome
    T_e_est: Optional[float]
    t_final: float
    n_steps: int
    sup0: float
    tol_ext: float
    tol_pos: float
    series: dict                   # t, sup, support_radius, mass (+ grad columns)
    snapshots: dict                # {"t": [...], "u": [arrays]}
    problem: ProblemParams
    grid: RadialGrid
    info: dict = field(default_factory=dict)

    @property
    def u_final(self) -> np.ndarray:
        return self.snapshots["u"][-1]


def detect_extinction(t1: float, s1: float, t2: float, s2: float, tol: float) -> float:
    """Log-linear estimate of the time the sup norm crossed tol.

    s1 > tol >= s2 is assumed; a vanished s2 dates the crossing at t2.
    """
    if s2 <= 0.0:
        return t2
    f = (np.log(s1) - np.log(tol)) / (np.log(s1) - np.log(s2))
    return t1 + f * (t2 - t1)


def extinction_time(t: np.ndarray, sup: np.ndarray, tol: float) -> Optional[float]:
    """First tol crossing of a sampled sup-norm history, or None."""
    t = np.asarray(t, dtype=float)
    sup = np.asarray(sup, dtype=float)
    below = np.nonzero(sup <= tol)[0]
    if below.size == 0:
        return None
    k = int(below[0])
    if k == 0:
        return float(t[0])
    return detect_extinction(t[k - 1], sup[k - 1], t[k], sup[k], tol)


def _semi_implicit_matrix(grid: RadialGrid, problem: ProblemParams,
                          reg: Regularization, u: np.ndarray, dt: float,
                          outer: str) -> np.ndarray:
    """Banded (I - dt D) with mobilities frozen at the current gradients."""
    g = face_gradient(grid, u, outer=outer)
    c = grid.metric_faces * mobility(g * g, problem.p, reg.eps) / grid.dr
    c = c.copy()
    c[0] = 0.0                      # symmetry face carries no flux
    if outer == "reflect":
        c[-1] = 0.0
    m = grid.metric_cells
    lower = c[:-1] / m              # coupling to u_{i-1}
    upper = c[1:] / m               # coupling to u_{i+1} (ghost for the last cell)
    ab = np.zeros((3, grid.M))
    ab[0, 1:] = -dt * upper[:-1]
    ab[1, :] = 1.0 + dt * (lower + upper)
    ab[2, :-1] = -dt * lower[1:]
    return ab


def run(problem: ProblemParams, grid: RadialGrid, reg: Regularization,
        ic, cfg: SolverConfig) -> RunResult:
    """Integrate from ic until extinction, divergence, or the horizon."""
    if problem.N != grid.N:
        raise RegimeMismatch(f"problem dimension {problem.N} vs grid dimension {grid.N}")
    tol_ext, tol_pos = cfg.resolve_tols(problem, reg)
    u = np.asarray(ic.sample(grid.r_cells), dtype=float) + cfg.lift
    if np.any(u < 0) or not np.all(np.isfinite(u)):
        raise DataShapeError("initial data must be finite and nonnegative")
    sup0 = float(np.max(u))
    metric = grid.metric_cells

    ser_t, ser_sup, ser_rad, ser_mass, ser_grad = [], [], [], [], []
    snap_t, snap_u = [0.0], [u.copy()]
    want_grad = cfg.series_gradient_power is not None

    def record(t, u):
        if ser_t and ser_t[-1] == t:
            return
        ser_t.append(t)
        ser_sup.append(float(np.max(u)))
        ser_rad.append(support_radius(grid, u, tol_pos))
        ser_mass.append(float(np.sum(u * metric)))
        if want_grad:
            v = u ** cfg.series_gradient_power
            g = np.abs(face_gradient(grid, v))
            # only faces between solidly positive cells: the steepness of
            # the state's interior, not of tolerance-level fringe
            lo = np.minimum(np.concatenate(([u[0]], u)), np.concatenate((u, [0.0])))
            g = np.where(lo > cfg.series_gradient_floor, g, 0.0)
            ser_grad.append(float(np.max(g)))

    record(0.0, u)
    if sup0 <= tol_ext:
        snap_t.append(0.0)
        snap_u.append(u.copy())
        return _finish(Outcome.EXTINCT, 0.0, 0.0, 0, sup0, tol_ext, tol_pos,
                       ser_t, ser_sup, ser_rad, ser_mass, ser_grad,
                       snap_t, snap_u, problem, grid, cfg, ic)

    pending = sorted(t for t in cfg.snapshot_times if 0.0 < t <= cfg.t_end)
    t = 0.0
    n = 0
    sup_prev, t_prev = sup0, 0.0
    outcome = None
    T_e = None

    while True:
        if n >= cfg.max_steps:
            raise RuntimeError(f"step budget {cfg.max_steps} exhausted at t = {t}")
        if cfg.fixed_dt is not None:
            dt = cfg.fixed_dt
        elif cfg.scheme == "explicit":
            dt = stable_dt(grid, problem, reg, u, cfg.safety)
        else:
            rate = float(np.max(source_rate(grid, problem, reg, u)))
            dt = cfg.safety / rate if rate > 0 else np.inf
            # even with implicit diffusion, do not outrun the state's own
            # relaxation scale by more than a factor of the grid
            dt = min(dt, grid.dr)
        if cfg.max_dt is not None:
            dt = min(dt, cfg.max_dt)
        t_next_event = pending[0] if pending else cfg.t_end
        dt = min(dt, t_next_event - t, cfg.t_end - t)

        if cfg.scheme == "explicit":
            u = u + dt * discrete_rhs(grid, problem, reg, u,
                                      absorption=cfg.absorption, outer=cfg.outer)
        else:
            rhs = u.copy()
            if cfg.absorption:
                g = face_gradient(grid, u, outer=cfg.outer)
                gbar = 0.5 * (g[:-1] + g[1:])
                src = (gbar * gbar + reg.eps ** 2) ** (problem.q / 2.0)
                if reg.counterterm:
                    src = src - reg.eps ** problem.q
                rhs -= dt * src
            ab = _semi_implicit_matrix(grid, problem, reg, u, dt, cfg.outer)
            u = solve_banded((1, 1), ab, rhs)
        np.maximum(u, 0.0, out=u)
        t += dt
        n += 1

        sup = float(np.max(u))
        if not np.isfinite(sup) or sup > cfg.divergence_factor * sup0:
            record(t, u)
            outcome = Outcome.DIVERGED
            break
        if n % cfg.series_stride == 0:
            record(t, u)
        while pending and t >= pending[0] - 1e-12 * cfg.t_end:
            pending.pop(0)
            snap_t.append(t)
            snap_u.append(u.copy())
        if sup <= tol_ext:
            record(t, u)
            outcome = Outcome.EXTINCT
            T_e = detect_extinction(t_prev, sup_prev, t, sup, tol_ext)
            break
        if t >= cfg.t_end - 1e-12 * cfg.t_end:
            record(t, u)
            outcome = Outcome.HORIZON_REACHED
            break
        sup_prev, t_prev = sup, t

    snap_t.append(t)
    snap_u.append(u.copy())
    return _finish(outcome, T_e, t, n, sup0, tol_ext, tol_pos,
                   ser_t, ser_sup, ser_rad, ser_mass, ser_grad,
                   snap_t, snap_u, problem, grid, cfg, ic)


def _finish(outcome, T_e, t, n, sup0, tol_ext, tol_pos,
            ser_t, ser_sup, ser_rad, ser_mass, ser_grad,
            snap_t, snap_u, problem, grid, cfg, ic) -> RunResult:
    series = {
        "t": np.asarray(ser_t), "sup": np.asarray(ser_sup),
        "support_radius": np.asarray(ser_rad), "mass": np.asarray(ser_mass),
    }
    if ser_grad:
        series["grad_pow_sup"] = np.asarray(ser_grad)
    return RunResult(
        outcome=outcome, T_e_est=T_e, t_final=t, n_steps=n, sup0=sup0,
        tol_ext=tol_ext, tol_pos=tol_pos, series=series,
        snapshots={"t": np.asarray(snap_t), "u": snap_u},
        problem=problem, grid=grid,
        info={"scheme": cfg.scheme, "ic": ic.describe()},
    )
