"""Measurements on computed states and series.

Everything here is array-in, array-out; nothing integrates.  The fitting
helpers turn extinction series into exponents, the domination check
compares a numerical state with a closed-form profile over a declared
window, and the flatness diagnostics quantify how steep the state is
relative to the power balance that separates single-point extinction
from bulk vanishing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exponents import DerivedConstants, ProblemParams, RegimeMismatch, derive_constants
from .gridop import RadialGrid, Regularization, face_gradient


class InsufficientPoints(ValueError):
    """Too few usable samples inside the requested fit window."""


class EmptySupport(ValueError):
    """No snapshot has any cell above the positivity filter."""


def support_radius(grid: RadialGrid, u: np.ndarray, tol: float) -> float:
    """Outermost cell center where the state exceeds tol; 0.0 if none does."""
    idx = np.nonzero(np.asarray(u) > tol)[0]
    return float(grid.r_cells[idx[-1]]) if idx.size else 0.0


def localization_radius(problem: ProblemParams, sup_u0: float, R0: float,
                        consts: Optional[DerivedConstants] = None) -> float:
    """A priori support bound R0 + (sup u0 / kappa)^(1/omega) for data in B_R0.

    Sliding the critical power cone along the sphere of radius R0 caps the
    support of the evolution for all time: beyond this radius every cone
    translate lies above the data and stays above the flow.
    """
    c = consts if consts is not None else derive_constants(problem)
    if c.kappa is None:
        raise RegimeMismatch("localization bound needs the single-point regime")
    return R0 + (sup_u0 / c.kappa) ** (1.0 / c.omega)


@dataclass
class FitResult:
    exponent: float
    intercept: float          # log-space offset: log y ~ intercept + exponent log(T-t)
    n_points: int
    t_window: tuple
    max_log_residual: float


def fit_exponent(t, y, T_e: float, frac: float = 0.4, skip_end: int = 5,
                 floor: float = 0.0, min_points: int = 8) -> FitResult:
    """Least-squares slope of log y against log(T_e - t) near extinction.

    The window starts at T_e - frac*(T_e - t[0]) (the last frac of the
    lifetime) and drops the final skip_end samples, whose T_e - t is at
    stepping noise level; samples at or below floor are discarded.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.size != y.size:
        raise ValueError("t and y must have matching length")
    lo = T_e - frac * (T_e - t[0])
    keep = (t >= lo) & (t < T_e) & (y > floor)
    if skip_end > 0:
        live = np.nonzero(keep)[0]
        keep[live[-skip_end:]] = False
    n = int(keep.sum())
    if n < min_points:
        raise InsufficientPoints(
            f"{n} usable samples in [{lo}, {T_e}) with floor {floor}; need {min_points}")
    x = np.log(T_e - t[keep])
    z = np.log(y[keep])
    slope, intercept = np.polyfit(x, z, 1)
    resid = np.max(np.abs(z - (intercept + slope * x)))
    return FitResult(exponent=float(slope), intercept=float(intercept), n_points=n,
                     t_window=(float(t[keep][0]), float(t[keep][-1])),
                     max_log_residual=float(resid))


def default_domination_tol(problem: ProblemParams, reg: Regularization) -> float:
    """Comparison slack 10 eps^min(q, gamma_lift): the regularization-induced
    offset between the computed flow and the unregularized one."""
    return 10.0 * reg.eps ** min(problem.q, reg.resolve_gamma_lift(problem))


@dataclass
class DominationReport:
    sense: str
    tol: float
    n_points: int
    max_violation: float      # positive means the ordering failed by that much
    worst_t: float
    worst_r: float
    passed: bool

    def as_dict(self):
        return {"sense": self.sense, "tol": self.tol, "n_points": self.n_points,
                "max_violation": self.max_violation, "worst_t": self.worst_t,
                "worst_r": self.worst_r, "passed": bool(self.passed)}


def check_domination(grid: RadialGrid, snap_t, snap_u, profile, sense: str,
                     tol: float, r_window: Optional[tuple] = None,
                     t_window: Optional[tuple] = None) -> DominationReport:
    """Verify profile >= state ('upper') or profile <= state ('lower') on
    the sampled snapshots, within tol, over the given windows."""
    if sense not in ("upper", "lower"):
        raise ValueError(f"sense must be 'upper' or 'lower', got {sense!r}")
    sgn = 1.0 if sense == "upper" else -1.0
    r = grid.r_cells
    rmask = np.ones_like(r, dtype=bool)
    if r_window is not None:
        rmask &= (r >= r_window[0]) & (r <= r_window[1])
    worst = -np.inf
    worst_t = worst_r = np.nan
    n = 0
    for tk, uk in zip(snap_t, snap_u):
        if t_window is not None and not t_window[0] <= tk <= t_window[1]:
            continue
        gap = sgn * (np.asarray(uk) - profile.value(tk, r))
        gap = np.where(rmask, gap, -np.inf)
        n += int(rmask.sum())
        k = int(np.argmax(gap))
        if gap[k] > worst:
            worst, worst_t, worst_r = float(gap[k]), float(tk), float(r[k])
    if n == 0:
        raise InsufficientPoints("no snapshot samples inside the requested windows")
    return DominationReport(sense=sense, tol=tol, n_points=n, max_violation=worst,
                            worst_t=worst_t, worst_r=worst_r, passed=bool(worst <= tol))


def gradient_quotient(t, grad_sup, sup0: float, problem: ProblemParams):
    """Pointwise quotient of the measured steepness of u^((p-q-1)/(p-q))
    against the universal envelope shape 1 + sup0^((p-2q)/(p(p-q))) t^(-1/p).

    A bounded quotient uniformly in resolution is the discrete trace of
    the interior gradient bound; the caller fits/inspects the returned
    array.  t = 0 samples are excluded (the envelope blows up there).
    """
    p, q = problem.p, problem.q
    t = np.asarray(t, dtype=float)
    g = np.asarray(grad_sup, dtype=float)
    live = t > 0.0
    shape = 1.0 + sup0 ** ((p - 2.0 * q) / (p * (p - q))) * t[live] ** (-1.0 / p)
    return t[live], g[live] / shape


def flatness_floor(grid: RadialGrid, problem: ProblemParams, u: np.ndarray,
                   r_window: tuple, u_floor: float) -> tuple:
    """Worst-case steepness ratio over the eligible cells.

    For each cell with u above u_floor and center inside r_window, form
      ratio_i = [ |gbar_i| / (r_i^(1/(p-1-q)) u_i^(1/(p-q))) ]^(p-1);
    the minimum is the largest coefficient delta for which the inward flux
    dominates delta r^lambda u^beta on all eligible cells.  Returns
    (delta, n_eligible); delta is nan when nothing is eligible.
    """
    p, q = problem.p, problem.q
    if p - 1.0 - q <= 0:
        raise RegimeMismatch("steepness ratio is a single-point-regime notion")
    u = np.asarray(u, dtype=float)
    g = face_gradient(grid, u)
    gbar = 0.5 * (g[:-1] + g[1:])
    r = grid.r_cells
    elig = (u > u_floor) & (r > r_window[0]) & (r < r_window[1])
    n = int(elig.sum())
    if n == 0:
        return float("nan"), 0
    ratio = (np.abs(gbar[elig])
             / (r[elig] ** (1.0 / (p - 1.0 - q)) * u[elig] ** (1.0 / (p - q)))) ** (p - 1.0)
    return float(np.min(ratio)), n


def flux_balance(grid: RadialGrid, problem: ProblemParams, u: np.ndarray,
                 delta: float, consts: Optional[DerivedConstants] = None) -> np.ndarray:
    """Per-cell balance r^(N-1)|gbar|^(p-2) gbar + delta r^lambda u^beta.

    Nonpositive values mean the inward gradient flux still dominates the
    calibrated power of the state: the structure that pins extinction to
    the origin.  lambda and beta are the matched homogeneity exponents.
    """
    c = consts if consts is not None else derive_constants(problem)
    if c.lambda_j is None:
        raise RegimeMismatch("flux balance needs the single-point regime")
    p, N = problem.p, problem.N
    u = np.asarray(u, dtype=float)
    g = face_gradient(grid, u)
    gbar = 0.5 * (g[:-1] + g[1:])
    # |g|^(p-2) g written as sign(g)|g|^(p-1): regular at g = 0 since p > 1
    flux = np.sign(gbar) * np.abs(gbar) ** (p - 1.0)
    r = grid.r_cells
    return r ** (N - 1.0) * flux + delta * r ** c.lambda_j * u ** c.beta_j


@dataclass
class JDiagnostic:
    """Flatness-floor trace plus a flux-balance probe over snapshots."""

    t: np.ndarray             # times of snapshots with admitted cells
    delta: np.ndarray         # flatness floor per such snapshot
    n_cells: np.ndarray
    delta_probe: float
    max_excess: float         # max of J - slack*scale over admitted cells
    worst_t: float
    passed: bool

    def as_dict(self):
        return {"t": [float(x) for x in self.t],
                "delta": [float(x) for x in self.delta],
                "n_cells": [int(x) for x in self.n_cells],
                "delta_probe": self.delta_probe, "max_excess": self.max_excess,
                "worst_t": self.worst_t, "passed": bool(self.passed)}


def j_diagnostic(grid: RadialGrid, problem: ProblemParams, snap_t, snap_u,
                 tol_pos: float, R0: float, delta_probe: Optional[float] = None,
                 consts: Optional[DerivedConstants] = None,
                 slack_factor: float = 10.0) -> JDiagnostic:
    """Track the flatness floor over a run and probe the flux balance.

    A cell is admitted when u > 10 tol_pos and 2 dr < r < R0: the factor
    of ten keeps tolerance-level fringe out, the inner cut drops the
    cells where the discrete gradient of a radial profile is 0/0 noise.
    delta_probe defaults to half the floor of the first admitted
    snapshot.  The probe passes when the balance J stays at or below
    slack_factor*tol_pos*scale on every admitted cell, scale being the
    sum of the magnitudes of J's two parts.  Raises EmptySupport when no
    snapshot has an admitted cell.
    """
    c = consts if consts is not None else derive_constants(problem)
    u_floor = 10.0 * tol_pos
    r_window = (2.0 * grid.dr, R0)
    ts, deltas, counts = [], [], []
    for tt, uu in zip(snap_t, snap_u):
        d, n = flatness_floor(grid, problem, uu, r_window, u_floor)
        if n == 0:
            continue
        ts.append(float(tt))
        deltas.append(d)
        counts.append(n)
    if not ts:
        raise EmptySupport("no cells above the positivity filter in any snapshot")
    if delta_probe is None:
        delta_probe = 0.5 * deltas[0]

    r = grid.r_cells
    max_excess, worst_t = -np.inf, float("nan")
    for tt, uu in zip(snap_t, snap_u):
        uu = np.asarray(uu, dtype=float)
        elig = (uu > u_floor) & (r > r_window[0]) & (r < r_window[1])
        if not elig.any():
            continue
        balance = flux_balance(grid, problem, uu, delta_probe, c)
        probe_part = delta_probe * r ** c.lambda_j * uu ** c.beta_j
        scale = np.abs(balance - probe_part) + probe_part
        excess = balance[elig] - slack_factor * tol_pos * scale[elig]
        k = int(np.argmax(excess))
        if excess[k] > max_excess:
            max_excess, worst_t = float(excess[k]), float(tt)
    return JDiagnostic(t=np.asarray(ts), delta=np.asarray(deltas),
                       n_cells=np.asarray(counts), delta_probe=float(delta_probe),
                       max_excess=max_excess, worst_t=worst_t,
                       passed=bool(max_excess <= 0.0))
