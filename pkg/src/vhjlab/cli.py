"""Command-line entry points: experiment plumbing around the library.

One JSON document describes an experiment; every default the loader
fills in is materialized into the run directory's resolved-config.json,
so any artifact can be reproduced from that single file.  Unknown keys
are rejected with their full path, and type errors name the offending
key the same way (``grid.M: expected an integer ...``).

Subcommands
-----------
derive     print the derived constants and regime for a triple
residual   certify the sign of a closed-form profile over a box
simulate   run one experiment into a run directory
analyze    re-run the measurements on an existing run directory
verify     run a named acceptance suite
sweep      fan a base experiment out over parameter values

Exit codes: 0 success, 1 a verification or certification failed,
2 configuration or usage error, 3 numerical divergence at runtime.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .acceptance import SUITES, run_suite
from .analysis import (
    EmptySupport,
    InsufficientPoints,
    check_domination,
    fit_exponent,
    gradient_quotient,
    j_diagnostic,
)
from .closedform import Barrier, SelfSimSuper, certify_sign, find_A0, \
    make_shrink_super, make_tail_sub
from .exponents import ProblemParams, classify_regime, derive_constants, \
    validate_params
from .gridop import RadialGrid, Regularization
from .solver import Bump, FastDecay, FatTail, Outcome, SolverConfig, run


class ConfigError(ValueError):
    """Configuration problem; the message starts with the key path."""


_MISSING = object()


# ----- typed config extraction ------------------------------------------

def _label(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _pop(sec: dict, path: str, key: str, default=_MISSING):
    if key in sec:
        return sec.pop(key)
    if default is _MISSING:
        raise ConfigError(f"{_label(path, key)}: required key is missing")
    return default


def _reject_unknown(sec: dict, path: str):
    if sec:
        k = sorted(sec)[0]
        raise ConfigError(f"{_label(path, k)}: unknown key")


def _as_int(value, path: str, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{_label(path, key)}: expected an integer, "
                          f"got {value!r}")
    return value


def _as_float(value, path: str, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{_label(path, key)}: expected a number, "
                          f"got {value!r}")
    return float(value)


def _as_opt_float(value, path: str, key: str) -> Optional[float]:
    return None if value is None else _as_float(value, path, key)


def _as_bool(value, path: str, key: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{_label(path, key)}: expected true or false, "
                          f"got {value!r}")
    return value


def _as_str(value, path: str, key: str) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{_label(path, key)}: expected a string, "
                          f"got {value!r}")
    return value


def _as_float_list(value, path: str, key: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(f"{_label(path, key)}: expected a list of numbers, "
                          f"got {value!r}")
    return [_as_float(v, path, f"{key}[{i}]") for i, v in enumerate(value)]


def _section(doc: dict, key: str, required: bool = True) -> dict:
    if key not in doc:
        if required:
            raise ConfigError(f"{key}: required section is missing")
        return {}
    sec = doc[key]
    if not isinstance(sec, dict):
        raise ConfigError(f"{key}: expected an object, got {sec!r}")
    return dict(sec)


# ----- experiment assembly ------------------------------------------------

@dataclass
class Experiment:
    problem: ProblemParams
    grid: RadialGrid
    reg: Regularization
    ic: object
    cfg: SolverConfig
    analysis: dict
    out_dir: Optional[str]
    seed: int
    resolved: dict


def _build_problem(doc: dict) -> ProblemParams:
    sec = _section(doc, "problem")
    N = _as_int(_pop(sec, "problem", "N"), "problem", "N")
    p = _as_float(_pop(sec, "problem", "p"), "problem", "p")
    q = _as_float(_pop(sec, "problem", "q"), "problem", "q")
    _reject_unknown(sec, "problem")
    try:
        return validate_params(N, p, q)
    except ValueError as exc:
        raise ConfigError(f"problem: {exc}") from exc


def _build_ic(doc: dict, problem: ProblemParams):
    sec = _section(doc, "ic")
    kind = _as_str(_pop(sec, "ic", "kind"), "ic", "kind")
    try:
        if kind == "bump":
            m = _as_float(_pop(sec, "ic", "m"), "ic", "m")
            R0 = _as_float(_pop(sec, "ic", "R0"), "ic", "R0")
            power = _as_opt_float(_pop(sec, "ic", "power", None), "ic", "power")
            # describe() annotations; recomputed on construction
            sec.pop("flat_certified", None)
            sec.pop("amplitude_bound", None)
            _reject_unknown(sec, "ic")
            ic = Bump(problem, m=m, R0=R0, power=power)
        elif kind == "fast_decay":
            C = _as_float(_pop(sec, "ic", "C"), "ic", "C")
            theta = _as_float(_pop(sec, "ic", "theta"), "ic", "theta")
            _reject_unknown(sec, "ic")
            ic = FastDecay(problem, C=C, theta=theta)
        elif kind == "fat_tail":
            C = _as_float(_pop(sec, "ic", "C"), "ic", "C")
            rho = _as_float(_pop(sec, "ic", "rho"), "ic", "rho")
            _reject_unknown(sec, "ic")
            ic = FatTail(problem, C=C, rho=rho)
        else:
            raise ConfigError(f"ic.kind: unknown kind {kind!r}; expected "
                              "bump, fast_decay or fat_tail")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"ic: {exc}") from exc
    return ic


def _build_grid(doc: dict, problem: ProblemParams) -> RadialGrid:
    sec = _section(doc, "grid")
    r_max = _as_float(_pop(sec, "grid", "r_max"), "grid", "r_max")
    M = _as_int(_pop(sec, "grid", "M"), "grid", "M")
    _reject_unknown(sec, "grid")
    try:
        return RadialGrid(problem.N, r_max, M)
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _build_reg(doc: dict, grid: RadialGrid) -> Regularization:
    sec = _section(doc, "regularization", required=False)
    eps = _as_opt_float(_pop(sec, "regularization", "eps", None),
                        "regularization", "eps")
    counterterm = _as_bool(_pop(sec, "regularization", "counterterm", True),
                           "regularization", "counterterm")
    gamma_lift = _as_opt_float(_pop(sec, "regularization", "gamma_lift", None),
                               "regularization", "gamma_lift")
    _reject_unknown(sec, "regularization")
    if eps is None:
        from .gridop import default_eps
        eps = default_eps(grid)
    try:
        return Regularization(eps=eps, counterterm=counterterm,
                              gamma_lift=gamma_lift)
    except ValueError as exc:
        raise ConfigError(f"regularization: {exc}") from exc


def _build_solver_cfg(doc: dict) -> SolverConfig:
    sec = _section(doc, "solver")
    kw = {}
    kw["t_end"] = _as_float(_pop(sec, "solver", "t_end"), "solver", "t_end")
    kw["scheme"] = _as_str(_pop(sec, "solver", "scheme", "explicit"),
                           "solver", "scheme")
    kw["safety"] = _as_float(_pop(sec, "solver", "safety", 0.5),
                             "solver", "safety")
    for key in ("tol_ext", "tol_pos", "fixed_dt", "max_dt",
                "series_gradient_power"):
        kw[key] = _as_opt_float(_pop(sec, "solver", key, None), "solver", key)
    kw["series_stride"] = _as_int(_pop(sec, "solver", "series_stride", 8),
                                  "solver", "series_stride")
    kw["snapshot_times"] = tuple(_as_float_list(
        _pop(sec, "solver", "snapshot_times", []), "solver", "snapshot_times"))
    kw["lift"] = _as_float(_pop(sec, "solver", "lift", 0.0), "solver", "lift")
    kw["max_steps"] = _as_int(_pop(sec, "solver", "max_steps", 200_000_000),
                              "solver", "max_steps")
    kw["divergence_factor"] = _as_float(
        _pop(sec, "solver", "divergence_factor", 2.0),
        "solver", "divergence_factor")
    kw["absorption"] = _as_bool(_pop(sec, "solver", "absorption", True),
                                "solver", "absorption")
    kw["outer"] = _as_str(_pop(sec, "solver", "outer", "dirichlet0"),
                          "solver", "outer")
    kw["series_gradient_floor"] = _as_float(
        _pop(sec, "solver", "series_gradient_floor", 0.0),
        "solver", "series_gradient_floor")
    _reject_unknown(sec, "solver")
    try:
        return SolverConfig(**kw)
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc


def _build_analysis(doc: dict) -> dict:
    sec = _section(doc, "analysis", required=False)
    out = {
        "fit_frac": _as_float(_pop(sec, "analysis", "fit_frac", 0.4),
                              "analysis", "fit_frac"),
        "fit_skip_end": _as_int(_pop(sec, "analysis", "fit_skip_end", 5),
                                "analysis", "fit_skip_end"),
        "j_R0": _as_opt_float(_pop(sec, "analysis", "j_R0", None),
                              "analysis", "j_R0"),
        "j_delta_probe": _as_opt_float(
            _pop(sec, "analysis", "j_delta_probe", None),
            "analysis", "j_delta_probe"),
        "domination": _pop(sec, "analysis", "domination", []),
    }
    if not isinstance(out["domination"], list):
        raise ConfigError("analysis.domination: expected a list of profile "
                          "check objects")
    _reject_unknown(sec, "analysis")
    return out


def resolve_experiment(doc: dict) -> Experiment:
    """Validate a config document and materialize every default."""
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a JSON object")
    doc = dict(doc)
    problem = _build_problem(doc)
    ic = _build_ic(doc, problem)
    grid = _build_grid(doc, problem)
    reg = _build_reg(doc, grid)
    cfg = _build_solver_cfg(doc)
    analysis = _build_analysis(doc)
    out_sec = _section(doc, "output", required=False)
    out_dir = _pop(out_sec, "output", "dir", None)
    if out_dir is not None:
        out_dir = _as_str(out_dir, "output", "dir")
    _reject_unknown(out_sec, "output")
    seed = _as_int(_pop(doc, "", "seed", 0), "", "seed")
    for key in ("problem", "ic", "grid", "regularization", "solver",
                "analysis", "output"):
        doc.pop(key, None)
    _reject_unknown(doc, "")

    tol_ext, tol_pos = cfg.resolve_tols(problem, reg)
    resolved = {
        "problem": {"N": problem.N, "p": problem.p, "q": problem.q},
        "ic": ic.describe(),
        "grid": {"r_max": grid.r_max, "M": grid.M},
        "regularization": {"eps": reg.eps, "counterterm": reg.counterterm,
                           "gamma_lift": reg.resolve_gamma_lift(problem)},
        "solver": {**asdict(cfg), "tol_ext": tol_ext, "tol_pos": tol_pos,
                   "snapshot_times": list(cfg.snapshot_times)},
        "analysis": analysis,
        "output": {"dir": out_dir},
        "seed": seed,
    }
    return Experiment(problem=problem, grid=grid, reg=reg, ic=ic, cfg=cfg,
                      analysis=analysis, out_dir=out_dir, seed=seed,
                      resolved=resolved)


def load_experiment(path: str) -> Experiment:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return resolve_experiment(doc)


# ----- profiles for residual/domination -----------------------------------

def build_profile(problem: ProblemParams, spec: dict, path: str = "profile"):
    """Construct a closed-form comparison profile from a config object."""
    if not isinstance(spec, dict):
        raise ConfigError(f"{path}: expected an object")
    spec = dict(spec)
    kind = _as_str(_pop(spec, path, "kind"), path, "kind")
    try:
        if kind == "barrier":
            amplitude = _as_opt_float(_pop(spec, path, "amplitude", None),
                                      path, "amplitude")
            r0 = _as_float(_pop(spec, path, "r0", 0.0), path, "r0")
            _reject_unknown(spec, path)
            return Barrier(problem, r0=r0, amplitude=amplitude)
        if kind == "shrink_envelope":
            C = _as_float(_pop(spec, path, "decay_C"), path, "decay_C")
            theta = _as_float(_pop(spec, path, "decay_theta"), path,
                              "decay_theta")
            sup_u0 = _as_float(_pop(spec, path, "sup_u0"), path, "sup_u0")
            _reject_unknown(spec, path)
            return make_shrink_super(problem, decay_C=C, decay_theta=theta,
                                     sup_u0=sup_u0)
        if kind == "tail_floor":
            T = _as_float(_pop(spec, path, "T"), path, "T")
            b = _as_opt_float(_pop(spec, path, "b", None), path, "b")
            a = _as_opt_float(_pop(spec, path, "a", None), path, "a")
            _reject_unknown(spec, path)
            return make_tail_sub(problem, T=T, b=b, a=a)
        if kind == "decaying_envelope":
            T = _as_float(_pop(spec, path, "T"), path, "T")
            A = _as_opt_float(_pop(spec, path, "A", None), path, "A")
            _reject_unknown(spec, path)
            if A is None:
                A0, _ = find_A0(problem)
                A = 0.5 * A0
            return SelfSimSuper(problem, A=A, T=T)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: unknown kind {kind!r}")


# ----- artifact emission ---------------------------------------------------

def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header: list, columns: list):
    lines = [",".join(header)]
    n = len(columns[0])
    for i in range(n):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    path.write_text("\n".join(lines) + "\n")


def write_run_dir(out_dir: Path, exp: Experiment, result) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "resolved-config.json").write_text(
        json.dumps(exp.resolved, sort_keys=True, indent=2) + "\n")

    ser = result.series
    header = ["t", "sup", "support_radius", "mass"]
    cols = [ser["t"], ser["sup"], ser["support_radius"], ser["mass"]]
    if "grad_pow_sup" in ser:
        header.append("grad_pow_sup")
        cols.append(ser["grad_pow_sup"])
    _write_csv(out_dir / "series.csv", header, cols)

    snap_dir = out_dir / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    times = result.snapshots["t"]
    _write_csv(snap_dir / "index.csv", ["k", "t"],
               [np.arange(len(times)), times])
    for k, u in enumerate(result.snapshots["u"]):
        _write_csv(snap_dir / f"snap-{k:04d}.csv", ["r", "u"],
                   [result.grid.r_cells, u])

    summary = {
        "outcome": result.outcome.value,
        "T_e_est": result.T_e_est,
        "t_final": result.t_final,
        "n_steps": result.n_steps,
        "sup0": result.sup0,
        "tol_ext": result.tol_ext,
        "tol_pos": result.tol_pos,
        "scheme": result.info["scheme"],
        "ic": result.info["ic"],
        "n_series": int(len(ser["t"])),
        "n_snapshots": int(len(times)),
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n")


def _read_csv(path: Path) -> dict:
    lines = path.read_text().strip().split("\n")
    names = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    data = np.asarray(rows, dtype=float) if rows else np.zeros((0, len(names)))
    return {name: data[:, j] for j, name in enumerate(names)}


def analyze_run_dir(run_dir: Path) -> dict:
    """Recompute the measurements for an existing run directory."""
    cfg_path = run_dir / "resolved-config.json"
    if not cfg_path.exists():
        raise ConfigError(f"{run_dir}: not a run directory "
                          "(missing resolved-config.json)")
    exp = resolve_experiment(json.loads(cfg_path.read_text()))
    summary = json.loads((run_dir / "summary.json").read_text())
    series = _read_csv(run_dir / "series.csv")
    index = _read_csv(run_dir / "snapshots" / "index.csv")
    snap_t, snap_u = [], []
    for k in index["k"].astype(int):
        snap = _read_csv(run_dir / "snapshots" / f"snap-{k:04d}.csv")
        snap_t.append(float(index["t"][k]))
        snap_u.append(snap["u"])

    report = {"run": run_dir.name, "outcome": summary["outcome"],
              "T_e_est": summary["T_e_est"], "fits": [],
              "domination": [], "gradient_envelope": None,
              "j_diagnostic": None}

    T_e = summary["T_e_est"]
    if T_e is not None:
        for quantity in ("sup", "support_radius"):
            try:
                fit = fit_exponent(series["t"], series[quantity], T_e,
                                   frac=exp.analysis["fit_frac"],
                                   skip_end=exp.analysis["fit_skip_end"],
                                   floor=0.0)
            except InsufficientPoints as exc:
                report["fits"].append({"quantity": quantity,
                                       "error": str(exc)})
                continue
            report["fits"].append({
                "quantity": quantity, "exponent": fit.exponent,
                "window": list(fit.t_window), "n_points": fit.n_points,
                "max_log_residual": fit.max_log_residual})

    if "grad_pow_sup" in series:
        quot = gradient_quotient(series["t"], series["grad_pow_sup"],
                                 summary["sup0"], exp.problem)
        report["gradient_envelope"] = {
            "sup_quotient": float(np.max(quot)) if quot.size else None,
            "n_points": int(quot.size)}

    if exp.analysis["j_R0"] is not None:
        try:
            diag = j_diagnostic(exp.grid, exp.problem, snap_t, snap_u,
                                summary["tol_pos"], R0=exp.analysis["j_R0"],
                                delta_probe=exp.analysis["j_delta_probe"])
            report["j_diagnostic"] = diag.as_dict()
        except EmptySupport as exc:
            report["j_diagnostic"] = {"error": str(exc)}

    for i, spec in enumerate(exp.analysis["domination"]):
        spec = dict(spec) if isinstance(spec, dict) else spec
        path = f"analysis.domination[{i}]"
        if not isinstance(spec, dict):
            raise ConfigError(f"{path}: expected an object")
        sense = _as_str(_pop(spec, path, "sense"), path, "sense")
        tol = _as_float(_pop(spec, path, "tol"), path, "tol")
        r_window = spec.pop("r_window", None)
        if r_window is not None:
            r_window = tuple(_as_float_list(r_window, path, "r_window"))
        profile = build_profile(exp.problem, _pop(spec, path, "profile"),
                                path=f"{path}.profile")
        _reject_unknown(spec, path)
        rep = check_domination(exp.grid, np.asarray(snap_t),
                               np.asarray(snap_u), profile, sense=sense,
                               tol=tol, r_window=r_window)
        report["domination"].append(rep.as_dict())

    (run_dir / "analysis-report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n")
    return report


# ----- subcommands ---------------------------------------------------------

def cmd_derive(args) -> int:
    regime = classify_regime(args.N, args.p, args.q)
    out = {"regime": regime.value, "constants": None}
    try:
        problem = validate_params(args.N, args.p, args.q)
        out["constants"] = asdict(derive_constants(problem))
    except ValueError as exc:
        out["note"] = str(exc)
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


def cmd_residual(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: not valid JSON ({exc})")
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a JSON object")
    doc = dict(doc)
    problem = _build_problem(doc)
    profile = build_profile(problem, _pop(doc, "", "profile"))
    box = _as_float_list(_pop(doc, "", "box"), "", "box")
    if len(box) != 4:
        raise ConfigError("box: expected [t_lo, t_hi, r_lo, r_hi]")
    sense = _as_str(_pop(doc, "", "sense"), "", "sense")
    tol = _as_float(_pop(doc, "", "tol", 1e-10), "", "tol")
    n_t = _as_int(_pop(doc, "", "n_t", 24), "", "n_t")
    n_r = _as_int(_pop(doc, "", "n_r", 96), "", "n_r")
    seed = _as_int(_pop(doc, "", "seed", 0), "", "seed")
    out_path = _pop(doc, "", "output", None)
    for key in ("problem", "profile", "box"):
        doc.pop(key, None)
    _reject_unknown(doc, "")
    try:
        cert = certify_sign(profile, box=tuple(box), sense=sense, n_t=n_t,
                            n_r=n_r, tol=tol,
                            rng=np.random.default_rng(seed))
    except ValueError as exc:
        raise ConfigError(str(exc))
    text = json.dumps(cert.as_dict(), sort_keys=True, indent=2)
    if out_path is not None:
        Path(_as_str(out_path, "", "output")).write_text(text + "\n")
    print(text)
    return 0 if cert.passed else 1


def cmd_simulate(args) -> int:
    exp = load_experiment(args.config)
    result = run(exp.problem, exp.grid, exp.reg, exp.ic, exp.cfg)
    out_dir = Path(exp.out_dir) if exp.out_dir else Path(args.config).with_suffix("")
    write_run_dir(out_dir, exp, result)
    print(f"{result.outcome.value}: t_final={_fmt(result.t_final)} "
          f"steps={result.n_steps} -> {out_dir}")
    if result.outcome is Outcome.DIVERGED:
        return 3
    return 0


def cmd_analyze(args) -> int:
    report = analyze_run_dir(Path(args.run_dir))
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed)
    for res in results:
        print(res.line())
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    if args.json is not None:
        Path(args.json).write_text(json.dumps(
            [r.as_dict() for r in results], sort_keys=True, indent=2) + "\n")
    return 1 if n_fail else 0


def _apply_override(doc: dict, dotted: str, value):
    keys = dotted.split(".")
    node = doc
    for k in keys[:-1]:
        if not isinstance(node.get(k), dict):
            node[k] = {}
        node = node[k]
    node[keys[-1]] = value


def _sweep_one(base_doc: dict, overrides: dict, out_dir: str) -> dict:
    doc = json.loads(json.dumps(base_doc))
    for dotted, value in overrides.items():
        _apply_override(doc, dotted, value)
    _apply_override(doc, "output.dir", out_dir)
    exp = resolve_experiment(doc)
    result = run(exp.problem, exp.grid, exp.reg, exp.ic, exp.cfg)
    write_run_dir(Path(out_dir), exp, result)
    return {"dir": out_dir, "overrides": overrides,
            "outcome": result.outcome.value, "T_e_est": result.T_e_est}


def cmd_sweep(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: not valid JSON ({exc})")
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a JSON object")
    doc = dict(doc)
    base = _pop(doc, "", "base")
    axes = _pop(doc, "", "sweep")
    out_root = _as_str(_pop(doc, "", "dir", "sweep-runs"), "", "dir")
    _reject_unknown(doc, "")
    if not isinstance(base, dict):
        raise ConfigError("base: expected an experiment object")
    if not isinstance(axes, dict) or not axes:
        raise ConfigError("sweep: expected a non-empty object mapping "
                          "dotted key paths to value lists")
    for dotted, values in axes.items():
        if not isinstance(values, list) or not values:
            raise ConfigError(f"sweep.{dotted}: expected a non-empty list")
    resolve_experiment(json.loads(json.dumps(base)))  # validate early

    names = sorted(axes)
    combos = [{}]
    for name in names:
        combos = [{**c, name: v} for c in combos for v in axes[name]]
    jobs = []
    for combo in combos:
        tag = "_".join(f"{k.split('.')[-1]}={combo[k]}" for k in names)
        jobs.append((combo, str(Path(out_root) / tag)))

    results = []
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        futures = [pool.submit(_sweep_one, base, combo, out_dir)
                   for combo, out_dir in jobs]
        for fut in futures:
            results.append(fut.result())
    for res in results:
        print(f"{res['outcome']:16s} {res['dir']}")
    Path(out_root).mkdir(parents=True, exist_ok=True)
    (Path(out_root) / "sweep-summary.json").write_text(
        json.dumps(results, sort_keys=True, indent=2) + "\n")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vhjlab",
        description="Radial extinction laboratory for gradient-absorbing "
                    "fast diffusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="print derived constants for a triple")
    p.add_argument("N", type=int)
    p.add_argument("p", type=float)
    p.add_argument("q", type=float)
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("residual", help="certify a closed-form profile sign")
    p.add_argument("config")
    p.set_defaults(fn=cmd_residual)

    p = sub.add_parser("simulate", help="run one experiment")
    p.add_argument("config")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("analyze", help="re-measure an existing run directory")
    p.add_argument("run_dir")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=17)
    p.add_argument("--json", default=None, help="also write results here")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("sweep", help="fan an experiment over parameter lists")
    p.add_argument("config")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(fn=cmd_sweep)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
