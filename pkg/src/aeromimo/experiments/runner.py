"""Monte Carlo engine: one scenario point, and whole sweeps.

Determinism contract: trial t always uses the stream (seed, "trial", d, t)
regardless of how trials are distributed over workers. Trials are split into
chunks whose boundaries depend only on the trial count; chunk partials are
reduced in chunk order, so results are bit-identical for any parallelism
degree. All schemes share each trial's draws (common random numbers).

Scheme evaluation paths:

fc                   per-realization log-dets of the global MMSE receiver
oneshot_empirical    per-trial exact weights (needs the block's x), SE from
                     the per-realization combined-receiver log-dets (the
                     Monte-Carlo markers validating the weights)
oneshot_asymptotic   statistical-CSI weights solved once per point, SE from
                     the statistical-CSI bound (the proposed scheme)
small_cell           nearest-AP indicator weights, statistical-CSI SE bound
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import rng as rngmod
from ..config import ConfigFile, SystemConfig, config_hash
from ..detection import OneShotAccumulator, empirical_weights, fc_logdets, oneshot_logdets
from ..errors import SolverError
from .csvio import ResultRow
from .sweep import expand_sweep
from .trials import build_point_setup, local_detectors, oneshot_tensors, run_trial

__all__ = ["PointResult", "run_point", "run_sweep", "SweepOutcome"]

_LOGDET_SCHEMES = ("fc", "oneshot_empirical")
_ACC_SCHEMES = ("oneshot_asymptotic", "small_cell")


@dataclass
class PointResult:
    scheme: str
    per_ue_se: np.ndarray
    sum_se: float
    stderr: float
    solver_iters: int = 0
    solver_residual: float = 0.0
    error: str = None


def _chunk_bounds(trials: int):
    """Fixed chunking, a pure function of the trial count (16-ish chunks)."""
    size = max(1, trials // 16)
    return [(t0, min(t0 + size, trials)) for t0 in range(0, trials, size)]


def _run_chunk(args):
    """One chunk of trials; returns per-scheme partial results."""
    setup, schemes, trial_range, omega_asym = args
    cfg = setup.cfg
    need_local = any(s != "fc" for s in schemes)
    omega_small = np.zeros((cfg.K, cfg.L))
    for k in range(cfg.K):
        omega_small[k, setup.nearest[k]] = 1.0

    lds = {s: [] for s in schemes if s in _LOGDET_SCHEMES}
    accs = {s: OneShotAccumulator(cfg.K, cfg.N, cfg.L) for s in schemes if s in _ACC_SCHEMES}
    for t in range(*trial_range):
        trial = run_trial(setup, rngmod.stream(cfg.seed, "trial", setup.deployment_index, t))
        if "fc" in lds:
            lds["fc"].append(fc_logdets(trial.hhat_stack(), setup.P_blk, setup.cprime_blk,
                                        cfg.sigma2, cfg.K, cfg.N))
        if need_local:
            U_list, Q_list = local_detectors(setup, trial)
            V, UU = oneshot_tensors(setup, trial, U_list)
            if "oneshot_empirical" in lds:
                ws = empirical_weights(trial.x, Q_list, U_list, setup.s_mats)
                omega = np.tile(ws.omega, (cfg.K, 1))
                lds["oneshot_empirical"].append(oneshot_logdets(V, UU, omega, cfg.sigma2))
            if "oneshot_asymptotic" in accs:
                accs["oneshot_asymptotic"].add_trial(V, UU, np.tile(omega_asym, (cfg.K, 1)))
            if "small_cell" in accs:
                accs["small_cell"].add_trial(V, UU, omega_small)
    out = {s: np.asarray(v) for s, v in lds.items()}
    for s, a in accs.items():
        out[s] = (a.sig, a.mid, a.noise, a.count)
    return out


def _finalize_accumulator(partials, cfg, scheme):
    """Merge chunk partials in order; chunk-wise SEs feed the stderr estimate."""
    total = OneShotAccumulator(cfg.K, cfg.N, cfg.L)
    chunk_ses = []
    for sig, mid, noise, count in partials:
        piece = OneShotAccumulator(cfg.K, cfg.N, cfg.L)
        piece.sig, piece.mid, piece.noise, piece.count = sig, mid, noise, count
        try:
            chunk_ses.append(piece.finalize(cfg.prelog, cfg.sigma2, scheme).sum_se)
        except Exception:
            chunk_ses.append(np.nan)
        total.merge(piece)
    report = total.finalize(cfg.prelog, cfg.sigma2, scheme)
    good = np.asarray([c for c in chunk_ses if np.isfinite(c)])
    stderr = float(np.std(good) / np.sqrt(len(good))) if len(good) > 1 else 0.0
    return report, stderr


def run_point(cfg: SystemConfig, schemes, trials: int, parallel: int = 1,
              deployment_index: int = 0) -> list:
    """All requested schemes on one scenario point; one result per scheme."""
    setup = build_point_setup(cfg, deployment_index)

    omega_asym = None
    solver_iters, solver_residual = 0, 0.0
    asym_error = None
    if "oneshot_asymptotic" in schemes:
        from ..freeprob import ap_statistics_from_setup, asymptotic_weight_system

        try:
            aps = [ap_statistics_from_setup(setup, l) for l in range(cfg.L)]
            ws_asym = asymptotic_weight_system(aps, cfg.sigma2)
            omega_asym = ws_asym.omega
            diag = ws_asym.diagnostics["solver"]
            solver_iters, solver_residual = diag.iterations, diag.max_residual
        except SolverError as exc:
            asym_error = str(exc)

    run_schemes = tuple(s for s in schemes if not (s == "oneshot_asymptotic" and asym_error))
    bounds = _chunk_bounds(trials)
    jobs = [(setup, run_schemes, b, omega_asym) for b in bounds]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            chunk_results = list(pool.map(_run_chunk, jobs))
    else:
        chunk_results = [_run_chunk(j) for j in jobs]

    results = []
    for s in schemes:
        if s == "oneshot_asymptotic" and asym_error:
            results.append(PointResult(scheme=s, per_ue_se=np.array([]), sum_se=float("nan"),
                                       stderr=float("nan"), error=asym_error))
            continue
        extra = {}
        if s == "oneshot_asymptotic":
            extra = dict(solver_iters=solver_iters, solver_residual=solver_residual)
        if s in _LOGDET_SCHEMES:
            lds = np.concatenate([c[s] for c in chunk_results], axis=0)
            per_ue = cfg.prelog * lds.mean(axis=0)
            sums = cfg.prelog * lds.sum(axis=1)
            stderr = float(np.std(sums) / np.sqrt(len(sums))) if len(sums) > 1 else 0.0
            results.append(PointResult(scheme=s, per_ue_se=per_ue,
                                       sum_se=float(per_ue.sum()), stderr=stderr, **extra))
        else:
            report, stderr = _finalize_accumulator([c[s] for c in chunk_results], cfg, s)
            results.append(PointResult(scheme=s, per_ue_se=report.per_ue_se,
                                       sum_se=report.sum_se, stderr=stderr, **extra))
    return results


@dataclass
class SweepOutcome:
    rows_by_env: dict           # environment -> list[ResultRow]
    skipped: list               # (environment, axis value, reason)
    diagnostics: list = field(default_factory=list)


def run_sweep(cfg_file: ConfigFile, seed: int = None, trials: int = None,
              parallel: int = 1) -> SweepOutcome:
    spec = cfg_file.sweep
    base = cfg_file.scenario
    if seed is not None:
        base = base.with_updates(seed=seed)
    n_trials = trials if trials is not None else spec.trials
    chash = config_hash(cfg_file)

    rows_by_env = {}
    skipped_all = []
    diagnostics = []
    for env_name in spec.environments:
        base_env = base.with_updates(environment=env_name,
                                     env=cfg_file.constants.get(env_name))
        points, skipped = expand_sweep(base_env, spec, env_name)
        for value, reason in skipped:
            skipped_all.append((env_name, value, reason))
        rows = []
        for value, cfg in points:
            cfg = cfg.with_updates(env=cfg_file.constants.get(cfg.environment))
            dep_results = []
            for d in range(spec.deployments_per_point):
                dep_results.append(run_point(cfg, spec.schemes, n_trials,
                                             parallel=parallel, deployment_index=d))
            for i, scheme in enumerate(spec.schemes):
                per_dep = [dr[i] for dr in dep_results]
                errors = [r.error for r in per_dep if r.error]
                if errors:
                    skipped_all.append((env_name, value, f"{scheme}: {errors[0]}"))
                    continue
                d_count = len(per_dep)
                per_ue = np.mean([r.per_ue_se for r in per_dep], axis=0)
                stderr = float(np.sqrt(sum(r.stderr**2 for r in per_dep)) / d_count)
                rows.append(ResultRow(
                    axis_value=float(value),
                    scheme=scheme,
                    environment=env_name,
                    sum_se=float(per_ue.sum()),
                    se_stderr=stderr,
                    per_ue_se=[float(v) for v in per_ue],
                    trials=n_trials * d_count,
                    seed=cfg.seed,
                    config_hash=chash,
                    solver_iters=max(r.solver_iters for r in per_dep),
                    solver_residual=max(r.solver_residual for r in per_dep),
                ))
                diagnostics.append({
                    "environment": env_name, "axis": value, "scheme": scheme,
                    "solver_iters": max(r.solver_iters for r in per_dep),
                    "solver_residual": max(r.solver_residual for r in per_dep),
                })
        rows_by_env[env_name] = rows
    return SweepOutcome(rows_by_env=rows_by_env, skipped=skipped_all, diagnostics=diagnostics)
