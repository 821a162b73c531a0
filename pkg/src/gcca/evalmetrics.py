"""Recovery and estimation metrics over Monte-Carlo replicates."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import GccaError, UniverseMismatch
from .estimation import GccaConfig, fit
from .synthgen import PlantedTruth, SimConfig, build_truth, sample


@dataclass(frozen=True)
class RecoveryScore:
    sensitivity: float
    specificity: float
    exact_both: bool


def score_recovery(truth_x, truth_y, est_x, est_y, p: int, q: int) -> RecoveryScore:
    """Sensitivity/specificity of estimated index sets against planted ones.

    True positives and false negatives are counted over X and Y jointly.
    An empty estimate gives sensitivity 0.
    """
    tx, ty, ex, ey = set(truth_x), set(truth_y), set(est_x), set(est_y)
    for s, bound in ((tx, p), (ex, p), (ty, q), (ey, q)):
        if s and (min(s) < 0 or max(s) >= bound):
            raise UniverseMismatch("index outside the variable universe")
    tp = len(ex & tx) + len(ey & ty)
    fn = len(tx - ex) + len(ty - ey)
    tn = (p - len(tx | ex)) + (q - len(ty | ey))
    fp = len(ex - tx) + len(ey - ty)
    sens = tp / (tp + fn) if tp + fn else 1.0
    spec = tn / (tn + fp) if tn + fp else 1.0
    return RecoveryScore(sens, spec, sens == 1.0 and spec == 1.0)


def score_fit(truth: PlantedTruth, fit_result, p: int, q: int) -> RecoveryScore:
    if fit_result is None:
        s = score_recovery(truth.i_x, truth.i_y, (), (), p, q)
        return RecoveryScore(s.sensitivity, s.specificity, False)
    return score_recovery(truth.i_x, truth.i_y, fit_result.i_x, fit_result.i_y, p, q)


def moments(estimates: Sequence[float], target: float):
    """(bias^2, variance, mse); variance divides by the number of estimates."""
    e = np.asarray(estimates, dtype=float)
    if e.size == 0:
        return float("nan"), float("nan"), float("nan")
    mean = e.mean()
    bias_sq = float((mean - target) ** 2)
    variance = float(np.mean((e - mean) ** 2))
    mse = float(np.mean((e - target) ** 2))
    return bias_sq, variance, mse


@dataclass(eq=False)
class SimReport:
    config: SimConfig
    gcca_config: GccaConfig
    rho_c_pop: float
    pct_sensitivity_1: float
    pct_specificity_1: float
    pct_both_1: float
    mean_sensitivity: float
    mean_specificity: float
    mean_gmean: float
    bias_sq: float
    variance: float
    mse: float
    n_failed: int
    per_replicate: List[dict] = field(repr=False)

    @property
    def label(self) -> str:
        c = self.config
        return f"({c.block_rows},{c.block_cols}) rho in [{c.rho_lo},{c.rho_hi}]"

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "rho_c_pop", "pct_sensitivity_1", "pct_specificity_1", "pct_both_1",
            "mean_sensitivity", "mean_specificity", "mean_gmean", "bias_sq", "variance",
            "mse", "n_failed")}
        d["config"] = self.config.to_dict()
        d["gcca_config"] = self.gcca_config.to_dict()
        d["per_replicate"] = self.per_replicate
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


TABLE2_FIELDS = ["setting", "pct_sensitivity_1", "mean_sensitivity", "pct_specificity_1",
                 "mean_specificity", "pct_both_1", "mean_gmean"]
TABLE3_FIELDS = ["setting", "bias_sq", "variance", "mse"]


def table_csv(reports: Sequence[SimReport], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in reports:
        w.writerow([r.label if f == "setting" else repr(getattr(r, f)) for f in fields])
    return buf.getvalue()


def format_tables(reports: Sequence[SimReport]) -> str:
    lines = [f"{'setting':<28} {'%Sens=1':>14} {'%Spec=1':>14} {'%Both=1':>14}"]
    for r in reports:
        lines.append(f"{r.label:<28} {r.pct_sensitivity_1:6.0f}% ({r.mean_sensitivity:.3f})"
                     f" {r.pct_specificity_1:6.0f}% ({r.mean_specificity:.3f})"
                     f" {r.pct_both_1:6.0f}% ({r.mean_gmean:.3f})")
    lines.append("")
    lines.append(f"{'setting':<28} {'Bias^2':>11} {'Variance':>11} {'MSE':>11} {'rho_c':>7}")
    for r in reports:
        lines.append(f"{r.label:<28} {r.bias_sq:11.3e} {r.variance:11.3e} {r.mse:11.3e}"
                     f" {r.rho_c_pop:7.4f}")
    return "\n".join(lines)


def _run_replicate(args):
    config, gcca_config, truth, rep = args
    x, y = sample(truth, config, rep)
    try:
        result = fit(x, y, gcca_config)
        error = None
    except GccaError as exc:
        result, error = None, f"{type(exc).__name__}: {exc}"
    score = score_fit(truth, result, config.p, config.q)
    return {"replicate": rep, "sensitivity": score.sensitivity,
            "specificity": score.specificity, "exact_both": score.exact_both,
            "rho_hat": None if result is None else result.rho_hat,
            "lambda_star": None if result is None else result.lambda_star,
            "n_i_x": 0 if result is None else len(result.i_x),
            "n_i_y": 0 if result is None else len(result.i_y),
            "error": error}


def aggregate(config: SimConfig, gcca_config: GccaConfig, truth: PlantedTruth,
              rows: List[dict]) -> SimReport:
    sens = np.array([r["sensitivity"] for r in rows])
    spec = np.array([r["specificity"] for r in rows])
    both = np.array([r["exact_both"] for r in rows])
    rhos = [r["rho_hat"] for r in rows if r["rho_hat"] is not None]
    bias_sq, variance, mse = moments(rhos, truth.rho_c_pop)
    return SimReport(
        config=config, gcca_config=gcca_config, rho_c_pop=truth.rho_c_pop,
        pct_sensitivity_1=100.0 * float(np.mean(sens == 1.0)),
        pct_specificity_1=100.0 * float(np.mean(spec == 1.0)),
        pct_both_1=100.0 * float(np.mean(both)),
        mean_sensitivity=float(sens.mean()), mean_specificity=float(spec.mean()),
        mean_gmean=float(np.mean(np.sqrt(sens * spec))),
        bias_sq=bias_sq, variance=variance, mse=mse,
        n_failed=sum(r["error"] is not None for r in rows), per_replicate=rows)


def run_study(config: SimConfig, gcca_config: Optional[GccaConfig] = None,
              workers: int = 1) -> SimReport:
    """Sample, fit and score every replicate, then aggregate.

    Replicates whose fit raises a model or data error are kept as recovery
    failures without a ``rho_hat``. Output does not depend on ``workers``.
    """
    gcca_config = gcca_config or GccaConfig()
    truth = build_truth(config)
    jobs = [(config, gcca_config, truth, rep) for rep in range(config.replicates)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_replicate, jobs))
    else:
        rows = [_run_replicate(j) for j in jobs]
    return aggregate(config, gcca_config, truth, rows)


def loglog_slope(n_values: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ``log(errors)`` against ``log(n_values)``."""
    slope, _ = np.polyfit(np.log(np.asarray(n_values, float)),
                          np.log(np.asarray(errors, float)), 1)
    return float(slope)


@dataclass(eq=False)
class ConvergenceResult:
    slope: float
    n_values: List[int]
    rmse: List[float]
    reports: List[SimReport] = field(repr=False)

    def to_dict(self) -> dict:
        return {"slope": self.slope, "n_values": self.n_values, "rmse": self.rmse,
                "reports": [r.to_dict() for r in self.reports]}


def convergence_study(base_config: SimConfig, n_values: Sequence[int],
                      gcca_config: Optional[GccaConfig] = None,
                      workers: int = 1) -> ConvergenceResult:
    """RMSE of ``rho_hat`` across sample sizes and its log-log slope."""
    n_values = [int(n) for n in n_values]
    if len(set(n_values)) < 3 or min(n_values) < 4:
        raise ValueError("need at least 3 distinct sample sizes, each >= 4")
    reports = [run_study(base_config.with_(n=n), gcca_config, workers) for n in n_values]
    rmse = [float(np.sqrt(r.mse)) for r in reports]
    return ConvergenceResult(loglog_slope(n_values, rmse), n_values, rmse, reports)
