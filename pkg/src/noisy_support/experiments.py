"""Seeded Monte Carlo risk curves for the halfspace estimator.

Every trial draws from its own generator seeded by ``(seed, n, trial)``, so a
run is reproducible whatever the worker count, and adding sample sizes never
changes existing trials.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Literal

import numpy as np
from scipy import stats

from .bodies import ConvexBody, parse_body
from .estimator import (EstimatorConfig, GaussianNoise, NoiseModel, TrialResult,
                        UniformBallNoise, evaluate_trial)
from .sphere import SphereNet, sphere_net

RISK_HEADER = "n,M,trials,mean_dH_lower,mean_dH_upper,std_dH,empty_count,wall_seconds"


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


class TrialError(RuntimeError):
    def __init__(self, n: int, trial: int, cause: BaseException):
        super().__init__(f"trial failed at n={n}, trial={trial}: {cause}")
        self.n, self.trial, self.cause = n, trial, cause

    def __reduce__(self):
        return TrialError, (self.n, self.trial, self.cause)


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    body: ConvexBody
    noise: NoiseModel | None
    n_values: tuple[int, ...]
    trials: int
    M: int | Literal["auto"] = "auto"
    net_resolution: float = 0.01
    seed: int = 0
    output_path: str = "."

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.n_values or list(self.n_values) != sorted(self.n_values):
            raise ConfigError("n_values must be a nonempty ascending list")
        if min(self.n_values) < 2:
            raise ConfigError("sample sizes must be >= 2")
        if not 0 < self.net_resolution <= 0.5:
            raise ConfigError("net_resolution must lie in (0, 1/2]")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.M == "auto" and self.noise is None:
            raise ConfigError("M = auto needs a noise model")

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(self.body.dim, self.noise, self.M, None, self.seed, self.net_resolution)


def parse_noise(text: str) -> NoiseModel | None:
    tok = text.split()
    if tok == ["none"]:
        return None
    if len(tok) == 2 and tok[0] == "gaussian":
        return GaussianNoise(float(tok[1]))
    if len(tok) == 2 and tok[0] == "uniform_ball":
        return UniformBallNoise(float(tok[1]))
    raise ConfigError(f"noise must be 'gaussian <sigma2>', 'uniform_ball <Q>' or 'none', got {text!r}")


def load_body(text: str, base: Path | None = None) -> ConvexBody:
    """Inline body spec, or a path (relative to ``base``) to a body file."""
    candidate = Path(text) if base is None else base / text
    if candidate.is_file():
        text = candidate.read_text()
    return parse_body(text)


_KEYS = {f.name for f in fields(ExperimentConfig)}


def parse_config(text: str, base: Path | None = None) -> ExperimentConfig:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    missing = {"body", "noise", "n_values", "trials"} - raw.keys()
    if missing:
        raise ConfigError(f"missing keys: {', '.join(sorted(missing))}")
    try:
        kwargs = dict(
            body=load_body(raw["body"], base),
            noise=parse_noise(raw["noise"]),
            n_values=tuple(int(float(v)) for v in raw["n_values"].replace(",", " ").split()),
            trials=int(raw["trials"]),
        )
        if "M" in raw:
            kwargs["M"] = "auto" if raw["M"] == "auto" else int(raw["M"])
        if "net_resolution" in raw:
            kwargs["net_resolution"] = float(raw["net_resolution"])
        if "seed" in raw:
            kwargs["seed"] = int(raw["seed"])
        if "output_path" in raw:
            kwargs["output_path"] = raw["output_path"]
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(**kwargs)


def read_config(path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(), base=path.parent)


def trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, n, trial]))


@dataclass(frozen=True)
class RiskCurveRow:
    n: int
    M: int
    trials: int
    mean_dH_lower: float
    mean_dH_upper: float
    std_dH: float
    empty_count: int
    wall_seconds: float

    def csv(self) -> str:
        return (f"{self.n},{self.M},{self.trials},{self.mean_dH_lower!r},{self.mean_dH_upper!r},"
                f"{self.std_dH!r},{self.empty_count},{self.wall_seconds!r}")

    @classmethod
    def parse(cls, line: str) -> "RiskCurveRow":
        t = line.strip().split(",")
        if len(t) != 8:
            raise ValueError("risk row needs 8 fields")
        return cls(int(t[0]), int(t[1]), int(t[2]), float(t[3]), float(t[4]), float(t[5]),
                   int(t[6]), float(t[7]))


def _run_one(args) -> TrialResult:
    body, est_cfg, net, seed, n, trial = args
    try:
        return evaluate_trial(body, est_cfg, net, trial_rng(seed, n, trial), n=n)
    except Exception as exc:  # noqa: BLE001 - re-raised with the trial index
        raise TrialError(n, trial, exc) from exc


def aggregate(n: int, results: list[TrialResult], wall: float) -> RiskCurveRow:
    lo = np.array([r.dH_lower for r in results])
    hi = np.array([r.dH_upper for r in results])
    k = len(results)
    std = float(np.std(hi, ddof=1)) if k > 1 else 0.0
    return RiskCurveRow(n, results[0].M, k, float(np.sum(lo) / k), float(np.sum(hi) / k), std,
                        int(sum(r.empty for r in results)), wall)


def run_risk_curve(config: ExperimentConfig, threads: int = 1,
                   net: SphereNet | None = None) -> list[RiskCurveRow]:
    """One aggregated row per sample size; results are independent of ``threads``."""
    if net is None:
        net = sphere_net(config.body.dim, config.net_resolution)
    est_cfg = config.estimator_config()
    rows = []
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for n in config.n_values:
            jobs = [(config.body, est_cfg, net, config.seed, n, t) for t in range(config.trials)]
            start = time.perf_counter()
            results = list(pool.map(_run_one, jobs)) if pool else [_run_one(j) for j in jobs]
            rows.append(aggregate(n, results, time.perf_counter() - start))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


@dataclass(frozen=True)
class RateFit:
    coef: float
    intercept: float
    r2: float


def polylog_rate(n) -> np.ndarray:
    ln = np.log(np.asarray(n, dtype=float))
    return np.log(ln) / np.sqrt(ln)


def fit_rate(rows: list[RiskCurveRow], model: Literal["loglog", "polylog"],
             column: str = "mean_dH_upper") -> RateFit:
    """Least squares with intercept.

    ``loglog`` regresses ``ln(risk)`` on ``ln n`` (the coefficient is the
    slope); ``polylog`` regresses the risk on ``ln ln n / sqrt(ln n)``.
    """
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    n = np.array([r.n for r in rows], dtype=float)
    y = np.array([getattr(r, column) for r in rows], dtype=float)
    if model == "loglog":
        if np.any(y <= 0):
            raise ValueError("loglog fit needs positive risks")
        x, y = np.log(n), np.log(y)
    elif model == "polylog":
        x = polylog_rate(n)
    else:
        raise ValueError(f"unknown model {model!r}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("degenerate input: zero variance")
    res = stats.linregress(x, y)
    return RateFit(float(res.slope), float(res.intercept), float(res.rvalue ** 2))


def write_risk_csv(path, rows: list[RiskCurveRow]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(RISK_HEADER + "\n")
        for r in rows:
            fh.write(r.csv() + "\n")


def read_risk_csv(path) -> list[RiskCurveRow]:
    with open(path) as fh:
        if fh.readline().strip() != RISK_HEADER:
            raise ValueError("unexpected risk.csv header")
        return [RiskCurveRow.parse(line) for line in fh if line.strip()]


PLOT_SCRIPT = '''"""Plot the risk curve stored next to this script."""
import csv
import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
with open(here / "{csv_name}") as fh:
    rows = list(csv.DictReader(fh))
n = [float(r["n"]) for r in rows]
fig, ax = plt.subplots()
ax.loglog(n, [float(r["mean_dH_upper"]) for r in rows], "o-", label="upper")
ax.loglog(n, [float(r["mean_dH_lower"]) for r in rows], "s--", label="lower")
ax.set_xlabel("n")
ax.set_ylabel("mean Hausdorff error")
ax.legend()
out = sys.argv[1] if len(sys.argv) > 1 else str(here / "{png_name}")
fig.savefig(out)
'''


def output_paths(output_path: str) -> tuple[Path, Path]:
    p = Path(output_path)
    csv_path = p if p.suffix == ".csv" else p / "risk.csv"
    return csv_path, csv_path.with_name(csv_path.stem + "_plot.py")


def emit_outputs(rows: list[RiskCurveRow], config: ExperimentConfig | None = None,
                 output_path: str | None = None) -> tuple[Path, Path]:
    """Write the risk CSV and a companion matplotlib script; returns both paths."""
    if not rows:
        raise ValueError("no rows to emit")
    target = output_path if output_path is not None else (config.output_path if config else ".")
    csv_path, script_path = output_paths(target)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    write_risk_csv(csv_path, rows)
    script_path.write_text(PLOT_SCRIPT.format(csv_name=csv_path.name, png_name=csv_path.stem + ".png"))
    return csv_path, script_path


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


__all__ = [
    "ConfigError", "TrialError", "ExperimentConfig", "RiskCurveRow", "RateFit",
    "parse_config", "read_config", "parse_noise", "load_body", "trial_rng",
    "run_risk_curve", "fit_rate", "polylog_rate", "emit_outputs", "write_risk_csv",
    "read_risk_csv", "RISK_HEADER",
]
