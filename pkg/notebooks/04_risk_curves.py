"""
Seeded Monte Carlo risk curves
==============================

Every trial has its own substream, so curves are reproducible and extending
the list of sample sizes never changes earlier rows.
"""

from noisy_support import Ball, GaussianNoise, UniformBallNoise
from noisy_support.experiments import ExperimentConfig, fit_rate, run_risk_curve

for noise, model in ((GaussianNoise(0.01), "polylog"), (UniformBallNoise(0.3), "loglog")):
    cfg = ExperimentConfig(Ball([0.0, 0.0], 1.0), noise, (1000, 4000, 16000, 64000), trials=5,
                           net_resolution=0.02, seed=3)
    rows = run_risk_curve(cfg)
    for r in rows:
        print(f"{type(noise).__name__:>16} n={r.n:>6} M={r.M:>4} "
              f"dH in [{r.mean_dH_lower:.4f}, {r.mean_dH_upper:.4f}] empty={r.empty_count}")
    fit = fit_rate(rows, model)
    print(f"  {model} fit: coefficient {fit.coef:.3f}, R^2 {fit.r2:.3f}")
