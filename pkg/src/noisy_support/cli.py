"""Command line entry point: ``noisy-support <subcommand> ...``.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import endpoint, estimator, experiments, lowerbound
from .bodies import RejectionCapError, UnboundedSupportError
from .linprog import LPError
from .sphere import NetCoverageError, sphere_net

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _noise_from_args(args) -> estimator.NoiseModel | None:
    given = [x is not None for x in (args.sigma2, args.Q, args.noise)]
    if sum(given) > 1:
        raise experiments.ConfigError("give at most one of --sigma2, --Q, --noise")
    if args.sigma2 is not None:
        return estimator.GaussianNoise(args.sigma2)
    if args.Q is not None:
        return estimator.UniformBallNoise(args.Q)
    if args.noise is not None:
        return experiments.parse_noise(args.noise)
    return None


def _M(text: str):
    return "auto" if text == "auto" else int(text)


def _n_list(text: str) -> list[int]:
    return [int(float(t)) for t in text.replace(",", " ").split()]


def _out(args, default: str) -> str:
    return args.out if args.out is not None else default


def cmd_simulate(args) -> int:
    body = experiments.load_body(args.body)
    noise = _noise_from_args(args)
    rng = np.random.default_rng(args.seed)
    Y = estimator.simulate_cloud(body, args.n, noise, rng)
    estimator.write_cloud(_out(args, "cloud.csv"), Y)
    return 0


def cmd_estimate(args) -> int:
    Y = estimator.read_cloud(args.input)
    noise = _noise_from_args(args)
    cfg = estimator.EstimatorConfig(Y.shape[1], noise, _M(args.M))
    est = estimator.build_estimator(Y, cfg, np.random.default_rng(args.seed))
    estimator.write_estimator(_out(args, "est.csv"), est)
    return 0


def cmd_member(args) -> int:
    est = estimator.read_estimator(args.est)
    point = np.array([float(t) for t in args.point.split(",")])
    if point.size != est.dim:
        raise experiments.ConfigError(f"point has {point.size} coordinates, estimator is {est.dim}-d")
    print("true" if est.membership(point) else "false")
    return 0


def cmd_hausdorff(args) -> int:
    est = estimator.read_estimator(args.est)
    body = experiments.load_body(args.body)
    if body.dim != est.dim:
        raise experiments.ConfigError("body and estimator dimensions differ")
    br, R = estimator.hausdorff_to_body(est, body, sphere_net(est.dim, args.delta))
    line = f"{br.lower!r},{br.upper!r},{R!r}"
    if args.out:
        Path(args.out).write_text("dH_lower,dH_upper,R\n" + line + "\n")
    print(line)
    return 0


def cmd_endpoint1d(args) -> int:
    if args.dist != "uniform":
        raise experiments.ConfigError("only --dist uniform is available")
    lines = ["n,trial,theta_hat,error"]
    for n in _n_list(args.n):
        rng = np.random.default_rng(np.random.SeedSequence([args.seed, n]))
        maxima = endpoint.simulate_uniform_maxima(rng, n, args.trials, args.sigma2,
                                                  args.theta, args.width)
        if args.variant == "plain":
            bias = endpoint.bias_bn(n, args.sigma2)
        else:
            bias = endpoint.bias_bn_tilde(n, args.sigma2, args.alpha)
        for t, m in enumerate(maxima):
            th = float(m - bias)
            lines.append(f"{n},{t},{th!r},{th - args.theta!r}")
    Path(_out(args, "curve.csv")).write_text("\n".join(lines) + "\n")
    return 0


def cmd_risk_curve(args) -> int:
    cfg = experiments.read_config(args.config)
    if args.seed is not None or args.out is not None:
        cfg = experiments.ExperimentConfig(
            cfg.body, cfg.noise, cfg.n_values, cfg.trials, cfg.M, cfg.net_resolution,
            cfg.seed if args.seed is None else args.seed,
            cfg.output_path if args.out is None else args.out)
    rows = experiments.run_risk_curve(cfg, threads=args.threads)
    csv_path, _ = experiments.emit_outputs(rows, cfg)
    print(csv_path)
    return 0


def cmd_lowerbound(args) -> int:
    rows = lowerbound.lowerbound_report(args.m, args.tau, args.delta, args.d, args.grid,
                                        args.sigma, args.seed)
    lowerbound.write_report(_out(args, "lb_report.csv"), rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--out", default=None, help="output file or directory")

    noise = argparse.ArgumentParser(add_help=False)
    noise.add_argument("--sigma2", type=float, default=None, help="Gaussian noise variance")
    noise.add_argument("--Q", type=float, default=None, help="uniform-ball noise radius")
    noise.add_argument("--noise", default=None, help="'gaussian <sigma2>' | 'uniform_ball <Q>' | 'none'")

    p = argparse.ArgumentParser(prog="noisy-support", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common, noise], help="sample a noisy point cloud")
    s.add_argument("--body", required=True, help="body spec text or file")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("estimate", parents=[common, noise], help="fit the halfspace estimator")
    s.add_argument("--in", dest="input", required=True, help="point cloud CSV")
    s.add_argument("--M", default="auto", help="number of directions or 'auto'")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("member", parents=[common], help="membership query")
    s.add_argument("--est", required=True)
    s.add_argument("--point", required=True, help="comma-separated coordinates")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("hausdorff", parents=[common], help="Hausdorff bracket to a body")
    s.add_argument("--est", required=True)
    s.add_argument("--body", required=True)
    s.add_argument("--delta", type=float, default=0.01, help="net resolution")
    s.set_defaults(func=cmd_hausdorff)

    s = sub.add_parser("endpoint1d", parents=[common], help="1D endpoint simulation")
    s.add_argument("--dist", default="uniform")
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--width", type=float, default=1.0)
    s.add_argument("--sigma2", type=float, default=1.0)
    s.add_argument("--n", default="100000", help="sample size(s), comma-separated")
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--variant", choices=["plain", "refined"], default="plain")
    s.add_argument("--alpha", type=float, default=1.0)
    s.set_defaults(func=cmd_endpoint1d)

    s = sub.add_parser("risk-curve", parents=[common], help="Monte Carlo risk curve from a config file")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_risk_curve)

    s = sub.add_parser("lowerbound", parents=[common], help="lower-bound construction checks")
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--tau", type=float, default=0.5)
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--grid", type=int, default=4096)
    s.add_argument("--sigma", type=float, default=0.5, help="noise level for the TV diagnostic")
    s.set_defaults(func=cmd_lowerbound)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None and args.command != "risk-curve":
        args.seed = 0
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (LPError, RejectionCapError, NetCoverageError, UnboundedSupportError,
            FloatingPointError, MemoryError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except experiments.TrialError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (experiments.ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
