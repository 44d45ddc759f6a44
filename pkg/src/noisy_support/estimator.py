"""Support estimation of a convex body from noisy uniform samples.

Along ``M`` random unit directions the endpoint of the projected sample is
estimated by the sample maximum minus a noise bias. The estimate is the
intersection of the resulting halfspaces, truncated to the ball of radius
``ln n`` around the sample mean, and collapses to the sample mean itself
when the halfspaces do not intersect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .bodies import Ball, ConvexBody
from .endpoint import bias_bn
from .linprog import Halfspace, feasibility, support_over_polytope_ball
from .metrics import HausdorffBracket, hausdorff_support
from .sphere import SphereNet, sample_sphere

_POINT_CHUNK = 8192


@dataclass(frozen=True)
class GaussianNoise:
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")

    def sample(self, rng: np.random.Generator, n: int, d: int) -> np.ndarray:
        return math.sqrt(self.sigma2) * rng.standard_normal((n, d))

    def bias(self, n: int) -> float:
        return bias_bn(n, self.sigma2)


@dataclass(frozen=True)
class UniformBallNoise:
    Q: float

    def __post_init__(self):
        if not self.Q > 0:
            raise ValueError("Q must be positive")

    def sample(self, rng: np.random.Generator, n: int, d: int) -> np.ndarray:
        return Ball(np.zeros(d), self.Q).sample_uniform(rng, n)

    def bias(self, n: int) -> float:
        return float(self.Q)


NoiseModel = Union[GaussianNoise, UniformBallNoise]


def direction_constant(d: int) -> float:
    return 2.0 * d * (d + 1) * 8.0 ** ((d - 1) / 2.0)


def direction_budget(b: float, d: int) -> int:
    """``floor(A b^(d-1) (ln b)^-(d-2))`` clamped below at ``d + 1``.

    For ``d = 2`` the logarithmic factor has exponent zero and is dropped, so
    ``b <= 1`` is allowed there.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    A = direction_constant(d)
    if d == 2:
        M = math.floor(A * b)
    else:
        lb = math.log(b)
        if lb <= 0:
            raise ValueError("n too small for auto M")
        M = math.floor(A * b ** (d - 1) * lb ** (-(d - 2)))
    return max(M, d + 1)


def choose_M(n: int, sigma2: float, d: int) -> int:
    """Direction budget for Gaussian noise: :func:`direction_budget` at ``b_n``."""
    return direction_budget(bias_bn(n, sigma2), d)


def choose_M_uniform(n: int, d: int) -> int:
    """Direction budget for ball-uniform noise.

    :func:`direction_budget` evaluated at ``n^(2/(3d+1))``, the inverse of the
    directional error scale under bounded noise.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    return direction_budget(n ** (2.0 / (3 * d + 1)), d)


def auto_M(n: int, noise: NoiseModel, d: int) -> int:
    if isinstance(noise, GaussianNoise):
        return choose_M(n, noise.sigma2, d)
    return choose_M_uniform(n, d)


def max_projections(U: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``max_j <u_i, Y_j>`` for every row ``u_i`` of ``U``."""
    U = np.atleast_2d(U)
    best = np.full(U.shape[0], -np.inf)
    for s in range(0, Y.shape[0], _POINT_CHUNK):
        np.maximum(best, (Y[s:s + _POINT_CHUNK] @ U.T).max(axis=0), out=best)
    return best


def estimate_support_value(u, cloud, noise: NoiseModel | None) -> float:
    """``max_j <u, Y_j>`` minus the noise bias (``b_n`` or ``Q``); ``None`` means no bias."""
    Y = np.atleast_2d(np.asarray(cloud, dtype=float))
    if Y.shape[0] == 0:
        raise ValueError("empty cloud")
    m = float(max_projections(np.asarray(u, dtype=float)[None, :], Y)[0])
    return m - (0.0 if noise is None else noise.bias(Y.shape[0]))


@dataclass(frozen=True)
class EstimatorConfig:
    d: int
    noise: NoiseModel | None
    M: int | Literal["auto"] = "auto"
    n: int | None = None
    seed: int | None = None
    net_resolution: float = 0.01

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.M != "auto" and int(self.M) < 1:
            raise ValueError("M must be >= 1")
        if not 0 < self.net_resolution <= 0.5:
            raise ValueError("net_resolution must lie in (0, 1/2]")

    def resolve_M(self, n: int) -> int:
        if self.M == "auto":
            if self.noise is None:
                raise ValueError("auto M needs a noise model")
            return auto_M(n, self.noise, self.d)
        return int(self.M)


@dataclass(frozen=True, eq=False)
class HalfspaceEstimator:
    """Truncated halfspace estimator; immutable once built."""

    normals: np.ndarray
    offsets: np.ndarray
    mu_hat: np.ndarray
    trunc_radius: float
    empty: bool
    n: int
    noise: NoiseModel | None = None
    interior: np.ndarray | None = field(default=None, repr=False)

    @property
    def M(self) -> int:
        return self.normals.shape[0]

    @property
    def dim(self) -> int:
        return self.mu_hat.size

    @property
    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(a, o) for a, o in zip(self.normals, self.offsets)]

    def membership(self, X):
        return membership(self, X)

    def support(self, U, tol: float = 1e-8):
        U = np.asarray(U, dtype=float)
        if U.ndim == 1:
            return estimator_support(self, U, tol)
        return np.array([estimator_support(self, u, tol) for u in U])

    def translated(self, v) -> "HalfspaceEstimator":
        v = np.asarray(v, dtype=float)
        return HalfspaceEstimator(self.normals, self.offsets + self.normals @ v, self.mu_hat + v,
                                  self.trunc_radius, self.empty, self.n, self.noise,
                                  None if self.interior is None else self.interior + v)


def _interior_hint(normals, offsets, center, radius):
    """A point of the polytope inside the truncation ball, if one is found cheaply."""
    d = center.size
    eye = np.eye(d)
    half = radius / math.sqrt(d)
    A = np.vstack([normals, eye, -eye])
    b = np.concatenate([offsets, center + half, -center + half])
    x = feasibility((A, b))
    if x is not None and np.linalg.norm(x - center) < radius:
        return x
    return None


def assemble_estimator(normals, offsets, mu_hat, n: int, noise: NoiseModel | None = None,
                       trunc_radius: float | None = None) -> HalfspaceEstimator:
    """Emptiness test and interior hint for given halfspaces."""
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    offsets = np.asarray(offsets, dtype=float).ravel()
    mu_hat = np.asarray(mu_hat, dtype=float).ravel()
    if normals.shape[0] < 1:
        raise ValueError("M must be >= 1")
    if not np.all(np.isfinite(offsets)):
        raise ValueError("offsets must be finite")
    radius = math.log(n) if trunc_radius is None else float(trunc_radius)
    empty = feasibility((normals, offsets)) is None
    interior = None
    if not empty:
        interior = _interior_hint(normals, offsets, mu_hat, radius)
        if interior is None:
            # polytope may miss the truncation ball entirely
            try:
                support_over_polytope_ball((normals, offsets), mu_hat, radius, normals[0])
            except ValueError:
                empty = True
    return HalfspaceEstimator(normals, offsets, mu_hat, radius, empty, n, noise, interior)


def build_estimator(cloud, config: EstimatorConfig, rng: np.random.Generator,
                    directions: np.ndarray | None = None) -> HalfspaceEstimator:
    """Draw directions, estimate support values and assemble the truncated estimator."""
    Y = np.atleast_2d(np.asarray(cloud, dtype=float))
    n, d = Y.shape
    if d != config.d:
        raise ValueError(f"cloud dimension {d} != config.d {config.d}")
    if config.n is not None and config.n != n:
        raise ValueError(f"cloud has {n} points, config expects {config.n}")
    if directions is None:
        M = config.resolve_M(n)
        if M < 1:
            raise ValueError("M must be >= 1")
        directions = sample_sphere(rng, d, M)
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    bias = 0.0 if config.noise is None else config.noise.bias(n)
    offsets = max_projections(U, Y) - bias
    return assemble_estimator(U, offsets, Y.mean(axis=0), n, config.noise)


def membership(est: HalfspaceEstimator, X):
    """Halfspace pass plus one ball test; the point case compares with ``mu_hat``."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X2 = np.atleast_2d(X)
    if est.empty:
        out = np.linalg.norm(X2 - est.mu_hat, axis=1) <= 1e-12
    else:
        inside = np.all(X2 @ est.normals.T <= est.offsets, axis=1)
        out = inside & (np.linalg.norm(X2 - est.mu_hat, axis=1) <= est.trunc_radius)
    return bool(out[0]) if single else out


def estimator_support(est: HalfspaceEstimator, u, tol: float = 1e-8) -> float:
    u = np.asarray(u, dtype=float)
    if est.empty:
        return float(u @ est.mu_hat)
    return support_over_polytope_ball((est.normals, est.offsets), est.mu_hat, est.trunc_radius,
                                      u, tol, start=est.interior)


@dataclass(frozen=True)
class TrialResult:
    dH_lower: float
    dH_upper: float
    empty: bool
    M: int
    R: float


def simulate_cloud(G: ConvexBody, n: int, noise: NoiseModel | None,
                   rng: np.random.Generator) -> np.ndarray:
    X = G.sample_uniform(rng, n)
    if noise is None:
        return X
    return X + noise.sample(rng, n, G.dim)


def evaluate_trial(G: ConvexBody, config: EstimatorConfig, net: SphereNet,
                   rng: np.random.Generator, n: int | None = None, tol: float = 1e-8) -> TrialResult:
    """Simulate one sample, fit the estimator, and bracket its Hausdorff error.

    ``config.noise = None`` runs the noiseless debug mode (no noise, zero
    bias); ``M`` must then be explicit. The Lipschitz radius is the larger of
    the body's outer radius and a net certificate for the estimator's.
    """
    n = config.n if n is None else n
    if n is None:
        raise ValueError("sample size n is required")
    Y = simulate_cloud(G, n, config.noise, rng)
    est = build_estimator(Y, config, rng)
    br, R = hausdorff_to_body(est, G, net, tol)
    return TrialResult(br.lower, br.upper, est.empty, est.M, R)


def hausdorff_to_body(est: HalfspaceEstimator, G: ConvexBody, net: SphereNet,
                      tol: float = 1e-8) -> tuple[HausdorffBracket, float]:
    """Net bracket of ``d_H(estimate, G)`` and the Lipschitz radius it used.

    The radius is the larger of the body's outer radius and a bound for the
    estimate obtained from its support values on the net.
    """
    U = net.directions
    h_est = est.support(U, tol)
    h_G = G.support(U)
    if est.empty:
        R_est = float(np.linalg.norm(est.mu_hat))
    else:
        R_est = max(0.0, float(h_est.max())) / (1.0 - net.resolution)
    R = max(G.outer_radius(), R_est)
    return hausdorff_support(lambda _: h_est, lambda _: h_G, net, R), R


# ---------------------------------------------------------------------------
# files


def write_cloud(path, Y) -> None:
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    d = Y.shape[1]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(f"x{i + 1}" for i in range(d)) + "\n")
        for row in Y:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_cloud(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if not header or not all(h.strip().startswith("x") for h in header):
            raise ValueError("cloud CSV must start with header x1,...,xd")
        Y = np.loadtxt(fh, delimiter=",", ndmin=2)
    if Y.shape[1] != len(header):
        raise ValueError("column count does not match header")
    return Y


def write_estimator(path, est: HalfspaceEstimator) -> None:
    d = est.dim
    with open(path, "w", newline="") as fh:
        fh.write(",".join([f"n{i + 1}" for i in range(d)] + ["offset"]) + "\n")
        for a, o in zip(est.normals, est.offsets):
            fh.write(",".join(f"{v:.17g}" for v in list(a) + [o]) + "\n")
        fh.write("muhat," + ",".join(f"{v:.17g}" for v in est.mu_hat) + "\n")
        fh.write(f"radius,{est.trunc_radius:.17g}\n")


def read_estimator(path) -> HalfspaceEstimator:
    rows, mu, radius = [], None, None
    with open(path) as fh:
        fh.readline()
        for line in fh:
            line = line.strip()
            if not line:
                continue
            tok = line.split(",")
            if tok[0] == "muhat":
                mu = np.array([float(t) for t in tok[1:]])
            elif tok[0] == "radius":
                radius = float(tok[1])
            else:
                rows.append([float(t) for t in tok])
    if mu is None or radius is None or not rows:
        raise ValueError("estimator file needs halfspace rows and muhat/radius trailers")
    R = np.array(rows)
    n = int(round(math.exp(radius)))
    return assemble_estimator(R[:, :-1], R[:, -1], mu, n, None, trunc_radius=radius)
