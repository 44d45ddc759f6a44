"""Uniform directions and certified delta-nets of the unit sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_PROBES = 200_000
_NET_SEED = 20170915


class NetCoverageError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SphereNet:
    """Unit directions such that every unit vector lies within ``resolution`` of one."""

    directions: np.ndarray
    resolution: float

    def __len__(self) -> int:
        return self.directions.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]


def sample_sphere(rng: np.random.Generator, d: int, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on ``S^{d-1}`` by normalizing standard Gaussian vectors."""
    if d < 1:
        raise ValueError("d must be >= 1")
    k = 1 if size is None else int(size)
    g = rng.standard_normal((k, d))
    nrm = np.linalg.norm(g, axis=1)
    bad = nrm < 1e-12
    while bad.any():
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        nrm = np.linalg.norm(g, axis=1)
        bad = nrm < 1e-12
    out = g / nrm[:, None]
    return out[0] if size is None else out


def covering_radius_estimate(directions: np.ndarray, probes: np.ndarray,
                             chunk: int = 4096) -> float:
    """Largest distance from a probe to its nearest net member."""
    worst = 0.0
    for s in range(0, probes.shape[0], chunk):
        P = probes[s:s + chunk]
        # |p - v|^2 = 2 - 2 <p, v> for unit vectors
        best = np.max(P @ directions.T, axis=1)
        worst = max(worst, float(np.sqrt(max(0.0, 2.0 - 2.0 * best.min()))))
    return worst


def _circle_net(delta: float) -> np.ndarray:
    step = 2.0 * math.asin(delta / 2.0)
    k = math.ceil(2.0 * math.pi / step)
    ang = 2.0 * math.pi * np.arange(k) / k
    return np.column_stack([np.cos(ang), np.sin(ang)])


def _fibonacci(k: int) -> np.ndarray:
    i = np.arange(k) + 0.5
    z = 1.0 - 2.0 * i / k
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def sphere_net(d: int, delta: float, max_rounds: int = 60) -> SphereNet:
    """A ``delta``-net of ``S^{d-1}``.

    ``d = 2`` is an exact angular grid. ``d = 3`` uses a Fibonacci layout
    grown until a fixed probe set is covered at ``0.95 * delta``; ``d >= 4``
    keeps adding seeded random directions under the same certificate.
    """
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    if d < 2:
        raise ValueError("d must be >= 2")
    if d == 2:
        return SphereNet(_circle_net(delta), float(delta))
    rng = np.random.default_rng(_NET_SEED + d)
    probes = sample_sphere(rng, d, _PROBES)
    target = 0.95 * delta
    # cap area ratio gives a starting size
    ang = 2.0 * math.asin(target / 2.0)
    if d == 3:
        k = math.ceil(4.0 / (ang * ang))
        for _ in range(max_rounds):
            V = _fibonacci(k)
            if covering_radius_estimate(V, probes) <= target:
                return SphereNet(V, float(delta))
            k = math.ceil(1.1 * k)
        raise NetCoverageError("could not certify a Fibonacci net")
    k = math.ceil(2.0 * (1.0 / math.sin(ang / 2.0)) ** (d - 1))
    V = sample_sphere(rng, d, k)
    for _ in range(max_rounds):
        if covering_radius_estimate(V, probes) <= target:
            return SphereNet(V, float(delta))
        V = np.vstack([V, sample_sphere(rng, d, math.ceil(0.25 * V.shape[0]))])
    raise NetCoverageError("coverage verification failed")
