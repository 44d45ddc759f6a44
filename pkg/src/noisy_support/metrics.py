"""Hausdorff and symmetric-difference distances between convex sets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sphere import SphereNet

SupportOracle = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class HausdorffBracket:
    lower: float
    upper: float


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    error_bound: float


def _oracle_values(h, U: np.ndarray) -> np.ndarray:
    if hasattr(h, "support"):
        h = h.support
    vals = np.asarray(h(U), dtype=float)
    if vals.shape != (U.shape[0],):
        vals = np.array([float(h(u)) for u in U])
    return vals


def hausdorff_support(hA, hB, net: SphereNet, R: float) -> HausdorffBracket:
    """Bracket ``sup_u |h_A(u) - h_B(u)|`` using a net.

    ``lower`` is the maximum over the net. Support functions of sets inside
    ``B(0, R)`` are ``R``-Lipschitz on the sphere, so ``upper = lower + 2 R delta``.
    The oracles are bodies (anything with ``.support``) or callables mapping a
    ``(k, d)`` array of directions to ``k`` values.
    """
    U = net.directions
    diff = np.abs(_oracle_values(hA, U) - _oracle_values(hB, U))
    lower = float(diff.max())
    return HausdorffBracket(lower, lower + 2.0 * R * net.resolution)


def _box_of(body):
    lo, hi = body.bounding_box()
    return np.asarray(lo, float), np.asarray(hi, float)


def sym_diff_volume(A, B, grid_step: float, chunk: int = 1 << 20) -> VolumeEstimate:
    """Midpoint-grid estimate of ``|A Δ B|`` with a boundary error bound.

    A cell is misclassified only when a boundary passes within half a cell
    diagonal of its midpoint, so the error is at most
    ``(S_A + S_B) * grid_step * sqrt(d)`` with ``S`` bounding surface areas.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    loA, hiA = _box_of(A)
    loB, hiB = _box_of(B)
    lo = np.minimum(loA, loB)
    hi = np.maximum(hiA, hiB)
    d = lo.size
    counts = np.ceil((hi - lo) / grid_step).astype(int)
    if np.any(counts < 10):
        raise ValueError("grid too coarse: fewer than 10 cells per axis")
    axes = [lo[i] + grid_step * (np.arange(counts[i]) + 0.5) for i in range(d)]
    total = int(np.prod(counts))
    diff = 0
    # walk the grid in flat chunks to bound memory
    for s in range(0, total, chunk):
        flat = np.arange(s, min(total, s + chunk))
        idx = np.unravel_index(flat, counts)
        X = np.column_stack([axes[i][idx[i]] for i in range(d)])
        diff += int(np.count_nonzero(A.contains(X) != B.contains(X)))
    cell = grid_step ** d
    err = (A.surface_bound() + B.surface_bound()) * grid_step * math.sqrt(d)
    return VolumeEstimate(diff * cell, err)
