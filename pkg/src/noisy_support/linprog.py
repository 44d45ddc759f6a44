"""Dense linear programming over halfspace systems.

Problems have the form ``maximize <c, x>`` subject to ``A x <= b`` with ``x``
free in ``R^d`` and unit-norm rows of ``A``. The solver is a primal active-set
simplex: it walks from a feasible point along projected objective directions,
adding blocking constraints and dropping constraints with negative
multipliers. Pivots use the most negative multiplier and switch to Bland's
lowest-index rule once a run of degenerate steps is detected, which rules out
cycling. Each iteration costs ``O(m d)``, which suits many constraints in few
dimensions.

Feasibility (phase one) maximizes the inscribed-ball margin ``t`` in
``A x + t <= b``, ``t <= 1``; the system is empty when the optimum is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

FEAS_TOL = 1e-9
_DIR_TOL = 1e-12
_MULT_TOL = 1e-11
_COND_MAX = 1e12


class LPError(RuntimeError):
    """Numerical failure inside the LP kernel."""


class IllConditionedError(LPError):
    pass


class CuttingPlaneStall(LPError):
    pass


@dataclass(frozen=True)
class Halfspace:
    """The set ``{x : <normal, x> <= offset}``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        nrm = np.asarray(self.normal, dtype=float)
        object.__setattr__(self, "normal", nrm)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_raw(cls, normal, offset) -> "Halfspace":
        """Rescale an arbitrary nonzero normal to unit length."""
        normal = np.asarray(normal, dtype=float)
        s = np.linalg.norm(normal)
        if s == 0:
            raise ValueError("zero normal")
        return cls(normal / s, offset / s)

    def contains(self, x, tol: float = 0.0) -> bool:
        return float(self.normal @ np.asarray(x, dtype=float)) <= self.offset + tol


def stack_halfspaces(halfspaces: Sequence[Halfspace]) -> tuple[np.ndarray, np.ndarray]:
    A = np.array([h.normal for h in halfspaces], dtype=float)
    b = np.array([h.offset for h in halfspaces], dtype=float)
    return A, b


def _as_arrays(constraints):
    if isinstance(constraints, tuple) and len(constraints) == 2 and isinstance(constraints[0], np.ndarray):
        A, b = constraints
        return np.atleast_2d(np.asarray(A, dtype=float)), np.asarray(b, dtype=float).ravel()
    return stack_halfspaces(list(constraints))


@dataclass(frozen=True)
class LinearProgram:
    """Maximize ``<objective, x>`` over ``{x : A x <= b}``."""

    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        if A.shape[0] == 0:
            raise ValueError("at least one constraint is required")
        if A.shape != (b.size, c.size):
            raise ValueError(f"shape mismatch: A {A.shape}, b {b.shape}, c {c.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("coefficients must be finite")
        if np.any(np.abs(np.linalg.norm(A, axis=1) - 1.0) > 1e-9):
            raise ValueError("constraint normals must have unit length")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_halfspaces(cls, objective, halfspaces: Sequence[Halfspace]) -> "LinearProgram":
        A, b = stack_halfspaces(halfspaces)
        return cls(objective, A, b)

    @property
    def dim(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class LpResult:
    status: Literal["optimal", "unbounded", "infeasible"]
    value: float | None = None
    point: np.ndarray | None = None
    ray: np.ndarray | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _active_set(c, A, b, x, max_iter=None):
    """Maximize ``c.x`` from a feasible ``x``. Returns ``(status, x_or_ray, iters)``."""
    m, d = A.shape
    if max_iter is None:
        max_iter = 50 * (m + d) + 100
    slack = b - A @ x
    np.maximum(slack, 0.0, out=slack)
    working: list[int] = []
    in_w = np.zeros(m, dtype=bool)
    cnorm = float(np.linalg.norm(c))
    if cnorm == 0.0:
        return "optimal", x, 0
    degenerate_run = 0
    bland = False
    Q = None
    for it in range(1, max_iter + 1):
        if working:
            AW = A[working]
            Q, R = np.linalg.qr(AW.T)
            diag = np.abs(np.diag(R))
            if diag.min() < diag.max() / _COND_MAX:
                raise IllConditionedError("ill-conditioned working set")
            p = c - Q @ (Q.T @ c)
        else:
            p = c.copy()
        pn = float(np.linalg.norm(p))
        if pn > 1e-10 * cnorm:
            p /= pn
            Ap = A @ p
            cand = (Ap > _DIR_TOL) & ~in_w
            if not cand.any():
                return "unbounded", p, it
            idx = np.flatnonzero(cand)
            ratios = slack[idx] / Ap[idx]
            k = int(np.argmin(ratios))
            step = float(ratios[k])
            j = int(idx[k])
            if step > 0.0:
                x = x + step * p
                slack -= step * Ap
                np.maximum(slack, 0.0, out=slack)
                degenerate_run = 0
                bland = False
            else:
                degenerate_run += 1
                if degenerate_run > 2 * d:
                    bland = True
            slack[j] = 0.0
            working.append(j)
            in_w[j] = True
            continue
        # objective lies in the span of the working normals: check multipliers
        AW = A[working]
        lam, *_ = np.linalg.lstsq(AW.T, c, rcond=None)
        neg = np.flatnonzero(lam < -_MULT_TOL * cnorm)
        if neg.size == 0:
            return "optimal", x, it
        if bland:
            drop = int(neg[np.argmin(np.asarray(working)[neg])])
        else:
            drop = int(neg[np.argmin(lam[neg])])
        in_w[working[drop]] = False
        del working[drop]
    raise LPError("iteration limit reached in active-set simplex")


def _phase_one(A, b):
    """Chebyshev-margin phase one. Returns ``(x, margin)``."""
    m, d = A.shape
    A1 = np.empty((m + 1, d + 1))
    A1[:m, :d] = A
    A1[:m, d] = 1.0
    A1[m, :d] = 0.0
    A1[m, d] = 1.0
    b1 = np.append(b, 1.0)
    c1 = np.zeros(d + 1)
    c1[d] = 1.0
    z0 = np.zeros(d + 1)
    z0[d] = min(1.0, float(b.min()))
    status, z, _ = _active_set(c1, A1, b1, z0)
    if status != "optimal":  # t is capped, so this cannot happen for finite data
        raise LPError("phase one did not terminate at an optimum")
    return z[:d], float(z[d])


def feasibility(constraints, tol: float = FEAS_TOL) -> np.ndarray | None:
    """A point of ``{x : A x <= b}``, or ``None`` when the system is empty.

    ``constraints`` is a list of :class:`Halfspace` or a pair ``(A, b)`` with
    unit rows. The returned point maximizes the margin to every constraint
    (capped at 1), so it sits in the interior whenever one exists.
    """
    A, b = _as_arrays(constraints)
    x, margin = _phase_one(A, b)
    if margin < -tol:
        return None
    return x


def solve_lp(lp: LinearProgram, start: np.ndarray | None = None) -> LpResult:
    """Solve ``lp``; ``start`` is an optional feasible point used to skip phase one."""
    A, b, c = lp.A, lp.b, lp.objective
    x0 = None
    if start is not None:
        start = np.asarray(start, dtype=float)
        if np.all(A @ start <= b + FEAS_TOL):
            x0 = start
    if x0 is None:
        x0, margin = _phase_one(A, b)
        if margin < -FEAS_TOL:
            return LpResult("infeasible")
    status, z, iters = _active_set(c, A, b, x0)
    if status == "unbounded":
        return LpResult("unbounded", ray=z, iterations=iters)
    return LpResult("optimal", value=float(c @ z), point=z, iterations=iters)


def support_over_polytope_ball(constraints, center, radius: float, u, tol: float = 1e-8,
                               start: np.ndarray | None = None,
                               max_iter: int | None = None) -> float:
    """Support value of ``{A x <= b} ∩ B(center, radius)`` in direction ``u``.

    Kelley cutting planes: the ball is replaced by tangent halfspaces, starting
    from its axis-aligned bounding box; each LP optimum outside the ball adds
    the tangent plane at its radial projection. The returned value is an upper
    bound that stops once the optimum violates the ball by at most ``tol``.
    ``max_iter`` defaults to ``ceil(10 d ln(radius / tol))``.
    """
    A, b = _as_arrays(constraints)
    center = np.asarray(center, dtype=float)
    u = np.asarray(u, dtype=float)
    d = center.size
    if radius <= 0:
        raise ValueError("radius must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    eye = np.eye(d)
    cuts_A = [eye, -eye]
    cuts_b = [center + radius, -center + radius]
    cap = max_iter if max_iter is not None else max(1, math.ceil(10 * d * math.log(max(radius / tol, math.e))))
    if start is not None and np.linalg.norm(np.asarray(start) - center) > radius:
        start = None
    for _ in range(cap):
        AA = np.vstack([A] + cuts_A)
        bb = np.concatenate([b] + cuts_b)
        res = solve_lp(LinearProgram(u, AA, bb), start=start)
        if res.status == "infeasible":
            raise ValueError("polytope and ball do not intersect")
        if res.status == "unbounded":  # cannot happen with the bounding box in place
            raise LPError("bounded relaxation reported unbounded")
        x = res.point
        off = x - center
        dist = float(np.linalg.norm(off))
        if dist - radius <= tol:
            return res.value
        nrm = off / dist
        cuts_A.append(nrm[None, :])
        cuts_b.append(np.array([nrm @ center + radius]))
    raise CuttingPlaneStall("cutting-plane stall")
