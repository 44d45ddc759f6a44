"""Ground-truth convex bodies with exact support functions.

Every body offers ``support(U)`` for one direction or a stack of directions,
vectorized ``contains``, uniform sampling, an inner ball ``B(a, r)`` and an
outer radius ``R`` with ``B(a, r) ⊆ G ⊆ B(0, R)``, and an axis-aligned
bounding box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .linprog import Halfspace, LinearProgram, feasibility, solve_lp, stack_halfspaces

MAX_REJECTIONS = 10 ** 6


class UnboundedSupportError(ValueError):
    pass


class RejectionCapError(RuntimeError):
    pass


def normalize(u) -> np.ndarray:
    """Scale a vector (or each row of a matrix) to unit Euclidean norm."""
    u = np.asarray(u, dtype=float)
    nrm = np.linalg.norm(u, axis=-1, keepdims=True)
    if np.any(nrm == 0):
        raise ValueError("cannot normalize the zero vector")
    return u / nrm


def _directions(U) -> tuple[np.ndarray, bool]:
    U = np.asarray(U, dtype=float)
    single = U.ndim == 1
    return np.atleast_2d(U), single


def _ret(vals: np.ndarray, single: bool):
    return float(vals[0]) if single else vals


class ConvexBody:
    """Common interface of the analytic body families."""

    dim: int

    def support(self, U):
        raise NotImplementedError

    def contains(self, X, tol: float = 0.0):
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def inner_ball(self) -> tuple[np.ndarray, float]:
        raise NotImplementedError

    def outer_radius(self) -> float:
        lo, hi = self.bounding_box()
        corner = np.maximum(np.abs(lo), np.abs(hi))
        return float(np.linalg.norm(corner))

    def centroid(self) -> np.ndarray:
        raise NotImplementedError

    def sample_uniform(self, rng: np.random.Generator, size: int | None = None):
        """Uniform draw(s); ``size=None`` returns a single point of shape ``(d,)``."""
        k = 1 if size is None else int(size)
        pts = self._sample(rng, k)
        return pts[0] if size is None else pts

    def _sample(self, rng, k):
        return _rejection(self, rng, k)

    def surface_bound(self) -> float:
        """Upper bound on the surface area (that of the bounding box)."""
        lo, hi = self.bounding_box()
        w = hi - lo
        return float(2.0 * sum(np.prod(np.delete(w, i)) for i in range(w.size)))


def _rejection(body: ConvexBody, rng: np.random.Generator, k: int) -> np.ndarray:
    lo, hi = body.bounding_box()
    d = lo.size
    out = np.empty((k, d))
    filled = 0
    tries = 0
    while filled < k:
        batch = max(64, 2 * (k - filled))
        cand = rng.uniform(lo, hi, size=(batch, d))
        ok = cand[body.contains(cand)]
        take = min(ok.shape[0], k - filled)
        out[filled:filled + take] = ok[:take]
        filled += take
        tries += batch
        if tries > MAX_REJECTIONS * max(k, 1) and filled < k:
            raise RejectionCapError("rejection cap exceeded; body too thin for its bounding box")
    return out


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).ravel())
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    def support(self, U):
        U, single = _directions(U)
        return _ret(U @ self.center + self.radius * np.linalg.norm(U, axis=1), single)

    def contains(self, X, tol: float = 0.0):
        X = np.asarray(X, dtype=float)
        return np.linalg.norm(X - self.center, axis=-1) <= self.radius + tol

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def inner_ball(self):
        return self.center.copy(), float(self.radius)

    def outer_radius(self) -> float:
        return float(np.linalg.norm(self.center) + self.radius)

    def centroid(self):
        return self.center.copy()

    def volume(self) -> float:
        d = self.dim
        return math.pi ** (d / 2) / special.gamma(d / 2 + 1) * self.radius ** d

    def surface_bound(self) -> float:
        d = self.dim
        return d * math.pi ** (d / 2) / special.gamma(d / 2 + 1) * self.radius ** (d - 1)

    def _sample(self, rng, k):
        # direction times radius U^(1/d)
        d = self.dim
        g = rng.standard_normal((k, d))
        nrm = np.linalg.norm(g, axis=1, keepdims=True)
        while np.any(nrm < 1e-12):
            bad = nrm[:, 0] < 1e-12
            g[bad] = rng.standard_normal((int(bad.sum()), d))
            nrm = np.linalg.norm(g, axis=1, keepdims=True)
        rad = self.radius * rng.uniform(size=(k, 1)) ** (1.0 / d)
        return self.center + g / nrm * rad


@dataclass(frozen=True, eq=False)
class Box(ConvexBody):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float).ravel()
        hi = np.asarray(self.hi, dtype=float).ravel()
        if lo.shape != hi.shape or not np.all(lo < hi):
            raise ValueError("need lo < hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def support(self, U):
        U, single = _directions(U)
        return _ret(np.where(U > 0, U * self.hi, U * self.lo).sum(axis=1), single)

    def contains(self, X, tol: float = 0.0):
        X = np.asarray(X, dtype=float)
        return np.all((X >= self.lo - tol) & (X <= self.hi + tol), axis=-1)

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()

    def inner_ball(self):
        return 0.5 * (self.lo + self.hi), float(0.5 * np.min(self.hi - self.lo))

    def centroid(self):
        return 0.5 * (self.lo + self.hi)

    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def halfspaces(self) -> list[Halfspace]:
        d = self.dim
        eye = np.eye(d)
        return ([Halfspace(eye[i], self.hi[i]) for i in range(d)]
                + [Halfspace(-eye[i], -self.lo[i]) for i in range(d)])

    def _sample(self, rng, k):
        return rng.uniform(self.lo, self.hi, size=(k, self.dim))


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexBody):
    """``{x : (x - c)^T S^{-1} (x - c) <= 1}`` for a positive-definite ``S``."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).ravel()
        S = np.asarray(self.shape, dtype=float)
        if S.ndim == 1:
            S = np.diag(S ** 2)  # semi-axes given
        if S.shape != (c.size, c.size) or not np.allclose(S, S.T):
            raise ValueError("shape must be a symmetric d x d matrix")
        w = np.linalg.eigvalsh(S)
        if w.min() <= 0:
            raise ValueError("shape must be positive definite")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", S)
        object.__setattr__(self, "_inv", np.linalg.inv(S))
        object.__setattr__(self, "_eig", w)

    @property
    def dim(self) -> int:
        return self.center.size

    def support(self, U):
        U, single = _directions(U)
        q = np.einsum("ij,jk,ik->i", U, self.shape, U)
        return _ret(U @ self.center + np.sqrt(q), single)

    def contains(self, X, tol: float = 0.0):
        Y = np.asarray(X, dtype=float) - self.center
        q = np.einsum("...j,jk,...k->...", Y, self._inv, Y)
        return np.sqrt(np.maximum(q, 0.0)) <= 1.0 + tol / math.sqrt(self._eig.min())

    def bounding_box(self):
        half = np.sqrt(np.diag(self.shape))
        return self.center - half, self.center + half

    def inner_ball(self):
        return self.center.copy(), float(math.sqrt(self._eig.min()))

    def outer_radius(self) -> float:
        return float(np.linalg.norm(self.center) + math.sqrt(self._eig.max()))

    def centroid(self):
        return self.center.copy()

    def volume(self) -> float:
        d = self.dim
        return (math.pi ** (d / 2) / special.gamma(d / 2 + 1)
                * math.sqrt(float(np.linalg.det(self.shape))))


@dataclass(frozen=True, eq=False)
class Polytope(ConvexBody):
    """Bounded intersection of halfspaces; support values come from the LP solver."""

    halfspaces: tuple[Halfspace, ...]
    _A: np.ndarray = field(init=False, repr=False)
    _b: np.ndarray = field(init=False, repr=False)
    _box: tuple = field(init=False, repr=False)
    _cheb: tuple = field(init=False, repr=False)

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        if not hs:
            raise ValueError("polytope needs halfspaces")
        object.__setattr__(self, "halfspaces", hs)
        A, b = stack_halfspaces(hs)
        object.__setattr__(self, "_A", A)
        object.__setattr__(self, "_b", b)
        x = feasibility((A, b))
        if x is None:
            raise ValueError("empty polytope")
        margin = float(np.min(b - A @ x))
        if margin <= 0:
            raise ValueError("polytope has empty interior")
        object.__setattr__(self, "_cheb", (x, margin))
        d = A.shape[1]
        eye = np.eye(d)
        hi = np.array([self._lp_support(eye[i]) for i in range(d)])
        lo = -np.array([self._lp_support(-eye[i]) for i in range(d)])
        object.__setattr__(self, "_box", (lo, hi))

    @classmethod
    def from_arrays(cls, A, b) -> "Polytope":
        return cls(tuple(Halfspace.from_raw(a, o) for a, o in zip(np.asarray(A, float), np.asarray(b, float))))

    @classmethod
    def from_vertices_2d(cls, vertices) -> "Polytope":
        """Polygon from vertices listed counter-clockwise."""
        V = np.asarray(vertices, dtype=float)
        hs = []
        for i in range(len(V)):
            p, q = V[i], V[(i + 1) % len(V)]
            e = q - p
            nrm = np.array([e[1], -e[0]])
            hs.append(Halfspace.from_raw(nrm, nrm @ p))
        return cls(tuple(hs))

    @property
    def dim(self) -> int:
        return self._A.shape[1]

    @property
    def A(self) -> np.ndarray:
        return self._A

    @property
    def b(self) -> np.ndarray:
        return self._b

    def _lp_support(self, u) -> float:
        res = solve_lp(LinearProgram(u, self._A, self._b), start=self._cheb[0])
        if res.status == "unbounded":
            raise UnboundedSupportError("unbounded support")
        return res.value

    def support(self, U):
        U, single = _directions(U)
        return _ret(np.array([self._lp_support(u) for u in U]), single)

    def contains(self, X, tol: float = 0.0):
        X = np.asarray(X, dtype=float)
        return np.all(X @ self._A.T <= self._b + tol, axis=-1)

    def bounding_box(self):
        lo, hi = self._box
        return lo.copy(), hi.copy()

    def inner_ball(self):
        x, margin = self._cheb
        return x.copy(), margin

    def centroid(self, samples: int = 200_000, seed: int = 0) -> np.ndarray:
        """Monte Carlo centroid (deterministic seed)."""
        return self.sample_uniform(np.random.default_rng(seed), samples).mean(axis=0)


def as_body(obj) -> ConvexBody:
    if isinstance(obj, ConvexBody):
        return obj
    raise TypeError(f"not a convex body: {obj!r}")


def box_polytope(lo: Sequence[float], hi: Sequence[float]) -> Polytope:
    return Polytope(tuple(Box(lo, hi).halfspaces()))


# ---------------------------------------------------------------------------
# text format


def format_body(body: ConvexBody) -> str:
    """Serialize to the one-body text format."""
    f = lambda v: " ".join(repr(float(x)) for x in np.ravel(v))  # noqa: E731
    if isinstance(body, Ball):
        return f"ball {f(body.center)} {float(body.radius)!r}\n"
    if isinstance(body, Box):
        return f"box {f(body.lo)} {f(body.hi)}\n"
    if isinstance(body, Ellipsoid):
        return f"ellipsoid {f(body.center)} matrix {f(body.shape)}\n"
    if isinstance(body, Polytope):
        lines = ["poly"] + [f"h {f(h.normal)} {h.offset!r}" for h in body.halfspaces]
        return "\n".join(lines) + "\n"
    raise TypeError(type(body).__name__)


def parse_body(text: str, dim: int | None = None) -> ConvexBody:
    """Parse ``ball c.. r`` / ``box lo.. hi..`` / ``ellipsoid c.. S..`` / ``poly`` + ``h`` lines.

    The ellipsoid takes ``d`` center coordinates followed by either ``d``
    semi-axes or the ``d*d`` entries of its shape matrix.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty body spec")
    head = lines[0].split()
    kind = head[0].lower()
    nums = [float(t) for t in head[1:] if t.lower() not in ("axes", "matrix")]
    if kind == "ball":
        if len(nums) < 2:
            raise ValueError("ball needs center and radius")
        return Ball(nums[:-1], nums[-1])
    if kind == "box":
        if len(nums) % 2 or not nums:
            raise ValueError("box needs 2d numbers")
        k = len(nums) // 2
        return Box(nums[:k], nums[k:])
    if kind == "ellipsoid":
        words = [t.lower() for t in head[1:]]
        for word in ("axes", "matrix"):
            if word in words:
                i = words.index(word)
                center = [float(t) for t in head[1:1 + i]]
                rest = np.array([float(t) for t in head[2 + i:]])
                d = len(center)
                if word == "axes":
                    return Ellipsoid(center, rest)
                return Ellipsoid(center, rest.reshape(d, d))
        if dim is not None:
            d = dim
            if len(nums) == 2 * d:
                return Ellipsoid(nums[:d], np.array(nums[d:]))
            if len(nums) == d + d * d:
                return Ellipsoid(nums[:d], np.array(nums[d:]).reshape(d, d))
            raise ValueError("bad ellipsoid arity")
        # untagged: d + d^2 (matrix) takes precedence over d + d (semi-axes)
        for d in range(1, len(nums) + 1):
            if d + d * d == len(nums):
                return Ellipsoid(nums[:d], np.array(nums[d:]).reshape(d, d))
        if len(nums) % 2 == 0:
            d = len(nums) // 2
            return Ellipsoid(nums[:d], np.array(nums[d:]))
        raise ValueError("bad ellipsoid arity")
    if kind == "poly":
        hs = []
        for ln in lines[1:]:
            tok = ln.split()
            if tok[0].lower() != "h":
                raise ValueError(f"expected 'h' line, got {ln!r}")
            vals = [float(t) for t in tok[1:]]
            hs.append(Halfspace.from_raw(vals[:-1], vals[-1]))
        return Polytope(tuple(hs))
    raise ValueError(f"unknown body kind {kind!r}")
