"""Numerical laboratory for the two-body lower-bound construction.

Three ingredients:

* a smooth bump ``psi`` supported on ``(-1/2, 1/2)``, realized as the
  infinite convolution of centered uniform densities of widths
  ``a_j = 1 / (a j^(1/tau))`` with ``a = zeta(1/tau)``, so that the widths sum
  to one. Its Fourier transform is ``prod_j sinc(a_j t / 2)``; the product is
  truncated once ``a_K`` drops below the grid spacing and the remaining
  factors are folded into a second-order cumulant correction.
* a concave Cauchy envelope ``g(x) = kappa / (1 + x^2 / delta0^2)``.
* the pair of bodies ``G_{+1}, G_{-1}`` whose upper boundary is
  ``sum_k g(x_k) + omega (L / gamma_m^2) prod_k h_m(x_k)`` with
  ``h_m(x) = psi_s(x) sin(gamma_m x)`` and ``psi_s(x) = 2 delta psi(x / (2 delta))``.

All checks return measured values together with the tolerance they were
compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicSpline
from scipy.signal import fftconvolve

_PERIOD = 2.0
_TV_MAX_CELLS = 50_000_000


# ---------------------------------------------------------------------------
# the bump


def _widths_normalizer(tau: float) -> float:
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1): the width series diverges otherwise")
    return float(special.zeta(1.0 / tau, 1))


def widths(tau: float, count: int) -> np.ndarray:
    """The first ``count`` uniform widths ``a_j = 1 / (a j^(1/tau))``."""
    a = _widths_normalizer(tau)
    return 1.0 / (a * np.arange(1, count + 1, dtype=float) ** (1.0 / tau))


def bump_transform(t, tau: float, K: int | None = None) -> np.ndarray:
    """Fourier transform of the bump: truncated sinc product with tail correction.

    ``K`` factors are multiplied exactly; for ``j > K`` the factors contribute
    ``exp(-t^2 S_2 / 24 - t^4 S_4 / 2880)`` with ``S_p = sum_{j>K} a_j^p``
    (the first two terms of ``log sinc``). ``K = None`` picks ``K`` with
    ``a_K`` below ``1e-4``.
    """
    a = _widths_normalizer(tau)
    t = np.asarray(t, dtype=float)
    if K is None:
        K = int(math.ceil((1.0 / (a * 1e-4)) ** tau))
    j = np.arange(1, K + 1, dtype=float)
    widths = 1.0 / (a * j ** (1.0 / tau))
    out = np.ones_like(t)
    for w in widths:
        out *= np.sinc(w * t / (2.0 * np.pi))  # numpy sinc is sin(pi x)/(pi x)
    S2 = special.zeta(2.0 / tau, K + 1) / a ** 2
    S4 = special.zeta(4.0 / tau, K + 1) / a ** 4
    return out * np.exp(-t * t * S2 / 24.0 - t ** 4 * S4 / 2880.0)


@dataclass(frozen=True, eq=False)
class SmoothBump:
    """Tabulated bump on the periodic grid ``x_k = -1 + k h``, ``h = 2 / N``."""

    tau: float
    a: float
    x: np.ndarray
    values: np.ndarray
    K: int
    scale_delta: float | None = None
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_spline", CubicSpline(self.x, self.values, extrapolate=False))

    @property
    def step(self) -> float:
        return float(self.x[1] - self.x[0])

    def __call__(self, x) -> np.ndarray:
        """Unscaled ``psi`` at arbitrary points (zero outside ``[-1/2, 1/2]``)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = np.abs(x) < 0.5
        out[inside] = self._spline(x[inside])
        return out

    def scaled(self, x, delta: float) -> np.ndarray:
        """``2 delta psi(x / (2 delta))``, supported on ``(-delta, delta)``."""
        return 2.0 * delta * self(np.asarray(x, dtype=float) / (2.0 * delta))

    def integral(self) -> float:
        return float(self.values.sum() * self.step)

    def transform_quadrature(self, t) -> np.ndarray:
        """``|F[psi](t)|`` by the grid rule ``h sum psi(x_k) cos(t x_k)``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.abs(np.cos(np.outer(t, self.x)) @ self.values * self.step)

    def derivative_sup(self, order: int) -> float:
        """Sup norm of ``psi'`` or ``psi''`` by central differences on the grid."""
        h = self.step
        v = self.values
        if order == 1:
            return float(np.max(np.abs(np.roll(v, -1) - np.roll(v, 1))) / (2 * h))
        if order == 2:
            return float(np.max(np.abs(np.roll(v, -1) - 2 * v + np.roll(v, 1))) / h ** 2)
        raise ValueError("order must be 1 or 2")


def build_psi(tau: float, grid_size: int = 4096) -> SmoothBump:
    """Tabulate the bump by inverse FFT of its transform on a period-2 grid."""
    a = _widths_normalizer(tau)
    N = int(grid_size)
    if N < 4096 or N & (N - 1):
        raise ValueError("grid_size must be a power of two >= 4096")
    h = _PERIOD / N
    # factors with a_j >= h are exact; later ones go into the cumulant tail
    K = max(1, int(math.floor((1.0 / (a * h)) ** tau)))
    t = 2.0 * np.pi * np.arange(N // 2 + 1) / _PERIOD
    F = bump_transform(t, tau, K)
    vals = np.fft.irfft(F, n=N) * (N / _PERIOD)  # samples at x = k h, k = 0..N-1
    vals = np.fft.fftshift(vals)                 # now at x = -1 + k h
    # enforce the exact mirror pairing x_k <-> x_{N-k} of the even spectrum
    mirrored = np.concatenate([vals[:1], vals[1:][::-1]])
    vals = 0.5 * (vals + mirrored)
    np.maximum(vals, 0.0, out=vals)
    vals /= vals.sum() * h
    x = -1.0 + h * np.arange(N)
    return SmoothBump(float(tau), a, x, vals, K)


def closed_form_fourier_bound(t, tau: float) -> np.ndarray:
    a = _widths_normalizer(tau)
    t = np.abs(np.asarray(t, dtype=float))
    return np.exp(-(1.0 / (math.e * tau)) * (t / (2.0 * a)) ** tau)


def product_fourier_bound(t, tau: float, kmax: int = 200) -> np.ndarray:
    """``min(1, min_k prod_{j<=k} 2 / (a_j |t|))``, valid for every ``t``."""
    a = _widths_normalizer(tau)
    t = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    k = np.arange(1, kmax + 1, dtype=float)
    logs = np.cumsum(math.log(2.0 * a) + np.log(k) / tau)  # log prod 2 / a_j
    out = np.ones_like(t)
    for i, ti in enumerate(t):
        if ti > 0:
            out[i] = min(1.0, float(np.exp(np.min(logs - k * math.log(ti)))))
    return out


@dataclass(frozen=True)
class FourierCheckRow:
    t: float
    measured: float
    bound: float
    product_bound: float
    holds: bool


def psi_fourier_decay_check(bump: SmoothBump, t_values) -> list[FourierCheckRow]:
    """Compare the quadrature transform with the decay envelope at each ``t``.

    ``product_bound`` is the elementary sinc-product envelope and is reported
    for reference only.
    """
    t = np.atleast_1d(np.asarray(t_values, dtype=float))
    nyquist = math.pi / bump.step
    if np.any(np.abs(t) > nyquist):
        raise ValueError(f"t beyond the grid Nyquist frequency {nyquist:.6g}")
    meas = bump.transform_quadrature(t)
    bnd = closed_form_fourier_bound(t, bump.tau)
    prod = product_fourier_bound(t, bump.tau)
    return [FourierCheckRow(float(ti), float(m), float(b), float(p), bool(m <= b + 1e-12))
            for ti, m, b, p in zip(t, meas, bnd, prod)]


# ---------------------------------------------------------------------------
# envelope


@dataclass(frozen=True)
class CauchyEnvelope:
    delta: float
    delta0: float
    kappa: float

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.kappa / (1.0 + x * x / self.delta0 ** 2)

    def second_derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        c = self.delta0 ** 2
        s = 1.0 + x * x / c
        return self.kappa * (2.0 / c) * (3.0 * x * x / c - 1.0) / s ** 3

    def max_second_derivative(self, points: int = 1001) -> float:
        """Largest (least negative) ``g''`` over a grid of ``[-delta, delta]``."""
        x = np.linspace(-self.delta, self.delta, points)
        return float(self.second_derivative(x).max())

    def integral(self) -> float:
        """``int_{-delta}^{delta} g``."""
        return 2.0 * self.kappa * self.delta0 * math.atan(self.delta / self.delta0)


def build_g(delta: float, d: int) -> CauchyEnvelope:
    if not delta > 0:
        raise ValueError("delta must be positive")
    if d < 2:
        raise ValueError("d must be >= 2")
    return CauchyEnvelope(float(delta), 2.0 * delta, delta / (4.0 * (d - 1)))


def gamma_m(m: int, delta: float) -> float:
    return (4.0 / 3.0) * math.pi * m / delta


def _oscillation_norms(bump: SmoothBump, delta: float, gamma: float, points: int = 20001):
    """Sup norms of ``h = psi_s sin(gamma x)`` and its first two derivatives."""
    x = np.linspace(-delta, delta, points)
    dx = x[1] - x[0]
    hx = bump.scaled(x, delta) * np.sin(gamma * x)
    d1 = np.gradient(hx, dx)
    d2 = np.gradient(d1, dx)
    return float(np.abs(hx).max()), float(np.abs(d1).max()), float(np.abs(d2).max())


def choose_L(bump: SmoothBump, env: CauchyEnvelope, gamma: float, tau: float, d: int) -> float:
    """Largest perturbation amplitude keeping the bodies convex and inside the cube.

    The curvature budget is ``(L / gamma^2) K <= (1/2) |max g''|``, where ``K``
    bounds the Hessian norm of ``prod_k h(x_k)``: the larger of the
    closed-form ``8/(1-tau)^2 + 4 gamma/(1-tau) + gamma^2`` and the Gershgorin
    bound from measured sup norms of ``h, h', h''``. The amplitude budget is
    ``(L / gamma^2) ||psi_s||^(d-1) < delta / 2``.
    """
    delta = env.delta
    maxg2 = env.max_second_derivative()
    if not maxg2 < 0:
        raise ValueError("envelope is not strictly concave on [-delta, delta]")
    h0, h1, h2 = _oscillation_norms(bump, delta, gamma)
    gersh = h0 ** (d - 2) * h2 + (d - 2) * h0 ** max(d - 3, 0) * h1 ** 2
    closed = 8.0 / (1.0 - tau) ** 2 + 4.0 * gamma / (1.0 - tau) + gamma ** 2
    K = max(closed, gersh)
    L_curv = 0.5 * abs(maxg2) * gamma ** 2 / K
    psi_s_sup = float(np.abs(bump.scaled(np.linspace(-delta, delta, 20001), delta)).max())
    L_amp = delta * gamma ** 2 / (2.0 * psi_s_sup ** (d - 1)) * (1.0 - 1e-6)
    return float(min(L_curv, L_amp))


# ---------------------------------------------------------------------------
# perturbed bodies


@dataclass(frozen=True, eq=False)
class PerturbedBody:
    """``{x : x' in [-delta, delta]^(d-1), -delta <= x_d <= b_omega(x')}``."""

    omega: int
    m: int
    gamma_m: float
    L: float
    d: int
    delta: float
    step: float
    axis: np.ndarray
    values: np.ndarray
    bump: SmoothBump = field(repr=False)
    env: CauchyEnvelope = field(repr=False)

    @property
    def dim(self) -> int:
        return self.d

    def oscillation(self, xp) -> np.ndarray:
        """``prod_k h_m(x_k)`` for rows ``xp`` of shape ``(k, d-1)``."""
        xp = np.atleast_2d(np.asarray(xp, dtype=float))
        out = np.ones(xp.shape[0])
        for k in range(xp.shape[1]):
            out *= self.bump.scaled(xp[:, k], self.delta) * np.sin(self.gamma_m * xp[:, k])
        return out

    def boundary(self, xp) -> np.ndarray:
        xp = np.atleast_2d(np.asarray(xp, dtype=float))
        base = self.env(xp).sum(axis=1)
        return base + self.omega * (self.L / self.gamma_m ** 2) * self.oscillation(xp)

    def contains(self, X, tol: float = 0.0):
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X2 = np.atleast_2d(X)
        xp, xd = X2[:, :-1], X2[:, -1]
        ok = np.all(np.abs(xp) <= self.delta + tol, axis=1) & (xd >= -self.delta - tol)
        out = np.zeros(X2.shape[0], dtype=bool)
        if ok.any():
            out[ok] = xd[ok] <= self.boundary(xp[ok]) + tol
        return bool(out[0]) if single else out

    def bounding_box(self):
        lo = np.full(self.d, -self.delta)
        hi = np.full(self.d, self.delta)
        hi[-1] = float(self.values.max())
        return lo, hi

    def surface_bound(self) -> float:
        lo, hi = self.bounding_box()
        ext = hi - lo
        return float(sum(2.0 * np.prod(np.delete(ext, i)) for i in range(self.d)))

    def volume(self) -> float:
        """Trapezoidal quadrature of ``b_omega + delta`` over the boundary grid."""
        vals = self.values + self.delta
        for _ in range(self.d - 1):
            vals = integrate.trapezoid(vals, self.axis, axis=0)
        return float(vals)


def build_b_omega(omega: int, m: int, bump: SmoothBump, env: CauchyEnvelope, L: float,
                  d: int, grid_step: float | None = None) -> PerturbedBody:
    """Tabulate the boundary on ``[-delta, delta]^(d-1)`` and check ``|b| <= delta``."""
    if omega not in (1, -1):
        raise ValueError("omega must be +1 or -1")
    if m < 1:
        raise ValueError("m must be a positive integer")
    delta = env.delta
    if grid_step is None:
        grid_step = delta / (20 * m)
    if grid_step > delta / (20 * m) * (1 + 1e-12):
        raise ValueError("oscillation under-resolved: grid_step must be <= delta/(20 m)")
    k = int(math.ceil(2 * delta / grid_step))
    axis = np.linspace(-delta, delta, k + 1)
    mesh = np.meshgrid(*([axis] * (d - 1)), indexing="ij")
    pts = np.column_stack([g.ravel() for g in mesh])
    gm = gamma_m(m, delta)
    body = PerturbedBody(omega, m, gm, float(L), d, delta, float(axis[1] - axis[0]), axis,
                         np.empty(0), bump, env)
    vals = body.boundary(pts).reshape([k + 1] * (d - 1))
    if np.max(np.abs(vals)) > delta:
        raise ValueError("boundary leaves [-delta, delta]")
    object.__setattr__(body, "values", vals)
    return body


def volume_formula(env: CauchyEnvelope, d: int) -> float:
    """``|G_omega| = delta (2 delta)^(d-1) + (d-1) (2 delta)^(d-2) int g``."""
    delta = env.delta
    return delta * (2 * delta) ** (d - 1) + (d - 1) * (2 * delta) ** (d - 2) * env.integral()


def oscillation_integral(body: PerturbedBody) -> float:
    vals = body.oscillation(_grid_points(body))
    vals = vals.reshape([body.axis.size] * (body.d - 1))
    for _ in range(body.d - 1):
        vals = integrate.trapezoid(vals, body.axis, axis=0)
    return float(vals)


def _grid_points(body: PerturbedBody) -> np.ndarray:
    mesh = np.meshgrid(*([body.axis] * (body.d - 1)), indexing="ij")
    return np.column_stack([g.ravel() for g in mesh])


def containment_check(body: PerturbedBody, rng: np.random.Generator, count: int = 10_000) -> bool:
    """Sampled points of ``B(-delta/2 * 1, delta/2)`` all lie in the body."""
    d, delta = body.d, body.delta
    g = rng.standard_normal((count, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = rng.random(count) ** (1.0 / d)
    pts = -0.5 * delta + 0.5 * delta * r[:, None] * g
    return bool(np.all(body.contains(pts)))


# ---------------------------------------------------------------------------
# convexity, separation, total variation


@dataclass(frozen=True)
class HessianReport:
    lambda_max: float
    threshold: float
    fd_tolerance: float
    convex: bool


def _hessian_lambda_max(body: PerturbedBody, pts: np.ndarray, h: float) -> np.ndarray:
    n, k = pts.shape
    b0 = body.boundary(pts)
    H = np.empty((n, k, k))
    E = np.eye(k) * h
    for i in range(k):
        H[:, i, i] = (body.boundary(pts + E[i]) - 2 * b0 + body.boundary(pts - E[i])) / h ** 2
        for j in range(i + 1, k):
            v = (body.boundary(pts + E[i] + E[j]) - body.boundary(pts + E[i] - E[j])
                 - body.boundary(pts - E[i] + E[j]) + body.boundary(pts - E[i] - E[j])) / (4 * h * h)
            H[:, i, j] = H[:, j, i] = v
    return np.linalg.eigvalsh(H)[:, -1]


def hessian_convexity_check(body: PerturbedBody, bump: SmoothBump | None = None,
                            env: CauchyEnvelope | None = None, points: int = 10_000) -> HessianReport:
    """Largest Hessian eigenvalue of the boundary over a grid of about ``points`` nodes.

    Second differences use step ``2 * body.step``; the finite-difference
    tolerance is the Richardson estimate ``(4/3) |D(h) - D(h/2)|``.
    """
    env = body.env if env is None else env
    k = body.d - 1
    per_axis = max(3, int(round(points ** (1.0 / k))))
    ax = np.linspace(-body.delta, body.delta, per_axis)
    mesh = np.meshgrid(*([ax] * k), indexing="ij")
    pts = np.column_stack([g.ravel() for g in mesh])
    h = 2.0 * body.step
    lam = _hessian_lambda_max(body, pts, h)
    lam_half = _hessian_lambda_max(body, pts, h / 2)
    fd_tol = float(np.max(np.abs(lam - lam_half)) * 4.0 / 3.0)
    threshold = 0.5 * env.max_second_derivative()
    lmax = float(lam.max())
    return HessianReport(lmax, threshold, fd_tol, bool(lmax <= threshold + fd_tol))


def sine_abs_integral(m: int) -> float:
    """``int_{-1}^{1} |sin(pi m x)| dx`` with breakpoints at every zero."""
    zeros = np.linspace(-1.0, 1.0, 2 * m + 1)
    total = 0.0
    for lo, hi in zip(zeros[:-1], zeros[1:]):
        val, _ = integrate.quad(lambda x: abs(math.sin(math.pi * m * x)), lo, hi,
                                epsabs=1e-14, epsrel=1e-14)
        total += val
    return total


@dataclass(frozen=True)
class SeparationReport:
    d_Delta: float
    C1_hat: float
    witness: float


def separation_check(body_plus: PerturbedBody, body_minus: PerturbedBody,
                     grid_step: float | None = None) -> SeparationReport:
    """``d_Delta = int |b_+ - b_-|`` by grid quadrature, and ``C1_hat = d_Delta m^2``."""
    if body_plus.omega != 1 or body_minus.omega != -1:
        raise ValueError("expected the omega = +1 and omega = -1 bodies")
    if (body_plus.m, body_plus.L, body_plus.d, body_plus.delta) != \
            (body_minus.m, body_minus.L, body_minus.d, body_minus.delta):
        raise ValueError("bodies differ in more than omega")
    m, delta, d = body_plus.m, body_plus.delta, body_plus.d
    if grid_step is None:
        grid_step = body_plus.step
    if grid_step > delta / (20 * m) * (1 + 1e-12):
        raise ValueError("grid too coarse for the oscillation")
    k = int(math.ceil(2 * delta / grid_step))
    axis = np.linspace(-delta, delta, k + 1)
    # the product structure factorizes the integral over coordinates
    h = body_plus.bump.scaled(axis, delta) * np.sin(body_plus.gamma_m * axis)
    one = float(integrate.trapezoid(np.abs(h), axis))
    d_delta = 2.0 * body_plus.L / body_plus.gamma_m ** 2 * one ** (d - 1)
    inf_psi = float(body_plus.bump.scaled(np.linspace(-0.75 * delta, 0.75 * delta, 4001), delta).min())
    witness = 2.0 * body_plus.L / body_plus.gamma_m ** 2 * (3 * delta / math.pi * inf_psi) ** (d - 1)
    return SeparationReport(d_delta, d_delta * m * m, witness)


def _phi_diff(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """``Phi(a) - Phi(c)`` without cancellation when ``a`` and ``c`` are close."""
    a, c = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(c, dtype=float))
    diff = a - c
    mid = 0.5 * (a + c)
    near = np.abs(diff) < 1e-3
    out = np.empty_like(diff)
    phi_mid = np.exp(-0.5 * mid[near] ** 2) / math.sqrt(2 * math.pi)
    dn = diff[near]
    out[near] = dn * phi_mid * (1.0 + dn * dn * (mid[near] ** 2 - 1.0) / 24.0)
    far = ~near
    out[far] = special.ndtr(a[far]) - special.ndtr(c[far])
    return out


def tv_estimate_2d(body_plus: PerturbedBody, body_minus: PerturbedBody, sigma: float,
                   grid_step: float | None = None) -> float:
    """Total variation between the two noisy uniform laws in the plane.

    The Gaussian convolution along ``x_2`` is done in closed form, column by
    column; the remaining ``x_1`` convolution is a sampled FFT convolution.
    """
    if body_plus.d != 2 or body_minus.d != 2:
        raise ValueError("tv_estimate_2d needs d = 2")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    delta = body_plus.delta
    if grid_step is None:
        grid_step = body_plus.step
    pad = 6.0 * sigma
    k1 = int(math.ceil(2 * delta / grid_step))
    x1 = np.linspace(-delta, delta, k1 + 1)
    h1 = x1[1] - x1[0]
    x2 = np.arange(-delta - pad, delta + pad + h1, h1)
    kern_x = np.arange(-pad, pad + h1 / 2, h1)
    cells = (x1.size + kern_x.size) * x2.size
    if cells > _TV_MAX_CELLS:
        raise MemoryError(f"grid of {cells} cells exceeds the cap {_TV_MAX_CELLS}")
    bp = body_plus.boundary(x1[:, None])
    bm = body_minus.boundary(x1[:, None])
    vp, vm = body_plus.volume(), body_minus.volume()
    Z2 = x2[None, :] / sigma
    lower = (Z2 + delta / sigma)
    col_m = _phi_diff(lower, Z2 - bm[:, None] / sigma)
    diff_cols = _phi_diff(Z2 - bm[:, None] / sigma, Z2 - bp[:, None] / sigma)
    D = diff_cols / vp + col_m * (1.0 / vp - 1.0 / vm)
    kern = np.exp(-0.5 * (kern_x / sigma) ** 2) / (math.sqrt(2 * math.pi) * sigma) * h1
    conv = fftconvolve(D, kern[:, None], mode="full", axes=0)
    return float(0.5 * np.abs(conv).sum() * h1 * h1)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class ReportRow:
    quantity: str
    value: float
    tolerance: float
    passed: bool | None

    def csv(self) -> str:
        flag = "na" if self.passed is None else ("true" if self.passed else "false")
        return f"{self.quantity},{self.value:.12g},{self.tolerance:.12g},{flag}"


def lowerbound_report(m: int = 3, tau: float = 0.5, delta: float = 1.0, d: int = 2,
                      grid: int = 4096, sigma: float = 0.5, seed: int = 0) -> list[ReportRow]:
    """Run every check for one parameter set."""
    rows: list[ReportRow] = []
    add = lambda q, v, tol, ok: rows.append(ReportRow(q, float(v), float(tol), ok))
    bump = build_psi(tau, grid)
    x, v = bump.x, bump.values
    add("psi_integral", bump.integral(), 1e-6, abs(bump.integral() - 1) <= 1e-6)
    mirror = np.concatenate([v[:1], v[1:][::-1]])
    sym = float(np.max(np.abs(v - mirror)))
    add("psi_symmetry", sym, 1e-10, sym <= 1e-10)
    outside = float(np.max(np.abs(v[np.abs(x) >= 0.5])))
    add("psi_outside_support", outside, 1e-10, outside <= 1e-10)
    add("psi_sup_norm", v.max(), 1.0, v.max() <= 1.0)
    d1, d2 = bump.derivative_sup(1), bump.derivative_sup(2)
    add("psi_d1_sup", d1, 2 / (1 - tau), d1 <= 2 / (1 - tau))
    add("psi_d2_sup", d2, 8 / (1 - tau) ** 2, d2 <= 8 / (1 - tau) ** 2)
    w = widths(tau, 3)
    add("psi_sup_product_bound", v.max(), 1 / w[0], v.max() <= 1 / w[0] * (1 + 1e-9))
    add("psi_d1_product_bound", d1, 2 / (w[0] * w[1]), d1 <= 2 / (w[0] * w[1]))
    add("psi_d2_product_bound", d2, 4 / w.prod(), d2 <= 4 / w.prod())
    for r in psi_fourier_decay_check(bump, [1, 5, 20, 50]):
        add(f"psi_fourier_t{r.t:g}", r.measured, r.bound, r.holds)
        add(f"psi_fourier_product_bound_t{r.t:g}", r.measured, r.product_bound,
            r.measured <= r.product_bound + 1e-12)
    env = build_g(delta, d)
    maxg2 = env.max_second_derivative()
    add("g_peak", env(0.0), delta / (2 * (d - 1)), env(0.0) < delta / (2 * (d - 1)))
    add("g_max_second_derivative", maxg2, 0.0, maxg2 < 0)
    gm = gamma_m(m, delta)
    L = choose_L(bump, env, gm, tau, d)
    add("L", L, 0.0, L > 0)
    plus = build_b_omega(1, m, bump, env, L, d)
    minus = build_b_omega(-1, m, bump, env, L, d)
    bmax = float(max(np.abs(plus.values).max(), np.abs(minus.values).max()))
    add("b_abs_max", bmax, delta, bmax <= delta)
    vf = volume_formula(env, d)
    for name, body in (("volume_plus", plus), ("volume_minus", minus)):
        add(name, body.volume(), 0.01 * vf, abs(body.volume() - vf) <= 0.01 * vf)
    hint = oscillation_integral(plus)
    tol_h = 1e-8 * (2 * delta) ** (d - 1)
    add("oscillation_integral", hint, tol_h, abs(hint) <= tol_h)
    rng = np.random.default_rng(seed)
    add("ball_containment", float(containment_check(plus, rng) and containment_check(minus, rng)),
        0.0, containment_check(plus, rng) and containment_check(minus, rng))
    hr = hessian_convexity_check(plus)
    add("hessian_lambda_max", hr.lambda_max, hr.threshold + hr.fd_tolerance, hr.convex)
    sep = separation_check(plus, minus)
    add("d_Delta", sep.d_Delta, sep.witness, sep.d_Delta >= sep.witness)
    add("C1_hat", sep.C1_hat, 0.0, None)
    sine = sine_abs_integral(m)
    add("sine_integral", sine, 1e-10, abs(sine - 4 / math.pi) <= 1e-10)
    if d == 2:
        add("tv", tv_estimate_2d(plus, minus, sigma), 0.0, None)
    return rows


def write_report(path, rows: list[ReportRow]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("quantity,value,tolerance,pass\n")
        for r in rows:
            fh.write(r.csv() + "\n")
