"""Endpoint estimation for a univariate law observed through Gaussian noise.

The observations are ``Y = X + eps`` with ``eps ~ N(0, sigma2)``. The right
endpoint ``theta`` of ``X`` is recovered by removing a deterministic bias from
the sample maximum. Tail classes, the closed-form survival envelopes and the
deviation bound constants are exposed for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import special

Variant = Literal["plain", "refined"]


@dataclass(frozen=True)
class TailClassParams:
    """Tail class ``L^-1 t^alpha <= 1 - F(theta - t) <= L t^beta`` on ``[0, r]``."""

    alpha: float
    beta: float
    r: float
    L: float

    def __post_init__(self):
        if not (self.alpha >= self.beta >= 0):
            raise ValueError("need alpha >= beta >= 0")
        if self.r <= 0:
            raise ValueError("r must be positive")
        if self.L < 1:
            raise ValueError("L must be >= 1 for the class to be nonempty")


@dataclass(frozen=True)
class EndpointEstimate:
    theta_hat: float
    bias_used: float
    variant: Variant
    n: int
    sigma2: float


@dataclass(frozen=True)
class DeviationConstants:
    """Constants of the maximum deviation inequality, assembled explicitly."""

    c0: float
    c1: float
    c2: float
    c_lower: float
    C_upper: float
    B1: float
    n0: int


def _check_sigma2(sigma2: float) -> None:
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")


def bias_bn(n: int, sigma2: float) -> float:
    """Return ``sqrt(2 sigma2 ln n)``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_sigma2(sigma2)
    return math.sqrt(2.0 * sigma2 * math.log(n))


def bias_bn_tilde(n: int, sigma2: float, alpha: float) -> float:
    """Second-order bias for the case where both tail exponents equal ``alpha``."""
    if n < 16:
        raise ValueError("refined bias undefined for n < 16")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    _check_sigma2(sigma2)
    ln_n = math.log(n)
    return math.sqrt(2.0 * sigma2 * ln_n) * (1.0 - (alpha + 1.0) * math.log(ln_n) / (4.0 * ln_n))


def estimate_endpoint(samples, sigma2: float, variant: Variant = "plain",
                      alpha: float | None = None) -> EndpointEstimate:
    """Sample maximum minus the plain or refined bias."""
    y = np.asarray(samples, dtype=float).ravel()
    if y.size == 0:
        raise ValueError("empty sample")
    n = y.size
    if variant == "plain":
        bias = bias_bn(n, sigma2)
    elif variant == "refined":
        if alpha is None:
            raise ValueError("refined variant requires alpha")
        bias = bias_bn_tilde(n, sigma2, alpha)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    m = float(y.max())
    return EndpointEstimate(theta_hat=m - bias, bias_used=bias, variant=variant,
                            n=n, sigma2=float(sigma2))


def envelope_constants(params: TailClassParams, sigma2: float) -> tuple[float, float]:
    """Return ``(c, C)`` for the survival sandwich of ``Y - theta``.

    ``c`` comes from the contribution of ``[-r, 0]`` with the lower tail
    bound; ``C`` bounds both pieces using the upper exponent ``beta``.
    """
    _check_sigma2(sigma2)
    a, b, r, L = params.alpha, params.beta, params.r, params.L
    sigma = math.sqrt(sigma2)
    # int_0^1 t^a e^-t dt
    lower_gamma = special.gammainc(a + 1.0, 1.0) * special.gamma(a + 1.0)
    c = (math.exp(-r * r / (2.0 * sigma2)) * sigma ** (2 * a + 2)
         / (L * math.sqrt(2.0 * math.pi * sigma2)) * lower_gamma)
    C1 = L * special.gamma(b + 1.0) * sigma ** (2 * b + 1) / math.sqrt(2.0 * math.pi)
    C2 = sigma ** (2 * b + 2) / (2.0 * r ** (b + 1)) * ((b + 1.0) / math.e) ** (b + 1)
    return float(c), float(C1 + C2)


def survival_envelopes(x, params: TailClassParams, sigma2: float):
    """Closed-form lower/upper envelopes of ``P(Y - theta > x)`` for ``x >= sigma2/r``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < sigma2 / params.r):
        raise ValueError(f"x must be >= sigma2/r = {sigma2 / params.r:g}")
    c, C = envelope_constants(params, sigma2)
    gauss = np.exp(-x * x / (2.0 * sigma2))
    lower = c * gauss / x ** (params.alpha + 1)
    upper = C * gauss / x ** (params.beta + 1)
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def validity_threshold(sigma2: float, r: float) -> int:
    """Smallest ``n >= 2`` with ``b_n >= sigma2/r`` and ``ln b_n >= 0``."""
    target = max(sigma2 / r, 1.0)
    # b_n >= target  <=>  ln n >= target^2 / (2 sigma2)
    n = max(2, math.ceil(math.exp(target * target / (2.0 * sigma2))))
    while bias_bn(n, sigma2) < target:
        n += 1
    return n


def deviation_constants(params: TailClassParams, sigma2: float) -> DeviationConstants:
    """Assemble ``c0, c1, c2`` of the deviation inequality from the envelope constants."""
    a, r = params.alpha, params.r
    c, C = envelope_constants(params, sigma2)
    sigma = math.sqrt(sigma2)
    B1 = 0.5 * (a + 1.0) * math.log(2.0 * sigma2)
    c1 = 2.0 * math.log(2.0) * C + math.exp(-B1) / c
    q = c * sigma ** (2 * a + 2) * math.exp(-r * r / (2.0 * sigma2 ** 3)) / r ** (a + 1)
    c2 = -math.log1p(-min(q, 1.0 - 1e-300))
    return DeviationConstants(c0=(a + 1.0) * sigma2, c1=c1, c2=c2, c_lower=c, C_upper=C,
                              B1=B1, n0=validity_threshold(sigma2, r))


def deviation_threshold(t: float, n: int, sigma2: float, c0: float) -> float:
    """``(t + c0 ln ln n) / b_n``: the deviation level the bound controls."""
    return (t + c0 * math.log(math.log(n))) / bias_bn(n, sigma2)


def deviation_bound_curve(t: float, n: int, sigma2: float, params: TailClassParams,
                          consts: DeviationConstants | dict | None = None) -> float:
    """Right-hand side ``c1 exp(-t / (2 sigma2)) + exp(-c2 n)``."""
    if not t > 0:
        raise ValueError("t must be positive")
    if consts is None:
        consts = deviation_constants(params, sigma2)
    if isinstance(consts, dict):
        c1, c2 = consts["c1"], consts["c2"]
    else:
        c1, c2 = consts.c1, consts.c2
    return c1 * math.exp(-t / (2.0 * sigma2)) + math.exp(-c2 * n)


# ---------------------------------------------------------------------------
# Uniform-on-interval signal, used by the simulations and the CLI


def uniform_survival(x, sigma2: float, width: float = 1.0):
    """Exact ``P(Y > x)`` for ``Y = U[-width, 0] + N(0, sigma2)``."""
    sigma = math.sqrt(sigma2)
    x = np.asarray(x, dtype=float)

    # antiderivative of Phi(z), written as sigma * (z Phi(z) + phi(z)) in scaled units
    def antider(w):
        z = w / sigma
        return sigma * (z * special.ndtr(z) + np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi))

    return (antider(-x) - antider(-x - width)) / width


def simulate_uniform_maxima(rng: np.random.Generator, n: int, trials: int, sigma2: float,
                            theta: float = 0.0, width: float = 1.0,
                            chunk: int = 2 ** 22) -> np.ndarray:
    """Sample maxima of ``n`` draws of ``U[theta - width, theta] + N(0, sigma2)`` per trial."""
    sigma = math.sqrt(sigma2)
    out = np.empty(trials)
    for k in range(trials):
        m = -np.inf
        left = n
        while left:
            size = min(left, chunk)
            y = rng.uniform(theta - width, theta, size) + sigma * rng.standard_normal(size)
            m = max(m, float(y.max()))
            left -= size
        out[k] = m
    return out
