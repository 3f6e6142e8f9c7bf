"""Gamma-Gamma turbulence fading: parameters, distribution and sampling."""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError


@dataclass(frozen=True)
class TurbulenceModel:
    """Refractive-index structure constant and wavelength shared by all hops."""

    cn2: float = 50e-15
    wavelength: float = 1550e-9

    def __post_init__(self):
        if self.cn2 <= 0 or self.wavelength <= 0:
            raise DomainError("cn2 and wavelength must be positive")

    def params(self, d: float) -> tuple[float, float]:
        return gg_params(rytov_variance(self.cn2, self.wavelength, d))


def rytov_variance(cn2: float, wavelength: float, d: float) -> float:
    """Plane-wave Rytov variance 1.23 Cn^2 k^(7/6) d^(11/6)."""
    if cn2 <= 0 or wavelength <= 0 or d <= 0:
        raise DomainError("cn2, wavelength and distance must be positive")
    k = 2.0 * math.pi / wavelength
    return 1.23 * cn2 * k ** (7.0 / 6.0) * d ** (11.0 / 6.0)


def gg_params(sigma2: float) -> tuple[float, float]:
    """Large- and small-scale shape parameters (alpha, beta) for a plane wave."""
    if sigma2 <= 0:
        raise DomainError("Rytov variance must be positive")
    s125 = sigma2 ** 1.2
    alpha = 1.0 / math.expm1(0.49 * sigma2 / (1.0 + 1.11 * s125) ** (7.0 / 6.0))
    beta = 1.0 / math.expm1(0.51 * sigma2 / (1.0 + 0.69 * s125) ** (5.0 / 6.0))
    return alpha, beta


def _log_pdf(alpha: float, beta: float, x):
    x = np.asarray(x, dtype=float)
    ab = alpha * beta
    z = 2.0 * np.sqrt(ab * x)
    nu = alpha - beta
    # kve(nu, z) = kv(nu, z) * exp(z) keeps large arguments finite
    return (math.log(2.0) + 0.5 * (alpha + beta) * math.log(ab)
            - special.gammaln(alpha) - special.gammaln(beta)
            + (0.5 * (alpha + beta) - 1.0) * np.log(x)
            + np.log(special.kve(nu, z)) - z)


def gg_pdf(alpha: float, beta: float, x):
    """Unit-mean Gamma-Gamma density."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(_log_pdf(alpha, beta, x[pos]))
    return out if out.ndim else float(out)


def _integrate(alpha, beta, lo, hi):
    f = lambda t: math.exp(float(_log_pdf(alpha, beta, t)))
    val, _ = integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=400)
    return val


def _cdf_scalar(alpha: float, beta: float, x: float) -> float:
    if x < 0:
        raise DomainError("Gamma-Gamma CDF needs x >= 0")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x <= 1.0:
        # the density behaves like x^(min(alpha, beta) - 1) near zero; a power
        # substitution removes the endpoint singularity
        rho = min(alpha, beta)
        f = lambda u: math.exp(float(_log_pdf(alpha, beta, u ** (1.0 / rho)))) * u ** (1.0 / rho - 1.0) / rho
        val, _ = integrate.quad(f, 0.0, x ** rho, epsabs=1e-14, epsrel=1e-11, limit=400)
        return min(val, 1.0)
    upper = _integrate(alpha, beta, x, np.inf)
    return max(0.0, 1.0 - upper)


def gg_cdf(alpha: float, beta: float, x):
    """Pr(h <= x) for unit-mean Gamma-Gamma fading, by quadrature of the Bessel-K density."""
    if alpha <= 0 or beta <= 0:
        raise DomainError("shape parameters must be positive")
    arr = np.asarray(x, dtype=float)
    out = np.array([_cdf_scalar(alpha, beta, float(v)) for v in arr.ravel()]).reshape(arr.shape)
    return out if out.ndim else float(out)


def named_stream(seed: int, name: str) -> np.random.Generator:
    """Independent generator keyed by a root seed and a task name."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *words])))


def gg_sample(alpha: float, beta: float, rng: np.random.Generator, size=None):
    """Draw unit-mean Gamma-Gamma variates as a product of two unit-mean Gammas."""
    if alpha <= 0 or beta <= 0:
        raise DomainError("shape parameters must be positive")
    return rng.gamma(alpha, 1.0 / alpha, size) * rng.gamma(beta, 1.0 / beta, size)
