"""Symmetric distribution functions: G(x) = 1 - G(-x), right-continuous, limits 0 and 1.

Each built-in carries its breakpoints (jumps or kinks), which every quadrature
over the function must use as panel boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.special import erf

from .quadrature import Integrand, QuadratureResult, integrate_1d

SYMMETRY_TOL = 1e-12
LIMIT_TOL = 1e-6
TAIL_POINT = 1e6


@dataclass(frozen=True)
class SymmetricCdf:
    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    breakpoints: tuple[float, ...] = ()
    params: Mapping[str, float] = field(default_factory=dict)
    # half-width of the compact support, None when the support is all of R
    support: float | None = None

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.asarray(self.func(arr), dtype=float)
        return out if arr.ndim else float(out)

    def label(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}:{args}"


def _rademacher(x):
    return np.where(x < -1, 0.0, np.where(x < 1, 0.5, 1.0))


def _uniform_linear(x):
    return np.clip((x + 1) / 2, 0.0, 1.0)


def _cauchy(x):
    return 0.5 + np.arctan(x) / np.pi


def _arcsine(x):
    return (np.pi / 2 + np.arcsin(np.clip(x, -1.0, 1.0))) / np.pi


def _normal(x):
    return 0.5 * (1 + erf(x / math.sqrt(2)))


def _hyperbolic_secant(x):
    # arctan(e^x) = pi/2 - arctan(e^-x) keeps the right tail from overflowing
    x = np.asarray(x, dtype=float)
    neg = np.arctan(np.exp(np.minimum(x, 0.0)))
    pos = np.pi / 2 - np.arctan(np.exp(-np.maximum(x, 0.0)))
    return 2 / np.pi * np.where(x <= 0, neg, pos)


def _smoothed_uniform(x):
    y = np.clip(x, -1.0, 1.0)
    # sin(pi) is not exactly 0 in floating point
    return np.clip(0.5 * (1 + y + np.sin(np.pi * y) / np.pi), 0.0, 1.0)


def _u_quadratic(alpha: float):
    a = abs(alpha)

    def g(x):
        y = np.clip(x, -a, a)
        return (a**3 + y**3) / (2 * a**3)

    return g


BUILTIN_NAMES = (
    "rademacher",
    "uniform_linear",
    "cauchy",
    "arcsine",
    "normal",
    "hyperbolic_secant",
    "u_quadratic",
    "smoothed_uniform",
)


def make_builtin(name: str, **params: float) -> SymmetricCdf:
    if name == "rademacher":
        return SymmetricCdf(name, _rademacher, (-1.0, 1.0), {}, 1.0)
    if name == "uniform_linear":
        return SymmetricCdf(name, _uniform_linear, (-1.0, 1.0), {}, 1.0)
    if name == "cauchy":
        return SymmetricCdf(name, _cauchy)
    if name == "arcsine":
        return SymmetricCdf(name, _arcsine, (-1.0, 1.0), {}, 1.0)
    if name == "normal":
        return SymmetricCdf(name, _normal)
    if name == "hyperbolic_secant":
        return SymmetricCdf(name, _hyperbolic_secant)
    if name == "smoothed_uniform":
        return SymmetricCdf(name, _smoothed_uniform, (-1.0, 1.0), {}, 1.0)
    if name == "u_quadratic":
        alpha = float(params.get("alpha", 1.0))
        if alpha == 0:
            raise ValueError("u_quadratic needs alpha != 0")
        a = abs(alpha)
        return SymmetricCdf(name, _u_quadratic(alpha), (-a, a), {"alpha": alpha}, a)
    raise ValueError(f"unknown CDF {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def parse_cdf(spec: str) -> SymmetricCdf:
    """Build a CDF from ``name`` or ``name:key=value,key=value``."""
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r} in {spec!r}")
        params[key.strip()] = float(val)
    return make_builtin(name.strip(), **params)


@dataclass(frozen=True)
class ValidationReport:
    name: str
    range_violation: float
    monotonicity_violation: float
    symmetry_violation: float
    limit_violation: float

    @property
    def passed(self) -> bool:
        return (
            self.range_violation == 0
            and self.monotonicity_violation == 0
            and self.symmetry_violation <= SYMMETRY_TOL
            and self.limit_violation <= LIMIT_TOL
        )

    def failures(self) -> list[str]:
        out = []
        if self.range_violation > 0:
            out.append("range")
        if self.monotonicity_violation > 0:
            out.append("monotonicity")
        if self.symmetry_violation > SYMMETRY_TOL:
            out.append("symmetry")
        if self.limit_violation > LIMIT_TOL:
            out.append("limits")
        return out


def validation_grid(cdf: SymmetricCdf, grid_size: int) -> np.ndarray:
    """Symmetric grid covering the interesting region, with breakpoints removed."""
    span = 10.0
    if cdf.breakpoints:
        span = max(span, 2 * max(abs(b) for b in cdf.breakpoints))
    x = np.linspace(-span, span, grid_size)
    if cdf.breakpoints:
        bps = np.asarray(cdf.breakpoints)
        x = x[np.min(np.abs(x[:, None] - bps[None, :]), axis=1) > 1e-9]
    return x


def validate(cdf: SymmetricCdf, grid_size: int = 10_000) -> ValidationReport:
    """Check range, monotonicity, symmetry and limits; violations are reported, not raised."""
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    x = validation_grid(cdf, grid_size)
    g = cdf(x)
    range_v = float(max(0.0, -g.min(), g.max() - 1.0))
    mono_v = float(max(0.0, -np.diff(g).min()))
    sym_v = float(np.max(np.abs(g + cdf(-x) - 1.0)))
    if cdf.support is None:
        tail = np.array([-TAIL_POINT, TAIL_POINT])
    else:
        tail = np.array([-2 * cdf.support - 1, 2 * cdf.support + 1])
    lo, hi = cdf(tail)
    limit_v = float(max(abs(lo), abs(1 - hi)))
    return ValidationReport(cdf.name, range_v, mono_v, sym_v, limit_v)


def moment_integral(cdf: SymmetricCdf, a: float, n: int, tol: float | None = None) -> QuadratureResult:
    """Quadrature of x^(2n) G(x) over [-a, a], split at the CDF's breakpoints."""
    expected = a ** (2 * n + 1) / (2 * n + 1)
    if tol is None:
        tol = 1e-11 * max(1.0, expected)
    f = Integrand.scalar(lambda x: x ** (2 * n) * cdf(x), cdf.breakpoints)
    return integrate_1d(f, -a, a, tol)


def moment_check(cdf: SymmetricCdf, a: float, n: int) -> tuple[float, float]:
    """(computed, expected) for the identity int_{-a}^{a} x^(2n) G(x) dx = a^(2n+1)/(2n+1)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if not 0 <= n <= 8:
        raise ValueError("n must lie in [0, 8]")
    return moment_integral(cdf, a, n).value, a ** (2 * n + 1) / (2 * n + 1)
