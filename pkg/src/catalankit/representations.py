"""Integrands for the Catalan-constant representations and the registry of verification cases.

For symmetric CDFs G_1..G_r and half-widths a_1..a_r with prod a_i = 1,

    G = 2^(r-2) * int_{prod [-a_i, a_i]} Phi(-prod x_i^2, 2-r, 1/2) prod G_i(x_i) dx.

r = 1 gives the single integral with kernel arctan(x)/x, r = 2 the double
integral with kernel 1/(1 + x_1^2 x_2^2), and r >= 3 uses the generated
closed forms of the Lerch transcendent.
"""
from __future__ import annotations

import fnmatch
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from decimal import Decimal
from typing import Callable, Sequence

import numpy as np

from . import constants
from .cdf import SymmetricCdf, make_builtin
from .lerch import derive_closed_form, eval_closed_form
from .quadrature import (
    EngineConfig,
    Integrand,
    QuadratureResult,
    integrate,
    integrate_1d,
    integrate_tensor,
)

MAX_DIMENSION = 12


def arctan_over_x(x: np.ndarray) -> np.ndarray:
    """arctan(x)/x with the removable singularity at 0 filled in."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 3.0, np.arctan(safe) / safe)


def lerch_kernel(r: int) -> Callable[[np.ndarray], np.ndarray]:
    """2^(r-2) Phi(-prod x_i^2, 2-r, 1/2) as a function of an (n, r) point array."""
    if r < 1 or r > MAX_DIMENSION:
        raise ValueError(f"dimension must lie in [1, {MAX_DIMENSION}]")
    if r == 1:
        return lambda pts: arctan_over_x(pts[:, 0])
    if r == 2:
        return lambda pts: 1.0 / (1.0 + (pts[:, 0] * pts[:, 1]) ** 2)
    form = derive_closed_form(r - 2)
    factor = 2.0 ** (r - 2)

    def k(pts: np.ndarray) -> np.ndarray:
        t = np.prod(pts, axis=1) ** 2
        return factor * eval_closed_form(form, t)

    return k


@dataclass(frozen=True)
class RepresentationSpec:
    kind: str
    cdfs: tuple[SymmetricCdf, ...]
    a_params: tuple[float, ...]

    @property
    def r(self) -> int:
        return len(self.cdfs)

    def __post_init__(self) -> None:
        r = len(self.cdfs)
        if r < 1 or r > MAX_DIMENSION:
            raise ValueError(f"dimension must lie in [1, {MAX_DIMENSION}]")
        expected_kind = {1: "single", 2: "double"}.get(r, "multi")
        if self.kind not in (expected_kind, "multi"):
            raise ValueError(f"kind {self.kind!r} does not match r={r}")
        if len(self.a_params) != r:
            raise ValueError("need one half-width per dimension")
        if any(a <= 0 for a in self.a_params):
            raise ValueError("half-widths must be positive")
        prod = math.prod(self.a_params)
        if not math.isclose(prod, 1.0, rel_tol=1e-12):
            raise ValueError(f"half-widths must multiply to 1, got {prod!r}")

    @classmethod
    def build(cls, cdfs: Sequence[SymmetricCdf], a: Sequence[float] = (),
              kind: str | None = None) -> "RepresentationSpec":
        """Complete ``a`` (the first r-1 half-widths, default 1) with a_r = 1/prod."""
        cdfs = tuple(cdfs)
        r = len(cdfs)
        free = list(a)
        if len(free) == r:
            free = free[:-1]
        if len(free) > max(r - 1, 0):
            raise ValueError(f"at most {r - 1} free half-widths for r={r}")
        free += [1.0] * (r - 1 - len(free))
        last = 1.0 / math.prod(free) if free else 1.0
        kind = kind or {1: "single", 2: "double"}.get(r, "multi")
        return cls(kind, cdfs, tuple(float(x) for x in free) + (last,))

    def box(self) -> list[tuple[float, float]]:
        return [(-a, a) for a in self.a_params]

    def integrand(self) -> Integrand:
        k = lerch_kernel(self.r)
        cdfs = self.cdfs

        def f(pts: np.ndarray) -> np.ndarray:
            out = k(pts)
            for i, g in enumerate(cdfs):
                out = out * g(pts[:, i])
            return out

        return Integrand(self.r, f, tuple(g.breakpoints for g in cdfs))


def single_integral(g: SymmetricCdf, tol: float = 1e-9) -> QuadratureResult:
    """int_{-1}^{1} G(x) arctan(x)/x dx."""
    f = Integrand.scalar(lambda x: g(x) * arctan_over_x(x), g.breakpoints)
    return integrate_1d(f, -1.0, 1.0, tol)


def double_integral(g1: SymmetricCdf, g2: SymmetricCdf, a: float = 1.0,
                    tol: float = 1e-9) -> QuadratureResult:
    """int_{-a}^{a} int_{-1/a}^{1/a} G1(x1) G2(x2) / (1 + x1^2 x2^2) dx1 dx2."""
    if a <= 0:
        raise ValueError("a must be positive")
    spec = RepresentationSpec("double", (g1, g2), (1.0 / a, a))
    return integrate_tensor(spec.integrand(), spec.box(), tol)


def multi_integral(spec: RepresentationSpec, config: EngineConfig | None = None,
                   tol: float | None = None, n_samples: int | None = None,
                   seed: int | None = None) -> QuadratureResult:
    """Evaluate the r-dimensional representation; QMC from r = 4 up."""
    return integrate(spec.integrand(), spec.box(), config, tol, n_samples, seed)


def symmetric_kernel_integrand(r: int) -> Integrand:
    """Bare kernel 2^(r-2) Phi(-prod x_i^2, 2-r, 1/2), with no CDF factors."""
    return Integrand(r, lerch_kernel(r))


def _side_integrand() -> Integrand:
    return Integrand(2, lambda p: np.arctan(p[:, 0]) / (1.0 + (p[:, 0] * p[:, 1]) ** 2))


def side_identity_zero(tol: float = 1e-9) -> QuadratureResult:
    """int_{-1}^{1} int_{-1}^{1} arctan(x)/(1 + x^2 y^2) dx dy, which vanishes."""
    return integrate_tensor(_side_integrand(), [(-1.0, 1.0), (-1.0, 1.0)], tol)


def side_identity_quadrant(tol: float = 1e-9) -> QuadratureResult:
    """First-quadrant piece; equals pi*G/2 - (7/8) zeta(3)."""
    return integrate_tensor(_side_integrand(), [(0.0, 1.0), (0.0, 1.0)], tol)


def side_identity_arctan_square(tol: float = 1e-9) -> QuadratureResult:
    """int_{-1}^{0} arctan(x)^2 / x dx; equals -(pi*G/2 - (7/8) zeta(3))."""
    f = Integrand.scalar(lambda x: np.arctan(x) * arctan_over_x(x))
    return integrate_1d(f, -1.0, 0.0, tol)


def inner_integral_identity(g: SymmetricCdf | None = None, x: float = 0.5,
                            tol: float = 1e-12) -> tuple[float, float]:
    """(int_{-1}^{1} G(y)/(1 + x^2 y^2) dy, arctan(x)/x) for a symmetric G."""
    if not -1.0 <= x <= 1.0:
        raise ValueError("x must lie in [-1, 1]")
    g = g or make_builtin("smoothed_uniform")
    f = Integrand.scalar(lambda y: g(y) / (1.0 + x * x * y * y), g.breakpoints)
    lhs = integrate_1d(f, -1.0, 1.0, tol).value
    return lhs, float(arctan_over_x(np.array([x]))[0])


# -- registry -----------------------------------------------------------------


@dataclass(frozen=True)
class VerificationCase:
    """A named identity: what to integrate, the exact value, and how close is close enough.

    Deterministic cases pass when |value - expected| <= tolerance. Cases with
    ``sigmas`` set are stochastic: they pass when the deviation is within
    ``sigmas`` standard errors and the standard error itself is at most
    ``tolerance``.
    """

    name: str
    expected: Decimal
    tolerance: float
    provenance: str
    spec: RepresentationSpec | None = None
    integrand: Integrand | None = None
    box: tuple[tuple[float, float], ...] = ()
    engine_tol: float | None = None
    samples: int | None = None
    sigmas: float | None = None

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if not self.expected.is_finite():
            raise ValueError("expected value must be finite")
        if (self.spec is None) == (self.integrand is None):
            raise ValueError("give exactly one of spec or integrand")

    def target(self) -> tuple[Integrand, list[tuple[float, float]]]:
        if self.spec is not None:
            return self.spec.integrand(), self.spec.box()
        return self.integrand, list(self.box)


@dataclass(frozen=True)
class CaseOutcome:
    case: VerificationCase
    result: QuadratureResult | None
    passed: bool
    error: str | None = None

    @property
    def abs_error(self) -> float | None:
        if self.result is None:
            return None
        return abs(self.result.value - float(self.case.expected))

    def row(self) -> dict:
        res = self.result
        return {
            "case": self.case.name,
            "method": res.method if res else None,
            "value": res.value if res else None,
            "expected": float(self.case.expected),
            "abs_error": self.abs_error,
            "error_estimate": res.error_estimate if res else None,
            "evaluations": res.evaluations if res else 0,
            "seed": res.seed if res else None,
            "pass": self.passed,
        }


def run_case(case: VerificationCase, config: EngineConfig | None = None) -> CaseOutcome:
    config = config or EngineConfig()
    f, box = case.target()
    samples = config.qmc_samples if case.samples is None else case.samples
    try:
        res = integrate(f, box, config, tol=case.engine_tol, n_samples=samples)
    except Exception as exc:  # reported per case, never raised
        return CaseOutcome(case, None, False, f"{type(exc).__name__}: {exc}")
    dev = abs(res.value - float(case.expected))
    if case.sigmas is None:
        ok = dev <= case.tolerance
    else:
        ok = dev <= case.sigmas * res.error_estimate and res.error_estimate <= case.tolerance
    return CaseOutcome(case, res, bool(ok))


def _catalan() -> Decimal:
    return constants.catalan_reference()


def _scaled(name: str) -> str:
    return name.replace(".", "p")


def default_cases() -> list[VerificationCase]:
    G = _catalan()
    quad = constants.quadrant_constant()
    rad = make_builtin("rademacher")
    cases: list[VerificationCase] = []

    def spec_case(name, cdfs, a=(), tol=1e-8, prov="", **kw):
        cases.append(VerificationCase(
            name, G, tol, prov, spec=RepresentationSpec.build(cdfs, a), **kw))

    def raw_case(name, f, box, expected, tol, prov, **kw):
        cases.append(VerificationCase(
            name, expected, tol, prov, integrand=f, box=tuple(box), **kw))

    for cdf_name in ("uniform_linear", "cauchy", "arcsine", "normal"):
        spec_case(f"single_{cdf_name}", [make_builtin(cdf_name)], tol=1e-9,
                  prov=f"single integral with G = {cdf_name} CDF")

    raw_case("arctan_over_x_unit", Integrand.scalar(arctan_over_x), [(0.0, 1.0)], G, 1e-9,
             "int_0^1 arctan(x)/x dx")
    raw_case("log_endpoint", Integrand.scalar(lambda x: -np.log(x) / (1 + x * x),
                                             singular=(True, False)),
             [(0.0, 1.0)], G, 1e-9, "-int_0^1 ln(x)/(1+x^2) dx, log endpoint singularity")
    raw_case("unit_square_kernel", Integrand(2, lambda p: 1 / (1 + (p[:, 0] * p[:, 1]) ** 2)),
             [(0.0, 1.0), (0.0, 1.0)], G, 1e-8, "int_[0,1]^2 dx dy/(1+x^2 y^2)")

    # double integrals: spec a_params are (1/a, a) as in double_integral
    doubles = [
        ("double_rademacher", rad, rad, 1.0),
        ("double_hyperbolic_secant", make_builtin("hyperbolic_secant"),
         make_builtin("hyperbolic_secant"), 1.0),
        ("double_normal", make_builtin("normal"), make_builtin("normal"), 1.0),
        ("double_cauchy_rademacher", make_builtin("cauchy"), rad, 1.0),
    ]
    for alpha in (0.5, 1.0, 2.0):
        u = make_builtin("u_quadratic", alpha=alpha)
        doubles.append((_scaled(f"double_u_quadratic_alpha_{alpha:g}"), u, u, 1.0))
    for label, a in (("0.5", 0.5), ("pi", math.pi), ("e", math.e), ("catalan", float(G))):
        doubles.append((_scaled(f"double_scaled_a_{label}"), rad, rad, a))
    for name, g1, g2, a in doubles:
        spec_case(name, [g1, g2], (1.0 / a,), prov=f"double integral, a={a:g}")

    for alpha in (0.5, 2.0):
        def display(p, al=alpha):
            x, y = p[:, 0], p[:, 1]
            return (al**3 + x**3) * (al**3 + y**3) / (4 * al**6 * (1 + (x * y) ** 2))

        raw_case(_scaled(f"u_quadratic_display_alpha_{alpha:g}"), Integrand(2, display),
                 [(-1.0, 1.0), (-1.0, 1.0)], G, 1e-8,
                 "U-quadratic display formula without clamping")

    side = _side_integrand()
    raw_case("arctan_side_zero", side, [(-1.0, 1.0), (-1.0, 1.0)], Decimal(0), 1e-8,
             "int_[-1,1]^2 arctan(x)/(1+x^2 y^2) = 0")
    raw_case("arctan_side_quadrant", side, [(0.0, 1.0), (0.0, 1.0)], quad, 1e-8,
             "first quadrant = pi G/2 - 7/8 zeta(3)")
    raw_case("arctan_side_square",
             Integrand.scalar(lambda x: np.arctan(x) * arctan_over_x(x)),
             [(-1.0, 0.0)], -quad, 1e-8, "int_{-1}^0 arctan(x)^2/x = -(pi G/2 - 7/8 zeta(3))")

    spec_case("dim3", [rad] * 3, tol=1e-6, prov="r=3, Rademacher, unit box")
    for r in (4, 5, 6):
        spec_case(f"dim{r}", [rad] * r, tol=1e-3, sigmas=4.0,
                  prov=f"r={r}, Rademacher, unit box, QMC")
    spec_case("dim10", [rad] * 10, tol=1e-2, sigmas=4.0, samples=2**22,
              prov="r=10, Rademacher, unit box, QMC")

    hs = make_builtin("hyperbolic_secant")
    spec_case("multi3_hyperbolic_secant_scaled", [hs, hs, hs], (2.0, 0.5), tol=1e-6,
              prov="r=3, hyperbolic secant CDFs, a=(2, 1/2, 1)")
    nm = make_builtin("normal")
    spec_case("multi4_normal_scaled", [nm] * 4, (0.5, 2.0, 1.5), tol=1e-3, sigmas=4.0,
              prov="r=4, normal CDFs, a=(1/2, 2, 3/2, 2/3), QMC")
    return cases


def select(cases: Sequence[VerificationCase], pattern: str | None) -> list[VerificationCase]:
    if not pattern:
        return list(cases)
    return [c for c in cases if fnmatch.fnmatchcase(c.name, pattern)]


def run_registry(pattern: str | None = None, config: EngineConfig | None = None,
                 cases: Sequence[VerificationCase] | None = None,
                 workers: int = 1) -> list[CaseOutcome]:
    """Run the selected cases; results come back ordered by case name."""
    chosen = select(default_cases() if cases is None else cases, pattern)
    config = config or EngineConfig()
    if workers <= 1 or len(chosen) <= 1:
        outcomes = [run_case(c, config) for c in chosen]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda c: run_case(c, config), chosen))
    return sorted(outcomes, key=lambda o: o.case.name)


def with_expected(case: VerificationCase, expected: Decimal) -> VerificationCase:
    return replace(case, expected=expected)
