"""Lerch transcendent: truncated series and exact closed forms at negative integer order.

Closed forms for Phi(-z, -n, 1/2) are generated rather than tabulated. Starting
from Phi(z, 0, a) = 1/(1 - z), the identity

    Phi(z, s - 1, a) = (a + z d/dz) Phi(z, s, a)

is applied n times in exact rational arithmetic, keeping the denominator as a
bare power of (1 - z). Substituting z -> -z then gives P(z) / (2^n (1 + z)^(n+1)).
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np

MAX_DERIVE_ORDER = 32
SERIES_TERM_CAP = 10_000_000


class LerchDomainError(ValueError):
    pass


class SeriesNonConvergence(RuntimeError):
    pass


class RationalPoly:
    """Dense univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of z**i. Trailing zeros are stripped, so
    the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int | str] = ()) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Fraction | int) -> "RationalPoly":
        return cls([c])

    @classmethod
    def z(cls) -> "RationalPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        # -1 for the zero polynomial
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPoly.constant(other)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __add__(self, other: "RationalPoly | int | Fraction") -> "RationalPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPoly | int | Fraction") -> "RationalPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: "RationalPoly | int | Fraction") -> "RationalPoly":
        return _as_poly(other) - self

    def __mul__(self, other: "RationalPoly | int | Fraction") -> "RationalPoly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def reflect(self) -> "RationalPoly":
        """Substitute z -> -z."""
        return RationalPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def __call__(self, z: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def horner(self, z: np.ndarray | float) -> np.ndarray | float:
        """Double-precision evaluation."""
        acc = np.zeros_like(z, dtype=float) if isinstance(z, np.ndarray) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def integer_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]


def _as_poly(x: "RationalPoly | int | Fraction") -> RationalPoly:
    return x if isinstance(x, RationalPoly) else RationalPoly.constant(x)


@dataclass(frozen=True)
class LerchClosedForm:
    """Phi(-z, -n, 1/2) = numerator(z) / (scale * (1 + z)**pole_order)."""

    n: int
    numerator: RationalPoly
    pole_order: int
    scale: Fraction

    def check(self) -> None:
        if self.pole_order != self.n + 1:
            raise ValueError("pole order must be n + 1")
        if self.scale != 2**self.n:
            raise ValueError("scale must be 2**n")
        if self.numerator.degree != self.n or self.numerator[0] != 1:
            raise ValueError("numerator must have degree n and constant term 1")
        sign = (-1) ** self.n
        cs = self.numerator.coeffs
        if any(cs[j] != sign * cs[self.n - j] for j in range(self.n + 1)):
            raise ValueError("numerator is not (anti-)palindromic")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "scale": str(self.scale),
            "pole_order": self.pole_order,
            "numerator": [str(c) for c in self.numerator.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LerchClosedForm":
        return cls(
            n=int(data["n"]),
            numerator=RationalPoly(Fraction(c) for c in data["numerator"]),
            pole_order=int(data["pole_order"]),
            scale=Fraction(data["scale"]),
        )


def _raise_order(num: RationalPoly, m: int, a: Fraction) -> tuple[RationalPoly, int]:
    # (a + z D) [N / (1-z)^m] = [a N (1-z) + z N' (1-z) + m z N] / (1-z)^(m+1)
    one_minus_z = RationalPoly([1, -1])
    z = RationalPoly.z()
    new = a * num * one_minus_z + z * num.derivative() * one_minus_z + m * z * num
    return new, m + 1


def lerch_negative_order(n: int, a: Fraction = Fraction(1, 2)) -> tuple[RationalPoly, int]:
    """Exact N, m with Phi(z, -n, a) = N(z) / (1 - z)^m."""
    num, m = RationalPoly.constant(1), 1
    for _ in range(n):
        num, m = _raise_order(num, m, a)
    return num, m


@lru_cache(maxsize=None)
def derive_closed_form(n: int) -> LerchClosedForm:
    if not 0 <= n <= MAX_DERIVE_ORDER:
        raise ValueError(f"n must lie in [0, {MAX_DERIVE_ORDER}], got {n}")
    num, m = lerch_negative_order(n, Fraction(1, 2))
    reflected = num.reflect()
    lead = reflected[0]  # = (1/2)^n
    form = LerchClosedForm(
        n=n,
        numerator=reflected * (1 / lead),
        pole_order=m,
        scale=1 / lead,
    )
    form.check()
    return form


def eval_closed_form(form: LerchClosedForm, z: np.ndarray | float) -> np.ndarray | float:
    """Evaluate the closed form in double precision; z must exceed -1."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= -1.0):
        raise LerchDomainError("closed form has a pole at z = -1 and is only used for z > -1")
    value = form.numerator.horner(z_arr) / (float(form.scale) * (1.0 + z_arr) ** form.pole_order)
    return value if isinstance(z, np.ndarray) else float(value)


def lerch_series(z: float, s: float, a: float, tol: float = 1e-15) -> float:
    """Truncated sum_{k>=0} z^k / (k + a)^s with an absolute tail bound below ``tol``.

    Inside the unit disc the sum is carried in extended precision, since for
    s <= 0 the terms grow polynomially before the geometric decay wins and
    the alternating partial sums cancel heavily. On |z| = 1 only s > 1 is
    accepted and the terms are summed in float64 chunks.
    """
    if a <= 0:
        raise LerchDomainError("a must be positive")
    if tol < 1e-15:
        raise ValueError("tol must be at least 1e-15")
    az = abs(z)
    if az > 1 or (az == 1 and s <= 1):
        raise LerchDomainError(f"series diverges for |z|={az}, s={s}")
    if az < 1:
        return _series_inside(z, s, a, tol)
    return _series_on_circle(z, s, a, tol)


def _series_inside(z: float, s: float, a: float, tol: float) -> float:
    if z == 0:
        return float(a ** (-s))
    az = abs(z)
    # peak term magnitude decides the working precision
    if s < 0:
        k_peak = max(0.0, -s / -math.log(az) - a)
        log10_peak = k_peak * math.log10(az) - s * math.log10(k_peak + a)
    else:
        log10_peak = -s * math.log10(a)
    dps = 25 + max(0, int(math.ceil(log10_peak)))
    with mpmath.workdps(dps):
        zm, sm, am = mpmath.mpf(z), mpmath.mpf(s), mpmath.mpf(a)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for k in range(SERIES_TERM_CAP):
            term = power / (k + am) ** sm
            total += term
            power *= zm
            # ratio of successive term magnitudes from here on
            if s < 0:
                ratio = az * ((k + 2 + a) / (k + 1 + a)) ** (-s)
            else:
                ratio = az
            if ratio < 1:
                nxt = abs(power / (k + 1 + am) ** sm)
                if nxt / (1 - ratio) < tol:
                    return float(total)
    raise SeriesNonConvergence(f"no convergence within {SERIES_TERM_CAP} terms")


def _series_on_circle(z: float, s: float, a: float, tol: float) -> float:
    if z == 1:
        # sum_{k>=K} (k+a)^-s <= (K+a)^-s + (K+a)^(1-s)/(s-1)
        k_needed = math.ceil(((s - 1) * tol) ** (-1.0 / (s - 1)) - a) + 1
    else:
        # alternating with decreasing magnitudes: tail below first omitted term
        k_needed = math.ceil(tol ** (-1.0 / s) - a) + 1
    k_needed = max(k_needed, 1)
    if k_needed > SERIES_TERM_CAP:
        raise SeriesNonConvergence(
            f"{k_needed} terms needed for tol={tol}, cap is {SERIES_TERM_CAP}"
        )
    chunk = 1 << 16
    partials = []
    for start in range(0, k_needed, chunk):
        k = np.arange(start, min(start + chunk, k_needed), dtype=float)
        terms = (k + a) ** (-s)
        if z == -1:
            terms = np.where(k.astype(np.int64) % 2 == 0, terms, -terms)
        partials.append(math.fsum(terms))
    return math.fsum(partials)


# -- presentation -------------------------------------------------------------


def _term(coef: int, power: int, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    if power == 0:
        return f"{sign}{mag}"
    body = "z" if power == 1 else f"z^{power}" if power < 10 else f"z^{{{power}}}"
    return f"{sign}{'' if mag == 1 else mag}{body}"


def emit_latex(form: LerchClosedForm, descending: bool = False) -> str:
    """LaTeX fraction such as ``\\frac{1-z}{2(1+z)^2}``."""
    coeffs = form.numerator.integer_coeffs()
    order = range(len(coeffs) - 1, -1, -1) if descending else range(len(coeffs))
    parts = []
    for p in order:
        if coeffs[p] != 0:
            parts.append(_term(coeffs[p], p, first=not parts))
    numer = "".join(parts)
    scale = "" if form.scale == 1 else str(form.scale)
    if form.pole_order == 1:
        denom = "1+z" if not scale else f"{scale}(1+z)"
    else:
        exp = str(form.pole_order) if form.pole_order < 10 else f"{{{form.pole_order}}}"
        denom = f"{scale}(1+z)^{exp}"
    return f"\\frac{{{numer}}}{{{denom}}}"


_LATEX_RE = re.compile(r"^\\frac\{(?P<num>[^{}]*(?:\{[^{}]*\}[^{}]*)*)\}\{(?P<den>.*)\}$")
_TERM_RE = re.compile(r"([+-]?)(\d*)(z(?:\^(?:\{(\d+)\}|(\d)))?)?")
_DEN_RE = re.compile(r"^(\d*)\(?1\+z\)?(?:\^(?:\{(\d+)\}|(\d)))?$")


def parse_latex(text: str) -> LerchClosedForm:
    """Inverse of :func:`emit_latex` (either term order)."""
    m = _LATEX_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a closed-form fraction: {text!r}")
    coeffs: dict[int, int] = {}
    pos = 0
    num = m.group("num")
    while pos < len(num):
        t = _TERM_RE.match(num, pos)
        if not t or t.end() == pos:
            raise ValueError(f"cannot parse numerator at {num[pos:]!r}")
        sign, mag, zpart, pbrace, pdigit = t.groups()
        c = int(mag) if mag else 1
        if sign == "-":
            c = -c
        power = 0 if not zpart else int(pbrace or pdigit or 1)
        coeffs[power] = coeffs.get(power, 0) + c
        pos = t.end()
    d = _DEN_RE.match(m.group("den"))
    if not d:
        raise ValueError(f"cannot parse denominator {m.group('den')!r}")
    scale = int(d.group(1)) if d.group(1) else 1
    order = int(d.group(2) or d.group(3) or 1)
    deg = max(coeffs)
    poly = RationalPoly(coeffs.get(i, 0) for i in range(deg + 1))
    return LerchClosedForm(n=deg, numerator=poly, pole_order=order, scale=Fraction(scale))


def emit_json(form: LerchClosedForm) -> str:
    return json.dumps(form.to_dict())


def emit_coeffs(form: LerchClosedForm) -> str:
    nums = ", ".join(str(c) for c in form.numerator.integer_coeffs())
    return f"{nums} / {form.scale}·(1+z)^{form.pole_order}"


def kernel(r: int) -> Callable[[np.ndarray], np.ndarray]:
    """The multiple-integral kernel 2^(r-2) Phi(-t, 2-r, 1/2) as a function of t = prod x_i^2.

    For r = 1 the kernel is written in x (t = x^2) as arctan(x)/x, so callers
    pass the product of the coordinates rather than its square; see
    :func:`catalankit.representations.lerch_kernel`.
    """
    if r < 2:
        raise ValueError("use arctan_over_x for r = 1")
    if r == 2:
        return lambda t: 1.0 / (1.0 + t)
    form = derive_closed_form(r - 2)
    factor = 2.0 ** (r - 2)

    def k(t: np.ndarray) -> np.ndarray:
        return factor * eval_closed_form(form, t)

    return k


def coefficient_table(ns: Sequence[int]) -> dict[int, list[int]]:
    return {n: derive_closed_form(n).numerator.integer_coeffs() for n in ns}
