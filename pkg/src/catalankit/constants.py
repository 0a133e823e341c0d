"""High-precision reference constants.

Every numerical check in the package compares against the values here.
Catalan's constant and Apéry's constant are recomputed from series with
explicit remainder bounds; the stored digit strings must agree with those
recomputations to 1e-28.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import mpmath

WORK_DIGITS = 70
EXPOSED_DIGITS = 30
# partial sums above this index switch from direct summation to trigamma
DIRECT_SUM_LIMIT = 200_000


@dataclass(frozen=True)
class RefConstant:
    """A decimal constant stored as an integer digit string and a power-of-ten exponent."""

    name: str
    digits: str
    exponent: int
    source: str

    def __post_init__(self) -> None:
        if not self.digits.lstrip("-").isdigit():
            raise ValueError(f"digit string must be an integer, got {self.digits!r}")

    @classmethod
    def from_string(cls, name: str, text: str, source: str) -> "RefConstant":
        sign, digits, exponent = Decimal(text).as_tuple()
        body = "".join(map(str, digits))
        return cls(name, ("-" if sign else "") + body, int(exponent), source)

    @property
    def value(self) -> Decimal:
        sign = 1 if self.digits.startswith("-") else 0
        body = tuple(int(c) for c in self.digits.lstrip("-"))
        return Decimal((sign, body, self.exponent))

    def __float__(self) -> float:
        # Decimal -> float conversion is correctly rounded
        return float(self.value)

    def __str__(self) -> str:
        return str(self.value)

    def significant_digits(self) -> int:
        return len(self.digits.lstrip("-").lstrip("0"))


CATALAN = RefConstant.from_string(
    "G",
    "0.91596559417721901505460351493238411077414937428167213426650",
    "alternating series sum (-1)^n/(2n+1)^2; cross-checked by catalan_reference()",
)
ZETA3 = RefConstant.from_string(
    "zeta3",
    "1.20205690315959428539973816151144999076498629234049888179227",
    "Apery's constant; cross-checked by zeta3_reference()",
)
PI = RefConstant.from_string(
    "pi",
    "3.14159265358979323846264338327950288419716939937510582097494",
    "circle constant",
)

G_FLOAT = float(CATALAN)
ZETA3_FLOAT = float(ZETA3)


def catalan_partial_sum(n: int) -> Decimal:
    """Return sum_{k=0}^{n} (-1)^k / (2k+1)^2 to at least 60 significant digits."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= DIRECT_SUM_LIMIT:
        return _partial_sum_direct(n)
    return _partial_sum_trigamma(n)


def _partial_sum_direct(n: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        pos = Decimal(0)
        neg = Decimal(0)
        one = Decimal(1)
        for k in range(0, n + 1, 2):
            pos += one / ((2 * k + 1) ** 2)
        for k in range(1, n + 1, 2):
            neg += one / ((2 * k + 1) ** 2)
        return +(pos - neg)


def _partial_sum_trigamma(n: int) -> Decimal:
    # Pair k=2j and k=2j+1: sum_{j>=J} 1/(4j+c)^2 = psi1(J + c/4)/16.
    with mpmath.workdps(WORK_DIGITS):
        full_pairs = (n + 1) // 2
        j = mpmath.mpf(full_pairs)
        total = (
            mpmath.psi(1, mpmath.mpf(1) / 4)
            - mpmath.psi(1, j + mpmath.mpf(1) / 4)
            - mpmath.psi(1, mpmath.mpf(3) / 4)
            + mpmath.psi(1, j + mpmath.mpf(3) / 4)
        ) / 16
        if n % 2 == 0:
            total += mpmath.mpf(1) / (2 * n + 1) ** 2
        return Decimal(mpmath.nstr(total, WORK_DIGITS, strip_zeros=False))


def alternating_remainder_bound(n: int) -> Decimal:
    """Bound on |G - catalan_partial_sum(n)|: the first omitted term 1/(2n+3)^2."""
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        return Decimal(1) / (2 * n + 3) ** 2


def crvz_terms_needed(digits: int) -> int:
    """Terms of the accelerated sum needed so that 2/(3+sqrt 8)^n < 10^-digits."""
    rate = math.log10(3 + math.sqrt(8))
    return math.ceil((digits + math.log10(2)) / rate)


def crvz_error_bound(n_terms: int) -> Decimal:
    """Relative error bound 2/(3+sqrt 8)^n of the moment-sequence acceleration."""
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        return 2 / (3 + Decimal(8).sqrt()) ** n_terms


@lru_cache(maxsize=None)
def catalan_reference(n_terms: int | None = None) -> Decimal:
    """Catalan's constant by accelerated alternating summation.

    The coefficients 1/(2k+1)^2 are moments of the positive weight
    -ln(t)/(4 sqrt t) on [0, 1], so the Cohen-Rodriguez Villegas-Zagier
    Chebyshev acceleration applies with relative error at most
    2/(3+sqrt 8)^n_terms. The default term count makes that bound smaller
    than 1e-65.
    """
    if n_terms is None:
        n_terms = crvz_terms_needed(WORK_DIGITS - 5)
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS + 10
        d = (3 + Decimal(8).sqrt()) ** n_terms
        d = (d + 1 / d) / 2
        b = Fraction(-1)
        c = -d
        s = Decimal(0)
        for k in range(n_terms):
            bk = Decimal(b.numerator) / Decimal(b.denominator)
            c = bk - c
            s += c / Decimal((2 * k + 1) ** 2)
            b = b * (k + n_terms) * (k - n_terms) / ((Fraction(2 * k + 1, 2)) * (k + 1))
        result = s / d
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS - 5
        return +result


def zeta3_terms_needed(digits: int) -> int:
    # terms 5/(2 n^3 C(2n,n)) shrink by about 4 per step
    return math.ceil(digits / math.log10(4)) + 1


@lru_cache(maxsize=None)
def zeta3_reference(n_terms: int | None = None) -> Decimal:
    """zeta(3) = (5/2) sum_{n>=1} (-1)^(n+1) / (n^3 binom(2n, n)).

    Terms decrease monotonically, so the truncation error is below the first
    omitted term; see :func:`zeta3_remainder_bound`.
    """
    if n_terms is None:
        n_terms = zeta3_terms_needed(WORK_DIGITS)
    total = Fraction(0)
    for n in range(1, n_terms + 1):
        total += Fraction((-1) ** (n + 1), n**3 * math.comb(2 * n, n))
    total *= Fraction(5, 2)
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS - 5
        return Decimal(total.numerator) / Decimal(total.denominator)


def zeta3_remainder_bound(n_terms: int) -> Decimal:
    n = n_terms + 1
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS
        return Decimal(5) / (2 * n**3 * math.comb(2 * n, n))


def quadrant_constant() -> Decimal:
    """pi*G/2 - (7/8) zeta(3), the first-quadrant value of the arctan side integral."""
    with localcontext() as ctx:
        ctx.prec = WORK_DIGITS - 5
        return PI.value * catalan_reference() / 2 - Decimal(7) / 8 * zeta3_reference()


def reference_string(digits: int = EXPOSED_DIGITS) -> str:
    """Catalan's constant rounded to ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        return str(+CATALAN.value)
