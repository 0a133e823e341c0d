"""Integration engines.

* ``integrate_1d``: globally adaptive Gauss-Kronrod (7/15) with panels split at
  declared breakpoints, and an endpoint substitution for integrable endpoint
  singularities such as log(x) at 0.
* ``integrate_tensor``: iterated adaptive quadrature for boxes of dimension 2-3.
* ``integrate_qmc``: randomized Sobol' points with independent scramblings; the
  spread over scramblings gives the standard error.

Integrands take an ``(n, dim)`` array of points and return ``n`` values.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

Box = Sequence[tuple[float, float]]

_EPS = np.finfo(float).eps

# Kronrod 15-point abscissae (positive half) and weights, with the embedded
# 7-point Gauss weights at the even-indexed Kronrod nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point layout: -x0..-x6, 0, x6..x0
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]


class QuadratureError(RuntimeError):
    """Non-convergence, evaluation-cap overrun, or an invalid integrand value."""


@dataclass(frozen=True)
class Integrand:
    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[tuple[float, ...], ...] = ()
    singular_endpoints: tuple[tuple[bool, bool], ...] = ()

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if not self.breakpoints:
            object.__setattr__(self, "breakpoints", ((),) * self.dim)
        if not self.singular_endpoints:
            object.__setattr__(self, "singular_endpoints", ((False, False),) * self.dim)
        if len(self.breakpoints) != self.dim or len(self.singular_endpoints) != self.dim:
            raise ValueError("per-axis metadata must have one entry per dimension")
        object.__setattr__(
            self, "breakpoints", tuple(tuple(sorted(b)) for b in self.breakpoints)
        )

    @classmethod
    def scalar(
        cls,
        f: Callable[[np.ndarray], np.ndarray],
        breakpoints: Sequence[float] = (),
        singular: tuple[bool, bool] = (False, False),
    ) -> "Integrand":
        """Wrap a vectorized function of one variable."""
        return cls(1, lambda pts: f(pts[:, 0]), (tuple(breakpoints),), (singular,))

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(pts), dtype=float)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    method: str
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EngineConfig:
    """Engine defaults shared by the registry and the CLI."""

    tol_1d: float = 1e-9
    tol_2d: float = 1e-9
    tol_3d: float = 1e-6
    qmc_samples: int = 2**20
    randomizations: int = 16
    seed: int = 1
    max_evals_1d: int = 10**7
    max_evals_tensor: int = 10**8

    def tol_for(self, dim: int) -> float:
        return {1: self.tol_1d, 2: self.tol_2d, 3: self.tol_3d}[dim]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class _Counter:
    cap: int
    count: int = 0

    def add(self, n: int) -> None:
        self.count += n
        if self.count > self.cap:
            raise QuadratureError(f"evaluation cap {self.cap} exceeded")


@dataclass(order=True)
class _Panel:
    neg_err: float
    lo: float = field(compare=False)
    hi: float = field(compare=False)
    value: float = field(compare=False)
    err: float = field(compare=False)
    final: bool = field(compare=False, default=False)


def _gk15(g: Callable[[np.ndarray], np.ndarray], panels: list[tuple[float, float]],
          counter: _Counter) -> list[tuple[float, float, bool]]:
    """Kronrod value, error estimate, and roundoff-limited flag for each panel."""
    lo = np.array([p[0] for p in panels])
    hi = np.array([p[1] for p in panels])
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * NODES[None, :]
    counter.add(x.size)
    fx = np.asarray(g(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise QuadratureError(f"integrand is not finite at x={bad!r}")
    kron = fx @ KRONROD_WEIGHTS
    gauss = fx @ GAUSS_WEIGHTS
    mean = kron / 2
    resabs = np.abs(fx) @ KRONROD_WEIGHTS * np.abs(half)
    resasc = np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS * np.abs(half)
    err = np.abs((kron - gauss) * half)
    out = []
    for i in range(len(panels)):
        e = err[i]
        if resasc[i] != 0 and e != 0:
            e = resasc[i] * min(1.0, (200 * e / resasc[i]) ** 1.5)
        floor = 50 * _EPS * resabs[i]
        limited = e <= floor
        out.append((kron[i] * half[i], max(e, floor), bool(limited)))
    return out


def _adaptive(
    g: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    breakpoints: Sequence[float],
    tol: float,
    counter: _Counter,
) -> tuple[float, float]:
    cuts = [lo] + [b for b in breakpoints if lo < b < hi] + [hi]
    initial = list(zip(cuts[:-1], cuts[1:]))
    heap: list[_Panel] = []
    for (a, b), (v, e, lim) in zip(initial, _gk15(g, initial, counter)):
        heapq.heappush(heap, _Panel(-e, a, b, v, e, lim))
    done: list[_Panel] = []
    total_err = sum(p.err for p in heap)
    while total_err > tol:
        worst = None
        while heap:
            cand = heapq.heappop(heap)
            mid = 0.5 * (cand.lo + cand.hi)
            if cand.final or not (cand.lo < mid < cand.hi):
                done.append(cand)
                continue
            worst = cand
            break
        if worst is None:
            raise QuadratureError(
                f"roundoff limits the error estimate to {total_err:.3e} > tol={tol:.3e}"
            )
        mid = 0.5 * (worst.lo + worst.hi)
        halves = [(worst.lo, mid), (mid, worst.hi)]
        for (a, b), (v, e, lim) in zip(halves, _gk15(g, halves, counter)):
            heapq.heappush(heap, _Panel(-e, a, b, v, e, lim))
        total_err = math.fsum(p.err for p in heap) + math.fsum(p.err for p in done)
    panels = heap + done
    # fixed summation order keeps results independent of heap layout
    panels.sort(key=lambda p: p.lo)
    return math.fsum(p.value for p in panels), math.fsum(p.err for p in panels)


def _endpoint_map(lo: float, hi: float, singular: tuple[bool, bool]):
    """Substitution x = phi(u) on [0, 1] that flattens endpoint singularities.

    Returns (phi, dphi, phi_inverse) or None when no endpoint is flagged.
    """
    s_lo, s_hi = singular
    w = hi - lo
    if not (s_lo or s_hi):
        return None
    if s_lo and s_hi:
        phi = lambda u: lo + w * u * u * (3 - 2 * u)
        dphi = lambda u: 6 * w * u * (1 - u)

        def inv(x: float) -> float:
            return brentq(lambda u: phi(u) - x, 0.0, 1.0, xtol=1e-15)

        return phi, dphi, inv
    if s_lo:
        return (lambda u: lo + w * u * u, lambda u: 2 * w * u,
                lambda x: math.sqrt((x - lo) / w))
    return (lambda u: hi - w * (1 - u) ** 2, lambda u: 2 * w * (1 - u),
            lambda x: 1 - math.sqrt((hi - x) / w))


def _integrate_line(
    g: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    breakpoints: Sequence[float],
    singular: tuple[bool, bool],
    tol: float,
    counter: _Counter,
) -> tuple[float, float]:
    mapping = _endpoint_map(lo, hi, singular)
    if mapping is None:
        return _adaptive(g, lo, hi, breakpoints, tol, counter)
    phi, dphi, inv = mapping
    mapped = [inv(b) for b in breakpoints if lo < b < hi]
    return _adaptive(lambda u: g(phi(u)) * dphi(u), 0.0, 1.0, mapped, tol, counter)


def integrate_1d(f: Integrand, lo: float, hi: float, tol: float = 1e-9,
                 max_evals: int = 10**7) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of a one-dimensional integrand.

    Raises QuadratureError if the error estimate cannot be brought below
    ``tol`` within ``max_evals`` evaluations.
    """
    if f.dim != 1:
        raise ValueError("integrate_1d needs a one-dimensional integrand")
    if not lo < hi:
        raise ValueError("need lo < hi")
    if tol < 1e-13:
        raise ValueError("tol must be at least 1e-13")
    counter = _Counter(max_evals)
    value, err = _integrate_line(
        lambda x: f(x[:, None]), lo, hi, f.breakpoints[0], f.singular_endpoints[0], tol, counter
    )
    return QuadratureResult(value, err, counter.count, "adaptive")


_TENSOR_MIN_TOL = {2: 1e-10, 3: 1e-7}


def integrate_tensor(f: Integrand, box: Box, tol: float = 1e-9,
                     max_evals: int = 10**8) -> QuadratureResult:
    """Iterated adaptive quadrature over a 2- or 3-dimensional box.

    Axis 0 is outermost. Each outer node integrates the remaining axes to
    tol / (2 * outer_length); the reported error is the outer estimate plus
    outer_length times the largest inner estimate.
    """
    if f.dim not in (2, 3):
        raise ValueError("integrate_tensor handles dimensions 2 and 3")
    if len(box) != f.dim:
        raise ValueError("box dimension does not match integrand")
    if tol < _TENSOR_MIN_TOL[f.dim]:
        raise ValueError(f"tol must be at least {_TENSOR_MIN_TOL[f.dim]} in dimension {f.dim}")
    for lo, hi in box:
        if not lo < hi:
            raise ValueError("need lo < hi on every axis")
    counter = _Counter(max_evals)
    value, err = _iterate(
        f, [tuple(map(float, b)) for b in box], list(f.breakpoints),
        list(f.singular_endpoints), tol, counter,
    )
    return QuadratureResult(value, err, counter.count, "tensor")


def _iterate(func, box, bps, sing, tol, counter) -> tuple[float, float]:
    if len(box) == 1:
        return _integrate_line(
            lambda x: func(x[:, None]), box[0][0], box[0][1], bps[0], sing[0], tol, counter
        )
    lo, hi = box[0]
    length = hi - lo
    inner_tol = tol / (2 * length)
    worst_inner = [0.0]

    def outer(xs: np.ndarray) -> np.ndarray:
        out = np.empty(len(xs))
        for i, x0 in enumerate(xs):
            def inner(pts: np.ndarray, x0=x0) -> np.ndarray:
                full = np.empty((len(pts), pts.shape[1] + 1))
                full[:, 0] = x0
                full[:, 1:] = pts
                return func(full)

            v, e = _iterate(inner, box[1:], bps[1:], sing[1:], inner_tol, counter)
            out[i] = v
            worst_inner[0] = max(worst_inner[0], e)
        return out

    # the outer loop counts inner evaluations only
    outer_counter = _Counter(10**12)
    value, err = _integrate_line(outer, lo, hi, bps[0], sing[0], tol / 2, outer_counter)
    return value, err + length * worst_inner[0]


def _check_power_of_two(n: int) -> int:
    m = n.bit_length() - 1
    if n < 1 or 1 << m != n:
        raise ValueError(f"{n} is not a power of two")
    return m


def integrate_qmc(f: Integrand, box: Box, n_samples: int = 2**20, seed: int = 1,
                  randomizations: int = 16, chunk: int = 1 << 16) -> QuadratureResult:
    """Randomized quasi-Monte Carlo with independently scrambled Sobol' sets.

    ``n_samples`` is the total over all randomizations; each scrambling uses
    ``n_samples // randomizations`` points, which must be a power of two.
    The value is the mean over scramblings and the error estimate is its
    standard error. Results are bit-reproducible for fixed inputs.
    """
    if f.dim > 12:
        raise ValueError("dimension cap is 12")
    if len(box) != f.dim:
        raise ValueError("box dimension does not match integrand")
    if n_samples < 2**10:
        raise ValueError("n_samples must be at least 2**10")
    _check_power_of_two(n_samples)
    if randomizations < 2 or n_samples % randomizations:
        raise ValueError("randomizations must divide n_samples and be at least 2")
    per_rep = n_samples // randomizations
    m = _check_power_of_two(per_rep)
    lo = np.array([b[0] for b in box], dtype=float)
    width = np.array([b[1] - b[0] for b in box], dtype=float)
    volume = float(np.prod(width))
    children = np.random.SeedSequence(seed).spawn(randomizations)
    estimates = np.empty(randomizations)
    for r, child in enumerate(children):
        sampler = qmc.Sobol(f.dim, scramble=True, seed=np.random.default_rng(child))
        u = sampler.random_base2(m)
        sums = []
        for start in range(0, per_rep, chunk):
            vals = f(lo + width * u[start:start + chunk])
            if not np.all(np.isfinite(vals)):
                raise QuadratureError("integrand is not finite at a sample point")
            sums.append(float(np.sum(vals)))
        estimates[r] = volume * math.fsum(sums) / per_rep
    value = math.fsum(estimates) / randomizations
    spread = math.fsum((estimates - value) ** 2) / (randomizations - 1)
    stderr = math.sqrt(spread / randomizations)
    return QuadratureResult(value, stderr, n_samples, "qmc", seed)


def integrate(f: Integrand, box: Box, config: EngineConfig | None = None,
              tol: float | None = None, n_samples: int | None = None,
              seed: int | None = None) -> QuadratureResult:
    """Route by dimension: adaptive for 1, tensor for 2-3, QMC from 4 up."""
    config = config or EngineConfig()
    if f.dim == 1:
        return integrate_1d(f, box[0][0], box[0][1], tol or config.tol_1d, config.max_evals_1d)
    if f.dim <= 3:
        return integrate_tensor(f, box, tol or config.tol_for(f.dim), config.max_evals_tensor)
    return integrate_qmc(
        f, box, n_samples or config.qmc_samples,
        config.seed if seed is None else seed, config.randomizations,
    )
