import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalankit.constants import G_FLOAT, quadrant_constant
from catalankit.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    EngineConfig,
    Integrand,
    QuadratureError,
    integrate,
    integrate_1d,
    integrate_qmc,
    integrate_tensor,
)
from catalankit.representations import arctan_over_x, symmetric_kernel_integrand


class TestRule:
    def test_weights(self):
        assert math.isclose(KRONROD_WEIGHTS.sum(), 2.0, abs_tol=1e-15)
        assert math.isclose(GAUSS_WEIGHTS.sum(), 2.0, abs_tol=1e-15)
        assert np.allclose(NODES, -NODES[::-1])

    @pytest.mark.parametrize("k", range(0, 24))
    def test_kronrod_polynomial_exactness(self, k):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert abs(KRONROD_WEIGHTS @ NODES**k - exact) < 1e-14

    @pytest.mark.parametrize("k", range(0, 14))
    def test_gauss_polynomial_exactness(self, k):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert abs(GAUSS_WEIGHTS @ NODES**k - exact) < 1e-14


class Test1D:
    def test_arctan_over_x_unit(self):
        r = integrate_1d(Integrand.scalar(arctan_over_x), 0.0, 1.0, 1e-12)
        assert abs(r.value - G_FLOAT) <= max(1e-12, 3 * r.error_estimate)
        assert r.method == "adaptive" and r.evaluations > 0

    def test_linear(self):
        r = integrate_1d(Integrand.scalar(lambda x: x), 0.0, 1.0)
        assert abs(r.value - 0.5) < 1e-15

    def test_log_singularity(self):
        f = Integrand.scalar(lambda x: -np.log(x) / (1 + x * x), singular=(True, False))
        r = integrate_1d(f, 0.0, 1.0, 1e-12)
        assert abs(r.value - G_FLOAT) < 1e-12

    def test_log_singularity_upper_end(self):
        f = Integrand.scalar(lambda x: -np.log(1 - x) / (1 + (1 - x) ** 2), singular=(False, True))
        r = integrate_1d(f, 0.0, 1.0, 1e-12)
        assert abs(r.value - G_FLOAT) < 1e-12

    def test_both_endpoints_singular_with_breakpoint(self):
        # int_0^1 -ln(x(1-x)) dx = 2, with an irrelevant breakpoint to map through
        f = Integrand.scalar(lambda x: -np.log(x * (1 - x)), breakpoints=(0.3,), singular=(True, True))
        r = integrate_1d(f, 0.0, 1.0, 1e-11)
        assert abs(r.value - 2.0) < 1e-11

    def test_step_with_breakpoints(self):
        step = lambda x: np.where(x < -1, 0.0, np.where(x < 1, 0.5, 1.0))
        r = integrate_1d(Integrand.scalar(step, breakpoints=(-1.0, 1.0)), -2.0, 2.0, 1e-12)
        assert abs(r.value - 2.0) <= 1e-12

    def test_undeclared_jump_still_converges(self):
        f = Integrand.scalar(lambda x: np.where(x < 0.3, 0.0, 1.0))
        r = integrate_1d(f, 0.0, 1.0, 1e-10)
        assert abs(r.value - 0.7) <= 1e-10

    @pytest.mark.filterwarnings("ignore:invalid value")
    def test_nan_raises(self):
        with pytest.raises(QuadratureError):
            integrate_1d(Integrand.scalar(lambda x: np.sqrt(x - 0.5)), 0.0, 1.0)

    def test_eval_cap(self):
        f = Integrand.scalar(lambda x: np.sin(1 / x))
        with pytest.raises(QuadratureError):
            integrate_1d(f, 0.0, 1.0, 1e-12, max_evals=2000)

    def test_roundoff_floor_reported(self):
        # tolerance below what doubles can resolve on a large integral
        f = Integrand.scalar(lambda x: 1e8 + np.cos(x))
        with pytest.raises(QuadratureError):
            integrate_1d(f, 0.0, 10.0, 1e-13)

    def test_preconditions(self):
        f = Integrand.scalar(lambda x: x)
        with pytest.raises(ValueError):
            integrate_1d(f, 1.0, 0.0)
        with pytest.raises(ValueError):
            integrate_1d(f, 0.0, 1.0, 1e-14)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-3, 3), st.floats(0.1, 4), st.integers(0, 9))
    def test_monomials_honest(self, lo, width, k):
        hi = lo + width
        exact = (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
        r = integrate_1d(Integrand.scalar(lambda x: x**k), lo, hi, 1e-11 * max(1, abs(exact)))
        assert abs(r.value - exact) <= max(3 * r.error_estimate, 1e-11 * max(1, abs(exact)))


class TestTensor:
    def test_unit(self):
        r = integrate_tensor(Integrand(2, lambda p: np.ones(len(p))), [(0, 1), (0, 1)])
        assert abs(r.value - 1.0) < 1e-15

    def test_unit_square_kernel(self):
        f = Integrand(2, lambda p: 1 / (1 + (p[:, 0] * p[:, 1]) ** 2))
        r = integrate_tensor(f, [(0, 1), (0, 1)], 1e-10)
        assert abs(r.value - G_FLOAT) <= 1e-10
        assert r.method == "tensor"

    def test_quadrant(self):
        f = Integrand(2, lambda p: np.arctan(p[:, 0]) / (1 + (p[:, 0] * p[:, 1]) ** 2))
        r = integrate_tensor(f, [(0, 1), (0, 1)], 1e-10)
        assert abs(r.value - 0.386996) < 1e-6
        assert abs(r.value - float(quadrant_constant())) <= 1e-10

    def test_three_dim_polynomial(self):
        f = Integrand(3, lambda p: p[:, 0] ** 2 * p[:, 1] * np.exp(p[:, 2]))
        r = integrate_tensor(f, [(0, 1), (0, 2), (-1, 1)], 1e-7)
        exact = (1 / 3) * 2 * (math.e - 1 / math.e)
        assert abs(r.value - exact) <= 1e-7

    def test_breakpoints_per_axis(self):
        step = lambda x: np.where(x < 0.25, 0.0, 1.0)
        f = Integrand(2, lambda p: step(p[:, 0]) * step(p[:, 1]), ((0.25,), (0.25,)))
        r = integrate_tensor(f, [(0, 1), (0, 1)], 1e-10)
        assert abs(r.value - 0.5625) <= 1e-12

    def test_dim_checks(self):
        with pytest.raises(ValueError):
            integrate_tensor(Integrand(4, lambda p: p[:, 0]), [(0, 1)] * 4)
        with pytest.raises(ValueError):
            integrate_tensor(Integrand(3, lambda p: p[:, 0]), [(0, 1)] * 3, 1e-9)
        with pytest.raises(ValueError):
            integrate_tensor(Integrand(2, lambda p: p[:, 0]), [(0, 1)])

    def test_eval_cap(self):
        f = Integrand(2, lambda p: 1 / (1 + (p[:, 0] * p[:, 1]) ** 2))
        with pytest.raises(QuadratureError):
            integrate_tensor(f, [(0, 1), (0, 1)], 1e-10, max_evals=100)


class TestQMC:
    def test_constant_exact(self):
        for seed in (0, 1, 99):
            r = integrate_qmc(Integrand(4, lambda p: np.ones(len(p))), [(0, 1)] * 4, 2**12, seed)
            assert r.value == 1.0 and r.error_estimate == 0.0 and r.seed == seed

    def test_box_volume(self):
        r = integrate_qmc(Integrand(5, lambda p: np.ones(len(p))), [(-1, 1)] * 5, 2**10, 3)
        assert r.value == 32.0

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_bit_reproducible(self, seed):
        f = symmetric_kernel_integrand(4)
        a = integrate_qmc(f, [(0, 1)] * 4, 2**12, seed)
        b = integrate_qmc(f, [(0, 1)] * 4, 2**12, seed)
        assert a == b

    def test_seeds_differ(self):
        f = symmetric_kernel_integrand(4)
        assert integrate_qmc(f, [(0, 1)] * 4, 2**12, 1).value != integrate_qmc(f, [(0, 1)] * 4, 2**12, 2).value

    def test_r4_kernel(self):
        r = integrate_qmc(symmetric_kernel_integrand(4), [(0, 1)] * 4, 2**20, 1)
        assert abs(r.value - G_FLOAT) <= 4 * r.error_estimate
        assert r.error_estimate <= 1e-3

    def test_convergence_trend(self):
        f = symmetric_kernel_integrand(4)
        mean_err = []
        for m in range(10, 15):
            errs = [abs(integrate_qmc(f, [(0, 1)] * 4, 2**m, s).value - G_FLOAT) for s in range(16)]
            mean_err.append(np.mean(errs))
        assert all(b < a for a, b in zip(mean_err, mean_err[1:])), mean_err

    def test_preconditions(self):
        f = Integrand(4, lambda p: p[:, 0])
        with pytest.raises(ValueError):
            integrate_qmc(f, [(0, 1)] * 4, 1000)
        with pytest.raises(ValueError):
            integrate_qmc(f, [(0, 1)] * 4, 2**9)
        with pytest.raises(ValueError):
            integrate_qmc(f, [(0, 1)] * 4, 2**10, randomizations=3)
        with pytest.raises(ValueError):
            integrate_qmc(Integrand(13, lambda p: p[:, 0]), [(0, 1)] * 13, 2**10)


def test_routing():
    cfg = EngineConfig(qmc_samples=2**12)
    one = lambda d: Integrand(d, lambda p: np.ones(len(p)))
    assert integrate(one(1), [(0, 1)], cfg).method == "adaptive"
    assert integrate(one(2), [(0, 1)] * 2, cfg).method == "tensor"
    assert integrate(one(3), [(0, 1)] * 3, cfg).method == "tensor"
    assert integrate(one(4), [(0, 1)] * 4, cfg).method == "qmc"


def test_result_serializes():
    r = integrate_1d(Integrand.scalar(lambda x: x), 0.0, 1.0)
    assert set(r.to_dict()) == {"value", "error_estimate", "evaluations", "method", "seed"}
