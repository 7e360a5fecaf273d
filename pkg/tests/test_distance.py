import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy.special import ellipe

from modules import cmatrix
from modules.catalog import get_entry
from modules.distance import (
    GaugeChoice,
    GaugeKind,
    QuadratureConfig,
    compare,
    density_integrand,
    deviation,
    distance_density,
    distance_pure,
    integrate,
    optimal_gauge_rate,
    pure_integrand,
)
from modules.errors import DimensionMismatchError, ExprSyntaxError, QuadratureError, RequestError
from modules.trajectory import Cell, HamiltonianSpec, Kind, TrajectorySpec, sample

# 2 E(m = -1): ∫_0^π sqrt(1 + sin^2 2t) dt
EX1A_DISTANCE = 2 * float(ellipe(-1.0))


def entry_spec(label, **params):
    entry = get_entry(label)
    spec = entry.trajectory.with_params(params) if params else entry.trajectory
    return spec, entry.hamiltonian


def cfg(t0, t1, **kwargs):
    return QuadratureConfig(t0, t1, **kwargs)


class TestDeviation:
    def test_stationary_commuting_pair_is_zero(self):
        rho = np.diag([0.3, 0.7]).astype(complex)
        h = np.diag([1.0, -1.0]).astype(complex)
        assert not np.any(deviation(rho, np.zeros((2, 2), dtype=complex), h))

    def test_example_1_matrix(self):
        t, beta, lam = 0.6, 0.3, 1.7
        spec, h = entry_spec("ex1", beta=beta, **{"lambda": lam})
        point = sample(spec, t)
        a = deviation(point.value, point.deriv, h.matrix(spec.params))
        c2, s2 = math.cos(2 * t), math.sin(2 * t)
        expected = np.array([
            [-2j * math.cos(t) * math.sin(t), 2j * beta * c2 - 2 * lam * beta * s2],
            [2j * beta * c2 + 2 * lam * beta * s2, 2j * math.sin(t) * math.cos(t)],
        ])
        assert np.allclose(a, expected, atol=1e-14)

    def test_example_2_matrix(self):
        t, beta, lam = 1.1, 0.2, 0.8
        spec, h = entry_spec("ex2", beta=beta, **{"lambda": lam})
        point = sample(spec, t)
        a = deviation(point.value, point.deriv, h.matrix(spec.params))
        c2, s2 = math.cos(2 * t), math.sin(2 * t)
        expected = np.array([
            [-1j * s2, 2j * beta * c2 + lam * c2],
            [2j * beta * c2 - lam * c2, 1j * s2],
        ])
        assert np.allclose(a, expected, atol=1e-14)

    def test_deviation_is_antihermitian_traceless(self):
        spec, h = entry_spec("ex4", beta=0.7)
        for t in np.linspace(-4, 4, 9):
            point = sample(spec, float(t))
            assert cmatrix.is_antihermitian_traceless(deviation(point.value, point.deriv, h.matrix(spec.params)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            deviation(np.eye(2, dtype=complex), np.eye(3, dtype=complex), np.eye(2, dtype=complex))


class TestIntegrands:
    def test_example_1a_levels(self):
        spec, h = entry_spec("ex1")
        for t, expected in [(0, 1), (math.pi / 4, math.sqrt(2)), (math.pi / 2, 1), (3 * math.pi / 4, math.sqrt(2)),
                            (math.pi, 1)]:
            assert density_integrand(spec, h, t) == pytest.approx(expected, abs=1e-9)

    def test_example_3a_peak(self):
        spec, h = entry_spec("ex3")
        assert density_integrand(spec, h, 0.0) == pytest.approx(1.0, abs=1e-9)
        grid = np.linspace(0.6, 0.8, 2001)
        values = [density_integrand(spec, h, float(t)) for t in grid]
        best = int(np.argmax(values))
        assert values[best] == pytest.approx(2 * math.sqrt(3) / 3, abs=1e-6)
        assert grid[best] == pytest.approx(math.sqrt(2) / 2, abs=1e-4)

    def test_example_2_uncoupled_is_constant(self):
        spec, h = entry_spec("ex2", beta=0.0)
        for t in np.linspace(0, math.pi, 7):
            assert density_integrand(spec, h, float(t)) == pytest.approx(1.0, abs=1e-12)

    def test_pure_state_spec_is_converted_for_density_functional(self):
        psi, h = entry_spec("ex1a-psi")
        rho, _ = entry_spec("ex1")
        for t in (0.2, 1.4, 2.9):
            assert density_integrand(psi, h, t) == pytest.approx(density_integrand(rho, h, t), abs=1e-12)

    def test_pure_integrand_values(self):
        psi, h = entry_spec("ex1a-psi")
        assert pure_integrand(psi, h, GaugeChoice.optimal(), math.pi / 4) == pytest.approx(math.sqrt(2))
        assert pure_integrand(psi, h, GaugeChoice.zero(), 0.0) == pytest.approx(math.sqrt(2))
        psi3, h3 = entry_spec("ex3a-psi")
        assert pure_integrand(psi3, h3, GaugeChoice.optimal(), 0.0) == pytest.approx(1.0)

    def test_pure_integrand_rejects_density_spec(self):
        spec, h = entry_spec("ex1")
        with pytest.raises(RequestError):
            pure_integrand(spec, h, GaugeChoice.optimal(), 0.0)


class TestOptimalGauge:
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_closed_forms(self, lam):
        rng = np.random.default_rng(7)
        psi1, h1 = entry_spec("ex1a-psi", **{"lambda": lam})
        psi3, h3 = entry_spec("ex3a-psi", **{"lambda": lam})
        for t in rng.uniform(0, math.pi, 100):
            point = sample(psi1, float(t))
            rate = optimal_gauge_rate(point.value, point.deriv, h1.matrix(psi1.params))
            assert rate == pytest.approx(-lam * math.cos(2 * t), abs=1e-12)
        for t in rng.uniform(-4, 4, 100):
            point = sample(psi3, float(t))
            rate = optimal_gauge_rate(point.value, point.deriv, h3.matrix(psi3.params))
            assert rate == pytest.approx(lam * (t * t - 1) / (t * t + 1), abs=1e-12)

    def test_zero_hamiltonian_real_state(self):
        psi = np.array([math.cos(0.3), math.sin(0.3)], dtype=complex)
        psi_dot = np.array([-math.sin(0.3), math.cos(0.3)], dtype=complex)
        assert optimal_gauge_rate(psi, psi_dot, np.zeros((2, 2), dtype=complex)) == 0.0

    def test_optimal_is_a_minimum(self):
        psi, h = entry_spec("ex1a-psi")
        best = pure_integrand(psi, h, GaugeChoice.optimal(), 0.9)
        for rate in ("0", "1", "-1", "lambda*cos(2*t)"):
            assert pure_integrand(psi, h, GaugeChoice.fixed(rate), 0.9) >= best - 1e-15

    def test_optimal_rate_beats_nearby_rates_on_random_draws(self):
        rng = np.random.default_rng(500)

        def residual(psi, psi_dot, h, rate):
            return cmatrix.vector_norm(1j * psi_dot - (rate * psi + h @ psi))

        for _ in range(500):
            n = int(rng.integers(2, 5))
            psi = rng.normal(size=n) + 1j * rng.normal(size=n)
            psi /= np.linalg.norm(psi)
            psi_dot = rng.normal(size=n) + 1j * rng.normal(size=n)
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            h = 0.5 * (m + m.conj().T)
            rate = optimal_gauge_rate(psi, psi_dot, h)
            best = residual(psi, psi_dot, h, rate)
            for delta in (1e-3, -1e-3, 1.0, -1.0):
                assert best <= residual(psi, psi_dot, h, rate + delta) + 1e-12


class TestGaugeChoice:
    def test_from_text(self):
        assert GaugeChoice.from_text("optimal").kind is GaugeKind.OPTIMAL
        assert GaugeChoice.from_text("zero").kind is GaugeKind.ZERO
        fixed = GaugeChoice.from_text("expr:-lambda*cos(2*t)")
        assert fixed.kind is GaugeKind.FIXED and fixed.rate is not None

    def test_unknown(self):
        with pytest.raises(RequestError):
            GaugeChoice.from_text("best")

    def test_bad_expression(self):
        with pytest.raises(ExprSyntaxError):
            GaugeChoice.from_text("expr:cos(")

    def test_fixed_needs_rate(self):
        with pytest.raises(RequestError):
            GaugeChoice(GaugeKind.FIXED)


class TestIntegrate:
    def test_constant_is_exact(self):
        result = integrate(lambda t: 1.0, cfg(0.0, 1.0))
        assert result.value == 1.0
        assert result.error_estimate == 0.0
        assert result.evaluations > 3

    def test_kinked_integrand(self):
        result = integrate(lambda t: abs(math.sin(2 * t)), cfg(0.0, 4 * math.pi))
        assert result.value == pytest.approx(8.0, abs=1e-6)
        assert result.error_estimate <= 1e-9

    def test_nodes_aliased_to_zero_are_refined(self):
        # every node of the first two levels is a zero of sin 4t
        result = integrate(lambda t: abs(math.sin(4 * t)), cfg(0.0, math.pi))
        assert result.value == pytest.approx(2.0, abs=1e-6)

    def test_smooth_against_oracle(self):
        f = lambda t: math.sqrt(1 + math.sin(2 * t) ** 2)
        assert integrate(f, cfg(0.0, math.pi)).value == pytest.approx(EX1A_DISTANCE, abs=1e-8)

    def test_max_depth(self):
        with pytest.raises(QuadratureError) as info:
            integrate(math.sqrt, cfg(0.0, 1.0, abs_tol=1e-15, max_depth=3, min_depth=0))
        a, b = info.value.interval
        assert 0.0 <= a < b <= 1.0

    def test_non_finite_sample(self):
        with pytest.raises(QuadratureError):
            integrate(lambda t: math.inf if t > 0.5 else 0.0, cfg(0.0, 1.0))

    @pytest.mark.parametrize("kwargs", [
        {"t0": 1.0, "t1": 0.0},
        {"t0": 0.0, "t1": 1.0, "abs_tol": 0.0},
        {"t0": 0.0, "t1": 1.0, "max_depth": 3, "min_depth": 5},
    ])
    def test_invalid_config(self, kwargs):
        with pytest.raises(RequestError):
            QuadratureConfig(**kwargs)


class TestDistances:
    @pytest.mark.parametrize("lam", [0.0, 1.0, 3.0])
    def test_example_1c(self, lam):
        spec, h = entry_spec("ex1", beta=0.0, **{"lambda": lam})
        spec = spec.with_params({}, interval=(0.0, 4 * math.pi))
        report = distance_density(spec, h, cfg(0.0, 4 * math.pi))
        assert report.distance == pytest.approx(8.0, abs=1e-6)

    def test_example_2_uncoupled(self):
        spec, h = entry_spec("ex2", beta=0.0)
        report = distance_density(spec, h, cfg(0.0, 2 * math.pi))
        assert report.distance == pytest.approx(2 * math.pi, abs=1e-6)

    def test_example_1a_against_elliptic_oracle(self):
        spec, h = entry_spec("ex1")
        report = distance_density(spec, h, cfg(0.0, math.pi))
        assert report.distance == pytest.approx(EX1A_DISTANCE, abs=1e-8)
        assert EX1A_DISTANCE == pytest.approx(3.8201977890277124, abs=1e-12)

    def test_example_3a_against_scipy_quad(self):
        spec, h = entry_spec("ex3")
        expected, _ = sp_integrate.quad(lambda t: math.sqrt(1 + 4 * t * t) / (1 + t * t), -4, 4, epsabs=1e-12)
        assert distance_density(spec, h, cfg(-4.0, 4.0)).distance == pytest.approx(expected, abs=1e-8)

    def test_stationary_state_has_zero_distance(self):
        cells = tuple(Cell.from_text(x) for x in ("0.25", "0", "0", "0.75"))
        spec = TrajectorySpec(Kind.DENSITY, 2, cells, {"lambda": 2.0}, interval=(-3.0, 5.0))
        h = HamiltonianSpec(np.diag([1.0, -1.0]), scale="lambda")
        assert distance_density(spec, h, cfg(-3.0, 5.0)).distance == pytest.approx(0.0, abs=1e-10)

    def test_curve_is_reported(self):
        spec, h = entry_spec("ex1")
        report = distance_density(spec, h, cfg(0.0, math.pi), curve_samples=9)
        ts = [t for t, _ in report.curve]
        assert ts == pytest.approx(list(np.linspace(0.0, math.pi, 9)))
        assert report.curve[2][1] == pytest.approx(math.sqrt(2))

    def test_pure_functional_agrees_with_density(self):
        psi, h = entry_spec("ex1a-psi")
        rho, _ = entry_spec("ex1")
        pure = distance_pure(psi, h, cfg(0.0, math.pi))
        density = distance_density(rho, h, cfg(0.0, math.pi))
        assert pure.distance == pytest.approx(density.distance, abs=1e-8)

    def test_displayed_gauge_equals_optimal(self):
        psi, h = entry_spec("ex1a-psi")
        optimal = distance_pure(psi, h, cfg(0.0, math.pi), GaugeChoice.optimal())
        fixed = distance_pure(psi, h, cfg(0.0, math.pi), GaugeChoice.fixed("-lambda*cos(2*t)"))
        assert fixed.distance == pytest.approx(optimal.distance, abs=1e-10)


class TestCompare:
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("pure_label,density_label,beta,interval", [
        ("ex1a-psi", "ex1", 0.5, (0.0, math.pi)),
        ("ex3a-psi", "ex3", 1.0, (-4.0, 4.0)),
    ])
    def test_pure_state_equivalence(self, lam, pure_label, density_label, beta, interval):
        psi, h = entry_spec(pure_label, **{"lambda": lam})
        rho, _ = entry_spec(density_label, beta=beta, **{"lambda": lam})
        result = compare(psi, rho, h, cfg(*interval), 1000)
        assert result.max_pointwise_gap <= 1e-9
        assert result.distance_gap <= 1e-8

    def test_wrong_gauge_is_detected(self):
        psi, h = entry_spec("ex1a-psi")
        rho, _ = entry_spec("ex1")
        result = compare(psi, rho, h, cfg(0.0, math.pi), 200, GaugeChoice.fixed("lambda*cos(2*t)"))
        assert result.max_pointwise_gap > 1e-3
        assert result.pure.distance > result.density.distance

    def test_stationary_state_has_no_gap(self):
        cells = (Cell.from_text("1"), Cell.from_text("0"))
        psi = TrajectorySpec(Kind.PURE_STATE, 2, cells, {})
        h = HamiltonianSpec.zero(2)
        result = compare(psi, psi, h, cfg(0.0, 1.0), 50)
        assert result.max_pointwise_gap == 0.0
        assert result.distance_gap == 0.0

    def test_needs_two_samples(self):
        psi, h = entry_spec("ex1a-psi")
        with pytest.raises(RequestError):
            compare(psi, psi, h, cfg(0.0, 1.0), 1)
