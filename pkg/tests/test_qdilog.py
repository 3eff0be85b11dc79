"""Identity and strategy tests for the dilogarithm evaluator."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qteich.errors import (
    ContinuationDepthExceeded,
    HalfPlaneViolation,
    ParameterError,
    PoleHit,
    PoleProximity,
    QuadratureDivergence,
    RegimeViolation,
    SectorBoundary,
    StripViolation,
)
from qteich.params import ModularParameter
from qteich.qdilog import (
    PoleIndex,
    PoleZeroKind,
    eb,
    eb_asymptotic,
    eb_integral,
    eb_many,
    eb_product,
    inversion_constant,
    nearest_pole_zero,
    pole_zero_location,
    theta,
)
from qteich.quadrature import QuadratureConfig

P1 = ModularParameter(1.0)
P12 = ModularParameter(1.2)
PC = ModularParameter(cmath.exp(1j * math.pi / 6))


def strip_points(p, count, seed, frac=0.75, re_max=3.0):
    rng = np.random.default_rng(seed)
    re = rng.uniform(-re_max, re_max, count)
    im = rng.uniform(-frac, frac, count) * p.strip_half_width
    return re + 1j * im


class TestOracleValues:
    def test_origin_value_b1(self):
        # The contour passes above the third-order pole of the integrand at
        # w = 0; its half-residue fixes value exp(i pi (b^2 + b^-2) / 24),
        # an independently derived constant frozen here as the branch oracle.
        assert abs(eb_integral(0.0, P1) - cmath.exp(1j * math.pi / 12)) < 1e-10

    def test_origin_value_follows_parameter(self):
        for p in (P12, ModularParameter(0.7)):
            b2 = p.b * p.b
            expected = cmath.exp(1j * math.pi * (b2 + 1.0 / b2) / 24.0)
            assert abs(eb_integral(0.0, p) - expected) < 1e-10

    def test_origin_squared_matches_inversion_constant(self):
        # Squaring the origin value must reproduce the inversion constant.
        u = eb_integral(0.0, P1)
        assert abs(u * u / inversion_constant(P1) - 1.0) < 1e-10


class TestFunctionalEquations:
    @pytest.mark.parametrize("p", [P1, P12], ids=["b=1", "b=1.2"])
    def test_inversion(self, p):
        z = strip_points(p, 100, seed=11)
        vals = eb_many(z, p)
        vals_neg = eb_many(-z, p)
        target = np.exp(1j * np.pi * z * z) * inversion_constant(p)
        resid = np.abs(vals * vals_neg - target) / (1.0 + np.abs(target))
        assert np.max(resid) < 1e-8

    @pytest.mark.parametrize("p", [P1, P12, PC], ids=["b=1", "b=1.2", "unit-circle"])
    def test_shift_both_directions(self, p):
        z = strip_points(p, 40, seed=12, frac=0.3, re_max=2.0)
        for w in (p.b, 1.0 / p.b):
            lower = eb_many(z - 0.5j * w, p)
            upper = eb_many(z + 0.5j * w, p)
            rhs = (1.0 + np.exp(2.0 * np.pi * w * z)) * upper
            scale = np.abs(lower) + np.abs(rhs)
            assert np.max(np.abs(lower - rhs) / scale) < 1e-9

    @pytest.mark.parametrize("p", [P1, P12, PC], ids=["b=1", "b=1.2", "unit-circle"])
    def test_unitarity(self, p):
        assert p.unitary_regime
        z = strip_points(p, 50, seed=13)
        vals = eb_many(z, p)
        dual = eb_many(np.conj(z), p)
        assert np.max(np.abs(np.conj(vals) * dual - 1.0)) < 1e-10

    def test_parameter_inversion_symmetry(self):
        z = strip_points(P12, 50, seed=14)
        a = eb_many(z, P12)
        bvals = eb_many(z, P12.inverse())
        assert np.max(np.abs(a - bvals) / (1.0 + np.abs(a))) < 1e-10

    def test_continuation_consistent_across_band(self):
        # One functional-equation step applied by hand must agree with the
        # dispatcher's automatic continuation for points outside the strip.
        p = P1
        z = 0.3 + 2.7j
        direct = eb(z, p, strategy="integral")
        stepped = eb(z - 1j * p.b, p, strategy="integral") / (
            1.0 + cmath.exp(2.0 * math.pi * p.b * (z - 0.5j * p.b))
        )
        assert abs(direct - stepped) / abs(direct) < 1e-9


class TestStrategies:
    def test_integral_vs_product_unit_circle(self):
        z = strip_points(PC, 50, seed=15)
        ints = eb_many(z, PC)
        prods = np.array([eb_product(zz, PC)[0] for zz in z])
        assert np.max(np.abs(ints - prods) / (1.0 + np.abs(prods))) < 1e-8

    def test_product_regime_rejected_for_real_b(self):
        with pytest.raises(RegimeViolation):
            eb_product(0.1, P12)

    def test_product_reports_truncation_bound(self):
        val, bound = eb_product(0.2 + 0.1j, PC)
        assert bound < 1e-12
        assert abs(val - eb(0.2 + 0.1j, PC, strategy="integral")) < 1e-8

    def test_auto_strategy_dispatch(self):
        assert abs(eb(0.4, PC) - eb(0.4, PC, strategy="product")) == 0.0
        assert abs(eb(0.4, P1) - eb(0.4, P1, strategy="integral")) == 0.0

    def test_scalar_matches_vector_path(self):
        # Batch evaluation picks its truncation radius from the batch-wide
        # worst point, so scalar and batch values agree only to quadrature
        # accuracy, not bit-for-bit.
        z = strip_points(P1, 10, seed=16)
        many = eb_many(z, P1)
        for zz, v in zip(z, many):
            assert abs(eb(complex(zz), P1) - v) / (1.0 + abs(v)) < 1e-12


class TestPolesAndZeros:
    def test_pole_zero_locations(self):
        p = P12
        idx = PoleIndex(1, 2, PoleZeroKind.POLE)
        loc = pole_zero_location(idx, p)
        assert abs(loc - (p.c_b + 1j * (1 * p.b + 2 / p.b))) < 1e-15
        idx0 = PoleIndex(0, 0, PoleZeroKind.ZERO)
        assert abs(pole_zero_location(idx0, p) + p.c_b) < 1e-15

    def test_nearest_lattice_point_identification(self):
        p = P12
        for m, n, kind in [(0, 0, PoleZeroKind.POLE), (2, 1, PoleZeroKind.ZERO)]:
            z = pole_zero_location(PoleIndex(m, n, kind), p) + 1e-4 + 1e-4j
            idx, dist = nearest_pole_zero(z, p)
            assert (idx.m, idx.n, idx.kind) == (m, n, kind)
            assert abs(dist - abs(1e-4 + 1e-4j)) < 1e-12

    def test_nearest_lattice_point_complex_b(self):
        z = pole_zero_location(PoleIndex(1, 1, PoleZeroKind.POLE), PC) - 2e-5j
        idx, dist = nearest_pole_zero(z, PC)
        assert (idx.m, idx.n, idx.kind) == (1, 1, PoleZeroKind.POLE)
        assert abs(dist - 2e-5) < 1e-12

    def test_pole_proximity_raised(self):
        p = P12
        z = p.c_b + 1e-8
        with pytest.raises(PoleProximity) as info:
            eb(z, p)
        assert info.value.index.kind is PoleZeroKind.POLE
        assert (info.value.index.m, info.value.index.n) == (0, 0)

    def test_product_pole_hit(self):
        with pytest.raises((PoleHit, PoleProximity)):
            eb_product(PC.c_b, PC)

    @pytest.mark.parametrize("mn", [(0, 0), (1, 0), (0, 1)])
    def test_zero_linearity(self, mn):
        # b = 1.2 keeps the three lowest zeros simple; at b = 1 the (1,0)
        # and (0,1) zeros coincide and the local behavior is quadratic.
        p = P12
        z0 = pole_zero_location(PoleIndex(*mn, PoleZeroKind.ZERO), p)
        r1 = abs(eb(z0 + 1e-3, p, strategy="integral"))
        r2 = abs(eb(z0 + 1e-4, p, strategy="integral"))
        assert abs(r1 / r2 - 10.0) < 0.3

    def test_value_at_exact_zero_is_zero(self):
        p = P12
        z0 = pole_zero_location(PoleIndex(0, 0, PoleZeroKind.ZERO), p)
        assert abs(eb(z0, p, strategy="integral")) < 1e-12


class TestTheta:
    def test_half_plane_guard(self):
        with pytest.raises(HalfPlaneViolation):
            theta(0.3, 1.0 - 0.5j)

    @given(
        z=st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
        tau_re=st.floats(-1.0, 1.0),
        tau_im=st.floats(0.3, 2.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_theta_symmetry_and_periodicity(self, z, tau_re, tau_im):
        tau = complex(tau_re, tau_im)
        v = theta(z, tau)
        assert abs(theta(-z, tau) - v) <= 1e-9 * (1.0 + abs(v))
        assert abs(theta(z + 1.0, tau) - v) <= 1e-9 * (1.0 + abs(v))

    @given(
        z=st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False),
        tau_im=st.floats(0.4, 2.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_theta_quasi_periodicity(self, z, tau_im):
        tau = 0.3 + 1j * tau_im
        lhs = theta(z + tau, tau)
        rhs = cmath.exp(-1j * math.pi * tau - 2j * math.pi * z) * theta(z, tau)
        assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(lhs) + abs(rhs))


class TestAsymptotics:
    def test_left_sector_tends_to_one(self):
        for p in (P1, PC):
            z = -9.0 + 0.2j
            assert abs(eb(z, p, strategy="integral") - eb_asymptotic(z, p)) < 1e-8
            assert abs(eb_asymptotic(z, p) - 1.0) < 1e-8

    def test_right_sector_gaussian_factor(self):
        for p in (P1, PC):
            z = 9.0 - 0.15j
            lhs = eb(z, p, strategy="integral")
            rhs = eb_asymptotic(z, p)
            assert abs(lhs - rhs) / abs(rhs) < 1e-8

    def test_upper_wedge_theta_form(self):
        z = 10.3j  # strictly between the poles on the imaginary axis
        lhs = eb(z, PC, strategy="integral")
        rhs = eb_asymptotic(z, PC)
        assert abs(lhs - rhs) / abs(rhs) < 1e-8

    def test_lower_wedge_theta_form(self):
        z = -10.3j
        lhs = eb(z, PC, strategy="integral")
        rhs = eb_asymptotic(z, PC)
        assert abs(lhs - rhs) / abs(rhs) < 1e-8

    def test_sector_boundary_guard(self):
        with pytest.raises(SectorBoundary):
            eb_asymptotic(5.0j, P1)  # real b: the imaginary axis is a boundary
        with pytest.raises(SectorBoundary):
            eb_asymptotic(0.0, P1)


class TestGuards:
    def test_strip_violation(self):
        with pytest.raises(StripViolation):
            eb_integral(1.2j, P1)

    def test_quadrature_divergence_near_edge(self):
        cfg = QuadratureConfig(max_nodes=2000)
        with pytest.raises(QuadratureDivergence):
            eb_integral(0.999999j, P1, cfg)

    def test_continuation_depth_guard(self):
        cfg = QuadratureConfig(continuation_depth_max=2)
        with pytest.raises(ContinuationDepthExceeded):
            eb(0.1 + 5.3j, P1, cfg, strategy="integral")

    def test_parameter_normalization(self):
        with pytest.raises(ParameterError):
            ModularParameter(2j)
        with pytest.raises(ParameterError):
            ModularParameter(-1.0)
        with pytest.raises(ParameterError):
            ModularParameter(1.0 - 0.5j)

    @given(
        re=st.floats(-2.5, 2.5),
        imfrac=st.floats(-0.7, 0.7),
    )
    @settings(max_examples=25, deadline=None)
    def test_inversion_property(self, re, imfrac):
        z = complex(re, imfrac * P1.strip_half_width)
        lhs = eb(z, P1, strategy="integral") * eb(-z, P1, strategy="integral")
        rhs = cmath.exp(1j * math.pi * z * z) * inversion_constant(P1)
        assert abs(lhs - rhs) / (1.0 + abs(rhs)) < 1e-8
