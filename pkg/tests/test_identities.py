"""Tests for the beta-integral identity module."""

import numpy as np
import pytest

from qteich.errors import DomainViolation, NonDecayingTail
from qteich.identities import (
    RamanujanParams,
    _relaxed_ok,
    _strict_ok,
    ramanujan_closed,
    ramanujan_integral,
    verify_ramanujan,
)
from qteich.params import ModularParameter

P1 = ModularParameter(1.0)
P12 = ModularParameter(1.2)

# Reference point exercised throughout: all strict inequalities hold.
BASE = RamanujanParams(0.0, -0.5j, 0.3 - 0.25j)


def strict_samples(p, count, seed):
    """Random parameter triples satisfying the strict inequalities."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        u = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.3, 0.3))
        gap = rng.uniform(0.15, 0.5)
        v = complex(rng.uniform(-0.8, 0.8), u.imag - gap)
        w = complex(rng.uniform(-0.8, 0.8), -gap * rng.uniform(0.2, 0.8))
        pr = RamanujanParams(u, v, w)
        if _strict_ok(pr, p):
            out.append(pr)
    return out


def rel(a, b):
    return abs(a - b) / (1.0 + abs(b))


class TestClosedForms:
    def test_reference_point(self):
        first, second = ramanujan_closed(BASE, P1)
        assert rel(first, second) < 1e-9
        # frozen from an independent run of the quadrature evaluator
        assert rel(first, 0.2240175441014885 + 0.09279110497638332j) < 1e-10

    @pytest.mark.parametrize("p,seed", [(P1, 71), (P12, 72)])
    def test_pair_agreement_bulk(self, p, seed):
        worst = 0.0
        for pr in strict_samples(p, 25, seed):
            first, second = ramanujan_closed(pr, p)
            worst = max(worst, rel(first, second))
        assert worst < 1e-9

    def test_rejects_outside_both_domains(self):
        # w on the positive imaginary axis breaks strict and relaxed alike
        bad = RamanujanParams(0.0, -0.5j, 1j)
        assert not _strict_ok(bad, P1) and not _relaxed_ok(bad, P1)
        with pytest.raises(DomainViolation):
            ramanujan_closed(bad, P1)


class TestIntegral:
    def test_matches_closed_form(self):
        first, _ = ramanujan_closed(BASE, P1)
        val = ramanujan_integral(BASE, P1, refine=1)
        assert rel(val, first) < 1e-9

    def test_monotone_refinement(self):
        report = verify_ramanujan(BASE, P1)
        assert report.passed
        assert report.integral_residuals[-1] < 1e-6
        r = report.integral_residuals
        floor = 5e-13
        assert all(
            r[i + 1] <= max(r[i], floor) for i in range(len(r) - 1)
        )

    def test_bulk_verification(self):
        jobs = [(pr, P1) for pr in strict_samples(P1, 3, 73)]
        jobs += [(pr, P12) for pr in strict_samples(P12, 3, 74)]
        for pr, p in jobs:
            report = verify_ramanujan(pr, p)
            assert report.passed, (pr, report.integral_residuals)

    def test_equal_shift_arguments_rejected(self):
        pr = RamanujanParams(0.2 - 0.1j, 0.2 - 0.1j, 0.3 - 0.05j)
        with pytest.raises(NonDecayingTail):
            ramanujan_integral(pr, P1)

    def test_translation_covariance(self):
        # shifting u and v together multiplies the value by a plane wave
        delta = 0.15 - 0.1j
        base_val = ramanujan_integral(BASE, P1, refine=1)
        shifted = RamanujanParams(BASE.u + delta, BASE.v + delta, BASE.w)
        shifted_val = ramanujan_integral(shifted, P1, refine=1)
        expected = base_val * np.exp(-2j * np.pi * BASE.w * delta)
        assert rel(shifted_val, expected) < 1e-9

    def test_holomorphic_in_plane_wave_rate(self):
        # centered differences along the two real axes must agree
        h = 1e-4

        def f(w):
            return ramanujan_integral(
                RamanujanParams(BASE.u, BASE.v, w), P1
            )

        d_re = (f(BASE.w + h) - f(BASE.w - h)) / (2.0 * h)
        d_im = (f(BASE.w + 1j * h) - f(BASE.w - 1j * h)) / (2j * h)
        assert abs(d_re - d_im) / (1.0 + abs(d_re)) < 1e-4


class TestRelaxedContour:
    # positive Im(w) leaves the strict set but keeps every sector test
    RELAXED = RamanujanParams(0.0, -0.5j, 0.4 + 0.05j)

    def test_classification(self):
        assert not _strict_ok(self.RELAXED, P1)
        assert _relaxed_ok(self.RELAXED, P1)

    def test_tilted_path_matches_closed_form(self):
        first, second = ramanujan_closed(self.RELAXED, P1)
        assert rel(first, second) < 1e-9
        val = ramanujan_integral(self.RELAXED, P1, refine=1)
        assert rel(val, first) < 1e-8

    def test_two_paths_agree(self):
        # independent admissible contours must give the same number
        a = ramanujan_integral(self.RELAXED, P1, refine=1)
        b = ramanujan_integral(
            self.RELAXED, P1, refine=1, tilt_backoff=0.3, x0_extra=1.0
        )
        assert rel(a, b) < 1e-8

    def test_complex_b(self):
        pc = ModularParameter(np.exp(1j * np.pi / 6))
        pr = RamanujanParams(0.1, 0.05 - 0.4j, 0.2 - 0.2j)
        report = verify_ramanujan(pr, pc)
        assert report.passed
        assert report.closed_residual < 1e-9
