import math

import numpy as np
import pytest

from fspectra.bounds import (
    circle_orthogonal,
    corollary_check,
    equality_case_mass,
    interlace_check,
    leq,
    lemma_sum_check,
    lower_bound_check,
    matrix_interlacing,
    shift_bound_check,
    solve,
    strictness_check,
)
from fspectra.counterexamples import torus_build_f
from fspectra.fourier import Fourier1, Fourier2, evaluate, min_on_grid
from fspectra.sampling import random_positive_s1, random_positive_t2
from fspectra.spectrum import rayleigh

from .conftest import quad_s1


@pytest.fixture(scope="module")
def torus_f():
    return torus_build_f()


@pytest.fixture
def nonortho():
    return Fourier1(1.0, [0.5, 0.25], [0.0, 0.0])


def test_leq_is_one_sided():
    assert leq(1.0 + 5e-9, 1.0)
    assert not leq(1.0 + 2e-8, 1.0)
    assert leq(100.0 + 5e-7, 100.0)
    assert not leq(1.0, 1.0 - 2e-8)


class TestLemma:
    def test_wobble(self, wobble):
        r = lemma_sum_check(wobble)
        assert r.S == 1 / 12 and r.bound == 2.0 and r.verdict == "strict"

    def test_constant(self):
        r = lemma_sum_check(Fourier1.constant(1.0, 4))
        assert r.S == 0.0 and r.bound == 2.0 and r.verdict == "strict"

    def test_cos2_violated(self):
        r = lemma_sum_check(Fourier1.harmonic(2))
        assert r.S == pytest.approx(1 / 3) and r.bound == 0.0
        assert r.verdict == "violated" and r.positivity == "nonpositive"

    def test_zero_is_nonstrict(self):
        assert lemma_sum_check(Fourier1.constant(0.0, 2)).verdict == "non-strict"

    def test_first_harmonic_rejected(self, nonortho):
        with pytest.raises(ValueError):
            lemma_sum_check(nonortho)

    def test_torus_rejected(self):
        with pytest.raises(ValueError):
            lemma_sum_check(Fourier2.constant(1.0))

    def test_random_positive_strict(self, rng):
        for _ in range(50):
            r = lemma_sum_check(random_positive_s1(rng))
            assert r.verdict == "strict" and r.slack > 0

    def test_perturbed_weight(self, rng):
        for _ in range(20):
            f = random_positive_s1(rng)
            eps = min_on_grid(f)[0] / 2
            assert lemma_sum_check(f - eps / 2).verdict != "violated"


class TestLowerBound:
    def test_constant_equality(self):
        r = lower_bound_check(Fourier1.constant(1.0))
        assert r.bound == pytest.approx(1.0, rel=1e-15)
        assert r.lambda_1_f == pytest.approx(1.0, abs=1e-12)
        assert r.holds

    def test_wobble(self, wobble):
        int_f = quad_s1(lambda t: evaluate(wobble, t), 64)
        int_f2 = quad_s1(lambda t: evaluate(wobble, t) ** 2, 64)
        r = lower_bound_check(wobble)
        assert r.bound == pytest.approx(int_f**2 / (2 * math.pi * int_f2), rel=1e-13)
        assert r.bound == pytest.approx(8 / 9, rel=1e-13)
        assert r.holds and r.lambda_1_f == pytest.approx(1.0, abs=1e-8)

    def test_counterexample(self, torus_f):
        r = lower_bound_check(torus_f, N=24)
        assert 0 < r.bound < r.lambda_1_f < 1 and r.holds

    def test_random(self, rng):
        for _ in range(10):
            f = random_positive_t2(rng)
            assert lower_bound_check(f).holds


class TestInterlace:
    def test_constant_equalities(self):
        r = interlace_check(Fourier1.constant(1.0), K=6)
        assert r.holds
        np.testing.assert_allclose(r.lam_f[:6], r.lam, atol=1e-12)

    def test_random_circle(self, rng):
        for _ in range(10):
            r = interlace_check(random_positive_s1(rng), K=6)
            assert r.holds and r.lam_f[0] == pytest.approx(1.0, abs=1e-8)

    def test_counterexample(self, torus_f):
        r = interlace_check(torus_f, K=6, N=24)
        assert r.holds
        assert r.lam_f[0] < 1.0 <= r.lam_f[1] + 1e-8

    def test_failed_link_keeps_operands(self, wobble):
        spec = solve(wobble, 7)
        spec.eigenvalues = spec.eigenvalues.copy()
        spec.eigenvalues[2] = 5.0
        r = interlace_check(wobble, K=6, spectrum=spec)
        assert not r.holds
        bad = r.failures()
        assert bad and all({"lhs", "rhs", "margin", "tol"} <= set(l) for l in bad)
        assert any(l["lhs"] == 5.0 for l in bad)

    def test_truncation_too_small(self, wobble):
        with pytest.raises(ValueError):
            interlace_check(wobble, K=6, spectrum=solve(wobble, 3))

    def test_matrix_level(self, rng):
        worst, holds = matrix_interlacing(solve(random_positive_t2(rng), 4, N=6))
        assert holds and worst <= 1e-10


class TestStrictness:
    def test_not_orthogonal(self, nonortho):
        r = strictness_check(nonortho)
        assert r.strict and r.holds and r.lambda_1_f < r.predicted < 1.0

    def test_orthogonal_not_strict(self, wobble):
        r = strictness_check(wobble)
        assert not r.strict and r.lambda_1_f == pytest.approx(1.0, abs=1e-8)

    def test_constant(self):
        r = strictness_check(Fourier1.constant(1.0))
        assert r.lambda_1_f == pytest.approx(1.0, abs=1e-12) and not r.strict

    def test_predicted_is_trial_rayleigh(self, nonortho):
        # phi_1 + c with c fixed by orthogonality to f
        phi1 = Fourier1(0.0, [0.5], [0.0])
        c = -quad_s1(lambda t: evaluate(nonortho, t) * evaluate(phi1, t), 64) / quad_s1(
            lambda t: evaluate(nonortho, t), 64
        )
        assert strictness_check(nonortho).predicted == pytest.approx(rayleigh(phi1 + c), rel=1e-12)


class TestShiftBound:
    def test_constant(self):
        rows = shift_bound_check(Fourier1.constant(1.0), K=6)
        assert all(r["holds"] and r["R_f"] == 0.0 for r in rows)

    def test_wobble(self, wobble):
        num = quad_s1(lambda t: evaluate(wobble.derivative(), t) ** 2, 64)
        den = quad_s1(lambda t: evaluate(wobble, t) ** 2, 64)
        rows = shift_bound_check(wobble, K=6)
        assert rows[0]["R_f"] == pytest.approx(num / den, rel=1e-13)
        assert rows[0]["R_f"] == pytest.approx(4 / 9, rel=1e-13)
        assert all(r["holds"] for r in rows)

    def test_random_torus(self, rng):
        for _ in range(5):
            assert all(r["holds"] for r in shift_bound_check(random_positive_t2(rng), K=5))


class TestCorollary:
    def test_constants(self):
        assert all(corollary_check(Fourier1.constant(1.0), Fourier1.constant(1.0)))

    def test_torus_pair(self, torus_f):
        assert all(corollary_check(Fourier2.constant(1.0), torus_f, N=24))

    def test_random_pairs(self, rng):
        for _ in range(10):
            assert all(corollary_check(random_positive_s1(rng), random_positive_s1(rng)))


class TestEqualityCase:
    def test_random_circle(self, rng):
        for _ in range(10):
            f = random_positive_s1(rng)
            assert equality_case_mass(solve(f, 2), level=1.0) <= 1e-6

    def test_no_pairs_at_level(self, nonortho):
        assert math.isnan(equality_case_mass(solve(nonortho, 1), level=1.0))

    def test_orthogonality_flag(self, wobble, nonortho):
        assert circle_orthogonal(wobble) and not circle_orthogonal(nonortho)
