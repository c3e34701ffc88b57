import numpy as np
import pytest
from sklearn.base import clone

from fspectra import _validation
from fspectra.counterexamples import torus_build_f
from fspectra.fourier import Fourier1, Fourier2, inner_product, norm
from fspectra.sampling import random_positive_s1, random_positive_t2
from fspectra.spectrum import (
    FSpectrum,
    assemble,
    euler_lagrange_residual,
    f_spectrum,
    laplace_spectrum,
    rayleigh,
    rayleigh_min_oracle,
)

from .conftest import quad_t2


@pytest.fixture(scope="module")
def torus_f():
    return torus_build_f()


class TestAssemble:
    def test_circle_symbol(self):
        p = assemble("s1", Fourier1.constant(1.0), 4)
        assert p.size == 9
        np.testing.assert_array_equal(p.stiffness / p.mass, [0, 1, 1, 4, 4, 9, 9, 16, 16])

    def test_torus_symbol(self):
        p = assemble("t2", Fourier2.constant(1.0), 2)
        ratios = np.sort(p.stiffness / p.mass)
        np.testing.assert_array_equal(ratios[:10], [0, 1, 1, 1, 1, 2, 2, 2, 2, 4])

    def test_constraint_support(self, wobble):
        p = assemble("s1", wobble, 8)
        assert np.flatnonzero(p.constraint).tolist() == [0, 3]
        assert p.constraint[3] == pytest.approx(inner_product(wobble, Fourier1.harmonic(2)))

    def test_rejects_low_truncation(self):
        with pytest.raises(ValueError):
            assemble("s1", Fourier1(1.0, [0, 0, 0.2], [0, 0, 0]), 2)

    @pytest.mark.parametrize(
        "f, status",
        [(Fourier1(0.0, [0, 1.0], [0, 0]), "nonpositive"), (Fourier1(1.0, [0, 1.0], [0, 0]), "indeterminate")],
    )
    def test_rejects_nonpositive(self, f, status):
        with pytest.raises(_validation.NotPositiveError) as info:
            assemble("s1", f, 4)
        assert info.value.status == status

    def test_rejects_wrong_manifold(self):
        with pytest.raises(ValueError):
            assemble("t2", Fourier1.constant(1.0), 4)


class TestFSpectrum:
    def test_constant_circle(self):
        r = f_spectrum(assemble("s1", Fourier1.constant(1.0), 32), 6)
        np.testing.assert_allclose(r.eigenvalues, [1, 1, 4, 4, 9, 9], atol=1e-12)

    def test_constant_torus(self):
        r = f_spectrum(assemble("t2", Fourier2.constant(1.0), 8), 8)
        np.testing.assert_allclose(r.eigenvalues, [1, 1, 1, 1, 2, 2, 2, 2], atol=1e-12)

    def test_wobble_first_is_one(self, wobble):
        r = f_spectrum(assemble("s1", wobble, 32), 6)
        assert r.eigenvalues[0] == pytest.approx(1.0, abs=1e-8)

    def test_counterexample_below_one(self, torus_f):
        r = f_spectrum(assemble("t2", torus_f, 24), 2)
        assert r.eigenvalues[0] < 1.0

    @pytest.mark.parametrize("manifold", ["s1", "t2"])
    def test_dense_matches_deflated(self, rng, manifold):
        f = random_positive_s1(rng) if manifold == "s1" else random_positive_t2(rng, degree=2)
        N = 12 if manifold == "s1" else 4
        p = assemble(manifold, f, N)
        a = f_spectrum(p, 8, method="deflated")
        b = f_spectrum(p, 8, method="dense")
        np.testing.assert_allclose(a.all_eigenvalues, b.all_eigenvalues, atol=1e-11)

    def test_unknown_method(self, wobble):
        with pytest.raises(ValueError):
            f_spectrum(assemble("s1", wobble, 4), 2, method="lanczos")

    @pytest.mark.parametrize("K", [0, 9])
    def test_bad_count(self, wobble, K):
        with pytest.raises(ValueError):
            f_spectrum(assemble("s1", wobble, 4), K)

    def test_result_invariants(self, rng):
        f = random_positive_s1(rng)
        p = assemble("s1", f, 16)
        r = f_spectrum(p, 10)
        assert np.all(np.diff(r.eigenvalues) >= 0)
        gram = (r.eigenvectors * p.mass) @ r.eigenvectors.T
        np.testing.assert_allclose(gram, np.eye(10), atol=1e-10)
        for k in range(10):
            assert abs(inner_product(f, r.eigenfunction(k))) <= 1e-12 * norm(f)
        assert r.residuals.max() <= 1e-8

    def test_torus_invariants(self, rng):
        f = random_positive_t2(rng)
        p = assemble("t2", f, 6)
        r = f_spectrum(p, 8)
        gram = (r.eigenvectors * p.mass.ravel()) @ r.eigenvectors.T
        np.testing.assert_allclose(gram, np.eye(8), atol=1e-10)
        assert r.residuals.max() <= 1e-8

    def test_monotone_in_truncation(self, rng):
        f = random_positive_s1(rng)
        prev = None
        for N in (6, 8, 12, 16, 24):
            lam = f_spectrum(assemble("s1", f, N), 6).eigenvalues
            if prev is not None:
                assert np.all(lam <= prev + 1e-12)
            prev = lam

    def test_rayleigh_of_eigenfunctions(self, rng):
        f = random_positive_s1(rng)
        r = f_spectrum(assemble("s1", f, 16), 4)
        for k in range(4):
            assert rayleigh(r.eigenfunction(k)) == pytest.approx(r.eigenvalues[k], rel=1e-12)

    def test_to_dict(self):
        d = f_spectrum(assemble("s1", Fourier1.constant(1.0), 8), 4).to_dict()
        assert d["N"] == 8 and d["manifold"] == "s1"
        assert d["lambda"] == [1.0, 1.0, 4.0, 4.0]
        np.testing.assert_allclose(d["lambda_f"], d["lambda"], atol=1e-12)

    def test_tie_order_reproducible(self):
        r1 = f_spectrum(assemble("s1", Fourier1.constant(1.0), 8), 4)
        r2 = f_spectrum(assemble("s1", Fourier1.constant(1.0), 8), 4)
        np.testing.assert_array_equal(r1.eigenvectors, r2.eigenvectors)


class TestResidual:
    def test_exact_pair(self):
        assert euler_lagrange_residual(Fourier1.harmonic(1), 1.0, Fourier1.constant(1.0)) == 0.0

    def test_cos2(self):
        r = euler_lagrange_residual(Fourier1.harmonic(2), 1.0, Fourier1.constant(1.0))
        assert r == pytest.approx(3.0, rel=1e-15)

    def test_component_along_f_removed(self, wobble):
        # Delta f + 0 f lies entirely along cos 2t, so only its part off f survives.
        r = euler_lagrange_residual(wobble, 0.0, wobble)
        d = Fourier1.harmonic(2, coeff=-2.0)
        proj = d - (inner_product(d, wobble) / inner_product(wobble, wobble)) * wobble
        assert r == pytest.approx(norm(proj) / norm(wobble), rel=1e-13)


class TestRayleigh:
    def test_cos(self):
        assert rayleigh(Fourier1.harmonic(1)) == 1.0

    def test_cos2(self):
        assert rayleigh(Fourier1.harmonic(2)) == pytest.approx(4.0)

    def test_torus_phi_quadrature(self):
        u = Fourier2.from_modes([(0, 0, "cc", 0.6), (1, 1, "cc", 1.0)])
        grad = quad_t2(
            lambda x, y: (np.sin(x) * np.cos(y)) ** 2 + (np.cos(x) * np.sin(y)) ** 2, 64
        )
        l2 = quad_t2(lambda x, y: (0.6 + np.cos(x) * np.cos(y)) ** 2, 64)
        assert rayleigh(u) == pytest.approx(grad / l2, rel=1e-12)
        assert rayleigh(u) == pytest.approx(2 / (1 + 4 * 0.36), rel=1e-12)

    def test_zero(self):
        with pytest.raises(ValueError):
            rayleigh(Fourier1.constant(0.0, 3))


class TestLaplaceSpectrum:
    def test_circle(self):
        assert laplace_spectrum("s1", 7) == [0, 1, 1, 4, 4, 9, 9]

    def test_torus(self):
        assert laplace_spectrum("t2", 10) == [0, 1, 1, 1, 1, 2, 2, 2, 2, 4]

    def test_torus_long(self):
        vals = laplace_spectrum("t2", 200)
        brute = sorted(p * p + q * q for p in range(-20, 21) for q in range(-20, 21))[:200]
        assert vals == brute

    def test_sphere(self):
        assert laplace_spectrum("sn", 9, dim=2) == [0, 2, 2, 2, 6, 6, 6, 6, 6]

    def test_sphere_first_levels(self):
        for n in range(2, 7):
            vals = laplace_spectrum("sn", n + 3, dim=n)
            assert vals[1] == vals[n + 1] == n and vals[n + 2] == 2 * n + 2

    def test_bad_input(self):
        with pytest.raises(ValueError):
            laplace_spectrum("s1", 0)
        with pytest.raises(ValueError):
            laplace_spectrum("klein", 3)


class TestOracle:
    def test_discrete_wirtinger(self):
        assert rayleigh_min_oracle(Fourier1.constant(1.0), 256) == pytest.approx(1.0, abs=2e-4)

    def test_wobble_agrees(self, wobble):
        galerkin = f_spectrum(assemble("s1", wobble, 32), 1).eigenvalues[0]
        assert rayleigh_min_oracle(wobble, 256) == pytest.approx(galerkin, abs=5e-4)

    def test_random_circle_agrees(self, rng):
        f = Fourier1(1.0, [0.3, 0.2, 0.0], [0.0, 0.0, -0.3])
        galerkin = f_spectrum(assemble("s1", f, 32), 1).eigenvalues[0]
        assert galerkin < 1.0
        assert rayleigh_min_oracle(f, 512) == pytest.approx(galerkin, abs=1e-4)

    def test_second_order_convergence(self, wobble):
        exact = f_spectrum(assemble("s1", wobble, 32), 1).eigenvalues[0]
        e1 = abs(rayleigh_min_oracle(wobble, 128) - exact)
        e2 = abs(rayleigh_min_oracle(wobble, 256) - exact)
        assert 3.0 < e1 / e2 < 5.0

    def test_counterexample(self, torus_f):
        assert rayleigh_min_oracle(torus_f, 128) < 1.0

    def test_coarse_grid(self, wobble):
        with pytest.raises(ValueError):
            rayleigh_min_oracle(wobble, 32)


class TestEstimator:
    def test_params(self):
        est = FSpectrum(n_eigs=4)
        assert est.get_params()["n_eigs"] == 4
        assert clone(est).get_params() == est.get_params()
        est.set_params(method="dense")
        assert est.method == "dense"

    def test_fit_transform(self, wobble):
        est = FSpectrum(truncation=16, n_eigs=4).fit(wobble)
        np.testing.assert_allclose(est.eigenvalues_[:2], [1.0, 1.0], atol=1e-8)
        Y = est.transform(est.eigenfunctions_)
        np.testing.assert_allclose(Y, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(est.inverse_transform(Y), est.eigenfunctions_, atol=1e-12)

    def test_transform_series(self, wobble):
        est = FSpectrum(truncation=8, n_eigs=2).fit(wobble.to_dict())
        u = est.result_.eigenfunction(1)
        np.testing.assert_allclose(est.transform(u), [[0.0, 1.0]], atol=1e-12)
        assert est.rayleigh_quotients(u)[0] == pytest.approx(est.eigenvalues_[1])

    def test_unfitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            FSpectrum().transform(np.zeros((1, 17)))

    def test_width_mismatch(self, wobble):
        est = FSpectrum(truncation=4, n_eigs=2).fit(wobble)
        with pytest.raises(ValueError):
            est.transform(np.zeros((1, 5)))

    def test_torus(self):
        est = FSpectrum(manifold="t2", truncation=4, n_eigs=4).fit(Fourier2.constant(1.0))
        np.testing.assert_allclose(est.eigenvalues_, [1, 1, 1, 1], atol=1e-12)
