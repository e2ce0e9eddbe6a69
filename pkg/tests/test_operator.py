import numpy as np
import pytest

from fracplap import (
    ParameterError,
    Params,
    apply_operator,
    build_weights,
    energy,
    lp_norm_p,
    make_grid,
    phi,
    rayleigh_quotient,
    scale_grid,
    weak_form,
)


@pytest.fixture(scope="module")
def setup():
    prm = Params(p=3.0, s=0.5)
    g = make_grid(0.0, 1.0, 30)
    kw = build_weights(g, prm)
    return prm, g, kw


class TestPhi:
    def test_values_p3(self):
        prm = Params(p=3.0, s=0.5)
        assert phi(2.0, prm) == pytest.approx(4.0)
        assert phi(-2.0, prm) == pytest.approx(-4.0)
        assert phi(0.0, prm) == 0.0

    def test_fractional_p(self):
        prm = Params(p=2.5, s=0.5)
        assert phi(4.0, prm) == pytest.approx(8.0)  # 4^1.5
        assert phi(-4.0, prm) == pytest.approx(-8.0)

    def test_sublinear_at_zero(self):
        # p < 2: |z|^(p-1) -> 0 as z -> 0 despite the negative p-2 power
        prm = Params(p=1.5, s=0.5)
        assert phi(0.0, prm) == 0.0
        assert phi(1e-8, prm) == pytest.approx(1e-4)


class TestApplyOperator:
    def test_zero_field(self, setup):
        prm, g, kw = setup
        assert np.all(apply_operator(np.zeros(30), kw, prm) == 0.0)

    def test_positive_at_positive_maximum(self, setup):
        prm, g, kw = setup
        rng = np.random.default_rng(0)
        u = rng.uniform(0.1, 1.0, 30)
        i = int(np.argmax(u))
        assert apply_operator(u, kw, prm)[i] > 0.0

    def test_odd(self, setup):
        prm, g, kw = setup
        rng = np.random.default_rng(1)
        u = rng.standard_normal(30)
        np.testing.assert_allclose(
            apply_operator(-u, kw, prm), -apply_operator(u, kw, prm),
            rtol=1e-13, atol=1e-15,
        )

    def test_operator_scaling(self, setup):
        # A*u on lambda*Omega (same cell pattern) = A^(p-1) lambda^(-sp) Lu
        prm, g, kw = setup
        rng = np.random.default_rng(2)
        u = rng.uniform(0.0, 1.0, 30)
        A, lam = 2.0, 3.0
        kw2 = build_weights(scale_grid(g, lam), prm)
        lhs = apply_operator(A * u, kw2, prm)
        rhs = A ** (prm.p - 1.0) * lam ** (-prm.sp) * apply_operator(u, kw, prm)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10)

    def test_monotone(self, setup):
        prm, g, kw = setup
        h = g.cell_width
        rng = np.random.default_rng(3)
        for _ in range(5):
            u = rng.standard_normal(30)
            v = rng.standard_normal(30)
            pairing = np.sum(
                (apply_operator(u, kw, prm) - apply_operator(v, kw, prm)) * (u - v)
            ) * h
            assert pairing >= -1e-12


class TestEnergy:
    def test_zero(self, setup):
        prm, g, kw = setup
        assert energy(np.zeros(30), kw, prm) == 0.0

    def test_homogeneity(self, setup):
        prm, g, kw = setup
        rng = np.random.default_rng(4)
        u = rng.standard_normal(30)
        assert energy(2.0 * u, kw, prm) == pytest.approx(
            8.0 * energy(u, kw, prm), rel=1e-12
        )

    def test_positive_for_nonzero(self, setup):
        prm, g, kw = setup
        u = np.zeros(30)
        u[7] = 1.0
        assert energy(u, kw, prm) > 0.0

    @pytest.mark.parametrize("p", [2.5, 3.0, 4.0])
    def test_gradient_identity(self, p):
        prm = Params(p=p, s=0.5)
        g = make_grid(0.0, 1.0, 25)
        kw = build_weights(g, prm)
        h = g.cell_width
        rng = np.random.default_rng(int(p * 10))
        u = rng.uniform(0.2, 1.0, 25)
        Lu = apply_operator(u, kw, prm)
        eps = 1e-5
        for i in rng.choice(25, size=8, replace=False):
            up, um = u.copy(), u.copy()
            up[i] += eps
            um[i] -= eps
            fd = (energy(up, kw, prm) - energy(um, kw, prm)) / (2.0 * eps)
            assert fd == pytest.approx(h * Lu[i], rel=1e-5)


class TestWeakForm:
    def test_pairing_with_self_is_p_energy(self, setup):
        prm, g, kw = setup
        rng = np.random.default_rng(6)
        u = rng.standard_normal(30)
        assert weak_form(u, u, kw, prm) == pytest.approx(
            prm.p * energy(u, kw, prm), rel=1e-12
        )

    def test_zero_first_argument(self, setup):
        prm, g, kw = setup
        w = np.ones(30)
        assert weak_form(np.zeros(30), w, kw, prm) == 0.0

    def test_matches_strong_pairing(self, setup):
        prm, g, kw = setup
        h = g.cell_width
        rng = np.random.default_rng(7)
        u = rng.standard_normal(30)
        w = rng.standard_normal(30)
        strong = np.sum(apply_operator(u, kw, prm) * w) * h
        assert weak_form(u, w, kw, prm) == pytest.approx(strong, rel=1e-12)


class TestRayleighQuotient:
    def test_scale_invariance(self, setup):
        prm, g, kw = setup
        u = np.sin(np.pi * g.centers)
        assert rayleigh_quotient(3.0 * u, kw, prm) == pytest.approx(
            rayleigh_quotient(u, kw, prm), rel=1e-12
        )

    def test_positive(self, setup):
        prm, g, kw = setup
        rng = np.random.default_rng(8)
        u = rng.uniform(0.1, 1.0, 30)
        assert rayleigh_quotient(u, kw, prm) > 0.0

    def test_domain_scaling(self, setup):
        prm, g, kw = setup
        u = np.sin(np.pi * g.centers)
        kw2 = build_weights(scale_grid(g, 2.0), prm)
        # same cell pattern transported to the doubled domain
        q2 = rayleigh_quotient(u, kw2, prm)
        assert q2 == pytest.approx(
            2.0 ** (-prm.sp) * rayleigh_quotient(u, kw, prm), rel=1e-10
        )

    def test_zero_field_rejected(self, setup):
        prm, g, kw = setup
        with pytest.raises(ParameterError):
            rayleigh_quotient(np.zeros(30), kw, prm)


class TestLpNorm:
    def test_single_cell(self, setup):
        prm, g, kw = setup
        u = np.zeros(30)
        u[5] = 2.0
        assert lp_norm_p(u, kw, prm) == pytest.approx(8.0 * g.cell_width, rel=1e-14)
