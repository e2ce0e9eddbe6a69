import numpy as np
import pytest

import fracplap as fp
from fracplap import (
    ConvergenceFailure,
    ParameterError,
    Params,
    build_weights,
    compute_eigenpair,
    compute_giant,
    denormalize_profile,
    giant_residual,
    make_grid,
    normalize_profile,
    scale_grid,
)
from fracplap.operator import apply_operator, rayleigh_quotient
from fracplap.profiles import eigen_residual


class TestComputeGiant:
    def test_residual_below_tolerance(self, gp3, kw3, prm3):
        assert gp3.residual <= 1e-8
        assert giant_residual(gp3.F, kw3, prm3) == pytest.approx(gp3.residual)

    def test_positive_interior(self, gp3):
        assert np.all(gp3.F > 0.0)

    def test_mu(self, gp3, prm3):
        assert gp3.mu == pytest.approx(1.0 / (prm3.p - 2.0))

    def test_symmetric_on_symmetric_domain(self, gp3):
        F = gp3.F
        assert np.max(np.abs(F - F[::-1])) <= 1e-8

    def test_scaling_law(self, prm3):
        # F on (0,2) vs (0,1): ratio 2^(ps/(p-2)) = 2^1.5 at matched cells
        g1 = make_grid(0.0, 1.0, 200)
        g2 = scale_grid(g1, 2.0)
        F1 = compute_giant(build_weights(g1, prm3), prm3, tol=1e-8).F
        F2 = compute_giant(build_weights(g2, prm3), prm3, tol=1e-8).F
        interior = slice(20, 180)
        ratio = F2[interior] / F1[interior]
        np.testing.assert_allclose(ratio, 2.0**1.5, rtol=0.02)

    def test_step_size_independence(self, prm3):
        # the fixed point does not depend on the pseudo-time step
        g = make_grid(0.0, 1.0, 50)
        kw = build_weights(g, prm3)
        Fa = compute_giant(kw, prm3, tol=1e-9, dtau=0.1).F
        Fb = compute_giant(kw, prm3, tol=1e-9, dtau=0.05).F
        assert np.max(np.abs(Fa - Fb)) <= 1e-7 * np.max(Fa)

    def test_cross_validation_against_direct_run(self, gp3, traj_bump3, prm3):
        # t^(1/(p-2)) u(t_end) from the Dirichlet run matches F to 2%
        m = 1.0 / (prm3.p - 2.0)
        tilde = traj_bump3.times[-1] ** m * traj_bump3.states[-1]
        err = np.max(np.abs(tilde - gp3.F)) / np.max(gp3.F)
        assert err <= 0.02

    def test_boundary_rate_upper_bound(self, prm3):
        # max over near-boundary cells of F / d^s stays bounded as the
        # resolution doubles
        vals = []
        for n in (100, 200):
            g = make_grid(0.0, 1.0, n)
            gp = compute_giant(build_weights(g, prm3), prm3, tol=1e-8)
            edge = np.r_[0:5, n - 5:n]
            vals.append(np.max(gp.F[edge] / g.boundary_distance[edge] ** prm3.s))
        assert vals[1] <= vals[0] * 1.25

    def test_rejects_p_at_most_two(self):
        prm = Params(p=1.5, s=0.5)
        kw = build_weights(make_grid(0.0, 1.0, 10), prm)
        with pytest.raises(ParameterError):
            compute_giant(kw, prm)

    def test_budget_exhaustion(self, prm3):
        kw = build_weights(make_grid(0.0, 1.0, 20), prm3)
        with pytest.raises(ConvergenceFailure):
            compute_giant(kw, prm3, tol=1e-12, max_steps=2)


class TestNormalizeProfile:
    def test_identity_at_p3(self, gp3, prm3):
        np.testing.assert_allclose(normalize_profile(gp3.F, prm3), gp3.F)

    def test_p4_normalization_solves_unit_problem(self):
        prm = Params(p=4.0, s=0.5)
        g = make_grid(0.0, 1.0, 100)
        kw = build_weights(g, prm)
        gp = compute_giant(kw, prm, tol=1e-9)
        f = normalize_profile(gp.F, prm)  # c = sqrt(2)
        r = apply_operator(f, kw, prm) - f
        assert np.max(np.abs(r)) <= 1e-6 * np.max(np.abs(f))

    def test_round_trip(self, gp3):
        prm = Params(p=4.0, s=0.5)
        back = denormalize_profile(normalize_profile(gp3.F, prm), prm)
        np.testing.assert_allclose(back, gp3.F, rtol=1e-14)

    def test_zero_field_rejected(self, prm3):
        with pytest.raises(ParameterError):
            normalize_profile(np.zeros(10), prm3)


class TestComputeEigenpair:
    def test_positive_eigenvalue_and_function(self, ep3):
        assert ep3.lambda1 > 0.0
        assert np.all(ep3.phi1 >= 0.0)

    def test_normalized(self, ep3, kw3, prm3):
        from fracplap.operator import lp_norm_p

        assert lp_norm_p(ep3.phi1, kw3, prm3) == pytest.approx(1.0, rel=1e-12)

    def test_residual_criterion(self, ep3, kw3, prm3):
        phi_pow = np.abs(ep3.phi1) ** (prm3.p - 1.0)
        assert ep3.residual <= 1e-6 * ep3.lambda1 * np.max(phi_pow)
        assert eigen_residual(ep3.phi1, ep3.lambda1, kw3, prm3) == pytest.approx(
            ep3.residual
        )

    def test_shrinking_domain_raises_lambda(self, prm3):
        lam_full = compute_eigenpair(
            build_weights(make_grid(0.0, 1.0, 100), prm3), prm3
        ).lambda1
        lam_half = compute_eigenpair(
            build_weights(make_grid(0.0, 0.5, 100), prm3), prm3
        ).lambda1
        assert lam_half > lam_full

    def test_scaling_law(self, prm3):
        g = make_grid(0.0, 1.0, 200)
        lam1 = compute_eigenpair(build_weights(g, prm3), prm3).lambda1
        lam2 = compute_eigenpair(build_weights(scale_grid(g, 2.0), prm3), prm3).lambda1
        assert lam2 == pytest.approx(2.0 ** (-prm3.sp) * lam1, rel=0.01)
        assert lam2 < lam1

    def test_giant_quotient_dominates(self, gp3, ep3, kw3, prm3):
        assert rayleigh_quotient(gp3.F, kw3, prm3) >= ep3.lambda1 - 1e-10

    def test_eigenfunction_data_converges_to_giant(self, gp3, ep3, kw3, prm3,
                                                   grid200):
        # any positive data lands on F in rescaled variables
        sched = fp.TimeSchedule("geometric", 1e-3, 1e3, ratio=1.005)
        traj = fp.evolve(ep3.phi1, sched, kw3, prm3, tol=1e-11)
        m = 1.0 / (prm3.p - 2.0)
        v_end = traj.times[-1] ** m * traj.states[-1]
        assert np.max(np.abs(v_end - gp3.F)) / np.max(gp3.F) <= 0.02
