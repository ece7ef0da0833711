import numpy as np
import pytest

import speccalc as sc
from speccalc.vectors import op_norm, vec_norm

from conftest import random_diagonalizable, random_halfplane, random_vec


class TestResolutionFromDiagonalizable:
    def test_diagonal_matrix_gives_coordinate_projections(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0, 3.0]), 1e-9)
        assert sorted(l.real for l in E.eigenvalues) == [1.0, 2.0, 3.0]
        for k, lam in enumerate(E.eigenvalues):
            want = np.zeros((3, 3))
            want[k, k] = 1.0
            np.testing.assert_allclose(E.projections[k], want, atol=1e-12)

    def test_nilpotent_jordan_block_rejected(self):
        with pytest.raises(sc.NotDiagonalizable):
            sc.resolution_from_diagonalizable(
                np.array([[0.0, 1.0], [0.0, 0.0]]), 1e-9)

    def test_shear_projections_match_symbolic_oracle(self):
        # V = [[1,1],[0,1]], D = diag(1,2): P1 = V E11 V^-1, P2 = V E22 V^-1
        # computed by hand from V^-1 = [[1,-1],[0,1]].
        v = np.array([[1.0, 1.0], [0.0, 1.0]])
        a = v @ np.diag([1.0, 2.0]) @ np.linalg.inv(v)
        E = sc.resolution_from_diagonalizable(a, 1e-9)
        order = np.argsort(E.eigenvalues.real)
        p1, p2 = E.projections[order[0]], E.projections[order[1]]
        np.testing.assert_allclose(p1, [[1.0, -1.0], [0.0, 0.0]], atol=1e-10)
        np.testing.assert_allclose(p2, [[0.0, 1.0], [0.0, 1.0]], atol=1e-10)
        np.testing.assert_allclose(p1 + p2, np.eye(2), atol=1e-10)

    def test_condition_cap_enforced(self, rng):
        eps = 2e-7
        v = np.array([[1.0, 1.0], [0.0, eps]])   # cond ~ 1/eps > 1e6
        a = v @ np.diag([1.0, 2.0]) @ np.linalg.inv(v)
        with pytest.raises((sc.IllConditioned, sc.NotDiagonalizable)):
            sc.resolution_from_diagonalizable(a, 1e-9)

    def test_repeated_eigenvalue_with_full_eigenspace_merges(self):
        E = sc.resolution_from_diagonalizable(np.diag([2.0, 2.0, 5.0]), 1e-9)
        assert E.eigenvalues.size == 2
        idx = int(np.argmin(np.abs(E.eigenvalues - 2.0)))
        np.testing.assert_allclose(E.projections[idx],
                                   np.diag([1.0, 1.0, 0.0]), atol=1e-12)

    def test_serialization_round_trip(self, rng):
        a, _ = random_diagonalizable(rng, 4)
        E = sc.resolution_from_diagonalizable(a, 1e-9)
        back = sc.ResolutionOfIdentity.from_json_dict(E.to_json_dict())
        np.testing.assert_allclose(back.eigenvalues, E.eigenvalues,
                                   atol=1e-12)
        np.testing.assert_allclose(back.projections, E.projections,
                                   atol=1e-12)
        assert back.projection_bound == pytest.approx(E.projection_bound)


class TestProject:
    def test_empty_set_gives_zero(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0]), 1e-9)
        np.testing.assert_allclose(sc.project(E, sc.BorelSetSpec.empty()),
                                   np.zeros((2, 2)))

    def test_full_set_gives_identity(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0]), 1e-9)
        np.testing.assert_allclose(sc.project(E, sc.BorelSetSpec.full()),
                                   np.eye(2), atol=1e-12)

    def test_ball_filter_on_diag(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0, 3.0]), 1e-9)
        sigma = sc.BorelSetSpec(lambda z: np.abs(z) <= 2.0, 2.0, "|z|<=2")
        np.testing.assert_allclose(sc.project(E, sigma),
                                   np.diag([1.0, 1.0, 0.0]), atol=1e-12)

    def test_idempotent_within_tolerance(self, rng):
        a, _ = random_diagonalizable(rng, 5)
        E = sc.resolution_from_diagonalizable(a, 1e-9)
        P = sc.project(E, random_halfplane(rng))
        scale = max(1.0, op_norm(P, 2) ** 2)
        assert op_norm(P @ P - P, 2) / scale < 1e-10


class TestSpectralMeasureProperties:
    def test_multiplicativity_and_additivity(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 8))
            a, _ = random_diagonalizable(rng, n)
            E = sc.resolution_from_diagonalizable(a, 1e-9)
            sig, delt = random_halfplane(rng), random_halfplane(rng)
            ps, pd = sc.project(E, sig), sc.project(E, delt)
            pint = sc.project(E, sig.intersect(delt))
            assert op_norm(ps @ pd - pint, 2) \
                / max(1.0, op_norm(ps, 2) * op_norm(pd, 2)) < 1e-10
            comp = sig.complement()
            pu = sc.project(E, sig.union(comp))
            pc = sc.project(E, comp)
            assert op_norm(pu - ps - pc, 2) \
                / max(1.0, op_norm(ps, 2) + op_norm(pc, 2)) < 1e-10

    def test_projection_bound_dominates_samples(self, rng):
        a, _ = random_diagonalizable(rng, 6, cond_max=100.0)
        E = sc.resolution_from_diagonalizable(a, 1e-9)
        for _ in range(20):
            P = sc.project(E, random_halfplane(rng))
            assert op_norm(P, 2) <= E.projection_bound * (1 + 1e-9)

    def test_projections_commute_with_operator(self, rng):
        for _ in range(10):
            a, _ = random_diagonalizable(rng, 5)
            R = sc.ScalarSpectralOperator.finite_from_matrix(a)
            E = R.resolution
            P = sc.project(E, random_halfplane(rng))
            x = random_vec(rng, 5)
            lhs = P @ (a @ x)
            rhs = a @ (P @ x)
            assert vec_norm(lhs - rhs, 2) \
                / max(1.0, vec_norm(x, 2) * op_norm(a, 2)) < 1e-10


class TestLazyDiagonal:
    def test_finite_support_always_in_domain(self):
        R = sc.lazy_diagonal(lambda ks: ks.astype(complex), p=2)
        x = sc.ComplexVector.basis(5, "sequence")
        y = R.apply_vec(x)
        ks, vals = y.support_values()
        assert list(ks) == [5]
        assert vals[0] == 5.0

    def test_divergent_tail_detected(self):
        R = sc.lazy_diagonal(lambda ks: ks.astype(complex), p=2)
        tail = sc.TailCertificate(lambda ks: 1.0 / ks.astype(float), start=1)
        x = sc.ComplexVector.sequence({}, p=2, tail=tail)
        assert not R.domain_contains(x)
        with pytest.raises(sc.DomainError):
            R.apply_vec(x)

    def test_bounded_generator_accepts_everything(self):
        R = sc.lazy_diagonal(lambda ks: 1.0 / (ks.astype(complex) + 1.0), p=2)
        tail = sc.TailCertificate(lambda ks: 1.0 / ks.astype(float), start=1)
        x = sc.ComplexVector.sequence({}, p=2, tail=tail)
        assert R.domain_contains(x)


class TestRestrict:
    def test_ball_restriction_of_diag(self):
        R = sc.ScalarSpectralOperator.finite_from_matrix(
            np.diag([1.0, 2.0, 3.0]))
        sub = sc.restrict(R, sc.BorelSetSpec.ball(2.5))
        lams = sorted(sub.resolution.eigenvalues.real)
        assert lams == [1.0, 2.0]
        np.testing.assert_allclose(sub.resolution.unit,
                                   np.diag([1.0, 1.0, 0.0]), atol=1e-12)
        np.testing.assert_allclose(sub.matrix(),
                                   np.diag([1.0, 2.0, 0.0]), atol=1e-12)

    def test_full_restriction_is_identity_bookkeeping(self, rng):
        a, lams = random_diagonalizable(rng, 4)
        R = sc.ScalarSpectralOperator.finite_from_matrix(a)
        sub = sc.restrict(R, sc.BorelSetSpec.ball(100.0))
        np.testing.assert_allclose(sub.matrix(), R.matrix(), atol=1e-9)

    def test_lazy_truncation_materializes(self):
        R = sc.lazy_diagonal(lambda ks: ks.astype(complex), p=2)
        sub = sc.restrict(R, sc.BorelSetSpec.ball(5.0))
        assert sub.is_finite
        assert list(sub.coords) == [0, 1, 2, 3, 4]
        np.testing.assert_allclose(sorted(sub.resolution.eigenvalues.real),
                                   [0.0, 1.0, 2.0, 3.0, 4.0], atol=1e-12)

    def test_restricted_spectrum_inside_closure(self, rng):
        a, _ = random_diagonalizable(rng, 6)
        R = sc.ScalarSpectralOperator.finite_from_matrix(a)
        sigma = random_halfplane(rng)
        sub = sc.restrict(R, sigma)
        if sub.resolution.eigenvalues.size:
            assert sigma.contains(sub.resolution.eigenvalues).all()

    def test_iterated_restriction_consistency(self, rng):
        a, _ = random_diagonalizable(rng, 6)
        R = sc.ScalarSpectralOperator.finite_from_matrix(a)
        sig, delt = random_halfplane(rng), random_halfplane(rng)
        once = sc.restrict(R, sig.intersect(delt))
        twice = sc.restrict(sc.restrict(R, sig), delt)
        np.testing.assert_allclose(twice.matrix(), once.matrix(), atol=1e-9)
        np.testing.assert_allclose(twice.resolution.unit,
                                   once.resolution.unit, atol=1e-9)


class TestESequences:
    def test_balls_scheme(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0]), 1e-9)
        seq = sc.make_E_sequence(E, "balls")
        assert seq.at(3).contains(2.9) and not seq.at(3).contains(3.1)
        assert sc.check_esequence(E, seq)

    def test_squares_scheme(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0]), 1e-9)
        seq = sc.make_E_sequence(E, "squares")
        assert seq.at(2).contains(1.5 + 1.5j)
        assert not seq.at(2).contains(2.5 + 0.0j)
        assert sc.check_esequence(E, seq)

    def test_levelsets_of_identity_match_balls_boundary_convention(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0]), 1e-9)
        seq = sc.make_E_sequence(E, "levelsets",
                                 symbol=sc.symbol_from_name("identity"))
        pts = np.array([0.5, 1.9, 2.7 + 1j, 5.0])
        balls = sc.make_E_sequence(E, "balls")
        for n in (1, 2, 4, 8):
            inside = seq.at(n).contains(pts)
            # level sets use <= n, balls use < n; test off-boundary points
            np.testing.assert_array_equal(inside, balls.at(n).contains(pts))

    def test_monotonicity_violation_detected(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0]), 1e-9)
        shrinking = sc.ESequence(
            lambda n: sc.BorelSetSpec.ball(10.0 / n), "balls")
        assert not sc.check_esequence(E, shrinking, sample_points=[3.0])


class TestStrongLimitCheck:
    def test_finite_model_residual_hits_zero(self):
        E = sc.resolution_from_diagonalizable(np.diag([1.0, 2.0, 3.0]), 1e-9)
        seq = sc.make_E_sequence(E, "balls")
        probes = [sc.ComplexVector.finite([1.0, 1.0, 1.0])]
        rep = sc.strong_limit_check(E, seq, probes, n_max=6)
        assert rep.probe_residuals[0][-1] == 0.0
        # residual is exactly 0 once n > max |lam|
        assert rep.probe_residuals[0][3] == 0.0

    def test_lazy_coordinate_mask(self):
        E = sc.ResolutionOfIdentity.lazy(lambda ks: ks.astype(complex), p=2)
        seq = sc.make_E_sequence(E, "balls")
        rep = sc.strong_limit_check(E, seq,
                                    [sc.ComplexVector.basis(7, "sequence")],
                                    n_max=10)
        res = rep.probe_residuals[0]
        assert res[6] == 1.0 and res[7] == 0.0   # zero from n = 8 on

    def test_residuals_equal_tail_norms(self):
        # x = sum_{k<=20} e_k / (k+1): residual at level n is the l^p norm
        # of the entries with index >= n, computed here directly.
        E = sc.ResolutionOfIdentity.lazy(lambda ks: ks.astype(complex), p=2)
        seq = sc.make_E_sequence(E, "balls")
        support = {k: 1.0 / (k + 1.0) for k in range(21)}
        x = sc.ComplexVector.sequence(support, p=2)
        rep = sc.strong_limit_check(E, seq, [x], n_max=25, tol=1e-9)
        for n, got in zip(rep.n_values, rep.probe_residuals[0]):
            want = np.sqrt(sum((1.0 / (k + 1.0)) ** 2
                               for k in range(21) if k >= n))
            assert got == pytest.approx(want, abs=1e-12)

    def test_not_covering_raised(self):
        E = sc.ResolutionOfIdentity.lazy(lambda ks: ks.astype(complex), p=2)
        stuck = sc.ESequence(lambda n: sc.BorelSetSpec.ball(2.0), "balls")
        with pytest.raises(sc.NotCovering):
            sc.strong_limit_check(E, stuck,
                                  [sc.ComplexVector.basis(7, "sequence")],
                                  n_max=6)
