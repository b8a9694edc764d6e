import numpy as np
import pytest

from specfact import (
    LaurentMatrix,
    LaurentPoly,
    PreconditionError,
    coeffs_from_grid,
    coeffs_from_samples,
    det_laurent,
    hermitian_on_circle,
    project_minus,
    project_plus,
    project_window,
    residual_metric,
)
from specfact.laurent import _det_minors

from conftest import (
    known_boundary_zero_density,
    matrix_close,
    poly_close,
    rand_causal_matrix,
    rand_poly,
)


class TestPolyArithmetic:
    def test_mul_difference_of_squares(self):
        a = LaurentPoly(0, [1, 1])
        b = LaurentPoly(0, [1, -1])
        assert poly_close(a * b, LaurentPoly(0, [1, 0, -1]), 0)

    def test_mul_inverse_powers_cancel(self):
        assert poly_close(
            LaurentPoly(-1, [1]) * LaurentPoly(1, [1]), LaurentPoly.one(), 0
        )

    def test_mul_mixed_window(self):
        # (2 + t)(2 + 1/t) convolves to 2/t + 5 + 2t
        a = LaurentPoly(0, [2, 1])
        b = LaurentPoly(-1, [1, 2])
        assert poly_close(a * b, LaurentPoly(-1, [2, 5, 2]), 0)

    def test_window_combines_additively(self, rng):
        a = rand_poly(rng, -2, 3)
        b = rand_poly(rng, -1, 4)
        assert (a * b).window() == (-3, 7)

    def test_trim_and_equality_modulo_zeros(self):
        a = LaurentPoly(-2, [0, 1, 2, 0, 0])
        assert a.window() == (-1, 0)
        assert poly_close(a, LaurentPoly(-1, [1, 2]), 0)

    def test_zero_poly_canonical(self):
        z = LaurentPoly(5, [0, 0, 0])
        assert z.is_zero and z.window() == (0, 0)

    def test_evaluate_at_zero_requires_causal(self):
        assert LaurentPoly(0, [3, 1])(0) == 3
        with pytest.raises(PreconditionError):
            LaurentPoly(-1, [1, 1])(0)


class TestAdjoint:
    def test_identity(self):
        eye = LaurentMatrix.identity(3)
        assert matrix_close(eye.adjoint(), eye, 0)

    def test_real_coefficients_flip_powers(self):
        a = LaurentMatrix([[LaurentPoly(0, [1, 2])]])
        assert poly_close(a.adjoint()[0, 0], LaurentPoly(-1, [2, 1]), 0)

    def test_involution(self, rng):
        a = rand_causal_matrix(rng, 3, 3)
        assert matrix_close(a.adjoint().adjoint(), a, 0)

    def test_antihomomorphism(self, rng):
        a = rand_causal_matrix(rng, 3, 2)
        b = rand_causal_matrix(rng, 3, 2)
        assert matrix_close((a @ b).adjoint(), b.adjoint() @ a.adjoint(), 0)

    def test_gram_is_hermitian(self, rng):
        a = rand_causal_matrix(rng, 3, 3)
        assert hermitian_on_circle(a @ a.adjoint(), tol=0)


class TestProjections:
    def test_plus_drops_negative(self):
        p = LaurentPoly(-1, [1, 3, 1])
        assert poly_close(project_plus(p), LaurentPoly(0, [3, 1]), 0)

    def test_window_keeps_center(self):
        p = LaurentPoly(-2, [1, 1, 1, 1, 1])
        assert poly_close(project_window(p, 1), LaurentPoly(-1, [1, 1, 1]), 0)

    def test_plus_minus_overlap_at_zero(self, rng):
        # both projections keep index 0, so their sum double counts c_0
        f = rand_poly(rng, -4, 5)
        back = project_plus(f) + project_minus(f) - f.coeff(0)
        assert poly_close(back, f, 0)


class TestDeterminant:
    def test_identity(self):
        assert poly_close(det_laurent(LaurentMatrix.identity(3)), LaurentPoly.one(), 0)

    def test_known_2x2_boundary_zero_determinant(self):
        d = det_laurent(known_boundary_zero_density())
        assert poly_close(d, LaurentPoly(-2, [-1, 0, 2, 0, -1]), 1e-12)

    @pytest.mark.parametrize("size", [2, 3])
    def test_multiplicative(self, rng, size):
        a = rand_causal_matrix(rng, size, 2)
        b = rand_causal_matrix(rng, size, 2)
        lhs = det_laurent(a @ b)
        rhs = det_laurent(a) * det_laurent(b)
        scale = max(rhs.max_abs(), 1.0)
        assert poly_close(lhs, rhs, 1e-12 * scale)

    def test_fraction_free_path_matches_minor_expansion(self, rng):
        a = rand_causal_matrix(rng, 5, 1)
        direct = _det_minors(a)
        scale = max(direct.max_abs(), 1.0)
        assert poly_close(det_laurent(a), direct, 1e-9 * scale)

    def test_rectangular_rejected(self):
        with pytest.raises(PreconditionError):
            det_laurent(LaurentMatrix.zeros(2, 3))


class TestGridTransforms:
    def test_constant_matrix_repeats(self):
        m = LaurentMatrix([[LaurentPoly.constant(2 + 1j)]])
        g = m.eval_grid(8)
        assert np.allclose(g.values[:, 0, 0], 2 + 1j)

    def test_monomial_samples_roots_of_unity(self):
        vals = LaurentPoly.monomial(1).sample_circle(8)
        assert np.allclose(vals, np.exp(2j * np.pi * np.arange(8) / 8))

    def test_round_trip_degree_five(self, rng):
        m = LaurentMatrix(
            [[rand_poly(rng, -5, 5, integer=False) for _ in range(2)] for _ in range(2)]
        )
        g = m.eval_grid(32)
        back = coeffs_from_grid(g, (-5, 5))
        scale = max(e.max_abs() for row in m.entries for e in row)
        assert matrix_close(back, m, 1e-12 * scale)

    def test_window_must_fit(self, rng):
        vals = np.ones(8, dtype=complex)
        with pytest.raises(PreconditionError):
            coeffs_from_samples(vals, -4, 4)


class TestResidualMetric:
    def test_exact_factor_gives_zero(self, rng):
        a = rand_causal_matrix(rng, 2, 2)
        assert residual_metric(a, a @ a.adjoint()) == 0

    def test_identity_density(self):
        eye = LaurentMatrix.identity(2)
        assert residual_metric(eye, eye) == 0

    def test_scalar_mismatch(self):
        # E = -1 over a single-power window: mean is 1
        one = LaurentMatrix.identity(1)
        assert residual_metric(one, 2.0 * one) == pytest.approx(1.0)

    def test_mean_runs_over_all_entries(self):
        # E = -I (2x2): magnitudes (1, 0, 0, 1) over the {0} window
        eye = LaurentMatrix.identity(2)
        assert residual_metric(eye, 2.0 * eye) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(PreconditionError):
            residual_metric(LaurentMatrix.identity(2), LaurentMatrix.identity(3))
