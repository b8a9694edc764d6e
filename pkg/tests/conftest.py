import numpy as np
import pytest

from specfact import CompletionInput, LaurentMatrix, LaurentPoly


def rand_poly(rng, lo, hi, scale=1.0, integer=False):
    width = hi - lo + 1
    if integer:
        c = rng.integers(-10, 11, size=width).astype(complex)
    else:
        c = scale * (rng.normal(size=width) + 1j * rng.normal(size=width))
    return LaurentPoly(lo, c)


def rand_causal_matrix(rng, size, degree, integer=True):
    return LaurentMatrix(
        [
            [rand_poly(rng, 0, degree, integer=integer) for _ in range(size)]
            for _ in range(size)
        ]
    )


def rand_density(rng, size, degree, integer=True):
    a = rand_causal_matrix(rng, size, degree, integer=integer)
    return a, a @ a.adjoint()


def outer_poly(rng, degree, rho_min=1.3, rho_max=3.0):
    """Random causal polynomial with all roots outside the closed disk."""
    radii = rng.uniform(rho_min, rho_max, size=degree)
    angles = rng.uniform(0, 2 * np.pi, size=degree)
    roots = radii * np.exp(1j * angles)
    c = np.array([1.0 + 0.0j])
    for r in roots:
        c = np.convolve(c, np.array([1.0, -1.0 / r]))
    return LaurentPoly(0, c)


def rand_completion_input(rng, size, order, zeta_scale=1.0):
    """Random completion step shaped like the driver's inputs.

    The pivot is a windowed outer polynomial: pivots with zeros well inside
    the disk make the step Gram matrix arbitrarily ill conditioned (its
    conditioning carries no guarantee), which is not the regime the
    completion is consumed in.
    """
    zetas = tuple(
        rand_poly(rng, -order, order, scale=zeta_scale) for _ in range(size - 1)
    )
    f = outer_poly(rng, min(order, 8), rho_min=1.3) * rng.uniform(0.5, 2.0)
    coeffs = f.coeff_slice(0, order)
    return CompletionInput(
        size=size, order=order, zeta=zetas, f_plus=LaurentPoly(0, coeffs)
    )


def known_boundary_zero_density():
    """2x2 integer density whose determinant has double zeros on the circle."""
    lp = LaurentPoly
    return LaurentMatrix(
        [
            [lp(-1, [2, 6, 2]), lp(-1, [7, 22, 11])],
            [lp(-1, [11, 22, 7]), lp(-1, [38, 84, 38])],
        ]
    )


def known_right_factor():
    """Exact right factor of the boundary-zero test density."""
    lp = LaurentPoly
    return LaurentMatrix(
        [[lp(0, [2, 1]), lp(0, [7, 5])], [lp(0, [1, 0]), lp(0, [3, 1])]]
    )


def poly_close(a, b, tol):
    return (a - b).max_abs() <= tol


def matrix_close(a, b, tol):
    d = a - b
    return max(e.max_abs() for row in d.entries for e in row) <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
