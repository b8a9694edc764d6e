"""Canonical scalar spectral factorization of positive densities on the circle.

The factor is produced by the cepstral construction: sample the log density
on a power-of-two grid, keep the analytic half of its Fourier expansion,
exponentiate, and read off causal coefficients.  Boundary zeros are handled
by clamping the density at a relative floor before taking the log.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .laurent import LaurentPoly, hermitian_on_circle

_REAL_TOL = 1e-10
_NEG_TOL = 1e-7


@dataclass(frozen=True)
class ScalarFactorParams:
    """Grid, truncation and clamping knobs for the scalar stage.

    ``clamp_floor`` is relative: samples below ``clamp_floor * max`` are
    raised to that level so the log stays finite at boundary zeros.
    """

    grid_size: int = 4096
    out_degree: int = 64
    clamp_floor: float = 1e-12

    def __post_init__(self):
        size = self.grid_size
        if size < 4 or size & (size - 1):
            raise PreconditionError("grid_size must be a power of two >= 4")
        if not 0 < self.out_degree < size // 2:
            raise PreconditionError("out_degree must lie in (0, grid_size / 2)")
        if not 0 < self.clamp_floor < 1:
            raise PreconditionError("clamp_floor must lie in (0, 1)")


def _real_samples(density, size):
    if isinstance(density, LaurentPoly):
        values = density.sample_circle(size)
    else:
        values = np.asarray(density, dtype=np.complex128)
        if values.ndim != 1 or len(values) != size:
            raise PreconditionError(
                f"grid density must be a vector of length {size}"
            )
    scale = max(float(np.max(np.abs(values.real))), 1e-300)
    if float(np.max(np.abs(values.imag))) > _REAL_TOL * scale:
        raise PreconditionError("density samples are not real on the grid")
    return values.real


def scalar_spectral_factor(density, params=None):
    """Causal factor f with ``|f|^2`` matching the density on the grid.

    Parameters
    ----------
    density : LaurentPoly or ndarray
        Hermitian Laurent polynomial, or real samples on the params grid.
    params : ScalarFactorParams, optional

    Returns
    -------
    LaurentPoly
        Polynomial supported on ``[0, out_degree]`` with ``f(0)`` real and
        positive (the canonical branch of the outer factor).
    """
    params = params or ScalarFactorParams()
    size = params.grid_size
    s = _real_samples(density, size)
    top = float(np.max(s))
    if not top > 0:
        raise PreconditionError("density has no positive samples")
    clamped = np.maximum(s, params.clamp_floor * top)

    c = np.fft.fft(np.log(clamped)) / size
    half = np.zeros(size, dtype=np.complex128)
    half[0] = 0.5 * c[0]
    half[1 : size // 2] = c[1 : size // 2]
    factor_samples = np.exp(size * np.fft.ifft(half))
    coeffs = np.fft.fft(factor_samples) / size
    return LaurentPoly(0, coeffs[: params.out_degree + 1])


def diagonal_factors(density_matrix, params=None):
    """Canonical scalar factors of the leading principal minor quotients.

    For an r x r Hermitian density S the m-th factor is the canonical scalar
    factor of ``det S_m / det S_{m-1}`` evaluated pointwise on the grid,
    where ``S_m`` is the upper-left m x m block and ``det S_0 = 1``.
    """
    params = params or ScalarFactorParams()
    if not density_matrix.is_square:
        raise PreconditionError("density matrix must be square")
    if not hermitian_on_circle(density_matrix):
        raise PreconditionError("density matrix is not hermitian on the circle")
    size = params.grid_size
    samples = density_matrix.eval_grid(size).values
    factors = []
    prev = np.ones(size)
    for m in range(1, density_matrix.rows + 1):
        block = samples[:, :m, :m]
        dets = block[:, 0, 0] if m == 1 else np.linalg.det(block)
        scale = max(float(np.max(np.abs(dets.real))), 1e-300)
        if float(np.max(np.abs(dets.imag))) > _REAL_TOL * scale:
            raise PreconditionError(f"minor {m} determinant is not real on the grid")
        re = dets.real
        if float(np.max(re)) <= 0 or float(np.min(re)) < -_NEG_TOL * float(np.max(re)):
            raise PreconditionError(
                f"minor {m} determinant is negative on the grid; not a spectral density"
            )
        floor = params.clamp_floor * max(float(np.max(prev)), 1e-300)
        quotient = re / np.maximum(prev, floor)
        factors.append(scalar_spectral_factor(quotient, params))
        prev = re
    return factors
