"""Lower triangular pre-factorization S = M M* with canonical diagonal.

The diagonal of M carries the canonical scalar factors of the leading minor
quotients; each subdiagonal row is obtained from a pointwise grid solve
against the previous leading block, then projected back to a finite power
window.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .laurent import (
    LaurentMatrix,
    LaurentPoly,
    coeffs_from_samples,
    hermitian_on_circle,
)
from .scalar import ScalarFactorParams, diagonal_factors


@dataclass(frozen=True)
class TriangularFactor:
    """Lower triangular factor and its diagonal scalar factors."""

    matrix: LaurentMatrix
    diag_factors: tuple


def solve_last_row(m_prev, s_col, grid_size, trunc, sing_floor=1e-12):
    """Solve ``m_prev(t) row*(t) = s_col(t)`` pointwise on the grid.

    Parameters
    ----------
    m_prev : LaurentMatrix
        Previous (k x k) factor block, invertible a.e. on the circle.
    s_col : sequence of LaurentPoly
        Density column entries coupling the new channel to the previous ones.
    grid_size : int
        Number of circle samples used for the solve.
    trunc : int
        The returned row entries are windowed to ``[-trunc, trunc]``.
    sing_floor : float
        Relative determinant threshold below which a grid point is treated
        as singular and solved with a ridge fallback.

    Returns
    -------
    (list of LaurentPoly, int)
        The row functions and the number of clamped grid points.
    """
    k = m_prev.rows
    if m_prev.cols != k or len(s_col) != k:
        raise PreconditionError("block and column sizes are inconsistent")
    if 2 * trunc + 1 > grid_size:
        raise PreconditionError("truncation window does not fit on the grid")
    mats = m_prev.eval_grid(grid_size).values
    rhs = np.stack([p.sample_circle(grid_size) for p in s_col], axis=-1)

    dets = np.abs(np.linalg.det(mats))
    bad = dets < sing_floor * max(float(dets.max()), 1e-300)
    sol = np.empty((grid_size, k), dtype=np.complex128)
    good = ~bad
    if good.any():
        sol[good] = np.linalg.solve(mats[good], rhs[good][..., None])[..., 0]
    if bad.any():
        # Ridge fallback keeps near-singular samples finite; the scale is the
        # global block magnitude so exactly singular samples stay regular.
        a = mats[bad]
        ah = a.conj().transpose(0, 2, 1)
        gram = ah @ a
        ridge = sing_floor * max(float(np.abs(mats).max()) ** 2, 1e-300)
        gram += ridge * np.eye(k)
        sol[bad] = np.linalg.solve(gram, (ah @ rhs[bad][..., None]))[..., 0]

    row_samples = np.conj(sol)
    row = [
        coeffs_from_samples(row_samples[:, j], -trunc, trunc) for j in range(k)
    ]
    return row, int(bad.sum())


def triangular_factor(density, params=None, trunc=None):
    """Lower triangular M with M M* reproducing the density.

    ``trunc`` bounds the power window of the subdiagonal entries and defaults
    to the scalar stage's out_degree.
    """
    params = params or ScalarFactorParams()
    if trunc is None:
        trunc = params.out_degree
    if not density.is_square:
        raise PreconditionError("density matrix must be square")
    if not hermitian_on_circle(density):
        raise PreconditionError("density matrix is not hermitian on the circle")
    diag = diagonal_factors(density, params)
    r = density.rows
    zero = LaurentPoly.zero()
    entries = [[zero] * r for _ in range(r)]
    entries[0][0] = diag[0]
    for m in range(2, r + 1):
        block = LaurentMatrix([entries[i][: m - 1] for i in range(m - 1)])
        s_col = [density[j, m - 1] for j in range(m - 1)]
        row, _ = solve_last_row(
            block, s_col, params.grid_size, trunc, params.clamp_floor
        )
        for j in range(m - 1):
            entries[m - 1][j] = row[j]
        entries[m - 1][m - 1] = diag[m - 1]
    return TriangularFactor(matrix=LaurentMatrix(entries), diag_factors=tuple(diag))
