"""Shift-displacement structure of the completion Gram matrix.

The Gram matrix Delta of one completion step satisfies a rank-m relation
``Delta - Z Delta Z^H = A A^H`` where Z is the superdiagonal shift and the
generator A stacks the first columns of the Theta blocks next to the last
standard basis vector.  This module builds and verifies generators and
offers a structured O(m N^2) solve as an alternative to dense Cholesky.

The structured kernel is compiled (Cython) when available; a pure numpy
fallback with identical semantics is selected at import otherwise.  Set
``SPECFACT_PURE_KERNEL=1`` to force the fallback.
"""

import os
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _schur
from .errors import NumericalBreakdownError

if os.environ.get("SPECFACT_PURE_KERNEL"):
    _kernel = None
else:
    try:
        from . import _schurext as _kernel
    except ImportError:
        _kernel = None

COMPILED_KERNEL = _kernel is not None
_schur_cholesky = _kernel.schur_cholesky if COMPILED_KERNEL else _schur.schur_cholesky
_BREAKDOWN = (
    (_kernel.KernelBreakdown, NumericalBreakdownError)
    if COMPILED_KERNEL
    else (NumericalBreakdownError,)
)


@dataclass(frozen=True)
class DisplacementGenerator:
    """Generator columns of ``Delta - Z Delta Z^H = A A^H``.

    The shift Z (superdiagonal ones) is implicit; it is a fixed nilpotent
    pattern and is never materialized.
    """

    columns: np.ndarray

    @property
    def order(self):
        return self.columns.shape[0] - 1

    @property
    def rank_bound(self):
        return self.columns.shape[1]


def displacement_of(mat):
    """Apply ``M -> M - Z M Z^H`` (drop first row/column, re-embed, subtract)."""
    mat = np.asarray(mat)
    out = mat.copy()
    out[:-1, :-1] -= mat[1:, 1:]
    return out


def generators(system):
    """Generator of the Gram matrix of a completion system.

    Uses the first column of each Theta block (the blocks are symmetric with
    constant antidiagonals, so first row and column agree) plus the last
    standard basis vector contributed by the identity part.
    """
    n1 = system.order + 1
    cols = [th[:, 0] for th in system.Theta]
    e_last = np.zeros(n1, dtype=np.complex128)
    e_last[-1] = 1.0
    cols.append(e_last)
    return DisplacementGenerator(columns=np.column_stack(cols))


def dense_from_generator(gen):
    """Reconstruct the full matrix from its generator.

    Solves the displacement relation by back accumulation along diagonals;
    used by tests and by the dense fallback path.
    """
    p = gen.columns @ gen.columns.conj().T
    n = p.shape[0]
    out = np.zeros_like(p)
    out[n - 1] = p[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = p[i]
        out[i, : n - 1] += out[i + 1, 1:]
    return 0.5 * (out + out.conj().T)


def structured_solve(gen, rhs):
    """Solve ``Delta x = rhs`` through the generator in O(m N^2).

    The superdiagonal-shift generator is flipped to the subdiagonal-shift
    convention of the kernel, triangularized, and the result is applied by
    two triangular solves per right-hand side.  A generator inconsistent
    with positive definiteness falls back to a dense solve with a warning.

    ``rhs`` may be a single vector, a 2-D array of stacked columns, or a
    sequence of vectors; the result matches the input shape.
    """
    as_list = isinstance(rhs, (list, tuple))
    b = np.stack(rhs, axis=-1) if as_list else np.asarray(rhs, dtype=np.complex128)
    single = b.ndim == 1
    if single:
        b = b[:, None]
    if b.shape[0] != gen.columns.shape[0]:
        raise ValueError("right-hand side length does not match the generator")

    flipped = gen.columns[::-1]
    try:
        chol = _schur_cholesky(flipped)
    except _BREAKDOWN:
        warnings.warn(
            "structured solve broke down; falling back to a dense solve",
            RuntimeWarning,
            stacklevel=2,
        )
        dense = dense_from_generator(gen)
        try:
            x = scipy.linalg.cho_solve(scipy.linalg.cho_factor(dense, lower=True), b)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise NumericalBreakdownError(
                "generator is inconsistent with positive definiteness"
            ) from exc
    else:
        y = scipy.linalg.solve_triangular(chol, b[::-1], lower=True)
        x = scipy.linalg.solve_triangular(
            chol.conj().T, y, lower=False
        )[::-1]
    if single:
        x = x[:, 0]
    if as_list:
        return [x[:, j] for j in range(x.shape[1])]
    return x
