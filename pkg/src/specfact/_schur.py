"""Pure numpy generator-driven triangularization (fallback kernel).

Computes the Cholesky factor of a Hermitian positive definite matrix given
only its shift-displacement generator: the matrix never has to be formed.
One step compresses the leading generator row onto its first column with a
Householder reflection, reads off a Cholesky column, and shifts the first
generator column down by one.  Cost is O(m n^2) for an (n x m) generator.

The convention here is the lower shift: the represented matrix T satisfies
``T - Z T Z^H = G G^H`` with Z the subdiagonal shift.
"""

import numpy as np

from .errors import NumericalBreakdownError


def schur_cholesky(gen):
    """Lower Cholesky factor of the matrix generated by ``gen``.

    Raises NumericalBreakdownError when a pivot collapses, which signals a
    generator inconsistent with positive definiteness.
    """
    g = np.array(gen, dtype=np.complex128, order="C")
    if g.ndim != 2:
        raise ValueError("generator must be a 2-D array")
    n, m = g.shape
    out = np.zeros((n, n), dtype=np.complex128)
    floor = 1e-28 * max(float(np.max(np.abs(g)) ** 2), 1e-300)
    for k in range(n):
        row = g[k]
        head = abs(row[0]) ** 2
        # summing the tail directly matters: head + tail2 - head cancels to
        # zero once tail < sqrt(eps) * pivot, and skipping the reflection
        # then silently drops that tail from the factorization
        tail2 = float(np.sum(row[1:].real**2 + row[1:].imag**2))
        nrm2 = head + tail2
        if not nrm2 > floor:
            raise NumericalBreakdownError("generator pivot collapsed")
        if tail2 > 0.0 and m > 1:
            # Compress the row onto its first column with a Householder
            # reflection applied from the right to all active rows.
            nrm = np.sqrt(nrm2)
            a0 = row[0]
            phase = a0 / abs(a0) if abs(a0) > 0 else 1.0
            w = np.conj(row).copy()
            w[0] += np.conj(phase) * nrm
            tau = 2.0 / float(np.sum(w.real**2 + w.imag**2))
            proj = g[k:] @ w
            g[k:] -= tau * np.outer(proj, np.conj(w))
            g[k, 1:] = 0.0
        pivot = g[k, 0]
        mu = np.conj(pivot) / abs(pivot)
        g[k:, 0] *= mu
        out[k:, k] = g[k:, 0]
        g[k + 1 :, 0] = out[k : n - 1, k]
    return out
