"""Unitary completion of a row-augmented identity with causal product.

Given row functions zeta_1..zeta_{m-1} windowed to [-N, N] and a causal
polynomial f with f(0) > 0, this module constructs the unique special
unitary polynomial matrix U such that the augmented matrix

        [ 1              0      ]
    F = [      ...              ]
        [ zeta_1 .. zeta_{m-1} f]

multiplied by U is causal with positive definite value at the origin.  The
construction solves m structured linear systems sharing one positive
definite coefficient matrix, assembles the polynomial solution matrix, and
normalizes it to a unitary by constant right multipliers.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NumericalBreakdownError, PreconditionError
from .laurent import LaurentMatrix, LaurentPoly

_UNIT_TOL = 1e-13


@dataclass(frozen=True)
class CompletionInput:
    """One completion step: row functions, causal pivot, and the order N."""

    size: int
    order: int
    zeta: tuple
    f_plus: LaurentPoly

    def __post_init__(self):
        m, n = self.size, self.order
        if m < 2:
            raise PreconditionError("completion needs size >= 2")
        if n < 0:
            raise PreconditionError("order must be nonnegative")
        if len(self.zeta) != m - 1:
            raise PreconditionError("expected size - 1 row functions")
        object.__setattr__(self, "zeta", tuple(self.zeta))
        for z in self.zeta:
            if not z.is_zero and (z.n_min < -n or z.n_max > n):
                raise PreconditionError("row function exceeds the [-N, N] window")
        f = self.f_plus
        if not f.is_zero and (f.n_min < 0 or f.n_max > n):
            raise PreconditionError("pivot polynomial exceeds the [0, N] window")
        d0 = f.coeff(0)
        if not (d0.real > 0 and abs(d0.imag) <= 1e-10 * d0.real):
            raise PreconditionError("pivot value at 0 must be real and positive")

    def augmented_matrix(self):
        """The row-augmented identity F."""
        m = self.size
        one, zero = LaurentPoly.one(), LaurentPoly.zero()
        rows = [
            [one if i == j else zero for j in range(m)] for i in range(m - 1)
        ]
        rows.append(list(self.zeta) + [self.f_plus])
        return LaurentMatrix(rows)


@dataclass
class CompletionSystem:
    """Block matrices of the linear systems behind one completion step."""

    size: int
    order: int
    D: np.ndarray
    D_inv: np.ndarray
    gamma: np.ndarray
    Gamma: list
    Theta: list
    Delta: np.ndarray


@dataclass
class SolutionBundle:
    """Coefficient solutions and the polynomial matrix they assemble into."""

    X: np.ndarray
    V: LaurentMatrix
    C: np.ndarray = None
    U_F: LaurentMatrix = field(default=None)


def _series_inverse(d):
    """Power series inverse coefficients of a causal polynomial at 0."""
    n = len(d)
    b = np.zeros(n, dtype=np.complex128)
    b[0] = 1.0 / d[0]
    for k in range(1, n):
        b[k] = -np.dot(d[1 : k + 1], b[k - 1 :: -1]) / d[0]
    return b


def theta_closed_form(b, gamma_row):
    """Independent construction of a Theta block from its defining sums.

    Entry (k, l) is ``sum_n b_n gamma_{k+l+n}`` when ``k + l <= N`` and zero
    otherwise, which makes the block symmetric by inspection.
    """
    n1 = len(gamma_row)
    s = np.array(
        [np.dot(b[: n1 - j], gamma_row[j:]) for j in range(n1)],
        dtype=np.complex128,
    )
    return scipy.linalg.hankel(s, np.zeros(n1))


def build_system(inp):
    """Assemble D, its inverse, the Hankel blocks and the Gram matrix Delta.

    The row-function coefficients enter through ``gamma[i, n]``, the
    coefficient of ``t^{-n}`` of zeta_i: the completion eliminates
    non-positive powers, so the anticausal side of each row function is what
    drives the system.
    """
    m, n = inp.size, inp.order
    n1 = n + 1
    d = inp.f_plus.coeff_slice(0, n)
    d[0] = d[0].real
    if not d[0].real > 0:
        raise PreconditionError("pivot constant coefficient must be positive")
    dmat = scipy.linalg.toeplitz(np.concatenate(([d[0]], np.zeros(n))), d)
    b = _series_inverse(d)
    dinv = scipy.linalg.toeplitz(np.concatenate(([b[0]], np.zeros(n))), b)

    # gamma[i, n] is the coefficient of t^{-n} of zeta_i.
    gamma = np.zeros((m - 1, n1), dtype=np.complex128)
    for i, z in enumerate(inp.zeta):
        gamma[i] = z.coeff_slice(-n, 0)[::-1]
    big_gamma = [scipy.linalg.hankel(gamma[i], np.zeros(n1)) for i in range(m - 1)]
    theta = [dinv @ g for g in big_gamma]
    delta = np.eye(n1, dtype=np.complex128)
    for th in theta:
        delta += th @ th.conj().T
    delta = 0.5 * (delta + delta.conj().T)
    return CompletionSystem(
        size=m, order=n, D=dmat, D_inv=dinv, gamma=gamma,
        Gamma=big_gamma, Theta=theta, Delta=delta,
    )


def solve_columns(system, inp, solver="dense"):
    """Solve the m right-hand sides and assemble the polynomial matrix V.

    Rows 1..m-1 of V hold the causal solutions directly; row m holds their
    circle conjugates, matching the structure the unitary completion needs.
    """
    m, n1 = system.size, system.order + 1
    one = np.zeros(n1, dtype=np.complex128)
    one[0] = 1.0
    dinv = system.D_inv
    cdinv_one = np.conj(dinv) @ one
    rhs = np.empty((n1, m), dtype=np.complex128)
    for j in range(m - 1):
        rhs[:, j] = dinv @ (system.Gamma[j] @ cdinv_one)
    rhs[:, m - 1] = dinv @ one

    if solver == "structured":
        from .displacement import generators, structured_solve

        y = structured_solve(generators(system), rhs)
    elif solver == "dense":
        try:
            cho = scipy.linalg.cho_factor(system.Delta, lower=True)
        except scipy.linalg.LinAlgError as exc:
            # Delta is positive definite by construction; reaching this
            # means the system matrices were corrupted upstream.
            raise NumericalBreakdownError(
                "completion Gram matrix is not positive definite"
            ) from exc
        y = scipy.linalg.cho_solve(cho, rhs)
    else:
        raise PreconditionError(f"unknown solver {solver!r}")

    # y holds conj(X_m) per column; back substitution recovers the rest.
    x = np.empty((m, m, n1), dtype=np.complex128)
    x[m - 1] = np.conj(y).T
    cdinv = np.conj(dinv)
    for i in range(m - 1):
        x[i] = (cdinv @ (np.conj(system.Gamma[i]) @ y)).T
        x[i, i] -= cdinv_one

    rows = [[LaurentPoly(0, x[i, j]) for j in range(m)] for i in range(m - 1)]
    rows.append(
        [LaurentPoly(-system.order, np.conj(x[m - 1, j])[::-1]) for j in range(m)]
    )
    return SolutionBundle(X=x, V=LaurentMatrix(rows))


def _sqrtm_hpd(h):
    w, v = np.linalg.eigh(h)
    w = np.maximum(w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def polar_positive_multiplier(b):
    """Unitary Q such that ``b @ Q`` is Hermitian positive definite."""
    return np.linalg.solve(b, _sqrtm_hpd(b @ b.conj().T))


def unitarize(bundle, inp):
    """Normalize the solution matrix to the special unitary completion.

    Divides out the value at t = 1, then applies the constant unitary that
    makes the causal product positive definite at the origin.
    """
    v_at_one = bundle.V(1.0)
    if 1.0 / np.linalg.cond(v_at_one) < _UNIT_TOL:
        raise NumericalBreakdownError(
            "solution matrix is numerically singular at t = 1"
        )
    bundle.C = (v_at_one.conj().T @ v_at_one).T
    u = bundle.V @ np.linalg.inv(v_at_one)
    fu0 = (inp.augmented_matrix() @ u).coeff_matrix(0)
    u_f = u @ polar_positive_multiplier(fu0)
    bundle.U_F = u_f
    return u_f


def unitary_completion(inp, solver="dense"):
    """Full completion step: build, solve, and unitarize."""
    system = build_system(inp)
    bundle = solve_columns(system, inp, solver=solver)
    return unitarize(bundle, inp)
