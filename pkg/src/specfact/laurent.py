"""Laurent polynomial and Laurent matrix arithmetic on the unit circle.

Coefficients are dense complex arrays over an integer power window
``[n_min, n_max]``.  All operations are pure; values are immutable after
construction, so they can be shared freely between threads.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalBreakdownError, PreconditionError

_ZERO_TOL = 0.0  # construction trims exact zeros only


def _as_coeff_array(coeffs):
    arr = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    return arr


class LaurentPoly:
    """Trigonometric (Laurent) polynomial ``sum_n c_n t^n``.

    Parameters
    ----------
    n_min : int
        Power of the first stored coefficient.
    coeffs : array_like
        Complex coefficients for powers ``n_min .. n_min + len - 1``.
        Exact zeros at both ends are trimmed on construction; equality is
        defined modulo such trimming.
    """

    __slots__ = ("n_min", "coeffs")

    def __init__(self, n_min, coeffs):
        arr = _as_coeff_array(coeffs)
        nz = np.nonzero(arr)[0]
        if nz.size == 0:
            n_min, arr = 0, np.zeros(1, dtype=np.complex128)
        else:
            lo, hi = nz[0], nz[-1] + 1
            n_min = int(n_min) + int(lo)
            arr = arr[lo:hi].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "n_min", int(n_min))
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(0, [0.0])

    @classmethod
    def one(cls):
        return cls(0, [1.0])

    @classmethod
    def constant(cls, c):
        return cls(0, [c])

    @classmethod
    def monomial(cls, n, c=1.0):
        return cls(n, [c])

    @classmethod
    def from_dict(cls, d):
        """Build from a ``{power: coefficient}`` mapping."""
        if not d:
            return cls.zero()
        lo = min(d)
        arr = np.zeros(max(d) - lo + 1, dtype=np.complex128)
        for n, c in d.items():
            arr[n - lo] = c
        return cls(lo, arr)

    # -- basic queries -----------------------------------------------------

    @property
    def n_max(self):
        return self.n_min + len(self.coeffs) - 1

    @property
    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def window(self):
        return (self.n_min, self.n_max)

    def coeff(self, n):
        """Coefficient of ``t^n`` (zero outside the stored window)."""
        k = n - self.n_min
        if 0 <= k < len(self.coeffs):
            return complex(self.coeffs[k])
        return 0.0 + 0.0j

    def coeff_slice(self, lo, hi):
        """Coefficients for powers ``lo .. hi`` inclusive, zero padded."""
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        a = max(lo, self.n_min)
        b = min(hi, self.n_max)
        if a <= b:
            out[a - lo : b - lo + 1] = self.coeffs[a - self.n_min : b - self.n_min + 1]
        return out

    def mass(self):
        """Sum of absolute values of all coefficients."""
        return float(np.sum(np.abs(self.coeffs)))

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs)))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if np.isscalar(other):
            other = LaurentPoly.constant(other)
        lo = min(self.n_min, other.n_min)
        hi = max(self.n_max, other.n_max)
        return LaurentPoly(lo, self.coeff_slice(lo, hi) + other.coeff_slice(lo, hi))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.n_min, -self.coeffs)

    def __sub__(self, other):
        if np.isscalar(other):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return LaurentPoly(self.n_min, self.coeffs * other)
        return LaurentPoly(
            self.n_min + other.n_min, np.convolve(self.coeffs, other.coeffs)
        )

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``t^k``."""
        return LaurentPoly(self.n_min + k, self.coeffs)

    def adjoint(self):
        """Conjugate on the circle: ``t -> 1/t`` with conjugated coefficients."""
        return LaurentPoly(-self.n_max, np.conj(self.coeffs[::-1]))

    def trim(self, tol):
        """Drop edge coefficients with absolute value <= ``tol``."""
        keep = np.abs(self.coeffs) > tol
        nz = np.nonzero(keep)[0]
        if nz.size == 0:
            return LaurentPoly.zero()
        return LaurentPoly(self.n_min + nz[0], self.coeffs[nz[0] : nz[-1] + 1])

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        """Evaluate at a complex point (z = 0 requires a causal polynomial)."""
        z = complex(z)
        if z == 0:
            if self.n_min < 0:
                raise PreconditionError(
                    "cannot evaluate a polynomial with negative powers at 0"
                )
            return self.coeff(0)
        # Horner on ascending powers, then restore the leading shift.
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc * z**self.n_min

    def sample_circle(self, size):
        """Values at the ``size`` roots of unity ``t_k = exp(2 pi i k / size)``.

        Exact for any window: powers wrap modulo ``size`` on the grid.
        """
        embed = np.zeros(size, dtype=np.complex128)
        idx = (self.n_min + np.arange(len(self.coeffs))) % size
        np.add.at(embed, idx, self.coeffs)
        return size * np.fft.ifft(embed)

    def is_hermitian(self, tol=1e-10):
        """Whether ``c_{-n} == conj(c_n)``, i.e. real valued on the circle."""
        d = self - self.adjoint()
        return d.mass() <= tol * max(1.0, self.mass())


def poly_allclose(a, b, tol=0.0):
    """Coefficientwise comparison modulo window padding."""
    d = a - b
    if d.is_zero:
        return True
    return d.max_abs() <= tol


def coeffs_from_samples(values, lo, hi):
    """Inverse of :meth:`LaurentPoly.sample_circle` for a window in (-L/2, L/2)."""
    values = np.asarray(values, dtype=np.complex128)
    size = len(values)
    _check_window(lo, hi, size)
    c = np.fft.fft(values) / size
    idx = np.arange(lo, hi + 1) % size
    return LaurentPoly(lo, c[idx])


def _check_window(lo, hi, size):
    if hi < lo:
        raise PreconditionError("empty power window")
    if lo <= -size / 2 or hi >= size / 2:
        raise PreconditionError(
            f"window [{lo}, {hi}] does not fit in (-{size // 2}, {size // 2})"
        )


def project_plus(p):
    """Keep powers >= 0 (index 0 included)."""
    if p.n_min >= 0:
        return p
    return LaurentPoly(0, p.coeffs[-p.n_min :]) if p.n_max >= 0 else LaurentPoly.zero()


def project_minus(p):
    """Keep powers <= 0 (index 0 included)."""
    if p.n_max <= 0:
        return p
    k = -p.n_min + 1
    return LaurentPoly(p.n_min, p.coeffs[:k]) if p.n_min <= 0 else LaurentPoly.zero()


def project_window(p, n):
    """Keep powers with |power| <= n."""
    lo = max(p.n_min, -n)
    hi = min(p.n_max, n)
    if hi < lo:
        return LaurentPoly.zero()
    return LaurentPoly(lo, p.coeffs[lo - p.n_min : hi - p.n_min + 1])


def _as_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    if np.isscalar(x):
        return LaurentPoly.constant(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as LaurentPoly")


@dataclass(frozen=True)
class GridSamples:
    """Samples of a Laurent matrix at the roots of unity.

    ``values`` has shape ``(size, rows, cols)`` so that sample matrices can be
    fed to batched linear algebra directly.
    """

    size: int
    values: np.ndarray


class LaurentMatrix:
    """Rectangular matrix of :class:`LaurentPoly` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        rows = len(entries)
        if rows == 0:
            raise ValueError("matrix must have at least one row")
        cols = len(entries[0])
        grid = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged rows in matrix construction")
            grid.append(tuple(_as_poly(e) for e in row))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(grid))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n):
        one, zero = LaurentPoly.one(), LaurentPoly.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        zero = LaurentPoly.zero()
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def from_tensor(cls, tensor, n_min):
        """Build from a dense ``(rows, cols, width)`` coefficient tensor."""
        tensor = np.asarray(tensor, dtype=np.complex128)
        return cls(
            [
                [LaurentPoly(n_min, tensor[i, j]) for j in range(tensor.shape[1])]
                for i in range(tensor.shape[0])
            ]
        )

    @classmethod
    def diag(cls, polys):
        zero = LaurentPoly.zero()
        n = len(polys)
        return cls(
            [[_as_poly(polys[i]) if i == j else zero for j in range(n)] for i in range(n)]
        )

    # -- queries -----------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    @property
    def is_square(self):
        return self.rows == self.cols

    def window(self):
        lo = min(e.n_min for row in self.entries for e in row)
        hi = max(e.n_max for row in self.entries for e in row)
        return (lo, hi)

    def to_tensor(self, window=None):
        """Dense ``(rows, cols, width)`` coefficient tensor over ``window``."""
        lo, hi = window if window is not None else self.window()
        out = np.zeros((self.rows, self.cols, hi - lo + 1), dtype=np.complex128)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = self.entries[i][j].coeff_slice(lo, hi)
        return out

    def coeff_matrix(self, n):
        """Matrix of entry coefficients at power ``n``."""
        return np.array(
            [[e.coeff(n) for e in row] for row in self.entries], dtype=np.complex128
        )

    def mass(self):
        return float(sum(e.mass() for row in self.entries for e in row))

    def negative_power_mass(self):
        """Total coefficient mass at strictly negative powers."""
        total = 0.0
        for row in self.entries:
            for e in row:
                if e.n_min < 0:
                    k = min(-e.n_min, len(e.coeffs))
                    total += float(np.sum(np.abs(e.coeffs[:k])))
        return total

    # -- arithmetic --------------------------------------------------------

    def _binary(self, other, op):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise PreconditionError("matrix dimension mismatch")
        return LaurentMatrix(
            [
                [op(self.entries[i][j], other.entries[i][j]) for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, scalar):
        return LaurentMatrix([[e * scalar for e in row] for row in self.entries])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, np.ndarray):
            other = _const_matrix(other)
        if self.cols != other.rows:
            raise PreconditionError("matrix dimension mismatch in product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.entries[i][0] * other.entries[0][j]
                for k in range(1, self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray):
            return _const_matrix(other) @ self
        return NotImplemented

    def adjoint(self):
        """Conjugate transpose on the circle, entrywise ``t -> 1/t``."""
        return LaurentMatrix(
            [
                [self.entries[j][i].adjoint() for j in range(self.rows)]
                for i in range(self.cols)
            ]
        )

    def transpose(self):
        return LaurentMatrix(
            [[self.entries[j][i] for j in range(self.rows)] for i in range(self.cols)]
        )

    def map(self, fn):
        """Apply ``fn`` to every entry."""
        return LaurentMatrix([[fn(e) for e in row] for row in self.entries])

    def trim(self, tol):
        return self.map(lambda e: e.trim(tol))

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        return np.array(
            [[e(z) for e in row] for row in self.entries], dtype=np.complex128
        )

    def eval_grid(self, size):
        """Sample every entry at the ``size`` roots of unity."""
        lo, hi = self.window()
        tensor = self.to_tensor((lo, hi))
        width = hi - lo + 1
        embed = np.zeros((self.rows * self.cols, size), dtype=np.complex128)
        idx = (lo + np.arange(width)) % size
        np.add.at(
            embed,
            (np.arange(self.rows * self.cols)[:, None], idx[None, :]),
            tensor.reshape(self.rows * self.cols, width),
        )
        values = size * np.fft.ifft(embed, axis=-1)
        values = values.reshape(self.rows, self.cols, size).transpose(2, 0, 1)
        return GridSamples(size=size, values=values)


def _const_matrix(arr):
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError("constant factor must be a 2-D array")
    return LaurentMatrix(
        [[LaurentPoly.constant(arr[i, j]) for j in range(arr.shape[1])] for i in range(arr.shape[0])]
    )


def eval_grid(a, size):
    return a.eval_grid(size)


def coeffs_from_grid(grid, window):
    """Recover a LaurentMatrix from grid samples over a given power window."""
    lo, hi = window
    _check_window(lo, hi, grid.size)
    c = np.fft.fft(grid.values, axis=0) / grid.size
    idx = np.arange(lo, hi + 1) % grid.size
    tensor = c[idx].transpose(1, 2, 0)
    return LaurentMatrix.from_tensor(tensor, lo)


def hermitian_on_circle(a, tol=1e-10):
    """Whether entry (i, j) at power n equals conj of entry (j, i) at power -n."""
    if not a.is_square:
        return False
    scale = max(a.mass(), 1.0)
    for i in range(a.rows):
        for j in range(i, a.cols):
            d = a.entries[i][j] - a.entries[j][i].adjoint()
            if d.mass() > tol * scale:
                return False
    return True


def matrix_allclose(a, b, tol):
    d = a - b
    return all(e.max_abs() <= tol for row in d.entries for e in row)


# -- determinants ----------------------------------------------------------


def det_laurent(a):
    """Exact Laurent polynomial determinant of a square matrix.

    Cofactor (minor expansion) for orders up to 4, fraction-free elimination
    above; both stay in exact coefficient arithmetic.
    """
    if not a.is_square:
        raise PreconditionError("determinant requires a square matrix")
    if a.rows <= 4:
        return _det_minors(a)
    return _det_bareiss(a)


def _det_minors(a):
    n = a.rows
    memo = {}

    def minor(k, mask):
        if k == n:
            return LaurentPoly.one()
        key = mask
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = LaurentPoly.zero()
        sign = 1.0
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                continue
            term = a.entries[k][j] * minor(k + 1, mask | bit)
            acc = acc + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = acc
        return acc

    return minor(0, 0)


def _poly_div_exact(num, den, rel_tol=1e-8):
    """Exact Laurent polynomial quotient; raises if the division is inexact."""
    if num.is_zero:
        return LaurentPoly.zero()
    if den.is_zero:
        raise NumericalBreakdownError("division by the zero polynomial")
    q, rem = np.polydiv(num.coeffs[::-1], den.coeffs[::-1])
    rem_mass = float(np.sum(np.abs(rem)))
    if rem_mass > rel_tol * max(num.mass(), 1e-300):
        raise NumericalBreakdownError(
            "inexact polynomial division during fraction-free elimination"
        )
    return LaurentPoly(num.n_min - den.n_min, q[::-1])


def _det_bareiss(a):
    n = a.rows
    m = [[a.entries[i][j] for j in range(n)] for i in range(n)]
    sign = 1.0
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero:
            pivot = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if pivot is None:
                return LaurentPoly.zero()
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = _poly_div_exact(num, prev)
            m[i][k] = LaurentPoly.zero()
        prev = m[k][k]
    return m[n - 1][n - 1] * sign if sign < 0 else m[n - 1][n - 1]


# -- residual metric -------------------------------------------------------


def residual_metric(candidate, density):
    """Mean absolute coefficient of ``candidate * candidate^adj - density``.

    Left factor convention; callers transpose for the right convention.  The
    mean runs over all matrix entries and the union power window of the
    product and the density.
    """
    if (candidate.rows, candidate.cols) != (density.rows, density.cols):
        raise PreconditionError("candidate and density dimensions differ")
    product = candidate @ candidate.adjoint()
    plo, phi = product.window()
    slo, shi = density.window()
    lo, hi = min(plo, slo), max(phi, shi)
    err = product.to_tensor((lo, hi)) - density.to_tensor((lo, hi))
    return float(np.mean(np.abs(err)))
