"""Step-by-step spectral factorization driver.

Starting from the canonical scalar factor of the upper-left entry, the
driver enlarges the factored block one channel at a time: it solves for the
coupling row of the next leading principal block on the grid, runs the
unitary completion on the row's window projection, and multiplies the
completion onto the block.  The unitary steps leave the block's product
with its adjoint intact, so after the last channel the block reproduces the
density up to the scalar stage accuracy, while the projection tails decide
how close to causal it is; both defects are reported in the diagnostics.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .completion import (
    CompletionInput,
    build_system,
    polar_positive_multiplier,
    solve_columns,
    unitarize,
)
from .errors import PreconditionError
from .laurent import (
    LaurentMatrix,
    LaurentPoly,
    hermitian_on_circle,
    project_window,
    residual_metric,
)
from .scalar import ScalarFactorParams, diagonal_factors
from .triangular import solve_last_row

_SIDES = ("left", "right")
_MODES = {
    "center": "center",
    "canonical_center": "center",
    "highest_upper": "highest",
    "highest-upper": "highest",
    "none": "none",
}


@dataclass(frozen=True)
class FactorizationConfig:
    """Orders, scalar stage parameters, side and normalization choices.

    ``orders`` is either a single truncation order broadcast to every step
    or one order per step (r - 1 of them for an r x r density).

    ``row_window`` bounds the power window used to represent the coupling
    rows and scalar pivots inside the recursion.  The completion inputs are
    always projected to the step order; the longer representation only keeps
    the block product faithful when row tails decay slowly.  ``None`` picks
    a default from the orders and the scalar grid.
    """

    orders: object = 32
    scalar: ScalarFactorParams = field(default_factory=ScalarFactorParams)
    side: str = "left"
    normalization: str = "center"
    solver: str = "dense"
    row_window: int = None
    output_window: str = "full"

    def __post_init__(self):
        if self.side not in _SIDES:
            raise PreconditionError(f"side must be one of {_SIDES}")
        if self.normalization not in _MODES:
            raise PreconditionError(
                f"normalization must be one of {sorted(set(_MODES))}"
            )
        if self.solver not in ("dense", "structured"):
            raise PreconditionError("solver must be 'dense' or 'structured'")
        if self.output_window not in ("full", "causal"):
            raise PreconditionError("output_window must be 'full' or 'causal'")

    def order_list(self, size):
        if np.isscalar(self.orders):
            orders = [int(self.orders)] * max(size - 1, 0)
        else:
            orders = [int(n) for n in self.orders]
            if len(orders) != size - 1:
                raise PreconditionError(
                    f"expected {size - 1} step orders, got {len(orders)}"
                )
        if any(n <= 0 for n in orders):
            raise PreconditionError("step orders must be positive")
        return orders


@dataclass
class StepDiagnostics:
    """Condition and defect indicators for one completion step."""

    size: int
    order: int
    gram_condition: float
    unitarity_defect: float
    block_residual: float
    clamped_grid_points: int


@dataclass
class Diagnostics:
    residual: float
    unitarity_defect: float
    det_defect: float
    per_step: list
    min_eig_at_zero: float
    negative_power_mass: float = 0.0
    beyond_window_mass: float = 0.0
    discarded_mass: float = 0.0
    elapsed: float = 0.0


@dataclass
class FactorizationResult:
    factor: LaurentMatrix
    diagnostics: Diagnostics


def _pin_positive_constant(p):
    """Zero the (tiny) imaginary part of the constant coefficient."""
    arr = p.coeff_slice(0, max(p.n_max, 0))
    if not arr[0].real > 0:
        raise PreconditionError(
            "diagonal scalar factor has nonpositive value at the origin"
        )
    arr[0] = arr[0].real
    return LaurentPoly(0, arr)


def _unitarity_defect(u, grid_size=256):
    vals = u.eval_grid(grid_size).values
    prods = vals @ vals.conj().transpose(0, 2, 1)
    prods -= np.eye(u.rows)
    return float(np.max(np.abs(prods)))


def _row_window(cfg, orders):
    if cfg.row_window is not None:
        width = int(cfg.row_window)
    else:
        width = max(6 * max(orders, default=0), 384)
    return min(width, cfg.scalar.grid_size // 2 - 1)


def _effective_scalar(cfg, width):
    """Scalar parameters used inside the driver.

    The factor degree is raised to the recursion row window so the per-step
    order projection is the only tail cut the completions ever see.
    """
    scalar = cfg.scalar
    degree = min(max(scalar.out_degree, width), scalar.grid_size // 2 - 1)
    if degree != scalar.out_degree:
        scalar = replace(scalar, out_degree=degree)
    return scalar


def _left_factorize(density, cfg):
    r = density.rows
    orders = cfg.order_list(r)
    width = _row_window(cfg, orders)
    scalar = _effective_scalar(cfg, width)
    diag = diagonal_factors(density, scalar)
    block = LaurentMatrix([[_pin_positive_constant(diag[0])]])
    per_step = []
    zero = LaurentPoly.zero()
    for m in range(2, r + 1):
        n = orders[m - 2]
        s_col = [density[j, m - 1] for j in range(m - 1)]
        row, clamped = solve_last_row(
            block, s_col, scalar.grid_size, width, scalar.clamp_floor
        )
        pivot = _pin_positive_constant(diag[m - 1])
        step = CompletionInput(
            size=m,
            order=n,
            zeta=tuple(project_window(z, n) for z in row),
            f_plus=_pin_positive_constant(project_window(pivot, n)),
        )
        system = build_system(step)
        bundle = solve_columns(system, step, solver=cfg.solver)
        u_f = unitarize(bundle, step)

        augmented = LaurentMatrix(
            [[block[i, j] for j in range(m - 1)] + [zero] for i in range(m - 1)]
            + [row + [pivot]]
        )
        block = augmented @ u_f

        leading = LaurentMatrix(
            [[density[i, j] for j in range(m)] for i in range(m)]
        )
        per_step.append(
            StepDiagnostics(
                size=m,
                order=n,
                gram_condition=float(np.linalg.cond(system.Delta)),
                unitarity_defect=_unitarity_defect(u_f),
                block_residual=residual_metric(block, leading),
                clamped_grid_points=clamped,
            )
        )
    return block, diag, orders, per_step


def _truncate_causal(factor, top):
    """Keep powers in [0, top]; return the trimmed matrix and dropped mass."""
    kept = []
    dropped = 0.0
    for row in factor.entries:
        out_row = []
        for e in row:
            inside = LaurentPoly(0, e.coeff_slice(0, top))
            dropped += e.mass() - inside.mass()
            out_row.append(inside)
        kept.append(out_row)
    return LaurentMatrix(kept), max(dropped, 0.0)


def _det_on_grid(matrix, grid_size):
    return np.linalg.det(matrix.eval_grid(grid_size).values)


def _det_defect(factor, diag, grid_size=None):
    """Max deviation of det(factor) from the product of the diagonal factors.

    Both sides are compared as functions on the circle after aligning the
    free unitary phase left by the normalization mode.
    """
    target = diag[0]
    for f in diag[1:]:
        target = target * f
    width = max(
        factor.rows * (factor.window()[1] - factor.window()[0]) + 1,
        target.n_max - target.n_min + 1,
    )
    if grid_size is None:
        grid_size = 1 << max(int(np.ceil(np.log2(max(width, 8)))), 3)
        grid_size = min(grid_size, 1 << 15)
    det_vals = _det_on_grid(factor, grid_size)
    ref_vals = target.sample_circle(grid_size)
    k = int(np.argmax(np.abs(ref_vals)))
    if abs(ref_vals[k]) == 0:
        return float(np.max(np.abs(det_vals)))
    phase = det_vals[k] / ref_vals[k]
    if abs(phase) > 0:
        phase /= abs(phase)
    return float(np.max(np.abs(det_vals - phase * ref_vals)))


def canonicalize(factor, mode="center", triangle="upper", top_power=None):
    """Apply the uniqueness normalization to a causal factor.

    ``center`` right-multiplies by the constant unitary making the value at
    the origin Hermitian positive definite.  ``highest`` (highest_upper)
    right-multiplies by the constant unitary making the top-degree
    coefficient triangular with positive diagonal; ``triangle`` selects the
    upper or lower variant and ``top_power`` pins the degree to use (the
    driver passes the density degree so approximation tails are ignored).
    ``none`` returns the factor unchanged.
    """
    kind = _MODES.get(mode)
    if kind is None:
        raise PreconditionError(f"unknown normalization mode {mode!r}")
    if kind == "none":
        return factor
    if kind == "center":
        anchor = factor.coeff_matrix(0)
        if 1.0 / np.linalg.cond(anchor) < 1e-12:
            raise PreconditionError(
                "canonical_center normalization needs a nonsingular value at 0"
            )
        return factor @ polar_positive_multiplier(anchor)

    if top_power is None:
        cutoff = 1e-9 * max(
            (e.max_abs() for row in factor.entries for e in row), default=0.0
        )
        top_power = factor.trim(cutoff).window()[1]
    lead = factor.coeff_matrix(top_power)
    if 1.0 / np.linalg.cond(lead) < 1e-12:
        raise PreconditionError(
            "highest_upper normalization needs a nonsingular leading coefficient"
        )
    if triangle == "upper":
        _, q = scipy.linalg.rq(lead)
        w = q.conj().T
    else:
        flip = np.eye(factor.rows)[::-1]
        _, q = scipy.linalg.rq(flip @ lead)
        w = q.conj().T @ flip
    achieved = np.diag(lead @ w)
    w = w * (np.conj(achieved) / np.abs(achieved))[None, :]
    return factor @ w


def factorize(density, cfg=None):
    """Compute a causal spectral factor of a Hermitian matrix density.

    Parameters
    ----------
    density : LaurentMatrix
        Square, hermitian on the circle.
    cfg : FactorizationConfig, optional

    Returns
    -------
    FactorizationResult
        The factor (left: ``F F^adj ~ S``; right: ``F^adj F ~ S``) and
        residual / defect diagnostics.
    """
    cfg = cfg or FactorizationConfig()
    if not density.is_square:
        raise PreconditionError("density matrix must be square")
    if not hermitian_on_circle(density):
        raise PreconditionError("density matrix is not hermitian on the circle")

    started = time.perf_counter()
    # The right factorization is the transposed left factorization of the
    # transposed density; the normalization triangle flips along.
    right = cfg.side == "right"
    work = density.transpose() if right else density
    triangle = "lower" if right else "upper"

    block, diag, orders, per_step = _left_factorize(work, cfg)
    top = sum(orders) if work.rows > 1 else block.window()[1]
    neg_mass = block.negative_power_mass()
    beyond = max(block.mass() - neg_mass - _truncate_causal(block, top)[0].mass(), 0.0)
    discarded = 0.0
    if cfg.output_window == "causal" and work.rows > 1:
        # Optional hard window: commits the construction tails into the
        # residual, so the default returns the factor as built.
        block, discarded = _truncate_causal(block, top)
    factor = canonicalize(
        block, cfg.normalization, triangle=triangle, top_power=work.window()[1]
    )

    residual = residual_metric(factor, work)
    det_defect = _det_defect(factor, diag)
    out = factor.transpose() if right else factor
    zero_val = out.coeff_matrix(0)
    min_eig = float(
        np.min(np.linalg.eigvalsh(0.5 * (zero_val + zero_val.conj().T)))
    )
    diagnostics = Diagnostics(
        residual=residual,
        unitarity_defect=max((s.unitarity_defect for s in per_step), default=0.0),
        det_defect=det_defect,
        per_step=per_step,
        min_eig_at_zero=min_eig,
        negative_power_mass=neg_mass,
        beyond_window_mass=beyond,
        discarded_mass=discarded,
        elapsed=time.perf_counter() - started,
    )
    return FactorizationResult(factor=out, diagnostics=diagnostics)


def paired_scalar_params(base, order):
    """Scalar parameters tied to a step order, for convergence studies.

    The experiment protocol raises the scalar accuracy together with the
    order; here the clamp floor follows ``10^(-order/5)`` and the grid grows
    so the clamp scale stays resolved.
    """
    clamp = float(np.clip(10.0 ** (-order / 5.0), 1e-14, 1e-3))
    grid = base.grid_size
    need = 8.0 / np.sqrt(clamp)
    while grid < need and grid < (1 << 16):
        grid *= 2
    return replace(base, clamp_floor=clamp, grid_size=grid)


def convergence_sweep(density, cfg, order_list, pair_scalar=True):
    """Residual trend over a list of truncation orders.

    Returns ``[(order, residual), ...]``.  With ``pair_scalar`` the scalar
    stage accuracy is raised alongside the order (the protocol the reported
    accuracy tables follow); otherwise the configured scalar parameters are
    reused unchanged.  No monotonicity is guaranteed.
    """
    cfg = cfg or FactorizationConfig()
    results = []
    for order in order_list:
        scalar = paired_scalar_params(cfg.scalar, order) if pair_scalar else cfg.scalar
        run_cfg = replace(cfg, orders=int(order), scalar=scalar)
        results.append((int(order), factorize(density, run_cfg).diagnostics.residual))
    return results
