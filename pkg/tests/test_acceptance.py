"""Acceptance suite: one check per shipped guarantee, at pinned tolerances.

Run with ``pytest -s tests/test_acceptance.py`` to see the PASS/FAIL line
for every criterion.
"""

import time

import numpy as np
import pytest

from specfact import (
    FactorizationConfig,
    LaurentPoly,
    ScalarFactorParams,
    build_system,
    convergence_sweep,
    dense_from_generator,
    displacement_of,
    factorize,
    generators,
    scalar_spectral_factor,
    structured_solve,
    unitary_completion,
)
from specfact.completion import theta_closed_form

from conftest import known_boundary_zero_density, rand_completion_input, rand_density


def report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, f"{name}: {detail}"


def test_known_answer_reproduction():
    s = known_boundary_zero_density()
    cfg = FactorizationConfig(
        orders=40,
        side="right",
        normalization="highest_upper",
        scalar=ScalarFactorParams(grid_size=65536, out_degree=64, clamp_floor=1e-9),
    )
    start = time.perf_counter()
    res = factorize(s, cfg)
    elapsed = time.perf_counter() - start
    c0 = res.factor.coeff_matrix(0)
    c1 = res.factor.coeff_matrix(1)
    dev = max(
        np.abs(c0 - np.array([[2, 7], [1, 3]])).max(),
        np.abs(c1 - np.array([[1, 5], [0, 1]])).max(),
    )
    # the exact factor has degree one; everything above is approximation tail
    tail = sum(
        float(np.abs(e.coeff_slice(2, max(e.n_max, 2))).sum())
        for row in res.factor.entries
        for e in row
    )
    report(
        "known-answer 2x2 factor",
        dev <= 1e-4 and elapsed <= 5.0 and tail <= 1e-3,
        f"max coefficient deviation {dev:.2e}, tail {tail:.1e}, {elapsed:.2f}s",
    )


def test_convergence_trend():
    s = known_boundary_zero_density()
    cfg = FactorizationConfig(side="right", normalization="highest_upper")
    out = convergence_sweep(s, cfg, [20, 30, 40])
    residuals = [r for _, r in out]
    ok = residuals[0] > residuals[1] > residuals[2]
    report(
        "convergence trend",
        ok,
        "residuals " + " > ".join(f"{r:.2e}" for r in residuals),
    )


def test_round_trip_property():
    rng = np.random.default_rng(7151)
    passed = 0
    worst_time = 0.0
    worst_res = 0.0
    for _ in range(50):
        size = int(rng.integers(2, 5))
        _, s = rand_density(rng, size, 3)
        start = time.perf_counter()
        res = factorize(s, FactorizationConfig(orders=32, normalization="none"))
        elapsed = time.perf_counter() - start
        worst_time = max(worst_time, elapsed)
        worst_res = max(worst_res, res.diagnostics.residual)
        if res.diagnostics.residual <= 1e-6:
            passed += 1
    report(
        "round-trip residuals",
        passed >= 48 and worst_time <= 30.0,
        f"{passed}/50 within 1e-6, worst residual {worst_res:.2e}, "
        f"slowest trial {worst_time:.2f}s",
    )


def test_unitary_completion_suite():
    rng = np.random.default_rng(40121)
    worst = {"unitarity": 0.0, "det": 0.0, "neg_mass": 0.0, "gram": 0.0}
    min_eig = np.inf
    for _ in range(100):
        m = int(rng.integers(2, 5))
        order = int(rng.integers(0, 17))
        inp = rand_completion_input(rng, m, order)
        u_f = unitary_completion(inp)
        vals = u_f.eval_grid(128).values
        worst["unitarity"] = max(
            worst["unitarity"],
            float(np.abs(vals @ vals.conj().transpose(0, 2, 1) - np.eye(m)).max()),
        )
        worst["det"] = max(
            worst["det"], float(np.abs(np.linalg.det(vals) - 1).max())
        )
        fu = inp.augmented_matrix() @ u_f
        worst["neg_mass"] = max(worst["neg_mass"], fu.negative_power_mass())
        b0 = fu.coeff_matrix(0)
        min_eig = min(
            min_eig, float(np.linalg.eigvalsh(0.5 * (b0 + b0.conj().T)).min())
        )
        g = vals.conj().transpose(0, 2, 1) @ vals
        worst["gram"] = max(
            worst["gram"],
            float(np.abs(g - g[0]).max() / max(np.abs(g[0]).max(), 1e-300)),
        )
    ok = (
        worst["unitarity"] <= 1e-8
        and worst["det"] <= 1e-8
        and worst["neg_mass"] <= 1e-9
        and min_eig > 0
        and worst["gram"] <= 1e-8
    )
    report(
        "unitary completion suite",
        ok,
        f"unitarity {worst['unitarity']:.1e}, det {worst['det']:.1e}, "
        f"neg mass {worst['neg_mass']:.1e}, min eig {min_eig:.2e}, "
        f"gram spread {worst['gram']:.1e}",
    )


def test_gram_matrix_properties():
    rng = np.random.default_rng(90321)
    worst_theta = 0.0
    worst_disp = 0.0
    min_eig = np.inf
    for _ in range(100):
        m = int(rng.integers(2, 5))
        order = int(rng.integers(0, 25))
        sys = build_system(rand_completion_input(rng, m, order, zeta_scale=1.5))
        for i, th in enumerate(sys.Theta):
            ref = theta_closed_form(sys.D_inv[0], sys.gamma[i])
            worst_theta = max(
                worst_theta,
                float(np.abs(th - ref).max() / max(np.abs(ref).max(), 1.0)),
            )
        min_eig = min(min_eig, float(np.linalg.eigvalsh(sys.Delta).min()))
        gen = generators(sys)
        lhs = displacement_of(sys.Delta)
        rhs = gen.columns @ gen.columns.conj().T
        worst_disp = max(
            worst_disp,
            float(np.abs(lhs - rhs).max() / max(np.abs(sys.Delta).max(), 1e-300)),
        )
    ok = worst_theta <= 1e-12 and min_eig >= 1 - 1e-9 and worst_disp <= 1e-10
    report(
        "gram matrix properties",
        ok,
        f"theta dev {worst_theta:.1e}, min eig {min_eig:.12f}, "
        f"displacement dev {worst_disp:.1e}",
    )


def test_structured_solver_equivalence():
    rng = np.random.default_rng(6401)
    worst = 0.0
    for m, order in [(2, 64), (3, 128), (4, 192), (6, 256)]:
        sys = build_system(rand_completion_input(rng, m, order, zeta_scale=1.2))
        gen = generators(sys)
        assert np.abs(dense_from_generator(gen) - sys.Delta).max() <= 1e-10 * np.abs(
            sys.Delta
        ).max()
        rhs = rng.normal(size=(order + 1, m)) + 1j * rng.normal(size=(order + 1, m))
        fast = structured_solve(gen, rhs)
        ref = np.linalg.solve(sys.Delta, rhs)
        worst = max(
            worst, float(np.abs(fast - ref).max() / max(np.abs(ref).max(), 1e-300))
        )
    report(
        "structured solver equivalence",
        worst <= 1e-8,
        f"worst relative deviation {worst:.1e} (orders up to 256, size 6)",
    )


def _canonical_outer(coeffs):
    """Root-reflection oracle: outer polynomial with the same circle modulus."""
    roots = np.roots(coeffs[::-1])
    scale = coeffs[np.nonzero(coeffs)[0][-1]]
    out = np.array([1.0 + 0.0j])
    for r in roots:
        if abs(r) < 1e-12:
            continue  # factor t has unit modulus; its outer version is 1
        if abs(r) < 1:
            scale = scale * abs(r)
            r = 1 / np.conj(r)
        out = np.convolve(out, np.array([-r, 1.0]))
    out = out * scale
    out = out * np.exp(-1j * np.angle(out[0]))
    return out


def test_scalar_stage():
    rng = np.random.default_rng(8841)
    params = ScalarFactorParams(grid_size=4096, out_degree=64, clamp_floor=1e-12)
    worst_sup = 0.0
    worst_coeff = 0.0
    done = 0
    while done < 20:
        degree = int(rng.integers(1, 9))
        coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        g = LaurentPoly(0, coeffs)
        s = g * g.adjoint()
        vals = s.sample_circle(4096).real
        if vals.min() < 0.02 * vals.max():
            continue  # strictly positive densities only
        done += 1
        f = scalar_spectral_factor(s, params)
        sup = float(np.abs(np.abs(f.sample_circle(4096)) ** 2 - vals).max())
        worst_sup = max(worst_sup, sup / vals.max())
        oracle = _canonical_outer(g.coeffs)
        got = f.coeff_slice(0, len(oracle) - 1)
        worst_coeff = max(worst_coeff, float(np.abs(got - oracle).max()))
        tail = LaurentPoly(len(oracle), f.coeffs[len(oracle):]).mass()
        worst_coeff = max(worst_coeff, tail)
    ok = worst_sup <= 1e-9 and worst_coeff <= 1e-7
    report(
        "scalar stage",
        ok,
        f"sup error {worst_sup:.1e} of max, coefficient deviation {worst_coeff:.1e}",
    )
