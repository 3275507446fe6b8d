"""Momentum and Poisson solver tests.

Single Fourier modes are eigenvectors of the constant-coefficient discrete
operator, which gives closed-form discrete solutions: the solver must match
them to its own tolerance, not merely to truncation order.
"""

import numpy as np
import pytest

from brinkflow import (
    CompatibilityError,
    ConfigError,
    FaceVectorField,
    LawParams,
    ScalarField,
    SolverDiverged,
    SolverOptions,
    apply_momentum_operator,
    compute_S,
    divergence,
    face_coords,
    gradient,
    make_grid,
    solve_momentum,
    solve_poisson_zero_mean,
)
from brinkflow.grid import cell_coords, curl_array

PARAMS = LawParams(epsilon=1e-2, delta=0.0, gamma=2.0, beta=3.0, mu=0.5, r=1.0)


def test_solver_options_validation():
    SolverOptions(tol=1e-10, max_iter=5, preconditioner="none")
    with pytest.raises(ConfigError):
        SolverOptions(tol=0.0)
    with pytest.raises(ConfigError):
        SolverOptions(tol=1e-3)
    with pytest.raises(ConfigError):
        SolverOptions(max_iter=0)
    with pytest.raises(ConfigError):
        SolverOptions(preconditioner="ilu")


def test_constant_force_gives_uniform_velocity():
    # uniform rho: grad p = 0, and a constant field has div u = curl u = 0,
    # so A u = r u and the answer is f / r.
    g = make_grid(1, 32)
    rho = ScalarField.full(g, 0.3)
    f = FaceVectorField(g, (np.full(g.shape, 2.5),))
    u, rep = solve_momentum(rho, f, PARAMS)
    assert rep.converged
    np.testing.assert_allclose(u.components[0], 2.5 / PARAMS.r, rtol=1e-10)


def test_single_mode_discrete_solution_1d():
    # rho = 0 removes the pressure term and makes the coefficient 2*mu; the
    # discrete eigenvalue of -d/dx (c d/dx) on mode k is c*kh^2 with
    # kh = 2 sin(k dx/2)/dx.
    g = make_grid(1, 64)
    k = 2 * np.pi
    x = face_coords(g, 0)[0]
    f = FaceVectorField(g, (np.sin(k * x),))
    rho = ScalarField.zeros(g)
    u, rep = solve_momentum(rho, f, PARAMS)
    kh = 2.0 * np.sin(k * g.dx / 2.0) / g.dx
    exact = np.sin(k * x) / (2.0 * PARAMS.mu * kh**2 + PARAMS.r)
    assert rep.converged
    np.testing.assert_allclose(u.components[0], exact, atol=1e-9)
    # an eigenvector of the preconditioned operator converges immediately
    assert rep.iterations <= 3


def test_single_mode_discrete_solution_2d_solenoidal():
    # u = (sin(2 pi y), 0) is divergence-free, so only the curl term and the
    # drag act on it; same shifted-eigenvalue formula with coefficient mu.
    g = make_grid(2, 32)
    k = 2 * np.pi
    y = face_coords(g, 0)[1]
    f = FaceVectorField(g, (np.sin(k * y), np.zeros(g.shape)))
    rho = ScalarField.zeros(g)
    u, rep = solve_momentum(rho, f, PARAMS)
    kh = 2.0 * np.sin(k * g.dx / 2.0) / g.dx
    exact = np.sin(k * y) / (PARAMS.mu * kh**2 + PARAMS.r)
    assert rep.converged
    np.testing.assert_allclose(u.components[0], exact, atol=1e-9)
    assert float(np.max(np.abs(u.components[1]))) <= 1e-9
    assert float(np.max(np.abs(divergence(u).data))) <= 1e-7


@pytest.mark.parametrize("dim", [1, 2])
def test_operator_symmetry_and_positivity(dim, rng):
    g = make_grid(dim, 12)
    lam = np.exp(rng.standard_normal(g.shape))
    coef = 2.0 * PARAMS.mu + lam
    mk = lambda: FaceVectorField(g, tuple(rng.standard_normal(g.shape)
                                          for _ in range(dim)))
    for _ in range(4):
        u, v = mk(), mk()
        au = apply_momentum_operator(u, coef, PARAMS.mu, PARAMS.r)
        av = apply_momentum_operator(v, coef, PARAMS.mu, PARAMS.r)
        dot = lambda a, b: sum(float(np.sum(x * y))
                               for x, y in zip(a.components, b.components))
        assert dot(au, v) == pytest.approx(dot(u, av), rel=1e-11, abs=1e-11)
        assert dot(au, u) > 0.0


def test_operator_energy_identity(rng):
    # <A u, u> = sum coef*(div u)^2 + mu*sum (curl u)^2 + r*sum |u|^2
    g = make_grid(2, 12)
    lam = np.abs(rng.standard_normal(g.shape))
    coef = 2.0 * PARAMS.mu + lam
    u = FaceVectorField(g, tuple(rng.standard_normal(g.shape) for _ in range(2)))
    au = apply_momentum_operator(u, coef, PARAMS.mu, PARAMS.r)
    lhs = sum(float(np.sum(a * b)) for a, b in zip(au.components, u.components))
    divu = divergence(u).data
    w = curl_array(u.components, g.dx)
    rhs = float(np.sum(coef * divu**2)) + PARAMS.mu * float(np.sum(w**2)) \
        + PARAMS.r * sum(float(np.sum(c**2)) for c in u.components)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_integrated_drag_balance(rng):
    # summing A u over all faces telescopes the difference terms away, so
    # r * sum(u) = sum(f - grad p) for the converged solution
    g = make_grid(1, 48)
    rho = ScalarField(g, 0.3 + 0.2 * np.sin(2 * np.pi * cell_coords(g)[0]))
    f = FaceVectorField(g, (rng.standard_normal(g.shape),))
    u, _ = solve_momentum(rho, f, PARAMS)
    from brinkflow import evaluate_laws
    gp = gradient(ScalarField(g, evaluate_laws(rho.data, PARAMS).p))
    lhs = PARAMS.r * float(np.sum(u.components[0]))
    rhs = float(np.sum(f.components[0] - gp.components[0]))
    assert lhs == pytest.approx(rhs, abs=1e-8 * max(1.0, abs(rhs)))


def test_warm_start_with_exact_solution(rng):
    g = make_grid(1, 32)
    rho = ScalarField(g, 0.2 + 0.1 * np.sin(2 * np.pi * cell_coords(g)[0]))
    f = FaceVectorField(g, (rng.standard_normal(g.shape),))
    u, rep = solve_momentum(rho, f, PARAMS)
    assert rep.converged and rep.iterations > 0
    _, rep2 = solve_momentum(rho, f, PARAMS, u0=u)
    assert rep2.converged and rep2.iterations == 0


def test_solver_diverged_carries_report(rng):
    g = make_grid(2, 16)
    rho = ScalarField(g, 0.5 + 0.3 * np.sin(2 * np.pi * cell_coords(g)[0]))
    f = FaceVectorField(g, tuple(rng.standard_normal(g.shape) for _ in range(2)))
    with pytest.raises(SolverDiverged) as exc_info:
        solve_momentum(rho, f, PARAMS, opts=SolverOptions(max_iter=1))
    rep = exc_info.value.report
    assert rep is not None and not rep.converged and rep.iterations == 1


def test_poisson_recovers_manufactured_discrete_field(rng):
    # g = -div(grad s_exact) is computed with the package's own operators, so
    # the solve must reproduce s_exact to the CG tolerance.
    for dim in (1, 2):
        g = make_grid(dim, 24)
        s_exact = rng.standard_normal(g.shape)
        s_exact -= s_exact.mean()
        rhs = ScalarField(g, -divergence(gradient(ScalarField(g, s_exact))).data)
        s, rep = solve_poisson_zero_mean(rhs)
        assert rep.converged
        np.testing.assert_allclose(s.data, s_exact, atol=1e-7)


def test_poisson_continuum_mode():
    g = make_grid(1, 64)
    x = cell_coords(g)[0]
    s, rep = solve_poisson_zero_mean(ScalarField(g, np.cos(2 * np.pi * x)))
    assert rep.converged
    assert abs(float(np.mean(s.data))) <= 1e-13
    exact = np.cos(2 * np.pi * x) / (4 * np.pi**2)
    assert float(np.max(np.abs(s.data - exact))) <= 2e-4


def test_poisson_rejects_nonzero_mean():
    g = make_grid(1, 16)
    with pytest.raises(CompatibilityError):
        solve_poisson_zero_mean(ScalarField.full(g, 1.0))


def test_poisson_zero_rhs():
    g = make_grid(1, 16)
    s, rep = solve_poisson_zero_mean(ScalarField.zeros(g))
    assert rep.converged and rep.iterations == 0
    assert float(np.max(np.abs(s.data))) == 0.0


def test_compute_s_vanishes_when_force_balances_drag(rng):
    g = make_grid(1, 32)
    u = FaceVectorField(g, (rng.standard_normal(g.shape),))
    f = FaceVectorField(g, (PARAMS.r * u.components[0],))
    s, rep = compute_S(u, f, PARAMS)
    assert float(np.max(np.abs(s.data))) == 0.0
    assert rep.iterations == 0


def test_compute_s_continuum_mode():
    # with u = 0 and f = sin(2 pi x)/(2 pi), S solves -Lap S = div f, whose
    # continuum solution is cos(2 pi x)/(4 pi^2)
    g = make_grid(1, 64)
    x = face_coords(g, 0)[0]
    u = FaceVectorField.zeros(g)
    f = FaceVectorField(g, (np.sin(2 * np.pi * x) / (2 * np.pi),))
    s, rep = compute_S(u, f, PARAMS)
    assert rep.converged
    xc = cell_coords(g)[0]
    exact = np.cos(2 * np.pi * xc) / (4 * np.pi**2)
    assert float(np.max(np.abs(s.data - exact))) <= 2e-4
