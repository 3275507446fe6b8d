"""Semi-stationary momentum solve and pressure-free flux pieces.

The velocity is slaved to the density through the SPD system

    A u := -grad((2*mu + lam(rho)) * div u) + mu * curl^T(curl u) + r * u
         = f - grad(p(rho)),

discretized on the MAC grid so that A is symmetric positive definite
(<A u, u> = sum (2*mu+lam) (div u)^2 + mu (curl u)^2 + r |u|^2 over cells,
nodes, and faces).  The system is solved matrix-free by conjugate gradients
with optional diagonal (Jacobi) preconditioning.

``solve_poisson_zero_mean`` inverts -Delta_h on the mean-zero subspace (CG
with per-iteration projection), and ``compute_S`` produces the zero-mean
part of the effective viscous flux F = (2*mu+lam) div u - p directly from
force and drag: -Delta_h S = div(f - r*u), so F = mean(F) + S holds exactly
at the discrete level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CompatibilityError, ConfigError, SolverDiverged
from .grid import (
    FaceVectorField,
    ScalarField,
    curl_array,
    curl_t_array,
    div_array,
    grad_array,
)
from .laws import evaluate_laws

__all__ = [
    "SolverOptions",
    "SolveReport",
    "solve_momentum",
    "solve_poisson_zero_mean",
    "compute_S",
    "apply_momentum_operator",
]


@dataclass(frozen=True)
class SolverOptions:
    """CG controls.

    tol            : relative residual target, in (0, 1e-4]
    max_iter       : iteration budget; None means 50*n per dimension
    preconditioner : "none" or "diagonal"
    """

    tol: float = 1e-10
    max_iter: int | None = None
    preconditioner: str = "diagonal"

    def __post_init__(self):
        if not (0.0 < self.tol <= 1e-4):
            raise ConfigError(f"tol must lie in (0, 1e-4], got {self.tol}")
        if self.max_iter is not None and self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.preconditioner not in ("none", "diagonal"):
            raise ConfigError(f"unknown preconditioner '{self.preconditioner}'")

    def iteration_budget(self, grid):
        if self.max_iter is not None:
            return self.max_iter
        return 50 * grid.n * grid.dim


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    final_relative_residual: float
    converged: bool


def _cg(apply_op, b, x0, tol, max_iter, precond=None, project=None):
    """Plain preconditioned CG on flat arrays; returns (x, report)."""
    if project is not None:
        b = project(b)
    x = x0.copy()
    if project is not None:
        x = project(x)
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros_like(b), SolveReport(0, 0.0, True)

    r = b - apply_op(x)
    if project is not None:
        r = project(r)
    rel = float(np.linalg.norm(r)) / b_norm
    if rel <= tol:
        return x, SolveReport(0, rel, True)

    z = precond(r) if precond is not None else r
    p = z.copy()
    rz = float(np.dot(r, z))
    iters = 0
    for iters in range(1, max_iter + 1):
        Ap = apply_op(p)
        if project is not None:
            Ap = project(Ap)
        pAp = float(np.dot(p, Ap))
        if pAp <= 0.0:
            # SPD operator: this only happens on round-off collapse.
            break
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        if project is not None:
            r = project(r)
        rel = float(np.linalg.norm(r)) / b_norm
        if rel <= tol:
            return x, SolveReport(iters, rel, True)
        z = precond(r) if precond is not None else r
        rz_new = float(np.dot(r, z))
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, SolveReport(iters, rel, False)


# -- momentum operator -------------------------------------------------------

def _apply_momentum_flat(flat, coef, mu, r, grid):
    comps = _unflatten(flat, grid)
    div = div_array(comps, grid.dx)
    out = grad_array(coef * div, grid.dx, grid.dim)
    out = [-g for g in out]
    if grid.dim == 2:
        w = curl_array(comps, grid.dx)
        ct = curl_t_array(w, grid.dx)
        out[0] += mu * ct[0]
        out[1] += mu * ct[1]
    for a in range(grid.dim):
        out[a] += r * comps[a]
    return _flatten(out)


def _flatten(comps):
    return np.concatenate([c.ravel() for c in comps])


def _unflatten(flat, grid):
    size = grid.n**grid.dim
    return tuple(
        flat[a * size:(a + 1) * size].reshape(grid.shape) for a in range(grid.dim)
    )


def apply_momentum_operator(u, coef, mu, r):
    """Apply A to a face vector field; coef is the cell array 2*mu + lam."""
    grid = u.grid
    flat = _apply_momentum_flat(_flatten(u.components), coef, mu, r, grid)
    return FaceVectorField(grid, _unflatten(flat, grid))


def _momentum_diagonal(coef, mu, r, grid):
    """Diagonal of A, per face component, for Jacobi preconditioning."""
    dx2 = grid.dx**2
    diags = []
    for a in range(grid.dim):
        d = (coef + np.roll(coef, 1, axis=a)) / dx2
        if grid.dim == 2:
            d = d + 2.0 * mu / dx2
        diags.append(d + r)
    return _flatten(diags)


def solve_momentum(rho, f, params, opts=SolverOptions(), u0=None):
    """Solve A u = f - grad(p(rho)) for the velocity.

    rho : ScalarField (density), f : FaceVectorField (force).
    u0 optionally warm-starts the iteration (defaults to zero).
    Returns (u, SolveReport); raises SolverDiverged when the budget is
    exhausted, with the report attached to the exception.
    """
    grid = rho.grid
    vals = evaluate_laws(rho.data, params)
    coef = 2.0 * params.mu + vals.lam
    gp = grad_array(vals.p, grid.dx, grid.dim)
    b = _flatten([f.components[a] - gp[a] for a in range(grid.dim)])

    precond = None
    if opts.preconditioner == "diagonal":
        diag = _momentum_diagonal(coef, params.mu, params.r, grid)
        inv = 1.0 / diag
        precond = lambda v: inv * v

    x0 = _flatten(u0.components) if u0 is not None else np.zeros_like(b)
    x, report = _cg(
        lambda v: _apply_momentum_flat(v, coef, params.mu, params.r, grid),
        b, x0, opts.tol, opts.iteration_budget(grid), precond=precond,
    )
    if not report.converged:
        raise SolverDiverged(
            f"momentum CG stalled at relative residual "
            f"{report.final_relative_residual:.3e} after {report.iterations} iterations",
            report=report,
        )
    return FaceVectorField(grid, _unflatten(x, grid)), report


# -- Poisson on the mean-zero subspace ---------------------------------------

def _apply_neg_laplacian(flat, grid):
    s = flat.reshape(grid.shape)
    g = grad_array(s, grid.dx, grid.dim)
    return -div_array(g, grid.dx).ravel()


def solve_poisson_zero_mean(g, opts=SolverOptions(), s0=None):
    """Solve -Delta_h s = g with mean(s) = 0 on the periodic grid.

    Requires |mean(g)| <= 1e-10 * max|g| (solvability); raises
    CompatibilityError otherwise.  Raises SolverDiverged on stall.
    """
    grid = g.grid
    data = g.data
    g_max = float(np.max(np.abs(data)))
    g_mean = float(np.mean(data))
    if g_max > 0.0 and abs(g_mean) > 1e-10 * g_max:
        raise CompatibilityError(
            f"poisson right-hand side has mean {g_mean:.3e} (max |g| = {g_max:.3e})"
        )

    def project(v):
        return v - v.mean()

    b = data.ravel()
    x0 = s0.data.ravel() if s0 is not None else np.zeros_like(b)
    x, report = _cg(
        lambda v: _apply_neg_laplacian(v, grid),
        b, x0, opts.tol, opts.iteration_budget(grid), project=project,
    )
    if not report.converged:
        raise SolverDiverged(
            f"poisson CG stalled at relative residual "
            f"{report.final_relative_residual:.3e} after {report.iterations} iterations",
            report=report,
        )
    x = x - x.mean()
    return ScalarField(grid, x.reshape(grid.shape)), report


def compute_S(u, f, params, opts=SolverOptions(), s0=None):
    """Zero-mean part of the effective viscous flux.

    S solves -Delta_h S = div(f - r*u) with mean(S) = 0, so that
    F = (2*mu + lam) div u - p satisfies F = mean(F) + S exactly (up to the
    solver tolerances).  Returns (S, SolveReport).
    """
    grid = u.grid
    comps = [f.components[a] - params.r * u.components[a] for a in range(grid.dim)]
    rhs = ScalarField(grid, div_array(tuple(comps), grid.dx))
    return solve_poisson_zero_mean(rhs, opts, s0=s0)
