"""Per-step diagnostics, effective-flux residuals, and the energy ledger.

A ``DiagnosticsRecord`` gathers the per-step scalar columns written to
diagnostics.csv (fixed column order, see ``CSV_COLUMNS``) plus a few
in-memory extras consumed by ``energy_report`` and by tests.

Law-derived columns (L1_p, L1_lambda, L1_big_lam, excl_*, mp_residual) use
the pointwise law values at the current density: the algebraic identities the
regime classifier relies on (for instance rho*p = (beta-1)*big_lam when
beta = gamma+1) hold exactly for these, while the transported memory field
carries O(dx) scheme drift.  The transported field is monitored separately
through the drift extras.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import ScalarField, curl_array, div_array, mean_and_measure
from .laws import evaluate_laws
from .momentum import SolverOptions, compute_S, solve_poisson_zero_mean

__all__ = [
    "CSV_COLUMNS",
    "DiagnosticsRecord",
    "build_record",
    "effective_flux_report",
    "CongestionReport",
    "congestion_report",
    "EnergyLedger",
    "energy_report",
    "poincare_constant",
]

CSV_COLUMNS = (
    "step", "t", "dt", "mass", "min_rho", "max_rho", "energy_H",
    "dissipation", "forcing_power", "flux_residual", "mean_relation_residual",
    "L1_p", "L1_lambda", "L1_big_lam", "excl_p", "excl_big_lam",
    "mp_residual", "meas_099", "meas_1md", "max_divu_congested",
)

CONGESTION_THETA = 0.99


@dataclass
class DiagnosticsRecord:
    step: int
    t: float
    dt: float
    mass: float
    min_rho: float
    max_rho: float
    energy_H: float
    dissipation: float
    forcing_power: float
    flux_residual: float
    mean_relation_residual: float
    L1_p: float
    L1_lambda: float
    L1_big_lam: float
    excl_p: float
    excl_big_lam: float
    mp_residual: float
    meas_099: float
    meas_1md: float
    max_divu_congested: float
    # in-memory extras (not serialized to diagnostics.csv)
    sum_divu2: float = 0.0
    sum_curl2: float = 0.0
    f_l2sq: float = 0.0
    big_lam_pde_l1: float = 0.0
    big_lam_drift_l1: float = 0.0
    momentum_iters: int = 0
    poisson_iters: int = 0

    def csv_values(self):
        return [getattr(self, name) for name in CSV_COLUMNS]


def _flux_pieces(rho, u, f, params, opts, s_prev=None):
    """Shared computation: law values, div/curl, F, S, both residuals."""
    grid = rho.grid
    vals = evaluate_laws(rho.data, params)
    divu = div_array(u.components, grid.dx)
    coef = 2.0 * params.mu + vals.lam
    F = coef * divu - vals.p
    S, rep = compute_S(u, f, params, opts, s0=s_prev)
    flux_residual = float(np.max(np.abs(F - F.mean() - S.data)))
    mean_rel = float(abs(
        np.mean(vals.lam * divu) - np.mean(vals.p)
        + np.sum((vals.p + S.data) * vals.nu) / np.sum(vals.nu)
    ))
    return vals, divu, F, S, rep, flux_residual, mean_rel


def effective_flux_report(rho, u, f, params, opts=SolverOptions()):
    """Effective viscous flux F = (2*mu+lam) div u - p and its residuals.

    Returns (F, S, flux_residual, mean_relation_residual) where
    flux_residual = max|F - mean(F) - S| and mean_relation_residual is the
    absolute defect of mean(lam*div u) = mean(p) - sum((p+S)*nu)/sum(nu).
    """
    vals, divu, F, S, rep, flux_res, mean_rel = _flux_pieces(rho, u, f, params, opts)
    return ScalarField(rho.grid, F), S, flux_res, mean_rel


@dataclass(frozen=True)
class CongestionReport:
    measure: float
    max_divu: float
    mp_residual: float
    excl_p: float
    excl_big_lam: float


def congestion_report(rho, u, params, theta=CONGESTION_THETA):
    """Congested-set diagnostics above the density threshold theta.

    measure        : cells with rho >= theta, times cell volume
    max_divu       : max |div u| over that set (0 if empty)
    mp_residual    : max |rho*p - (beta-1)*big_lam| over that set (0 if empty);
                     an exact identity whenever beta = gamma + 1
    excl_p         : sum (1-rho) * p * cell volume (whole domain)
    excl_big_lam   : sum (1-rho) * big_lam * cell volume
    """
    grid = rho.grid
    vals = evaluate_laws(rho.data, params)
    divu = div_array(u.components, grid.dx)
    vol = grid.cell_volume
    mask = rho.data >= theta
    if mask.any():
        mp = float(np.max(np.abs(rho.data[mask] * vals.p[mask]
                                 - (params.beta - 1.0) * vals.big_lam[mask])))
        mdv = float(np.max(np.abs(divu[mask])))
    else:
        mp = 0.0
        mdv = 0.0
    measure = float(np.count_nonzero(mask)) * vol
    excl_p = float(np.sum((1.0 - rho.data) * vals.p)) * vol
    excl_bl = float(np.sum((1.0 - rho.data) * vals.big_lam)) * vol
    return CongestionReport(measure, mdv, mp, excl_p, excl_bl)


def build_record(state, f, params, opts=SolverOptions(), step=0, dt=0.0,
                 s_prev=None, momentum_iters=0):
    """Assemble the full diagnostics record for the current state.

    Returns (record, S) so the caller can warm-start the next flux solve.
    """
    rho, u = state.rho, state.u
    grid = rho.grid
    vol = grid.cell_volume

    vals, divu, F, S, poisson_rep, flux_res, mean_rel = _flux_pieces(
        rho, u, f, params, opts, s_prev=s_prev
    )

    if grid.dim == 2:
        w = curl_array(u.components, grid.dx)
        sum_curl2 = float(np.sum(w * w)) * vol
    else:
        sum_curl2 = 0.0
    sum_divu2 = float(np.sum(divu * divu)) * vol
    coef = 2.0 * params.mu + vals.lam
    drag2 = sum(float(np.sum(c * c)) for c in u.components) * vol
    dissipation = (
        float(np.sum(coef * divu * divu)) * vol
        + params.mu * sum_curl2
        + params.r * drag2
    )
    forcing = sum(
        float(np.sum(fc * uc)) for fc, uc in zip(f.components, u.components)
    ) * vol
    f_l2sq = sum(float(np.sum(fc * fc)) for fc in f.components) * vol

    _, meas_099 = mean_and_measure(rho, CONGESTION_THETA)
    thresh_1md = 1.0 - params.delta
    _, meas_1md = mean_and_measure(rho, thresh_1md)

    mask = rho.data >= CONGESTION_THETA
    if mask.any():
        mp = float(np.max(np.abs(rho.data[mask] * vals.p[mask]
                                 - (params.beta - 1.0) * vals.big_lam[mask])))
        mdv = float(np.max(np.abs(divu[mask])))
    else:
        mp = 0.0
        mdv = 0.0

    rec = DiagnosticsRecord(
        step=step,
        t=state.t,
        dt=dt,
        mass=float(np.sum(rho.data)) * vol,
        min_rho=float(np.min(rho.data)),
        max_rho=float(np.max(rho.data)),
        energy_H=float(np.sum(vals.h)) * vol,
        dissipation=dissipation,
        forcing_power=forcing,
        flux_residual=flux_res,
        mean_relation_residual=mean_rel,
        L1_p=float(np.sum(np.abs(vals.p))) * vol,
        L1_lambda=float(np.sum(np.abs(vals.lam))) * vol,
        L1_big_lam=float(np.sum(np.abs(vals.big_lam))) * vol,
        excl_p=float(np.sum((1.0 - rho.data) * vals.p)) * vol,
        excl_big_lam=float(np.sum((1.0 - rho.data) * vals.big_lam)) * vol,
        mp_residual=mp,
        meas_099=meas_099,
        meas_1md=meas_1md,
        max_divu_congested=mdv,
        sum_divu2=sum_divu2,
        sum_curl2=sum_curl2,
        f_l2sq=f_l2sq,
        big_lam_pde_l1=float(np.sum(np.abs(state.big_lam.data))) * vol,
        big_lam_drift_l1=float(np.sum(np.abs(state.big_lam.data - vals.big_lam))) * vol,
        momentum_iters=momentum_iters,
        poisson_iters=poisson_rep.iterations,
    )
    return rec, S


# -- energy ledger ------------------------------------------------------------

@dataclass
class EnergyLedger:
    """Cumulative energy-balance bookkeeping along a trajectory.

    drift[n] = E(t_n) + sum_{m<n} dt_m * dissipation_m
               - E(t_0) - sum_{m<n} dt_m * forcing_m
    should vanish at first order in (dt + dx).  bound_lhs/bound_rhs evaluate
    the weaker a-priori inequality with reduced constants (3/2 mu on the
    divergence square, mu/2 on the curl square) against the right-hand side
    E_0 + (1+C)/(2 mu) * ||f||^2 accumulated in time, where C is the discrete
    Poincare constant of the grid.
    """

    t: np.ndarray
    energy: np.ndarray
    drift: np.ndarray
    step_drift: np.ndarray
    bound_lhs: np.ndarray
    bound_rhs: np.ndarray
    bound_holds: bool
    poincare_c: float
    flagged_steps: list = field(default_factory=list)

    @property
    def final_drift(self):
        return float(self.drift[-1])


def poincare_constant(grid, opts=SolverOptions(), max_iter=80, rtol=1e-11):
    """Largest eigenvalue of (-Delta_h)^{-1} on the mean-zero subspace.

    Inverse power iteration driven by the zero-mean Poisson solver; this is
    the constant C in ||v - <v>||^2 <= C ||grad v||^2 on the grid.  In 1D the
    exact value is 1 / ((4/dx^2) sin^2(pi/n)).
    """
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(grid.shape)
    v -= v.mean()
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w, _ = solve_poisson_zero_mean(ScalarField(grid, v), opts)
        new_est = float(np.dot(v.ravel(), w.data.ravel()))
        nrm = float(np.linalg.norm(w.data))
        v = w.data / nrm
        if est > 0.0 and abs(new_est - est) <= rtol * new_est:
            est = new_est
            break
        est = new_est
    return est


def energy_report(records, params, grid, opts=SolverOptions()):
    """Build the energy ledger from a recorded trajectory."""
    t = np.array([r.t for r in records])
    dt = np.array([r.dt for r in records])
    energy = np.array([r.energy_H for r in records])
    diss = np.array([r.dissipation for r in records])
    forc = np.array([r.forcing_power for r in records])
    f_l2 = np.array([r.f_l2sq for r in records])
    divu2 = np.array([r.sum_divu2 for r in records])
    curl2 = np.array([r.sum_curl2 for r in records])

    # sums over steps strictly before each record
    cum = lambda a: np.concatenate(([0.0], np.cumsum(a * dt)[:-1]))
    drift = energy + cum(diss) - energy[0] - cum(forc)

    step_drift = np.empty_like(drift)
    step_drift[:-1] = np.diff(energy) + dt[:-1] * (diss[:-1] - forc[:-1])
    step_drift[-1] = 0.0

    reduced_diss = diss - 0.5 * params.mu * (divu2 + curl2)
    C = poincare_constant(grid, opts)
    bound_lhs = energy + cum(reduced_diss)
    bound_rhs = energy[0] + (1.0 + C) / (2.0 * params.mu) * cum(f_l2)
    ok = bool(np.all(bound_lhs <= bound_rhs + 1e-9 * (1.0 + np.abs(bound_rhs))))

    # heuristic per-step sanity flag; informational only
    tol = 0.2 * dt * (np.abs(diss) + np.abs(forc)) + 1e-10
    flagged = [int(i) for i in np.nonzero(np.abs(step_drift) > tol)[0]]

    return EnergyLedger(
        t=t, energy=energy, drift=drift, step_drift=step_drift,
        bound_lhs=bound_lhs, bound_rhs=bound_rhs, bound_holds=ok,
        poincare_c=C, flagged_steps=flagged,
    )
