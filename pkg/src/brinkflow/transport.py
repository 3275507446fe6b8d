"""Explicit upwind transport of the density and the memory field.

First-order conservative upwinding on the MAC grid: the flux through face
``i`` is u[i] times the upwind cell value, so cell sums telescope and mass is
conserved to round-off.  Positivity holds under the CFL bound dt <= dx/|u|
per axis (the harness's default cfl = 0.4 leaves a 2D margin).

With ``delta = 0`` an update that would push any cell to rho >= 1 is rejected
by raising ``CongestionOverflow`` before any state is committed; the caller
halves dt and retries (see the harness loop).

The memory field big_lam follows the same upwind transport plus the
compression source -lam * div(u):

    big_lam^{n+1} = big_lam^n - dt * div(flux(big_lam^n, u)) - dt * lam * div(u).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CongestionOverflow, ConfigError
from .grid import ScalarField, div_array

__all__ = ["SimState", "StepControl", "stable_dt", "advect_density", "advect_big_lambda"]

_TINY_SPEED = 1e-14


@dataclass
class SimState:
    """Time-stepping state: density, slaved velocity, memory field."""

    t: float
    rho: ScalarField
    u: object  # FaceVectorField; untyped to keep this module import-light
    big_lam: ScalarField
    step_count: int = 0


@dataclass(frozen=True)
class StepControl:
    """Time-step controls: CFL number, smallest admissible dt, retry budget."""

    cfl: float = 0.4
    dt_min: float = 1e-12
    max_halvings: int = 20

    def __post_init__(self):
        if not (0.0 < self.cfl <= 1.0):
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not (self.dt_min > 0.0):
            raise ConfigError(f"dt_min must be > 0, got {self.dt_min}")
        if self.max_halvings < 0:
            raise ConfigError(f"max_halvings must be >= 0, got {self.max_halvings}")


def stable_dt(u, grid, ctrl):
    """Advective CFL time step: cfl * dx / max(|u|, tiny)."""
    return ctrl.cfl * grid.dx / max(u.max_abs(), _TINY_SPEED)


def _upwind_flux(cell_data, u_comp, axis):
    # face i separates cell i-1 (upwind for u > 0) from cell i
    left = np.roll(cell_data, 1, axis=axis)
    return u_comp * np.where(u_comp >= 0.0, left, cell_data)


def _flux_divergence(cell_data, u):
    fluxes = tuple(
        _upwind_flux(cell_data, u.components[a], a) for a in range(u.grid.dim)
    )
    return div_array(fluxes, u.grid.dx)


def advect_density(rho, u, dt, params, ctrl):
    """One conservative upwind step; returns the new density field.

    Raises CongestionOverflow (without committing anything) if delta = 0 and
    the update would reach rho >= 1 anywhere.
    """
    new = rho.data - dt * _flux_divergence(rho.data, u)
    if params.delta == 0.0:
        m = float(np.max(new))
        if m >= 1.0:
            raise CongestionOverflow(m)
    return ScalarField(rho.grid, new)


def advect_big_lambda(big_lam, u, divu, lam_field, dt):
    """Upwind transport of the memory field with compression source.

    divu and lam_field are passed in (cell fields already computed by the
    caller) so the source uses exactly the same velocity divergence as the
    diagnostics.
    """
    new = (
        big_lam.data
        - dt * _flux_divergence(big_lam.data, u)
        - dt * lam_field.data * divu.data
    )
    return ScalarField(big_lam.grid, new)
