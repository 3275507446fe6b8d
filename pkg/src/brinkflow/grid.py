"""Periodic staggered (MAC) grids, fields, and difference operators.

Layout on the torus [0, L)^dim with n cells per direction:

  * scalar unknowns live at cell centers, cell ``i`` centered at (i + 1/2)*dx;
  * velocity component ``a`` lives on the faces normal to axis ``a``; face
    index ``i`` along that axis sits at i*dx, i.e. the LEFT/LOWER face of
    cell ``i``;
  * the 2D curl lives at cell corners (nodes), node ``[i, j]`` at (i*dx, j*dx).

With this indexing

    div(u)[i]  = (u[i+1] - u[i]) / dx        (per axis, periodic wrap)
    grad(s)[i] = (s[i] - s[i-1]) / dx

are exact adjoints: sum(grad(s) * u) = -sum(s * div(u)) over the torus, and
the node curl annihilates gradients identically.  These exactness properties
are what make the effective-flux identity hold to solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "Grid",
    "make_grid",
    "ScalarField",
    "FaceVectorField",
    "cell_coords",
    "face_coords",
    "divergence",
    "gradient",
    "curl",
    "mean_and_measure",
    "integral",
    "write_snapshot",
    "read_snapshot",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid: ``dim`` in {1, 2}, ``n`` cells per direction."""

    dim: int
    n: int
    length: float

    @property
    def dx(self):
        return self.length / self.n

    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def cell_volume(self):
        return self.dx**self.dim


def make_grid(dim, n, length=1.0):
    """Validated grid constructor; raises ConfigError on bad arguments."""
    if dim not in (1, 2):
        raise ConfigError(f"dim must be 1 or 2, got {dim}")
    if not isinstance(n, (int, np.integer)) or n < 4:
        raise ConfigError(f"n must be an integer >= 4, got {n}")
    if not (length > 0):
        raise ConfigError(f"length must be > 0, got {length}")
    return Grid(int(dim), int(n), float(length))


def _check_values(grid, data):
    data = np.asarray(data, dtype=float)
    if data.shape != grid.shape:
        raise ConfigError(f"field shape {data.shape} does not match grid shape {grid.shape}")
    if not np.all(np.isfinite(data)):
        raise ConfigError("field contains non-finite values")
    return data


class ScalarField:
    """Cell-centered scalar values on a grid (also reused for node values)."""

    __slots__ = ("grid", "data")

    def __init__(self, grid, data):
        self.grid = grid
        self.data = _check_values(grid, data)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid, value):
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid, fn):
        """Sample ``fn`` at cell centers; fn takes one coordinate array per axis."""
        return cls(grid, np.asarray(fn(*cell_coords(grid)), dtype=float))

    def copy(self):
        return ScalarField(self.grid, self.data.copy())


class FaceVectorField:
    """Velocity-like field: one component array per axis, face-centered."""

    __slots__ = ("grid", "components")

    def __init__(self, grid, components):
        comps = tuple(np.asarray(c, dtype=float) for c in components)
        if len(comps) != grid.dim:
            raise ConfigError(f"expected {grid.dim} components, got {len(comps)}")
        for c in comps:
            _check_values(grid, c)
        self.grid = grid
        self.components = comps

    @classmethod
    def zeros(cls, grid):
        return cls(grid, tuple(np.zeros(grid.shape) for _ in range(grid.dim)))

    @classmethod
    def from_function(cls, grid, *fns):
        """Sample one function per component at that component's face points."""
        if len(fns) != grid.dim:
            raise ConfigError(f"expected {grid.dim} component functions, got {len(fns)}")
        comps = []
        for a, fn in enumerate(fns):
            comps.append(np.asarray(fn(*face_coords(grid, a)), dtype=float))
        return cls(grid, tuple(comps))

    def copy(self):
        return FaceVectorField(self.grid, tuple(c.copy() for c in self.components))

    def max_abs(self):
        return max(float(np.max(np.abs(c))) for c in self.components)


def cell_coords(grid):
    """Cell-center coordinate arrays (meshgrid 'ij' for 2D)."""
    x = (np.arange(grid.n) + 0.5) * grid.dx
    if grid.dim == 1:
        return (x,)
    return tuple(np.meshgrid(x, x, indexing="ij"))


def face_coords(grid, axis):
    """Coordinates of the face points carrying velocity component ``axis``."""
    edge = np.arange(grid.n) * grid.dx
    center = (np.arange(grid.n) + 0.5) * grid.dx
    if grid.dim == 1:
        return (edge,)
    xs = [center] * grid.dim
    xs[axis] = edge
    return tuple(np.meshgrid(*xs, indexing="ij"))


# -- difference operators ---------------------------------------------------

def div_array(components, dx):
    out = np.zeros_like(components[0])
    for a, c in enumerate(components):
        out += np.roll(c, -1, axis=a) - c
    out /= dx
    return out


def grad_array(data, dx, dim):
    return tuple((data - np.roll(data, 1, axis=a)) / dx for a in range(dim))


def curl_array(components, dx):
    ux, uy = components
    return (uy - np.roll(uy, 1, axis=0)) / dx - (ux - np.roll(ux, 1, axis=1)) / dx


def curl_t_array(w, dx):
    """Adjoint of the node curl: node scalar -> face vector."""
    cx = (np.roll(w, -1, axis=1) - w) / dx
    cy = -(np.roll(w, -1, axis=0) - w) / dx
    return (cx, cy)


def divergence(u):
    """Cell-centered divergence of a face vector field."""
    return ScalarField(u.grid, div_array(u.components, u.grid.dx))


def gradient(s):
    """Face-centered gradient of a cell scalar field."""
    return FaceVectorField(s.grid, grad_array(s.data, s.grid.dx, s.grid.dim))


def curl(u):
    """Node-centered scalar curl (2D); identically zero in 1D."""
    if u.grid.dim == 1:
        return ScalarField.zeros(u.grid)
    return ScalarField(u.grid, curl_array(u.components, u.grid.dx))


def mean_and_measure(s, threshold):
    """Mean of the field and the measure of {s >= threshold}.

    The measure is the cell count above threshold times the cell volume.
    """
    mean = float(np.mean(s.data))
    measure = float(np.count_nonzero(s.data >= threshold)) * s.grid.cell_volume
    return mean, measure


def integral(s):
    """Sum of cell values times cell volume."""
    return float(np.sum(s.data)) * s.grid.cell_volume


# -- snapshot I/O ------------------------------------------------------------
#
# Text format, one value per line in row-major (C) order, preceded by a
# fixed header:
#
#   # dim=1
#   # n=256
#   # length=1
#   # time=0.5
#   # field=rho

def write_snapshot(path, name, grid, values, time):
    values = np.asarray(values, dtype=float)
    header = (
        f"dim={grid.dim}\n"
        f"n={grid.n}\n"
        f"length={grid.length:.17g}\n"
        f"time={float(time):.17g}\n"
        f"field={name}"
    )
    np.savetxt(path, values.ravel(order="C"), fmt="%.17g", header=header)


def read_snapshot(path):
    """Read a snapshot file; returns (values, meta dict).

    meta holds dim (int), n (int), length (float), time (float), field (str);
    values are reshaped to the grid shape.
    """
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, val = line[1:].strip().partition("=")
            meta[key.strip()] = val.strip()
    for key in ("dim", "n", "length", "time", "field"):
        if key not in meta:
            raise ConfigError(f"snapshot {path} is missing header key '{key}'")
    meta["dim"] = int(meta["dim"])
    meta["n"] = int(meta["n"])
    meta["length"] = float(meta["length"])
    meta["time"] = float(meta["time"])
    values = np.loadtxt(path).reshape((meta["n"],) * meta["dim"], order="C")
    return values, meta
