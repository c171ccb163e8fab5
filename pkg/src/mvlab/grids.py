"""Periodic grids, quadrature, Fourier transforms, and circular convolution.

Everything downstream (free energies, flows, transport distances, particle
statistics) is built on the uniform midpoint discretisation of the torus of
side length L in one or two dimensions. Cell centers sit at
x_j = (j + 1/2) L/n, and the plane-wave basis is

    e_k(x) = L^{-d/2} exp(2*pi*i k.x / L),   k integer vector,

so that coefficients are c(k) = integral of e_k(x) f(x) dx. This single
normalisation is used by every module; the convolution theorem then reads
(W * mu)^(k) = L^{d/2} W^(k) mu^(k).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import GridMismatch

_MAGIC = b"MCKV-GRIDFN\x00\x00\x00\x00\x00"


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TorusGrid:
    """Uniform periodic discretisation of the torus [0, L)^d.

    Parameters
    ----------
    L : float
        Side length, > 0.
    d : int
        Dimension, 1 or 2.
    n : int
        Cells per dimension; a power of two >= 8 (keeps FFT paths simple).
    """

    L: float
    d: int
    n: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"side length must be positive, got L={self.L}")
        if self.d not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got d={self.d}")
        if not _is_power_of_two(self.n) or self.n < 8:
            raise ValueError(f"n must be a power of two >= 8, got n={self.n}")

    @property
    def h(self) -> float:
        """Cell width L/n."""
        return self.L / self.n

    @property
    def cell_volume(self) -> float:
        return (self.L / self.n) ** self.d

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n ** self.d

    def axis_centers(self) -> NDArray[np.float64]:
        """Cell-center coordinates along one axis, x_j = (j + 1/2) h."""
        return (np.arange(self.n) + 0.5) * self.h

    def centers(self):
        """Cell-center coordinate arrays.

        Returns a single array for d=1, and an (X, Y) meshgrid pair
        (indexing='ij') for d=2.
        """
        x = self.axis_centers()
        if self.d == 1:
            return x
        return np.meshgrid(x, x, indexing="ij")

    def wavenumbers(self) -> NDArray[np.float64]:
        """FFT-layout integer wavenumbers along one axis (0, 1, ..., -1)."""
        return np.fft.fftfreq(self.n, 1.0 / self.n)


def build_grid(L: float, d: int, n: int) -> TorusGrid:
    """Construct a TorusGrid, validating L > 0, d in {1,2}, n a power of two >= 8."""
    return TorusGrid(L=float(L), d=int(d), n=int(n))


@dataclass(frozen=True)
class GridFunction:
    """Real values sampled at the cell centers of a TorusGrid."""

    grid: TorusGrid
    values: NDArray[np.float64] = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", v)

    def same_grid(self, other) -> None:
        if self.grid != other.grid:
            raise GridMismatch(f"grids differ: {self.grid} vs {other.grid}")


class GridDensity:
    """Nonnegative GridFunction integrating to one (a probability density)."""

    __slots__ = ("fn",)

    def __init__(self, fn: GridFunction):
        v = fn.values
        if np.any(v < 0):
            raise ValueError(f"density has negative cells (min {v.min():.3e})")
        mass = float(v.sum() * fn.grid.cell_volume)
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"density mass {mass!r} deviates from 1 by more than 1e-12")
        self.fn = fn

    @property
    def grid(self) -> TorusGrid:
        return self.fn.grid

    @property
    def values(self) -> NDArray[np.float64]:
        return self.fn.values

    @classmethod
    def from_values(cls, grid: TorusGrid, values, normalize: bool = False) -> "GridDensity":
        v = np.asarray(values, dtype=float)
        if normalize:
            v = v / (v.sum() * grid.cell_volume)
        return cls(GridFunction(grid, v))

    @classmethod
    def uniform(cls, grid: TorusGrid) -> "GridDensity":
        return cls(GridFunction(grid, np.full(grid.shape, grid.L ** -grid.d)))


def integrate(f: GridFunction) -> float:
    """Midpoint quadrature: sum of values times cell volume.

    Exact (to roundoff) for trigonometric modes below the Nyquist frequency.
    """
    return float(f.values.sum() * f.grid.cell_volume)


def _forward_phases(grid: TorusGrid):
    k = grid.wavenumbers()
    ph = np.exp(1j * np.pi * k / grid.n)
    if grid.d == 1:
        return ph
    return ph[:, None] * ph[None, :]


def _backward_phases(grid: TorusGrid):
    return np.conj(_forward_phases(grid))


@dataclass(frozen=True)
class FourierCoeffs:
    """Coefficients c(k) = integral e_k f, stored in FFT layout.

    For real input, c(-k) = conj(c(k)); on the Nyquist line |k_i| = n/2 the
    coefficient is forced real (the sine content there is not representable
    on the midpoint grid anyway).
    """

    grid: TorusGrid
    data: NDArray[np.complex128] = field(repr=False)

    def _index(self, k):
        n = self.grid.n
        if self.grid.d == 1:
            if not isinstance(k, (int, np.integer)):
                raise TypeError(f"wavevector must be an int for d=1, got {k!r}")
            if abs(int(k)) > n // 2:
                raise KeyError(f"|k| = {abs(int(k))} exceeds cutoff n/2 = {n // 2}")
            return int(k) % n
        k = tuple(int(c) for c in k)
        if len(k) != 2:
            raise TypeError(f"wavevector must be a 2-tuple for d=2, got {k!r}")
        if any(abs(c) > n // 2 for c in k):
            raise KeyError(f"|k_i| exceeds cutoff n/2 = {n // 2} in {k}")
        return tuple(c % n for c in k)

    def get(self, k) -> complex:
        """Coefficient at wavevector k (int for d=1, 2-tuple for d=2)."""
        return complex(self.data[self._index(k)])

    __getitem__ = get

    def wavevectors(self):
        """All wavevectors in the canonical FFT range -n/2 .. n/2-1 per axis."""
        ks = self.grid.wavenumbers().astype(int)
        if self.grid.d == 1:
            return [int(k) for k in ks]
        return [(int(a), int(b)) for a in ks for b in ks]

    def items(self):
        for k in self.wavevectors():
            yield k, self.get(k)


def fourier_coefficients(f: GridFunction) -> FourierCoeffs:
    """Coefficients c(k) ~ integral of e_k(x) f(x) dx by midpoint quadrature.

    Exact to roundoff for band-limited f (all content strictly below the
    Nyquist mode).
    """
    g = f.grid
    F = np.fft.ifftn(f.values) * g.size  # sum_j f_j exp(+2 pi i k.j / n)
    data = (g.L ** (-g.d / 2)) * g.cell_volume * _forward_phases(g) * F
    # Nyquist hygiene: force the |k_i| = n/2 line real.
    ny = g.n // 2
    if g.d == 1:
        data[ny] = data[ny].real
    else:
        data[ny, :] = data[ny, :].real
        data[:, ny] = data[:, ny].real
    return FourierCoeffs(g, data)


def inverse_transform(c: FourierCoeffs) -> GridFunction:
    """Evaluate f(x_j) = sum_k c(k) conj(e_k(x_j)) on the grid."""
    g = c.grid
    vals = np.fft.fftn(c.data * _backward_phases(g)).real * (g.L ** (-g.d / 2))
    return GridFunction(g, vals)


def circular_convolution(W: GridFunction, mu: GridDensity) -> GridFunction:
    """Periodic convolution (W * mu)(x) = integral W(x - y) dmu(y).

    Computed spectrally: coefficientwise product L^{d/2} W^(k) mu^(k),
    then inverse transform. Exact for band-limited inputs; output is real.
    """
    W.same_grid(mu.fn)
    g = W.grid
    cW = fourier_coefficients(W).data
    cm = fourier_coefficients(mu.fn).data
    prod = (g.L ** (g.d / 2)) * cW * cm
    return inverse_transform(FourierCoeffs(g, prod))


def _derivative_multipliers(grid: TorusGrid, axis: int):
    # d/dx of sum_k c_k conj(e_k) multiplies c_k by -2 pi i k / L;
    # the Nyquist mode is zeroed (its derivative is not representable).
    k = grid.wavenumbers()
    k = k.copy()
    k[grid.n // 2] = 0.0
    m = -2j * np.pi * k / grid.L
    if grid.d == 1:
        return m
    if axis == 0:
        return m[:, None] * np.ones(grid.n)[None, :]
    return np.ones(grid.n)[:, None] * m[None, :]


def spectral_gradient(f: GridFunction) -> list:
    """Componentwise spectral derivative; returns one GridFunction per axis."""
    g = f.grid
    c = fourier_coefficients(f).data
    out = []
    for ax in range(g.d):
        out.append(inverse_transform(FourierCoeffs(g, c * _derivative_multipliers(g, ax))))
    return out


def tv_distance(a: GridDensity, b: GridDensity) -> float:
    """Total-variation distance (1/2) integral |a - b|."""
    a.fn.same_grid(b.fn)
    return float(0.5 * np.abs(a.values - b.values).sum() * a.grid.cell_volume)


def translate_cells(f: GridFunction, shift) -> GridFunction:
    """Translate by a whole number of cells per axis (exact on the grid)."""
    if f.grid.d == 1:
        return GridFunction(f.grid, np.roll(f.values, int(shift)))
    s = tuple(int(c) for c in np.atleast_1d(shift))
    if len(s) == 1:
        s = (s[0], s[0])
    return GridFunction(f.grid, np.roll(f.values, s, axis=(0, 1)))


def reflect(f: GridFunction) -> GridFunction:
    """Evaluate x -> f(-x) on the grid (cell j maps to n-1-j per axis)."""
    if f.grid.d == 1:
        return GridFunction(f.grid, f.values[::-1].copy())
    return GridFunction(f.grid, f.values[::-1, ::-1].copy())


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def write_csv(f: GridFunction, path) -> None:
    """CSV dump: one row per cell with columns index, x[, y], value."""
    g = f.grid
    x = g.axis_centers()
    with open(path, "w", newline="") as fh:
        if g.d == 1:
            fh.write("index,x,value\n")
            for j, v in enumerate(f.values):
                fh.write(f"{j},{x[j]!r},{v!r}\n")
        else:
            fh.write("index,x,y,value\n")
            for idx in range(g.size):
                i, j = divmod(idx, g.n)
                fh.write(f"{idx},{x[i]!r},{x[j]!r},{f.values[i, j]!r}\n")


def read_csv(grid: TorusGrid, path) -> GridFunction:
    """Read a grid function written by write_csv back onto a known grid."""
    vals = np.zeros(grid.size)
    with open(path) as fh:
        header = fh.readline()
        ncols = len(header.strip().split(","))
        for line in fh:
            parts = line.strip().split(",")
            vals[int(parts[0])] = float(parts[ncols - 1])
    return GridFunction(grid, vals.reshape(grid.shape))


def write_binary(f: GridFunction, path) -> None:
    """Little-endian dump with a 16-byte magic header."""
    g = f.grid
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IId", g.d, g.n, g.L))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def read_binary(path) -> GridFunction:
    with open(path, "rb") as fh:
        magic = fh.read(16)
        if magic != _MAGIC:
            raise ValueError("not a grid-function binary dump (bad magic header)")
        d, n, L = struct.unpack("<IId", fh.read(16))
        grid = TorusGrid(L=L, d=int(d), n=int(n))
        vals = np.frombuffer(fh.read(8 * grid.size), dtype="<f8").reshape(grid.shape)
    return GridFunction(grid, vals.copy())
