"""The mean-field free energy, its first variation, and its dissipation.

The functional is

    I(mu) = (1/beta) * integral rho log rho + (1/2) double-integral W(x-y) dmu dmu,

with rho the density of mu. Stationary states satisfy grad(dI/dmu) = 0, and
the dissipation integral |grad xi|^2 dmu (xi the first variation) is the
numerical stand-in for the squared metric slope: it vanishes exactly at
critical points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import PositivityFloor
from .grids import (
    FourierCoeffs,
    GridDensity,
    GridFunction,
    fourier_coefficients,
    integrate,
    inverse_transform,
    reflect,
    spectral_gradient,
)

POSITIVITY_FLOOR = 1e-300


@dataclass(frozen=True)
class FreeEnergyModel:
    """Inverse temperature and interaction potential, with cached spectra.

    Attributes
    ----------
    beta : float
        Inverse temperature, > 0.
    W : GridFunction
        Interaction potential; must be even along every coordinate
        (within 1e-10).
    W_hat : FourierCoeffs
        Cached Fourier coefficients of W.
    lam : float
        Certified geodesic-convexity bound (<= 0 allowed), estimated
        spectrally as -sum_k (2 pi |k| / L)^2 |W^(k)| L^{-d/2}. Conservative
        by design; any valid lower bound works downstream.
    """

    beta: float
    W: GridFunction
    W_hat: FourierCoeffs = field(init=False, repr=False)
    lam: float = field(init=False)

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        asym = np.max(np.abs(self.W.values - reflect(self.W).values))
        if asym > 1e-10:
            raise ValueError(f"W must be even under x -> -x (asymmetry {asym:.2e})")
        object.__setattr__(self, "W_hat", fourier_coefficients(self.W))
        object.__setattr__(self, "lam", _lambda_bound(self.W_hat))

    @property
    def grid(self):
        return self.W.grid

    def with_beta(self, beta: float) -> "FreeEnergyModel":
        return FreeEnergyModel(beta=float(beta), W=self.W)


def _lambda_bound(W_hat: FourierCoeffs) -> float:
    g = W_hat.grid
    k = g.wavenumbers()
    if g.d == 1:
        k2 = k ** 2
    else:
        k2 = k[:, None] ** 2 + k[None, :] ** 2
    total = float(np.sum((2 * np.pi / g.L) ** 2 * k2 * np.abs(W_hat.data)) * g.L ** (-g.d / 2))
    return -total


def convolve_potential(model: FreeEnergyModel, mu: GridDensity) -> GridFunction:
    """(W * mu) using the model's cached potential spectrum."""
    model.W.same_grid(mu.fn)
    g = mu.grid
    cm = fourier_coefficients(mu.fn).data
    prod = (g.L ** (g.d / 2)) * model.W_hat.data * cm
    return inverse_transform(FourierCoeffs(g, prod))


def entropy(mu: GridDensity) -> float:
    """integral rho log rho, with the convention 0 log 0 = 0."""
    rho = mu.values
    terms = np.where(rho > 0, rho * np.log(np.maximum(rho, POSITIVITY_FLOOR)), 0.0)
    return float(terms.sum() * mu.grid.cell_volume)


def interaction_energy(mu: GridDensity, model: FreeEnergyModel) -> float:
    """(1/2) integral (W * mu) dmu."""
    conv = convolve_potential(model, mu)
    return 0.5 * integrate(GridFunction(mu.grid, conv.values * mu.values))


def free_energy(model: FreeEnergyModel, mu: GridDensity) -> float:
    """I(mu) = entropy / beta + interaction energy."""
    return entropy(mu) / model.beta + interaction_energy(mu, model)


def _require_positive(mu: GridDensity) -> None:
    if mu.values.min() < POSITIVITY_FLOOR:
        raise PositivityFloor(
            f"density min {mu.values.min():.3e} below floor {POSITIVITY_FLOOR:.0e}"
        )


def first_variation(model: FreeEnergyModel, mu: GridDensity) -> GridFunction:
    """xi = (1/beta) log rho + W * mu, the integrand of dI/dmu."""
    _require_positive(mu)
    conv = convolve_potential(model, mu)
    vals = np.log(mu.values) / model.beta + conv.values
    return GridFunction(mu.grid, vals)


def dissipation(model: FreeEnergyModel, mu: GridDensity) -> float:
    """integral |grad xi|^2 dmu; zero iff xi is constant on the support."""
    xi = first_variation(model, mu)
    total = np.zeros(mu.grid.shape)
    for comp in spectral_gradient(xi):
        total += comp.values ** 2
    return float((total * mu.values).sum() * mu.grid.cell_volume)
