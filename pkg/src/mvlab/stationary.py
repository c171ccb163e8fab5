"""Fixed points of the Gibbs self-map, linear stability, and continuation.

Stationary states of the flow are exactly the fixed points of

    F(mu) = exp(-beta W * mu) / Z(mu),

iterated here with damped Picard steps. The uniform state is always a fixed
point; it loses stability at modes where 1 - beta L^{-d/2} |W^(k)| crosses
zero (attractive modes only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import FreeEnergyModel, convolve_potential, free_energy
from .errors import NonConvergence, OverflowGuard
from .grids import GridDensity, GridFunction, fourier_coefficients, tv_distance

EXP_GUARD = 700.0


def dominant_mode(model: FreeEnergyModel):
    """Wavevector minimising W^(k) over k != 0 (ties: smallest |k|, then sign)."""
    g = model.grid
    best = None
    for k, c in model.W_hat.items():
        if (k == 0 if g.d == 1 else k == (0, 0)):
            continue
        mag = abs(k) if g.d == 1 else max(abs(k[0]), abs(k[1]))
        key = (c.real, mag, _lexkey(k, g.d))
        if best is None or key < best[0]:
            best = (key, k)
    return best[1]


def _lexkey(k, d):
    if d == 1:
        return (k < 0, abs(k))
    return (k[0] < 0, k[1] < 0, abs(k[0]), abs(k[1]))


def order_parameter(model: FreeEnergyModel, mu: GridDensity) -> float:
    """sqrt(L) |mu^(k_min)|, the amplitude of the dominant attractive mode."""
    k = dominant_mode(model)
    c = fourier_coefficients(mu.fn).get(k)
    return float(np.sqrt(mu.grid.L) * abs(c))


@dataclass(frozen=True)
class BranchPoint:
    """One solved point on a solution branch."""

    beta: float
    density: GridDensity = field(repr=False)
    residual: float
    order_parameter: float
    free_energy_gap: float
    tv_distance: float
    iterations: int = 0
    converged: bool = True


def kirkwood_monroe_map(model: FreeEnergyModel, mu: GridDensity) -> GridDensity:
    """One application of the Gibbs map F(mu) = exp(-beta W*mu)/Z.

    Output is strictly positive with mass renormalised to one exactly.
    Raises OverflowGuard if the exponent range exceeds the float64 budget.
    """
    u = -model.beta * convolve_potential(model, mu).values
    if np.max(np.abs(u)) > EXP_GUARD:
        raise OverflowGuard(f"|beta W*mu| reaches {np.max(np.abs(u)):.1f} > {EXP_GUARD}")
    u -= u.max()
    e = np.exp(u)
    e /= e.sum() * mu.grid.cell_volume
    return GridDensity(GridFunction(mu.grid, e))


def fixed_point(
    model: FreeEnergyModel,
    mu0: GridDensity,
    tol: float = 1e-10,
    max_iter: int = 50_000,
    damping: float = 0.5,
) -> BranchPoint:
    """Damped Picard iteration mu <- (1-theta) mu + theta F(mu).

    Returns a BranchPoint whose residual is the sup-norm of mu - F(mu).
    Raises NonConvergence (carrying the last residual) after max_iter.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not 0 < damping <= 1:
        raise ValueError("damping must lie in (0, 1]")
    rho = mu0.values.copy()
    residual = np.inf
    for it in range(max_iter + 1):
        F = kirkwood_monroe_map(model, GridDensity.from_values(mu0.grid, rho, normalize=True))
        residual = float(np.max(np.abs(rho - F.values)))
        if residual <= tol:
            break
        rho = (1.0 - damping) * rho + damping * F.values
    else:
        raise NonConvergence(
            f"no fixed point after {max_iter} iterations (residual {residual:.3e})",
            residual=residual,
            iterations=max_iter,
        )
    mu = GridDensity.from_values(mu0.grid, rho, normalize=True)
    uniform = GridDensity.uniform(mu0.grid)
    return BranchPoint(
        beta=model.beta,
        density=mu,
        residual=residual,
        order_parameter=order_parameter(model, mu),
        free_energy_gap=free_energy(model, mu) - free_energy(model, uniform),
        tv_distance=tv_distance(mu, uniform),
        iterations=it,
    )


def linear_stability(model: FreeEnergyModel, cutoff: int | None = None) -> dict:
    """Stability indicator of the uniform state per mode.

    s_k = 1 - beta L^{-d/2} |W^(k)| for attractive modes (W^(k) < 0), and 1
    otherwise; the uniform state is unstable iff min_k s_k < 0.
    """
    g = model.grid
    pref = model.beta * g.L ** (-g.d / 2)
    out = {}
    for k, c in model.W_hat.items():
        if (k == 0 if g.d == 1 else k == (0, 0)):
            continue
        if cutoff is not None:
            mag = abs(k) if g.d == 1 else max(abs(k[0]), abs(k[1]))
            if mag > cutoff:
                continue
        out[k] = 1.0 - pref * abs(c.real) if c.real < 0 else 1.0
    return out


def seeded_density(model: FreeEnergyModel, k, amplitude: float = 0.1) -> GridDensity:
    """Uniform plus a cosine perturbation of mode k, phase pinned at x = 0."""
    g = model.grid
    base = g.L ** -g.d
    amp = min(amplitude, 0.5 * base)  # keep strictly positive for any L
    if g.d == 1:
        x = g.axis_centers()
        vals = base + amp * np.cos(2 * np.pi * int(k) * x / g.L)
    else:
        X, Y = g.centers()
        ka, kb = (int(k[0]), int(k[1])) if not isinstance(k, (int, np.integer)) else (int(k), 0)
        vals = base + amp * np.cos(2 * np.pi * (ka * X + kb * Y) / g.L)
    return GridDensity.from_values(g, vals, normalize=True)


def branch_continuation(
    model_template: FreeEnergyModel,
    beta_grid,
    seed_mode,
    tol: float = 1e-10,
    max_iter: int = 50_000,
    damping: float = 0.5,
    warm_start: bool = True,
    reseed_from_uniform: bool = False,
) -> list:
    """Solve fixed points along an increasing beta grid.

    The first point is seeded with uniform + 0.1 cos(2 pi k x / L); later
    points are warm-started from the previous solution (or cold-started from
    the same seed when warm_start=False, which makes the points independent
    and parallelisable with identical verdicts). With reseed_from_uniform,
    any point that relaxed back to uniform re-applies the seed at the next
    beta, so the nonuniform branch is picked up as soon as the seed escapes
    the uniform basin.

    Per-beta NonConvergence is recorded (converged=False) and the
    continuation proceeds.
    """
    betas = np.asarray(list(beta_grid), dtype=float)
    if betas.ndim != 1 or len(betas) == 0 or np.any(np.diff(betas) <= 0):
        raise ValueError("beta_grid must be a nonempty increasing sequence")
    seed = seeded_density(model_template, seed_mode)
    points = []
    current = seed
    for b in betas:
        model = model_template.with_beta(b)
        try:
            bp = fixed_point(model, current, tol=tol, max_iter=max_iter, damping=damping)
        except NonConvergence as exc:
            uniform = GridDensity.uniform(model.grid)
            points.append(
                BranchPoint(
                    beta=float(b),
                    density=current,
                    residual=float(exc.residual),
                    order_parameter=order_parameter(model, current),
                    free_energy_gap=free_energy(model, current) - free_energy(model, uniform),
                    tv_distance=tv_distance(current, uniform),
                    iterations=exc.iterations or max_iter,
                    converged=False,
                )
            )
            continue
        points.append(bp)
        if warm_start:
            current = bp.density
            if reseed_from_uniform and bp.order_parameter < 1e-6:
                current = seed
        else:
            current = seed
    return points


def branch_to_csv(points, path) -> None:
    """Branch table: beta, residual, order_parameter, free_energy_gap, tv_distance."""
    with open(path, "w", newline="") as fh:
        fh.write("beta,residual,order_parameter,free_energy_gap,tv_distance\n")
        for p in points:
            fh.write(
                f"{p.beta!r},{p.residual!r},{p.order_parameter!r},"
                f"{p.free_energy_gap!r},{p.tv_distance!r}\n"
            )
