"""Path simulation with explicit jump bookkeeping.

Two scheme families:

* ``exact`` — distributionally exact increments: compound Poisson with drift
  for finite-activity models, gamma-difference and inverse-Gaussian
  subordination for the infinite-activity parametric families.
* ``marks`` — jumps of size |y| >= eps_jump as a compound Poisson process with
  marks drawn by inverse-CDF tables, small jumps compensated in the drift and
  optionally replaced by an independent Gaussian with matched variance.

Replaying the stochastic integrals of a representation needs the Brownian
increments and the individual jump marks, so both are recorded per path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .errors import ParameterError, SchemeError
from .models import (
    BrownianModel,
    CustomModel,
    LevyModel,
    MertonModel,
    NIGModel,
    VGModel,
)


@dataclass
class PathBatch:
    """Simulated paths on a uniform grid with jump marks.

    ``x`` holds the state at the grid times; ``dW`` and ``dB`` are the
    Brownian and small-jump-Gaussian increments per step (already scaled by
    sqrt(dt) but not by volatility).  Jumps are stored flat, sorted by
    (path, time): ``jump_path``, ``jump_step``, ``jump_time``, ``jump_size``.
    """

    model: LevyModel
    T: float
    times: np.ndarray
    x: np.ndarray
    dW: np.ndarray
    dB: np.ndarray
    jump_path: np.ndarray
    jump_step: np.ndarray
    jump_time: np.ndarray
    jump_size: np.ndarray
    scheme: str
    seed: int
    eps_jump: float | None = None
    small_sigma: float = 0.0
    gauss_correction: bool = False

    @property
    def n_paths(self) -> int:
        return self.x.shape[0]

    @property
    def n_steps(self) -> int:
        return self.x.shape[1] - 1

    @property
    def dt(self) -> float:
        return self.T / self.n_steps

    def jumps_for_path(self, p: int):
        sel = self.jump_path == p
        return self.jump_step[sel], self.jump_time[sel], self.jump_size[sel]

    def coarsen(self, factor: int) -> "PathBatch":
        """Subsample to every ``factor``-th grid time, summing the Gaussian
        increments and re-binning the jumps; the driving noise is unchanged,
        so coarse and fine batches share the same paths."""
        if self.n_steps % factor:
            raise ParameterError("coarsening factor must divide n_steps")
        k = self.n_steps // factor
        return replace(
            self,
            times=self.times[::factor],
            x=self.x[:, ::factor],
            dW=self.dW.reshape(self.n_paths, k, factor).sum(axis=2),
            dB=self.dB.reshape(self.n_paths, k, factor).sum(axis=2),
            jump_step=self.jump_step // factor,
        )


def _compound_poisson(rng, rate, n_paths, T, sampler):
    """Draw jump counts, times and sizes for a homogeneous compound Poisson
    process observed on [0, T] for each path."""
    counts = rng.poisson(rate * T, n_paths)
    total = int(counts.sum())
    jp = np.repeat(np.arange(n_paths), counts)
    jt = rng.uniform(0.0, T, total)
    jsize = sampler(total)
    order = np.lexsort((jt, jp))
    return jp[order], jt[order], jsize[order]


def _accumulate(x0, drift_dt, sigma, dW, small_sigma, dB, n_steps, jp, jstep, jsize):
    """Assemble paths from drift, Gaussian increments and binned jumps."""
    n_paths = dW.shape[0]
    inc = drift_dt + sigma * dW + small_sigma * dB
    if jsize.size:
        np.add.at(inc, (jp, jstep), jsize)
    x = np.empty((n_paths, n_steps + 1))
    x[:, 0] = x0
    np.cumsum(inc, axis=1, out=x[:, 1:])
    x[:, 1:] += x0
    return x


# ---------------------------------------------------------------------------
# mark tables for the truncated compound Poisson scheme


@dataclass(frozen=True)
class MarkTable:
    """Inverse-CDF sampler and truncated moments for jumps |y| >= eps."""

    eps: float
    rate: float           # nu(|y| >= eps)
    mean: float           # int_{|y| >= eps} y nu(dy)
    small_var: float      # int_{|y| < eps} y^2 nu(dy)
    u_grid: np.ndarray
    y_grid: np.ndarray

    def sample(self, rng, n):
        return np.interp(rng.uniform(0.0, 1.0, n), self.u_grid, self.y_grid)


def build_mark_table(model: LevyModel, eps: float, n_knots: int = 4000) -> MarkTable:
    """Tabulate the normalized CDF of nu restricted to |y| >= eps."""
    if isinstance(model, BrownianModel):
        raise SchemeError("mark scheme needs a jump component")
    if eps <= 0:
        raise ParameterError("eps_jump must be positive")

    pieces = []
    rate = 0.0
    mean = 0.0
    for sgn in (-1.0, 1.0):
        # find a cutoff where the density tail is negligible
        hi = max(1.0, 4.0 * eps)
        while hi < 1e4:
            d = float(model.levy_density(np.array(sgn * hi)))
            if d <= 0.0 or math.log(max(d, 1e-300)) < -50.0:
                break
            hi *= 2.0
        ys = sgn * np.geomspace(eps, hi, n_knots)
        dens = model.levy_density(ys)
        if not np.any(dens > 0):
            continue
        if sgn < 0:
            ys = ys[::-1]
            dens = dens[::-1]
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(ys))])
        rate += cdf[-1]
        mean += float(np.trapezoid(ys * dens, ys))
        pieces.append((ys, cdf))

    if rate <= 0:
        raise SchemeError(f"no jump mass beyond eps={eps:g}")

    # stitch the signed pieces into one monotone CDF over y
    offset = 0.0
    y_all, u_all = [], []
    for ys, cdf in pieces:
        y_all.append(ys)
        u_all.append((cdf + offset) / rate)
        offset += cdf[-1]
    y_grid = np.concatenate(y_all)
    u_grid = np.concatenate(u_all)
    u_grid, idx = np.unique(u_grid, return_index=True)
    y_grid = y_grid[idx]

    small_var = 0.0
    for sgn in (1.0, -1.0):
        val, _ = integrate.quad(
            lambda u: u * u * float(model.levy_density(np.array(sgn * u))), 0.0, eps
        )
        small_var += val
    return MarkTable(eps, float(rate), float(mean), float(small_var), u_grid, y_grid)


# ---------------------------------------------------------------------------
# schemes


def _simulate_merton_exact(model: MertonModel, T, n_steps, n_paths, rng, seed):
    dt = T / n_steps
    dW = rng.standard_normal((n_paths, n_steps)) * math.sqrt(dt)
    jp, jt, jsize = _compound_poisson(
        rng, model.gamma, n_paths, T,
        lambda n: rng.normal(model.m, model.delta, n),
    )
    jstep = np.minimum((jt / dt).astype(int), n_steps - 1)
    drift = (model.mu - model.gamma * model.m) * dt  # compensated jump mean
    x = _accumulate(model.x0, drift, model.sigma, dW, 0.0,
                    np.zeros_like(dW), n_steps, jp, jstep, jsize)
    return PathBatch(model, T, np.linspace(0.0, T, n_steps + 1), x, dW,
                     np.zeros_like(dW), jp, jstep, jt, jsize, "exact", seed)


def _simulate_brownian(model: BrownianModel, T, n_steps, n_paths, rng, seed):
    dt = T / n_steps
    dW = rng.standard_normal((n_paths, n_steps)) * math.sqrt(dt)
    empty = np.array([], dtype=int)
    x = _accumulate(model.x0, model.mu * dt, model.sigma, dW, 0.0,
                    np.zeros_like(dW), n_steps, empty, empty, np.array([]))
    return PathBatch(model, T, np.linspace(0.0, T, n_steps + 1), x, dW,
                     np.zeros_like(dW), empty, empty, np.array([]), np.array([]),
                     "exact", seed)


def _simulate_vg_exact(model: VGModel, T, n_steps, n_paths, rng, seed):
    """Gamma-difference construction: the jump part is G_p - G_n with
    Gamma(C dt, 1/M) and Gamma(C dt, 1/G) increments, compensated by its
    mean C (1/M - 1/G) dt."""
    dt = T / n_steps
    shape = model.C * dt
    gp = rng.gamma(shape, 1.0 / model.M, (n_paths, n_steps))
    gn = rng.gamma(shape, 1.0 / model.G, (n_paths, n_steps))
    comp = model.C * (1.0 / model.M - 1.0 / model.G) * dt
    inc = model.mu * dt + gp - gn - comp
    x = np.empty((n_paths, n_steps + 1))
    x[:, 0] = model.x0
    np.cumsum(inc, axis=1, out=x[:, 1:])
    x[:, 1:] += model.x0
    zeros = np.zeros((n_paths, n_steps))
    empty = np.array([], dtype=int)
    return PathBatch(model, T, np.linspace(0.0, T, n_steps + 1), x, zeros,
                     zeros.copy(), empty, empty, np.array([]), np.array([]),
                     "exact", seed)


def _simulate_nig_exact(model: NIGModel, T, n_steps, n_paths, rng, seed):
    """Inverse-Gaussian subordination: I ~ IG(mean = delta dt / gamma0,
    shape = (delta dt)^2), increment b I + sqrt(I) Z, compensated by its mean
    delta b dt / gamma0."""
    dt = T / n_steps
    gamma0 = math.sqrt(model.a**2 - model.b**2)
    mean_i = model.delta * dt / gamma0
    ig = rng.wald(mean_i, (model.delta * dt) ** 2, (n_paths, n_steps))
    z = rng.standard_normal((n_paths, n_steps))
    inc = model.mu * dt + model.b * ig + np.sqrt(ig) * z - model.b * mean_i
    x = np.empty((n_paths, n_steps + 1))
    x[:, 0] = model.x0
    np.cumsum(inc, axis=1, out=x[:, 1:])
    x[:, 1:] += model.x0
    zeros = np.zeros((n_paths, n_steps))
    empty = np.array([], dtype=int)
    return PathBatch(model, T, np.linspace(0.0, T, n_steps + 1), x, zeros,
                     zeros.copy(), empty, empty, np.array([]), np.array([]),
                     "exact", seed)


def _simulate_marks(model, T, n_steps, n_paths, rng, seed, eps, gauss_correction):
    table = build_mark_table(model, eps)
    dt = T / n_steps
    dW = rng.standard_normal((n_paths, n_steps)) * math.sqrt(dt)
    jp, jt, jsize = _compound_poisson(rng, table.rate, n_paths, T,
                                      lambda n: table.sample(rng, n))
    jstep = np.minimum((jt / dt).astype(int), n_steps - 1)
    small_sigma = math.sqrt(table.small_var) if gauss_correction else 0.0
    dB = rng.standard_normal((n_paths, n_steps)) * math.sqrt(dt) if gauss_correction \
        else np.zeros_like(dW)
    # retained jumps are compensated by their own mean; the omitted small
    # jumps are mean-zero after compensation
    drift = (model.mu - table.mean) * dt
    x = _accumulate(model.x0, drift, model.sigma, dW, small_sigma, dB,
                    n_steps, jp, jstep, jsize)
    return PathBatch(model, T, np.linspace(0.0, T, n_steps + 1), x, dW, dB,
                     jp, jstep, jt, jsize, "marks", seed, eps_jump=eps,
                     small_sigma=small_sigma, gauss_correction=gauss_correction)


def simulate(
    model: LevyModel,
    T: float,
    n_steps: int,
    n_paths: int,
    seed: int = 0,
    scheme: str = "exact",
    eps_jump: float = 1e-3,
    gauss_correction: bool | None = None,
) -> PathBatch:
    """Simulate ``n_paths`` paths of X on a uniform grid over [0, T].

    ``gauss_correction`` defaults to on for infinite-activity models (their
    small jumps carry variance that a bare truncation would drop) and off for
    finite-activity ones.
    """
    if T <= 0 or n_steps < 1 or n_paths < 1:
        raise ParameterError("need T > 0, n_steps >= 1, n_paths >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if scheme == "exact":
        if isinstance(model, MertonModel):
            return _simulate_merton_exact(model, T, n_steps, n_paths, rng, seed)
        if isinstance(model, BrownianModel):
            return _simulate_brownian(model, T, n_steps, n_paths, rng, seed)
        if isinstance(model, VGModel):
            return _simulate_vg_exact(model, T, n_steps, n_paths, rng, seed)
        if isinstance(model, NIGModel):
            return _simulate_nig_exact(model, T, n_steps, n_paths, rng, seed)
        if isinstance(model, CustomModel):
            raise SchemeError("custom models have no exact scheme; use scheme='marks'")
        raise SchemeError(f"no exact scheme for {type(model).__name__}")
    if scheme == "marks":
        if gauss_correction is None:
            gauss_correction = not model.has_finite_variation_jumps
        return _simulate_marks(model, T, n_steps, n_paths, rng, seed, eps_jump,
                               gauss_correction)
    raise SchemeError(f"unknown scheme {scheme!r}")


# ---------------------------------------------------------------------------
# distributional targets


def _jump_cumulants(model: LevyModel):
    """(int x^2 nu, int x^3 nu, int x^4 nu)."""
    if isinstance(model, BrownianModel):
        return 0.0, 0.0, 0.0
    if hasattr(model, "nu_moments"):
        _, m2, m3, m4 = model.nu_moments()
        return m2, m3, m4
    if isinstance(model, VGModel):
        c, g, m = model.C, model.G, model.M
        return (
            c * (1.0 / m**2 + 1.0 / g**2),
            2.0 * c * (1.0 / m**3 - 1.0 / g**3),
            6.0 * c * (1.0 / m**4 + 1.0 / g**4),
        )
    total = [0.0, 0.0, 0.0]
    for sgn in (1.0, -1.0):
        for j, k in enumerate((2, 3, 4)):
            val, _ = integrate.quad(
                lambda u, k=k: u**k * float(model.levy_density(np.array(sgn * u))),
                0.0, np.inf, limit=300,
            )
            total[j] += sgn**k * val
    return tuple(total)


def moments_from_psi(model: LevyModel, t: float):
    """Mean, variance, skewness and excess kurtosis of X_t - x0 implied by
    the characteristic exponent's cumulants."""
    m2, m3, m4 = _jump_cumulants(model)
    k1 = model.mu * t
    k2 = (model.sigma**2 + m2) * t
    k3 = m3 * t
    k4 = m4 * t
    return k1, k2, k3 / k2**1.5 if k2 > 0 else 0.0, k4 / k2**2 if k2 > 0 else 0.0
