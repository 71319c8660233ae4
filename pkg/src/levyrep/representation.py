"""Martingale-representation integrands and Monte Carlo replication.

For a claim f(X_T) the representation reads

    f(X_T) = E[f(X_T)] + int_0^T u(s, X_s) dW_s
                       + int_0^T int theta(s, X_{s-}, y) N~(ds, dy)

with u(s, x) = sigma dF/dx(s, x) and theta(s, x, y) = F(s, x+y) - F(s, x),
F being the conditional value function.  Payoffs with a one-sided damped
transform go through the contour engine; polynomials go through the
closed-form conditional expectation built from the increment cumulants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SchemeError
from .fourier import (
    QuadratureGrid,
    _make_mult_nu_plain,
    _mult_dx,
    conditional_value,
    make_mult_nu_truncated,
    make_multi_table,
)
from .models import BrownianModel, LevyModel
from .payoffs import DampedPayoff, PayoffDecomposition
from .simulate import PathBatch, _jump_cumulants

# integrands are evaluated only for s <= T - NEAR_MATURITY_FRACTION * T; the
# contour degenerates in the final sliver and the last interval is covered by
# the claim's direct evaluation
NEAR_MATURITY_FRACTION = 1e-4

MAX_POLY_DEGREE = 4


def _raw_moments_from_cumulants(k1, k2, k3, k4):
    m1 = k1
    m2 = k2 + k1**2
    m3 = k3 + 3.0 * k2 * k1 + k1**3
    m4 = k4 + 3.0 * k2**2 + 4.0 * k3 * k1 + 6.0 * k2 * k1**2 + k1**4
    return 1.0, m1, m2, m3, m4


def _poly_value_coeffs(model: LevyModel, coeffs, tau: float):
    """Coefficients of x -> E[p(x + Y_tau)] for a polynomial p."""
    if len(coeffs) - 1 > MAX_POLY_DEGREE:
        raise ParameterError(f"polynomial payoffs capped at degree {MAX_POLY_DEGREE}")
    m2j, m3j, m4j = _jump_cumulants(model)
    mom = _raw_moments_from_cumulants(
        model.mu * tau, (model.sigma**2 + m2j) * tau, m3j * tau, m4j * tau
    )
    out = np.zeros(len(coeffs))
    for n, a in enumerate(coeffs):
        for k in range(n + 1):
            out[k] += a * math.comb(n, k) * mom[n - k]
    return out


class _Part:
    """One signed payoff part with batchable F / dF/dx / nu-compensator."""

    def __init__(self, sign, payoff, model, grid, T, nu_eps):
        self.sign = sign
        self.payoff = payoff
        self.model = model
        self.grid = grid
        self.T = T
        self.nu_eps = nu_eps
        self.kind = payoff.kind
        self._has_jumps = not isinstance(model, BrownianModel)
        if self.kind not in ("constant", "polynomial"):
            self._mults = [None, _mult_dx]
            if self._has_jumps:
                if nu_eps is not None:
                    self._mults.append(make_mult_nu_truncated(model, nu_eps))
                else:
                    self._mults.append(_make_mult_nu_plain(model))

    def evaluate(self, s, xs):
        """Returns (F, dF_dx, nu_comp) arrays at the points xs."""
        xs = np.asarray(xs, dtype=float)
        tau = self.T - s
        if self.kind == "constant":
            c = self.payoff.params[0]
            return np.full_like(xs, c), np.zeros_like(xs), np.zeros_like(xs)
        if self.kind == "polynomial":
            coeffs = _poly_value_coeffs(self.model, self.payoff.params, tau)
            F = np.polynomial.polynomial.polyval(xs, coeffs)
            dF = np.polynomial.polynomial.polyval(
                xs, np.polynomial.polynomial.polyder(coeffs)
            )
            comp = self._poly_nu_comp(xs, coeffs)
            return F, dF, comp
        q = np.quantile(xs, [0.0, 0.25, 0.5, 0.75, 1.0])
        table = make_multi_table(
            self.model, self.payoff, self.grid, s, self.T, self._mults, x_probe=q
        )
        outs = table.eval_all(xs)
        if self._has_jumps:
            F, dF, comp = outs
        else:
            (F, dF), comp = outs, np.zeros_like(xs)
        return F, dF, comp

    def _poly_nu_comp(self, xs, coeffs):
        """int (p_tau(x+y) - p_tau(x)) nu(dy) for the polynomial value
        function p_tau: expand in powers of y against nu-moments."""
        if not self._has_jumps:
            return np.zeros_like(xs)
        m1 = self.model.nu_mean()
        m2j, m3j, m4j = _jump_cumulants(self.model)
        numoms = [0.0, m1, m2j, m3j, m4j]
        deg = len(coeffs) - 1
        out = np.zeros_like(xs)
        dcoeffs = coeffs
        for j in range(1, deg + 1):
            dcoeffs = np.polynomial.polynomial.polyder(dcoeffs)
            out += (
                np.polynomial.polynomial.polyval(xs, dcoeffs)
                / math.factorial(j)
                * numoms[j]
            )
        return out

    def theta_terms(self, s, x_pre, y, xs_context):
        """theta(s, x_pre, y) = F(s, x_pre + y) - F(s, x_pre), evaluated for
        matched arrays of pre-jump states and jump sizes."""
        if self.kind == "constant":
            return np.zeros_like(np.asarray(y, dtype=float))
        if self.kind == "polynomial":
            coeffs = _poly_value_coeffs(self.model, self.payoff.params, self.T - s)
            pv = np.polynomial.polynomial.polyval
            return pv(x_pre + y, coeffs) - pv(x_pre, coeffs)
        pts = np.concatenate([x_pre, x_pre + y, xs_context])
        q = np.quantile(pts, [0.0, 0.25, 0.5, 0.75, 1.0])
        table = make_multi_table(
            self.model, self.payoff, self.grid, s, self.T, [None], x_probe=q
        )
        vals = table.eval_all(np.concatenate([x_pre, x_pre + y]))[0]
        n = x_pre.size
        return vals[n:] - vals[:n]


@dataclass(frozen=True)
class RepresentationIntegrands:
    """Callable integrands of the martingale representation."""

    model: LevyModel
    grid: QuadratureGrid
    T: float
    parts: tuple
    mean: float

    def u(self, s: float, x: float) -> float:
        """Diffusion integrand sigma * dF/dx(s, x)."""
        if self.model.sigma == 0.0:
            return 0.0
        total = 0.0
        for part in self.parts:
            _, dF, _ = part.evaluate(s, np.array([x]))
            total += part.sign * dF[0]
        return self.model.sigma * total

    def theta(self, s: float, x: float, y: float) -> float:
        """Jump integrand F(s, x + y) - F(s, x)."""
        if y == 0.0:
            return 0.0
        total = 0.0
        for part in self.parts:
            vals = part.theta_terms(
                s, np.array([x]), np.array([y]), np.array([x])
            )
            total += part.sign * vals[0]
        return float(total)

    def value(self, s: float, x: float) -> float:
        """F(s, x) summed over payoff parts."""
        total = 0.0
        for part in self.parts:
            F, _, _ = part.evaluate(s, np.array([x]))
            total += part.sign * F[0]
        return float(total)

    def claim(self, x_T):
        x_T = np.asarray(x_T, dtype=float)
        out = np.zeros_like(x_T)
        for part in self.parts:
            out = out + part.sign * part.payoff.f(x_T)
        return out


def build_integrands(
    model: LevyModel,
    payoff,
    grid: QuadratureGrid,
    T: float,
    nu_eps: float | None = None,
) -> RepresentationIntegrands:
    """Assemble u, theta and the claim mean.

    ``nu_eps`` switches the jump compensator from the full Levy measure to
    its |y| >= nu_eps truncation; replication of a marks-scheme path batch
    must use the batch's own truncation level.
    """
    if isinstance(payoff, PayoffDecomposition):
        raw_parts = payoff.parts
    elif isinstance(payoff, DampedPayoff):
        raw_parts = ((1, payoff),)
    else:
        raise ParameterError("payoff must be a DampedPayoff or PayoffDecomposition")
    parts = tuple(_Part(s, p, model, grid, T, nu_eps) for s, p in raw_parts)
    mean = 0.0
    for part in parts:
        if part.kind in ("constant", "polynomial"):
            F, _, _ = part.evaluate(0.0, np.array([model.x0]))
            mean += part.sign * F[0]
        else:
            mean += part.sign * conditional_value(
                model, part.payoff, grid, 0.0, model.x0, T
            )
    return RepresentationIntegrands(model, grid, T, parts, float(mean))


def _check_path_compat(integrands: RepresentationIntegrands, batch: PathBatch):
    dt = batch.dt
    if dt <= NEAR_MATURITY_FRACTION * integrands.T:
        raise SchemeError(
            f"step size {dt:g} reaches inside the near-maturity window "
            f"{NEAR_MATURITY_FRACTION * integrands.T:g}"
        )
    model = integrands.model
    if (
        batch.scheme == "exact"
        and not isinstance(model, BrownianModel)
        and not model.is_finite_activity
    ):
        raise SchemeError(
            "exact infinite-activity paths carry no jump marks; "
            "simulate with scheme='marks' for replication"
        )
    for part in integrands.parts:
        if part.kind in ("constant", "polynomial"):
            continue
        want = batch.eps_jump if batch.scheme == "marks" else None
        if part.nu_eps != want:
            raise SchemeError(
                f"integrands built with nu_eps={part.nu_eps} but path batch "
                f"requires nu_eps={want}; rebuild with build_integrands(..., "
                f"nu_eps={want})"
            )


def replicate_batch(integrands: RepresentationIntegrands, batch: PathBatch) -> dict:
    """Replay the representation along every path of the batch.

    Returns a report dict with per-path replication values, the claim values,
    the mean-squared replication error and Monte Carlo standard errors.
    """
    _check_path_compat(integrands, batch)
    model = integrands.model
    n_paths, n_steps, dt = batch.n_paths, batch.n_steps, batch.dt
    R = np.full(n_paths, integrands.mean)
    for k in range(n_steps):
        s = batch.times[k]
        xk = batch.x[:, k]
        sel = batch.jump_step == k
        jp = batch.jump_path[sel]
        jy = batch.jump_size[sel]
        for part in integrands.parts:
            # one table per step prices both the grid states and the
            # post-jump states
            pts = np.concatenate([xk, xk[jp] + jy]) if jy.size else xk
            F_all, dF_all, comp = part.evaluate(s, pts)
            if model.sigma != 0.0:
                R += part.sign * model.sigma * dF_all[:n_paths] * batch.dW[:, k]
            R -= part.sign * comp[:n_paths] * dt
            if jy.size:
                th = F_all[n_paths:] - F_all[:n_paths][jp]
                np.add.at(R, jp, part.sign * th)
    claim = integrands.claim(batch.x[:, -1])
    err = claim - R
    mse = float(np.mean(err**2))
    return {
        "n_paths": n_paths,
        "n_steps": n_steps,
        "mse": mse,
        "mean_claim": float(np.mean(claim)),
        "mean_replication": float(np.mean(R)),
        "se": float(np.std(R, ddof=1) / math.sqrt(n_paths)),
        "replication": R,
        "claim": claim,
    }


def replicate_on_path(integrands: RepresentationIntegrands, batch: PathBatch,
                      path_index: int = 0) -> float:
    """Terminal replication value for a single path of the batch."""
    _check_path_compat(integrands, batch)
    model = integrands.model
    dt = batch.dt
    x = batch.x[path_index]
    jsteps, _, jsizes = batch.jumps_for_path(path_index)
    R = integrands.mean
    for k in range(batch.n_steps):
        s = batch.times[k]
        xk = x[k]
        for part in integrands.parts:
            F, dF, comp = part.evaluate(s, np.array([xk]))
            if model.sigma != 0.0:
                R += part.sign * model.sigma * dF[0] * batch.dW[path_index, k]
            R -= part.sign * comp[0] * dt
        sel = jsteps == k
        for y in jsizes[sel]:
            R += integrands.theta(s, xk, float(y))
    return float(R)
