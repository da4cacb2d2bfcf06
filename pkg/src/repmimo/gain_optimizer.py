"""Repeater gain optimization.

For fixed beamformers, each user's SINR is a ratio of two quadratics in the
amplification gain. That makes the inner problem solvable in closed form:
the derivative's numerator is again a quadratic, so the optimum for a given
phase is one of at most two stationary points or an endpoint of the
feasible interval. The phase is searched on a uniform grid, and an outer
loop alternates between the gain and the MR beamformers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .channels import ChannelSet
from .link_metrics import se_from_sinr, sinr_dl, sinr_ul
from .scenario import SystemParams
from .system_model import (
    BeamformerState,
    RepeaterGain,
    max_amplification,
    mr_state,
    repeater_input_power,
)

# Relative threshold below which the derivative quadratic is treated as
# degenerate (linear or constant).
DEGENERACY_EPS = 1e-12

Target = tuple[str, int]   # ("dl", k) or ("ul", j)


@dataclass(frozen=True)
class SinrPolyCoeffs:
    """Numerator and denominator coefficients of the SINR in the gain ``r``.

    SINR(r) = (a0 + a1 r + a2 r^2) / (b0 + b1 r + b2 r^2) for one user and
    one fixed phase. The denominator is an interference-plus-noise power
    and is strictly positive for r >= 0.
    """

    a0: float
    a1: float
    a2: float
    b0: float
    b1: float
    b2: float


@dataclass(frozen=True)
class CoeffParts:
    """Phase-independent pieces of the SINR polynomials.

    The linear coefficients depend on the phase only through
    2 Re{e^{-i phi} (.)}, so one CoeffParts evaluation serves the whole
    phase grid.
    """

    a0: float
    a2: float
    b0: float
    b2: float
    a1_cross: complex
    b1_cross: complex

    def at_phase(self, phi: float) -> SinrPolyCoeffs:
        rot = cmath.exp(-1j * phi)
        return SinrPolyCoeffs(
            a0=self.a0,
            a1=2.0 * (rot * self.a1_cross).real,
            a2=self.a2,
            b0=self.b0,
            b1=2.0 * (rot * self.b1_cross).real,
            b2=self.b2,
        )


def dl_coeff_parts(ch: ChannelSet, state: BeamformerState,
                   rho_d: float, rho_u: float, sigma_r_sq: float, k: int) -> CoeffParts:
    """Phase-independent SINR polynomial pieces for DL user ``k``."""
    w, eta_d, eta_u = state.w, state.eta_d, state.eta_u
    t_g = w @ ch.g_dl[k]            # g_{d,k}^T w_k' for all k'
    t_h = w @ ch.h_d                # h_d^T w_k' for all k'
    h_dk = ch.h_dl[k]
    abs_h_dk_sq = abs(h_dk) ** 2

    a0 = rho_d * eta_d[k] * abs(t_g[k]) ** 2
    a2 = rho_d * eta_d[k] * abs_h_dk_sq * abs(t_h[k]) ** 2
    a1_cross = rho_d * eta_d[k] * np.conj(h_dk) * t_g[k] * np.conj(t_h[k])

    others = np.arange(w.shape[0]) != k
    mu = rho_d * eta_d[others]
    b0 = float(np.sum(mu * np.abs(t_g[others]) ** 2))
    b2 = float(np.sum(mu * np.abs(t_h[others]) ** 2)) * abs_h_dk_sq
    b1_cross = np.sum(mu * t_g[others] * np.conj(t_h[others])) * np.conj(h_dk)

    xl = rho_u * eta_u
    b0 += float(np.sum(xl * np.abs(ch.f_uu[k]) ** 2)) + 1.0
    b1_cross += np.sum(xl * ch.f_uu[k] * np.conj(ch.h_ul)) * np.conj(h_dk)
    b2 += float(np.sum(xl * np.abs(ch.h_ul) ** 2)) * abs_h_dk_sq
    b2 += sigma_r_sq * abs_h_dk_sq

    return CoeffParts(a0=float(a0), a2=float(a2), b0=b0, b2=b2,
                      a1_cross=complex(a1_cross), b1_cross=complex(b1_cross))


def ul_coeff_parts(ch: ChannelSet, state: BeamformerState,
                   rho_d: float, rho_u: float, sigma_r_sq: float, j: int) -> CoeffParts:
    """Phase-independent SINR polynomial pieces for UL user ``j``."""
    w, eta_d, eta_u = state.w, state.eta_d, state.eta_u
    v = state.v[j]
    s_g = ch.g_ul @ np.conj(v)      # v^H g_{u,j'} for all j'
    s_hu = complex(np.vdot(v, ch.h_u))
    s_f = (np.conj(v) @ ch.f_ap) @ w.T      # v^H F w_k for all k
    t_h = w @ ch.h_d                # h_d^T w_k for all k
    abs_s_hu_sq = abs(s_hu) ** 2

    a0 = rho_u * eta_u[j] * abs(s_g[j]) ** 2
    a2 = rho_u * eta_u[j] * abs(ch.h_ul[j]) ** 2 * abs_s_hu_sq
    a1_cross = rho_u * eta_u[j] * np.conj(ch.h_ul[j]) * s_g[j] * np.conj(s_hu)

    others = np.arange(eta_u.shape[0]) != j
    mu = rho_u * eta_u[others]
    b0 = float(np.sum(mu * np.abs(s_g[others]) ** 2))
    b2 = float(np.sum(mu * np.abs(ch.h_ul[others]) ** 2)) * abs_s_hu_sq
    b1_cross = np.sum(mu * np.conj(ch.h_ul[others]) * s_g[others]) * np.conj(s_hu)

    xl = rho_d * eta_d
    b0 += float(np.sum(xl * np.abs(s_f) ** 2)) + float(np.real(np.vdot(v, v)))
    b1_cross += np.sum(xl * s_f * np.conj(t_h)) * np.conj(s_hu)
    b2 += float(np.sum(xl * np.abs(t_h) ** 2)) * abs_s_hu_sq
    b2 += sigma_r_sq * abs_s_hu_sq

    return CoeffParts(a0=float(a0), a2=float(a2), b0=b0, b2=b2,
                      a1_cross=complex(a1_cross), b1_cross=complex(b1_cross))


def dl_poly_coeffs(ch, state, rho_d, rho_u, sigma_r_sq, k: int, phi: float) -> SinrPolyCoeffs:
    """DL SINR polynomial coefficients for one user at a fixed phase."""
    return dl_coeff_parts(ch, state, rho_d, rho_u, sigma_r_sq, k).at_phase(phi)


def ul_poly_coeffs(ch, state, rho_d, rho_u, sigma_r_sq, j: int, phi: float) -> SinrPolyCoeffs:
    """UL SINR polynomial coefficients for one user at a fixed phase."""
    return ul_coeff_parts(ch, state, rho_d, rho_u, sigma_r_sq, j).at_phase(phi)


def rational_sinr(c: SinrPolyCoeffs, r: float) -> float:
    """Evaluate the quadratic-over-quadratic SINR at amplification ``r``."""
    den = c.b0 + r * (c.b1 + r * c.b2)
    if den <= 0.0:
        raise ValueError(f"non-positive SINR denominator {den} at r={r}: corrupt coefficients")
    return (c.a0 + r * (c.a1 + r * c.a2)) / den


def sinr_derivative_numerator(c: SinrPolyCoeffs) -> tuple[float, float, float]:
    """Coefficients (c0, c1, c2) of the derivative numerator c0 + 2 c1 r + c2 r^2."""
    return (c.a1 * c.b0 - c.a0 * c.b1,
            c.a2 * c.b0 - c.a0 * c.b2,
            c.a2 * c.b1 - c.a1 * c.b2)


def stationary_points(c0: float, c1: float, c2: float) -> list[float]:
    """Non-negative real roots of c0 + 2 c1 r + c2 r^2 = 0, ascending.

    Degenerate quadratics fall back to the linear (or empty) solution; a
    discriminant that is negative within roundoff of zero is clamped.
    """
    scale = max(abs(c0), abs(c1), abs(c2))
    if scale == 0.0:
        return []
    eps = DEGENERACY_EPS * scale
    if abs(c2) <= eps:
        if abs(c1) <= eps:
            return []
        root = -c0 / (2.0 * c1)
        return [root] if root >= 0.0 and math.isfinite(root) else []
    disc = c1 * c1 - c0 * c2
    if disc < 0.0:
        if disc < -DEGENERACY_EPS * c1 * c1:
            return []
        disc = 0.0
    if disc == 0.0:
        roots = [-c1 / c2]
    else:
        # Stable quadratic formula: avoids cancellation in -c1 +/- sqrt.
        q = -(c1 + math.copysign(math.sqrt(disc), c1))
        roots = [q / c2, c0 / q]
    return sorted(r for r in roots if r >= 0.0 and math.isfinite(r))


def _amplification_candidates(c: SinrPolyCoeffs, r_max: float) -> list[float]:
    """Endpoints plus interior stationary points, ascending."""
    candidates = [0.0]
    candidates += [r for r in stationary_points(*sinr_derivative_numerator(c))
                   if 0.0 < r < r_max]
    if r_max > 0.0:
        candidates.append(r_max)
    return candidates


def optimize_amplification(c: SinrPolyCoeffs, r_max: float) -> tuple[float, float]:
    """Globally optimal amplification on [0, r_max] for fixed phase.

    Checks the interval endpoints and any interior stationary points; ties
    are broken toward the smallest amplification.
    """
    best_r, best_val = 0.0, -math.inf
    for r in _amplification_candidates(c, r_max):
        val = rational_sinr(c, r)
        if val > best_val:
            best_r, best_val = r, val
    return best_r, best_val


@dataclass(frozen=True)
class GainOptResult:
    """Optimal repeater gain for one user, with diagnostics."""

    alpha: RepeaterGain
    sinr: float
    se: float
    candidates_evaluated: int
    phase_index: int


def _target_parts(ch, state, rho_d, rho_u, sigma_r_sq, target: Target) -> CoeffParts:
    direction, idx = target
    if direction == "dl":
        return dl_coeff_parts(ch, state, rho_d, rho_u, sigma_r_sq, idx)
    if direction == "ul":
        return ul_coeff_parts(ch, state, rho_d, rho_u, sigma_r_sq, idx)
    raise ValueError(f"unknown direction {direction!r}, expected 'dl' or 'ul'")


def target_sinr(ch, state, alpha, rho_d, rho_u, sigma_r_sq, target: Target) -> float:
    """Direct SINR of the targeted user at a given gain and state."""
    direction, idx = target
    if direction == "dl":
        return sinr_dl(ch, state, alpha, rho_d, rho_u, sigma_r_sq, idx)
    if direction == "ul":
        return sinr_ul(ch, state, alpha, rho_d, rho_u, sigma_r_sq, idx)
    raise ValueError(f"unknown direction {direction!r}, expected 'dl' or 'ul'")


def optimize_gain(ch: ChannelSet, state: BeamformerState, params: SystemParams,
                  target: Target) -> GainOptResult:
    """Jointly pick amplification and phase for fixed beamformers.

    The amplification subproblem is solved in closed form for each of the
    S grid phases 2 pi s / S, s = 0..S-1; the feasible range [0, r_max]
    does not depend on the phase because the repeater input power does not.
    Ties keep the lowest phase index and smallest amplification.
    """
    parts = _target_parts(ch, state, params.rho_d, params.rho_u, params.sigma_r_sq, target)
    p_in = repeater_input_power(ch, state, params.rho_d, params.rho_u)
    r_max = max_amplification(p_in, params.sigma_r_sq, params.p_max)

    s_grid = params.phase_grid_s
    best = None
    n_cands = 0
    for s in range(s_grid):
        phi = 2.0 * math.pi * s / s_grid
        coeffs = parts.at_phase(phi)
        cands = _amplification_candidates(coeffs, r_max)
        n_cands += len(cands)
        r_star, val = 0.0, -math.inf
        for r in cands:
            value = rational_sinr(coeffs, r)
            if value > val:
                r_star, val = r, value
        if best is None or val > best[0]:
            best = (val, r_star, phi, s)
    val, r_star, phi_star, s_star = best
    return GainOptResult(
        alpha=RepeaterGain(r_star, phi_star if r_star > 0 else 0.0),
        sinr=val,
        se=se_from_sinr(val),
        candidates_evaluated=n_cands,
        phase_index=s_star,
    )


@dataclass(frozen=True)
class AlternatingResult:
    """Outcome of the alternating gain/beamformer loop (best iterate kept)."""

    gain: GainOptResult
    state: BeamformerState
    se_trace: tuple[float, ...]
    converged: bool
    iterations: int
    # One (r, phi, r_max, p_in) entry per gain update, with r_max and p_in
    # taken at the beamformer state that update was optimized against.
    history: tuple[tuple[float, float, float, float], ...]


def alternating_optimize(ch: ChannelSet, params: SystemParams, target: Target,
                         max_iter: int = 50, tol: float = 1e-5) -> AlternatingResult:
    """Alternate between closed-form gain optimization and MR updates.

    Starts from a switched-off repeater, so the first trace entry is the
    no-repeater baseline. Each iteration optimizes the gain for the current
    beamformers, then rebuilds MR beamformers and power control around the
    new gain; the trace records the target user's SE after both updates.
    The loop stops once an iteration improves the SE by less than ``tol``
    (which covers decreases) and the best iterate seen is returned, so the
    final SE never falls below the baseline.
    """
    rho_d, rho_u, sig = params.rho_d, params.rho_u, params.sigma_r_sq

    state = mr_state(ch, 0.0)
    sinr0 = target_sinr(ch, state, 0.0, rho_d, rho_u, sig, target)
    se0 = se_from_sinr(sinr0)
    baseline = GainOptResult(alpha=RepeaterGain.off(), sinr=sinr0, se=se0,
                             candidates_evaluated=0, phase_index=0)
    trace = [se0]
    history = []
    best = (se0, baseline, state)

    converged = False
    for _ in range(max_iter):
        res = optimize_gain(ch, state, params, target)
        p_in = repeater_input_power(ch, state, rho_d, rho_u)
        history.append((res.alpha.r, res.alpha.phi,
                        max_amplification(p_in, sig, params.p_max), p_in))

        state = mr_state(ch, res.alpha)
        sinr_n = target_sinr(ch, state, res.alpha, rho_d, rho_u, sig, target)
        se_n = se_from_sinr(sinr_n)
        trace.append(se_n)
        if se_n > best[0]:
            best = (se_n, replace(res, sinr=sinr_n, se=se_n), state)
        if se_n - trace[-2] < tol:
            converged = True
            break

    _, gain, best_state = best
    return AlternatingResult(
        gain=gain,
        state=best_state,
        se_trace=tuple(trace),
        converged=converged,
        iterations=len(trace) - 1,
        history=tuple(history),
    )
