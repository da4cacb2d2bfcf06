"""Closed-form achievable SINRs and spectral efficiencies for both directions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSet
from .system_model import (
    BeamformerState,
    as_complex_gain,
    composite_dl_channel,
    composite_inter_ap,
    composite_inter_user,
    composite_ul_channel,
)


@dataclass(frozen=True)
class LinkReport:
    sinr: float
    se: float
    direction: str      # "dl" or "ul"
    user_index: int


def sinr_dl(ch: ChannelSet, state: BeamformerState, alpha,
            rho_d: float, rho_u: float, sigma_r_sq: float, k: int) -> float:
    """Achievable DL SINR of user ``k`` for a fixed repeater gain.

    Desired power over multi-user interference, amplified-and-forwarded
    UL-user interference, forwarded repeater noise, and unit receiver noise.
    """
    a = as_complex_gain(alpha)
    gbar = composite_dl_channel(ch, k, a)
    gains = np.abs(gbar @ state.w.T) ** 2           # |gbar_k^T w_k'|^2 for all k'
    num = rho_d * state.eta_d[k] * gains[k]
    den = 1.0
    den += rho_d * (np.sum(state.eta_d * gains) - state.eta_d[k] * gains[k])
    for j in range(state.eta_u.shape[0]):
        den += rho_u * state.eta_u[j] * abs(composite_inter_user(ch, k, j, a)) ** 2
    den += sigma_r_sq * abs(a * ch.h_dl[k]) ** 2
    return float(num / den)


def sinr_ul(ch: ChannelSet, state: BeamformerState, alpha,
            rho_d: float, rho_u: float, sigma_r_sq: float, j: int) -> float:
    """Achievable UL SINR of user ``j`` for a fixed repeater gain.

    Interference terms: other UL users, the DL AP leaking through the
    composite inter-AP channel, and forwarded repeater noise; the combiner
    colors the unit receiver noise by its squared norm.
    """
    a = as_complex_gain(alpha)
    v = state.v[j]
    v_norm_sq = float(np.real(np.vdot(v, v)))
    if v_norm_sq == 0.0:
        raise ValueError(f"zero combiner for UL user {j}")
    gains = np.empty(state.eta_u.shape[0])
    for jp in range(state.eta_u.shape[0]):
        gains[jp] = abs(np.vdot(v, composite_ul_channel(ch, jp, a))) ** 2
    num = rho_u * state.eta_u[j] * gains[j]
    den = v_norm_sq
    den += rho_u * (np.sum(state.eta_u * gains) - state.eta_u[j] * gains[j])
    fbar = composite_inter_ap(ch, a)
    leak = np.abs(np.conj(v) @ fbar @ state.w.T) ** 2   # |v^H Fbar w_k|^2
    den += rho_d * float(np.sum(state.eta_d * leak))
    den += sigma_r_sq * abs(a * np.vdot(v, ch.h_u)) ** 2
    return float(num / den)


def se_from_sinr(sinr: float) -> float:
    """Spectral efficiency in bits/s/Hz."""
    if sinr < 0:
        raise ValueError(f"SINR must be non-negative, got {sinr}")
    return math.log2(1.0 + sinr)


def dl_report(ch, state, alpha, rho_d, rho_u, sigma_r_sq, k: int) -> LinkReport:
    s = sinr_dl(ch, state, alpha, rho_d, rho_u, sigma_r_sq, k)
    return LinkReport(sinr=s, se=se_from_sinr(s), direction="dl", user_index=k)


def ul_report(ch, state, alpha, rho_d, rho_u, sigma_r_sq, j: int) -> LinkReport:
    s = sinr_ul(ch, state, alpha, rho_d, rho_u, sigma_r_sq, j)
    return LinkReport(sinr=s, se=se_from_sinr(s), direction="ul", user_index=j)
