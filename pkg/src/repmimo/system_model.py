"""Composite channels through the repeater, MR beamforming, and power accounting.

The repeater applies a single complex gain to whatever it hears, so every
effective channel is the direct link plus the gain times the two-hop
product. All functions here are pure and hold the gain fixed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSet


@dataclass(frozen=True)
class RepeaterGain:
    """Repeater gain split into amplification ``r`` >= 0 and phase ``phi``."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("amplification gain must be non-negative")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))

    @property
    def value(self) -> complex:
        return self.r * cmath.exp(1j * self.phi)

    @classmethod
    def off(cls) -> "RepeaterGain":
        return cls(0.0, 0.0)


def as_complex_gain(alpha) -> complex:
    """Accept a RepeaterGain or a raw complex/real value."""
    if isinstance(alpha, RepeaterGain):
        return alpha.value
    return complex(alpha)


@dataclass(frozen=True)
class BeamformerState:
    """Precoders, combiners, and power-control coefficients."""

    w: np.ndarray       # (K, M) DL precoders
    v: np.ndarray       # (J, M) UL combiners
    eta_d: np.ndarray   # (K,)  DL power coefficients
    eta_u: np.ndarray   # (J,)  UL power coefficients

    def __post_init__(self):
        for name in ("w", "v", "eta_d", "eta_u"):
            getattr(self, name).flags.writeable = False
        used = float(np.sum(self.eta_d * np.sum(np.abs(self.w) ** 2, axis=1)))
        if used > 1.0 + 1e-12:
            raise ValueError(f"DL power constraint violated: {used}")
        if np.any(self.eta_u < 0) or np.any(self.eta_u > 1):
            raise ValueError("UL power coefficients must lie in [0, 1]")


def composite_dl_channel(ch: ChannelSet, k: int, alpha) -> np.ndarray:
    """Effective DL-AP-to-user-k channel: direct link plus repeater path."""
    a = as_complex_gain(alpha)
    return ch.g_dl[k] + a * ch.h_dl[k] * ch.h_d


def composite_ul_channel(ch: ChannelSet, j: int, alpha) -> np.ndarray:
    """Effective user-j-to-UL-AP channel: direct link plus repeater path."""
    a = as_complex_gain(alpha)
    return ch.g_ul[j] + a * ch.h_ul[j] * ch.h_u


def composite_inter_user(ch: ChannelSet, k: int, j: int, alpha) -> complex:
    """Effective UL-user-j-to-DL-user-k interference channel."""
    a = as_complex_gain(alpha)
    return complex(ch.f_uu[k, j] + a * ch.h_dl[k] * ch.h_ul[j])


def composite_inter_ap(ch: ChannelSet, alpha) -> np.ndarray:
    """Effective DL-AP-to-UL-AP interference matrix (unconjugated outer product)."""
    a = as_complex_gain(alpha)
    return ch.f_ap + a * np.outer(ch.h_u, ch.h_d)


def mr_beamformers(ch: ChannelSet, alpha) -> tuple[np.ndarray, np.ndarray]:
    """Maximum-ratio precoders/combiners for the composite channels.

    Precoders are the conjugated composite DL channels, combiners the
    composite UL channels as-is; neither is normalized (power control
    absorbs the norm).
    """
    a = as_complex_gain(alpha)
    w = np.conj(ch.g_dl + a * ch.h_dl[:, None] * ch.h_d[None, :])
    v = ch.g_ul + a * ch.h_ul[:, None] * ch.h_u[None, :]
    return w, v


def max_power_control(w: np.ndarray, n_ul_users: int) -> tuple[np.ndarray, np.ndarray]:
    """Maximal power control: full UL power, equal DL power split.

    DL coefficients are 1 / (K ||w_k||^2) so the total DL constraint is met
    with equality; every UL coefficient is 1.
    """
    norms = np.sum(np.abs(w) ** 2, axis=1)
    if np.any(norms == 0):
        raise ValueError("degenerate precoder with zero norm")
    eta_d = 1.0 / (w.shape[0] * norms)
    return eta_d, np.ones(n_ul_users)


def mr_state(ch: ChannelSet, alpha) -> BeamformerState:
    """MR beamformers plus maximal power control, bundled."""
    w, v = mr_beamformers(ch, alpha)
    eta_d, eta_u = max_power_control(w, v.shape[0])
    return BeamformerState(w=w, v=v, eta_d=eta_d, eta_u=eta_u)


def repeater_input_power(ch: ChannelSet, state: BeamformerState,
                         rho_d: float, rho_u: float) -> float:
    """Mean power impinging on the repeater; independent of the repeater gain."""
    dl = np.sum(state.eta_d * np.abs(state.w @ ch.h_d) ** 2)
    ul = np.sum(state.eta_u * np.abs(ch.h_ul) ** 2)
    return float(rho_d * dl + rho_u * ul)


def max_amplification(p_in: float, sigma_r_sq: float, p_max: float) -> float:
    """Largest amplification that respects the repeater output power cap."""
    if p_in < 0 or sigma_r_sq < 0:
        raise ValueError("powers must be non-negative")
    total = p_in + sigma_r_sq
    if total <= 0:
        raise ValueError("zero input plus noise power: amplification is unbounded")
    return math.sqrt(p_max / total)
