"""I.i.d. Rayleigh channel realizations for every link of the two-cell deployment."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

import numpy as np

from .scenario import SystemParams, large_scale_coeff


@dataclass(frozen=True)
class LinkBetas:
    """Large-scale power gains, one scalar per link."""

    g_dl: np.ndarray   # (K,)  DL AP <-> DL user k
    g_ul: np.ndarray   # (J,)  UL AP <-> UL user j
    h_d: float         # DL AP <-> repeater
    h_u: float         # UL AP <-> repeater
    h_dl: np.ndarray   # (K,)  repeater <-> DL user k
    h_ul: np.ndarray   # (J,)  repeater <-> UL user j
    f_ap: float        # DL AP <-> UL AP
    f_uu: np.ndarray   # (K, J) UL user j <-> DL user k


@dataclass(frozen=True)
class ChannelSet:
    """One realization of every channel in the network.

    Entries are circularly-symmetric complex Gaussians whose variances are
    the per-link large-scale coefficients. Arrays are read-only so a
    realization can be shared across workers.
    """

    g_dl: np.ndarray   # (K, M)
    g_ul: np.ndarray   # (J, M)
    h_d: np.ndarray    # (M,)
    h_u: np.ndarray    # (M,)
    h_dl: np.ndarray   # (K,)
    h_ul: np.ndarray   # (J,)
    f_ap: np.ndarray   # (M, M)
    f_uu: np.ndarray   # (K, J)

    def __post_init__(self):
        for f in fields(self):
            getattr(self, f.name).flags.writeable = False


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one Monte Carlo trial.

    Streams are keyed by (seed, trial) only, so results do not depend on
    how trials are scheduled across workers.
    """
    if seed < 0 or trial < 0:
        raise ValueError("seed and trial index must be non-negative")
    return np.random.default_rng([seed, trial])


def pathloss_betas(params: SystemParams) -> LinkBetas:
    """Deterministic (shadowing-free) large-scale coefficients for all links."""
    return link_betas(params, rng=None)


def link_betas(params: SystemParams, rng: np.random.Generator | None = None) -> LinkBetas:
    """Large-scale coefficients for all links, one shadowing draw per link.

    With ``rng=None`` (or zero shadow sigma) the coefficients are pure
    pathloss. Draw order is fixed so that substreams stay aligned across
    repeater positions.
    """
    geo, model = params.geometry, params.ls_model
    shadowed = rng is not None and model.shadow_sigma_db > 0

    def beta(a, b):
        draw = float(rng.standard_normal()) if shadowed else None
        return large_scale_coeff(model, a, b, draw)

    return LinkBetas(
        g_dl=np.array([beta(geo.ap_dl_pos, p) for p in geo.dl_user_pos]),
        g_ul=np.array([beta(geo.ap_ul_pos, p) for p in geo.ul_user_pos]),
        h_d=beta(geo.ap_dl_pos, geo.repeater_pos),
        h_u=beta(geo.ap_ul_pos, geo.repeater_pos),
        h_dl=np.array([beta(geo.repeater_pos, p) for p in geo.dl_user_pos]),
        h_ul=np.array([beta(geo.repeater_pos, p) for p in geo.ul_user_pos]),
        f_ap=beta(geo.ap_dl_pos, geo.ap_ul_pos),
        f_uu=np.array([[beta(pd, pu) for pu in geo.ul_user_pos] for pd in geo.dl_user_pos]),
    )


def sample_cn(rng: np.random.Generator, beta, shape=()) -> np.ndarray:
    """CN(0, beta) samples; ``beta`` may broadcast against ``shape``."""
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return np.sqrt(np.asarray(beta) / 2.0) * z


def sample_channel_set(params: SystemParams, rng: np.random.Generator,
                       betas: LinkBetas | None = None) -> ChannelSet:
    """Draw one i.i.d. Rayleigh realization of every channel.

    When ``betas`` is None, per-link shadowing is drawn from the same
    ``rng`` first (the default model). The standard-normal consumption
    pattern is independent of the geometry, so two parameter sets that
    share (seed, trial) see common underlying randomness.
    """
    if betas is None:
        betas = link_betas(params, rng)
    m, k, j = params.m, params.k, params.j
    return ChannelSet(
        g_dl=sample_cn(rng, betas.g_dl[:, None], (k, m)),
        g_ul=sample_cn(rng, betas.g_ul[:, None], (j, m)),
        h_d=sample_cn(rng, betas.h_d, (m,)),
        h_u=sample_cn(rng, betas.h_u, (m,)),
        h_dl=sample_cn(rng, betas.h_dl, (k,)),
        h_ul=sample_cn(rng, betas.h_ul, (j,)),
        f_ap=sample_cn(rng, betas.f_ap, (m, m)),
        f_uu=sample_cn(rng, betas.f_uu, (k, j)),
    )


def dump_channel_set(ch: ChannelSet, path: str) -> None:
    """Write a realization to a JSON file, complex entries as [re, im] pairs."""
    def pairs(a: np.ndarray):
        stacked = np.stack([a.real, a.imag], axis=-1)
        return stacked.tolist()

    payload = {f.name: pairs(getattr(ch, f.name)) for f in fields(ch)}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def load_channel_set(path: str) -> ChannelSet:
    """Read back a realization written by :func:`dump_channel_set`."""
    with open(path) as fh:
        payload = json.load(fh)

    def un_pairs(nested):
        arr = np.asarray(nested)
        return arr[..., 0] + 1j * arr[..., 1]

    return ChannelSet(**{name: un_pairs(v) for name, v in payload.items()})
