"""Shared builders for randomized test instances."""

import dataclasses

import numpy as np
import pytest

import repmimo as rm


def make_params(rng=None, m=4, k=1, j=1, d_repeater=None, **overrides):
    """Default params with optional random user/repeater placement."""
    params = rm.default_params(m=m, k=k, j=j, **overrides)
    if rng is None:
        return params
    geo = rm.build_line_scenario(
        list(rng.uniform(-90.0, -10.0, k)),
        list(rng.uniform(10.0, 90.0, j)),
        rng.uniform(-150.0, 150.0) if d_repeater is None else d_repeater,
    )
    return dataclasses.replace(params, geometry=geo)


def make_instance(rng, m=4, k=1, j=1, trial=0, **overrides):
    """Random (params, channels, MR state at alpha=0) triple."""
    params = make_params(rng, m=m, k=k, j=j, **overrides)
    ch = rm.sample_channel_set(params, rm.trial_rng(int(rng.integers(1 << 16)), trial))
    state = rm.mr_state(ch, 0.0)
    return params, ch, state


def manual_channels(m=1, k=1, j=1, **entries):
    """ChannelSet with given entries, zeros elsewhere."""
    defaults = {
        "g_dl": np.zeros((k, m)), "g_ul": np.zeros((j, m)),
        "h_d": np.zeros(m), "h_u": np.zeros(m),
        "h_dl": np.zeros(k), "h_ul": np.zeros(j),
        "f_ap": np.zeros((m, m)), "f_uu": np.zeros((k, j)),
    }
    defaults.update(entries)
    return rm.ChannelSet(**{name: np.asarray(val, dtype=complex)
                            for name, val in defaults.items()})


def disconnect_repeater(ch):
    """Copy of a realization with every repeater-adjacent channel zeroed."""
    return rm.ChannelSet(
        g_dl=ch.g_dl.copy(), g_ul=ch.g_ul.copy(),
        h_d=np.zeros_like(ch.h_d), h_u=np.zeros_like(ch.h_u),
        h_dl=np.zeros_like(ch.h_dl), h_ul=np.zeros_like(ch.h_ul),
        f_ap=ch.f_ap.copy(), f_uu=ch.f_uu.copy(),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
