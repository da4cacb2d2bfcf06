"""Two-cell line topology, large-scale fading, SNR calibration, and config handling.

The default deployment puts the DL access point at d = -100 m and the UL
access point at d = +100 m on a common horizontal axis (y = 0), with the
cell border at d = 0. Users and the repeater sit on the same line; only
their elevations differ. All powers are normalized so that the receiver
noise variance is one, which is why the repeater power cap and the
transmit SNRs are stored as plain linear numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

Point3 = tuple[float, float, float]

AP_ELEVATION_M = 10.0
REPEATER_ELEVATION_M = 5.0
USER_ELEVATION_M = 1.0
AP_TO_BORDER_M = 100.0

# Resolved configuration keys. Distances in metres, powers in dBm, SNR
# targets in dB; everything else linear / dimensionless.
DEFAULT_CONFIG: dict = {
    "m": 16,
    "k": 1,
    "j": 1,
    "snr_dl_db": 15.0,
    "snr_ul_db": 5.0,
    "sigma_r_sq": 1.0,
    "p_max_dbm": 38.0,
    "noise_floor_dbm": -68.0,
    "phase_grid_s": 16,
    "seed": 1,
    "d_dl_user_m": -50.0,
    "d_ul_user_m": 50.0,
    "d_repeater_m": 0.0,
    "pathloss_intercept_db": -30.5,
    "pathloss_slope_db": 36.7,
    "shadow_sigma_db": 4.0,
}


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(lin: float) -> float:
    return 10.0 * math.log10(lin)


def dist3(a: Point3, b: Point3) -> float:
    """Euclidean distance between two 3D points."""
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


@dataclass(frozen=True)
class Geometry:
    """Positions of both APs, all users, and the repeater (3D, metres)."""

    ap_dl_pos: Point3
    ap_ul_pos: Point3
    dl_user_pos: tuple[Point3, ...]
    ul_user_pos: tuple[Point3, ...]
    repeater_pos: Point3

    def __post_init__(self):
        for p in (self.ap_dl_pos, self.ap_ul_pos, self.repeater_pos,
                  *self.dl_user_pos, *self.ul_user_pos):
            if p[2] <= 0:
                raise ValueError(f"elevation must be strictly positive, got {p}")


@dataclass(frozen=True)
class LargeScaleModel:
    """Log-distance pathloss with optional log-normal shadowing.

    ``slope_db`` is the coefficient of log10(distance), i.e. ten times the
    pathloss exponent. ``shadow_sigma_db = 0`` disables shadowing.
    """

    intercept_db: float = -30.5
    slope_db: float = 36.7
    shadow_sigma_db: float = 4.0

    def __post_init__(self):
        if self.slope_db <= 0:
            raise ValueError("pathloss slope must be positive")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow sigma must be non-negative")


@dataclass(frozen=True)
class SystemParams:
    """Scalar system configuration plus geometry and large-scale model.

    ``rho_d`` and ``rho_u`` are the normalized DL/UL transmit SNRs (linear),
    ``p_max`` the repeater output power cap in units of the receiver noise
    power, and ``phase_grid_s`` the number of phase samples used by the
    gain optimizer.
    """

    m: int
    k: int
    j: int
    rho_d: float
    rho_u: float
    sigma_r_sq: float
    p_max: float
    phase_grid_s: int
    seed: int
    geometry: Geometry
    ls_model: LargeScaleModel

    def __post_init__(self):
        if min(self.m, self.k, self.j, self.phase_grid_s) < 1:
            raise ValueError("m, k, j, phase_grid_s must all be >= 1")
        if self.rho_d <= 0 or self.rho_u <= 0 or self.p_max <= 0:
            raise ValueError("rho_d, rho_u, p_max must be positive")
        if self.sigma_r_sq < 0:
            raise ValueError("sigma_r_sq must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if len(self.geometry.dl_user_pos) != self.k:
            raise ValueError("geometry has wrong number of DL user positions")
        if len(self.geometry.ul_user_pos) != self.j:
            raise ValueError("geometry has wrong number of UL user positions")


def build_line_scenario(d_dl_user, d_ul_user, d_repeater: float) -> Geometry:
    """Place APs, users, and the repeater on the standard line deployment.

    Parameters
    ----------
    d_dl_user, d_ul_user : float or sequence of float
        Horizontal position(s) of the DL / UL users in metres.
    d_repeater : float
        Horizontal position of the repeater in metres.

    APs are fixed at d = -100 m and d = +100 m with 10 m elevation; users
    get 1 m and the repeater 5 m elevation, so colocated horizontal
    coordinates still yield strictly positive 3D distances.
    """
    if isinstance(d_dl_user, (int, float)):
        d_dl_user = (d_dl_user,)
    if isinstance(d_ul_user, (int, float)):
        d_ul_user = (d_ul_user,)
    return Geometry(
        ap_dl_pos=(-AP_TO_BORDER_M, 0.0, AP_ELEVATION_M),
        ap_ul_pos=(AP_TO_BORDER_M, 0.0, AP_ELEVATION_M),
        dl_user_pos=tuple((float(d), 0.0, USER_ELEVATION_M) for d in d_dl_user),
        ul_user_pos=tuple((float(d), 0.0, USER_ELEVATION_M) for d in d_ul_user),
        repeater_pos=(float(d_repeater), 0.0, REPEATER_ELEVATION_M),
    )


def large_scale_coeff(model: LargeScaleModel, a: Point3, b: Point3,
                      shadow_draw: float | None = None) -> float:
    """Linear power gain of the link between points ``a`` and ``b``.

    ``shadow_draw`` is a standard-normal sample; pass None for the
    deterministic pathloss-only coefficient.
    """
    d = dist3(a, b)
    if d <= 0.0:
        raise ValueError(f"zero 3D distance between {a} and {b}: pathloss is singular")
    gain_db = model.intercept_db - model.slope_db * math.log10(d)
    if shadow_draw is not None:
        gain_db += model.shadow_sigma_db * shadow_draw
    return db_to_linear(gain_db)


def calibrate_tx_snr(target_median_snr_db: float, beta_ref: float) -> float:
    """Transmit SNR such that rho * beta_ref hits the target receive SNR.

    The reference coefficient is pathloss-only by convention; shadowing and
    small-scale fading are excluded from the calibration.
    """
    if beta_ref <= 0:
        raise ValueError(f"reference large-scale coefficient must be positive, got {beta_ref}")
    return db_to_linear(target_median_snr_db) / beta_ref


def load_config(path: str | None = None, overrides: dict | None = None) -> dict:
    """Merge defaults, an optional JSON config file, and explicit overrides.

    Later sources win. Unknown keys in the file are rejected so that typos
    do not silently fall back to defaults.
    """
    cfg = dict(DEFAULT_CONFIG)
    if path is not None:
        with open(path) as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(DEFAULT_CONFIG)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    if overrides:
        unknown = set(overrides) - set(DEFAULT_CONFIG)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update({k: v for k, v in overrides.items() if v is not None})
    return cfg


def params_from_config(cfg: dict) -> SystemParams:
    """Build SystemParams from a resolved configuration dict.

    The DL/UL transmit SNRs are calibrated against the pathloss-only
    coefficient of the own-cell AP-to-user link (nominally 50 m horizontal
    separation), and the repeater power cap is normalized by the configured
    noise floor.
    """
    def user_ds(value, count):
        # Scalar config entries place all users of a cell at the same distance;
        # JSON arrays give per-user positions.
        if isinstance(value, (int, float)):
            return (float(value),) * count
        if len(value) != count:
            raise ValueError(f"expected {count} user positions, got {len(value)}")
        return tuple(float(d) for d in value)

    geometry = build_line_scenario(user_ds(cfg["d_dl_user_m"], int(cfg["k"])),
                                   user_ds(cfg["d_ul_user_m"], int(cfg["j"])),
                                   cfg["d_repeater_m"])
    model = LargeScaleModel(
        intercept_db=float(cfg["pathloss_intercept_db"]),
        slope_db=float(cfg["pathloss_slope_db"]),
        shadow_sigma_db=float(cfg["shadow_sigma_db"]),
    )
    beta_dl_ref = large_scale_coeff(model, geometry.ap_dl_pos, geometry.dl_user_pos[0])
    beta_ul_ref = large_scale_coeff(model, geometry.ap_ul_pos, geometry.ul_user_pos[0])
    return SystemParams(
        m=int(cfg["m"]),
        k=int(cfg["k"]),
        j=int(cfg["j"]),
        rho_d=calibrate_tx_snr(float(cfg["snr_dl_db"]), beta_dl_ref),
        rho_u=calibrate_tx_snr(float(cfg["snr_ul_db"]), beta_ul_ref),
        sigma_r_sq=float(cfg["sigma_r_sq"]),
        p_max=db_to_linear(float(cfg["p_max_dbm"]) - float(cfg["noise_floor_dbm"])),
        phase_grid_s=int(cfg["phase_grid_s"]),
        seed=int(cfg["seed"]),
        geometry=geometry,
        ls_model=model,
    )


def default_params(**overrides) -> SystemParams:
    """SystemParams for the default two-cell scenario, with config-key overrides."""
    return params_from_config(load_config(overrides=overrides))


def with_repeater_position(params: SystemParams, d_repeater: float) -> SystemParams:
    """Copy of ``params`` with the repeater moved to horizontal position ``d_repeater``."""
    geo = replace(params.geometry,
                  repeater_pos=(float(d_repeater), 0.0, REPEATER_ELEVATION_M))
    return replace(params, geometry=geo)


def params_to_dict(params: SystemParams) -> dict:
    """JSON-serializable dump of every SystemParams field."""
    return {
        "m": params.m,
        "k": params.k,
        "j": params.j,
        "rho_d": params.rho_d,
        "rho_u": params.rho_u,
        "sigma_r_sq": params.sigma_r_sq,
        "p_max": params.p_max,
        "phase_grid_s": params.phase_grid_s,
        "seed": params.seed,
        "geometry": {
            "ap_dl_pos": list(params.geometry.ap_dl_pos),
            "ap_ul_pos": list(params.geometry.ap_ul_pos),
            "dl_user_pos": [list(p) for p in params.geometry.dl_user_pos],
            "ul_user_pos": [list(p) for p in params.geometry.ul_user_pos],
            "repeater_pos": list(params.geometry.repeater_pos),
        },
        "ls_model": {
            "intercept_db": params.ls_model.intercept_db,
            "slope_db": params.ls_model.slope_db,
            "shadow_sigma_db": params.ls_model.shadow_sigma_db,
        },
    }
