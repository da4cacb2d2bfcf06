"""End-to-end acceptance checks for the full toolkit.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them all)
and asserts the corresponding numerical contract. The two Monte Carlo
fixtures dominate the runtime: the 1000-trial position sweep takes a couple
of minutes, the paired CDF runs tens of seconds.

CSV artifacts of the figure-level runs are left in ``artifacts/`` next to
this file so the plotting tool can be exercised on real outputs.
"""

import dataclasses
import math
from pathlib import Path

import numpy as np
import pytest

import repmimo as rm
from repmimo.experiments import cdf_trial, run_position_sweep, write_results
from repmimo.gain_optimizer import (
    alternating_optimize,
    dl_coeff_parts,
    optimize_amplification,
    optimize_gain,
    rational_sinr,
    sinr_derivative_numerator,
    stationary_points,
    ul_coeff_parts,
)
from repmimo.link_metrics import sinr_dl, sinr_ul
from repmimo.system_model import max_amplification, mr_state, repeater_input_power

from conftest import make_instance
from test_gain_optimizer import random_coeffs

ARTIFACTS = Path(__file__).parent / "artifacts"
CDF_POSITIONS = {"dl": -58.0, "ul": 55.0}
TRIALS = 1000


def report(name: str, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def cdf_records():
    params = rm.default_params()
    return {
        direction: [cdf_trial(params, d_r, direction, t) for t in range(TRIALS)]
        for direction, d_r in CDF_POSITIONS.items()
    }


@pytest.fixture(scope="module")
def fig2_sweep():
    params = rm.default_params()
    result = run_position_sweep(params, trials=TRIALS)
    ARTIFACTS.mkdir(exist_ok=True)
    write_results(result, str(ARTIFACTS / "sweep.csv"), params)
    return result


def _random_realization(rng, trial):
    m = int(rng.choice([1, 2, 4, 16]))
    k = int(rng.integers(1, 4))
    j = int(rng.integers(1, 4))
    params, ch, _ = make_instance(rng, m=m, k=k, j=j, trial=trial)
    # Fixed beamformers from an arbitrary gain hypothesis; the polynomial
    # identity must hold for any fixed state.
    alpha0 = (rng.normal() + 1j * rng.normal()) * 10.0 ** rng.uniform(0, 2)
    state = mr_state(ch, alpha0)
    return params, ch, state


def test_polynomial_identity(rng):
    """Rational form vs direct SINR over random realizations, phases, gains."""
    worst = 0.0
    for trial in range(1000):
        params, ch, state = _random_realization(rng, trial)
        args = (params.rho_d, params.rho_u, params.sigma_r_sq)
        p_in = repeater_input_power(ch, state, params.rho_d, params.rho_u)
        r_max = max_amplification(p_in, params.sigma_r_sq, params.p_max)
        k = int(rng.integers(params.k))
        j = int(rng.integers(params.j))
        for direction, idx, parts_fn, sinr_fn in (
                ("dl", k, dl_coeff_parts, sinr_dl),
                ("ul", j, ul_coeff_parts, sinr_ul)):
            parts = parts_fn(ch, state, *args, idx)
            for phi in rng.uniform(0.0, 2 * math.pi, 8):
                coeffs = parts.at_phase(phi)
                for r in rng.uniform(0.0, r_max, 10):
                    direct = sinr_fn(ch, state, r * np.exp(1j * phi), *args, idx)
                    worst = max(worst, abs(rational_sinr(coeffs, r) - direct) / direct)
    report("polynomial identity (rational vs direct SINR)", worst <= 1e-9,
           f"worst rel err {worst:.3e}")


def test_stationary_point_correctness(rng):
    """Roots kill the derivative numerator; analytic derivative matches
    central differences."""
    worst_residual = 0.0
    worst_cd = 0.0
    for _ in range(1000):
        c = random_coeffs(rng, scale=10.0 ** rng.uniform(-4, 4))
        c0, c1, c2 = sinr_derivative_numerator(c)
        for r in stationary_points(c0, c1, c2):
            residual = abs(c0 + 2 * c1 * r + c2 * r ** 2)
            witness = abs(c0) + 2 * abs(c1) * r + abs(c2) * r ** 2
            if witness > 0:
                worst_residual = max(worst_residual, residual / witness)
        for r in rng.uniform(0.0, 5.0, 10):
            h = 1e-6 * max(1.0, r)
            cd = (rational_sinr(c, r + h) - rational_sinr(c, r - h)) / (2 * h)
            den = c.b0 + c.b1 * r + c.b2 * r ** 2
            analytic = (c0 + 2 * c1 * r + c2 * r ** 2) / den ** 2
            # Difference quotients carry ~eps |f| / h cancellation noise, so
            # the 1e-6 relative check gets an absolute allowance of that scale
            # (otherwise points right next to a derivative zero dominate).
            allowance = 1e-12 * abs(rational_sinr(c, r)) / h
            worst_cd = max(worst_cd,
                           abs(cd - analytic) / (1e-6 * abs(analytic) + allowance))
    report("stationary points kill the derivative numerator (1e-6)",
           worst_residual <= 1e-6, f"worst residual {worst_residual:.3e}")
    report("analytic derivative matches central differences (1e-6)",
           worst_cd <= 1.0, f"worst error at {100 * worst_cd:.1f}% of tolerance")


def test_global_optimality_against_grid(rng):
    """Closed-form optimum vs a dense amplification grid at fixed phase."""
    worst = 0.0
    for trial in range(200):
        params, ch, state = _random_realization(rng, trial)
        args = (params.rho_d, params.rho_u, params.sigma_r_sq)
        p_in = repeater_input_power(ch, state, params.rho_d, params.rho_u)
        r_max = max_amplification(p_in, params.sigma_r_sq, params.p_max)
        phi = rng.uniform(0.0, 2 * math.pi)
        parts = (dl_coeff_parts if trial % 2 == 0 else ul_coeff_parts)(
            ch, state, *args, 0)
        c = parts.at_phase(phi)
        _, best = optimize_amplification(c, r_max)
        grid = np.linspace(0.0, r_max, 100_000)
        vals = (c.a0 + c.a1 * grid + c.a2 * grid ** 2) / \
               (c.b0 + c.b1 * grid + c.b2 * grid ** 2)
        gap = (vals.max() - best) / max(vals.max(), 1e-300)
        worst = max(worst, gap)
    report("closed-form optimum >= 1e5-point grid search (1e-8)",
           worst <= 1e-8, f"worst shortfall {worst:.3e}")


def test_constraint_compliance(rng):
    """Power cap and DL budget hold on every optimizer output."""
    ok_cap, ok_budget = True, True
    for trial in range(150):
        params, ch, state = _random_realization(rng, trial)
        p_in = repeater_input_power(ch, state, params.rho_d, params.rho_u)
        for target in (("dl", 0), ("ul", 0)):
            res = optimize_gain(ch, state, params, target)
            ok_cap &= res.alpha.r ** 2 * (p_in + params.sigma_r_sq) \
                <= params.p_max * (1 + 1e-12)
    for trial in range(50):
        params, ch, _ = make_instance(rng, m=16, trial=trial,
                                      d_repeater=float(rng.uniform(-150, 150)))
        alt = alternating_optimize(ch, params, ("dl", 0) if trial % 2 else ("ul", 0))
        for r, _, _, p_in in alt.history:
            ok_cap &= r ** 2 * (p_in + params.sigma_r_sq) <= params.p_max * (1 + 1e-12)
        used = float(np.sum(alt.state.eta_d * np.sum(np.abs(alt.state.w) ** 2, axis=1)))
        ok_budget &= abs(used - 1.0) <= 1e-12
    report("repeater output power cap never exceeded", ok_cap)
    report("DL power budget met with equality (1e-12)", ok_budget)


def test_dominance_chain(cdf_records):
    """complex >= real >= none on every paired realization."""
    for direction, recs in cdf_records.items():
        bad_cr = sum(1 for r in recs if r.se_complex < r.se_real)
        bad_rn = sum(1 for r in recs if r.se_real < r.se_none)
        report(f"dominance chain holds on all {len(recs)} {direction} realizations",
               bad_cr == 0 and bad_rn == 0,
               f"violations complex<real: {bad_cr}, real<none: {bad_rn}")


def test_position_sweep_profile(fig2_sweep):
    """Peak relative gains appear mid-cell at the expected magnitudes and
    decay toward the border."""
    pos = np.array(fig2_sweep.repeater_positions)
    dl_gain = np.array(fig2_sweep.median_se_dl_opt) / np.array(fig2_sweep.median_se_dl_base) - 1
    ul_gain = np.array(fig2_sweep.median_se_ul_opt) / np.array(fig2_sweep.median_se_ul_base) - 1

    dl_peak_pos = pos[int(dl_gain.argmax())]
    ul_peak_pos = pos[int(ul_gain.argmax())]
    dl_peak = float(dl_gain.max())
    ul_peak = float(ul_gain.max())
    border_dl = float(dl_gain[np.abs(pos) <= 10.0].max())
    border_ul = float(ul_gain[np.abs(pos) <= 10.0].max())

    report("peak DL gain position in [-90, -30] m", -90.0 <= dl_peak_pos <= -30.0,
           f"at {dl_peak_pos:.1f} m")
    report("peak UL gain position in [30, 90] m", 30.0 <= ul_peak_pos <= 90.0,
           f"at {ul_peak_pos:.1f} m")
    report("peak DL gain in [10%, 35%]", 0.10 <= dl_peak <= 0.35, f"{100 * dl_peak:.1f}%")
    report("peak UL gain in [45%, 95%]", 0.45 <= ul_peak <= 0.95, f"{100 * ul_peak:.1f}%")
    report("gains decay toward the cell border",
           border_dl < dl_peak and border_ul < ul_peak,
           f"border dl {100 * border_dl:.1f}% ul {100 * border_ul:.1f}%")


def test_cdf_quantile_dominance(cdf_records):
    """Sorted per-mode samples dominate at every quantile; the complex-real
    gap is widest for the weak users."""
    ARTIFACTS.mkdir(exist_ok=True)
    params = rm.default_params()
    for direction, recs in cdf_records.items():
        c = np.sort([r.se_complex for r in recs])
        re_ = np.sort([r.se_real for r in recs])
        n = np.sort([r.se_none for r in recs])
        result = rm.CdfResult(direction=direction, d_r=CDF_POSITIONS[direction],
                              se_complex=tuple(c), se_real=tuple(re_),
                              se_none=tuple(n), trials=len(recs), seed=params.seed)
        write_results(result, str(ARTIFACTS / f"cdf_{direction}.csv"), params)
        report(f"{direction} CDF dominance at every quantile",
               bool(np.all(c >= re_) and np.all(re_ >= n)))
        i10, i90 = int(0.1 * len(c)), int(0.9 * len(c))
        gap10, gap90 = c[i10] - re_[i10], c[i90] - re_[i90]
        report(f"{direction} complex-vs-real gap larger at p10 than p90",
               gap10 > gap90, f"p10 gap {gap10:.3f}, p90 gap {gap90:.3f}")


def test_convergence_behavior(cdf_records):
    """Median alternating iteration counts and cap hits at the CDF positions."""
    for direction, recs in cdf_records.items():
        iters = [r.iterations_complex for r in recs]
        med = float(np.median(iters))
        capped = sum(1 for r in recs if not r.converged_complex) / len(recs)
        report(f"{direction} median iteration count in [2, 15]",
               2 <= med <= 15, f"median {med:.0f}, max {max(iters)}")
        report(f"{direction} max-iteration cap hit in <= 1% of runs",
               capped <= 0.01, f"{100 * capped:.2f}%")


def test_sweep_determinism(tmp_path):
    """Identical config and seed give byte-identical CSVs at any worker count."""
    params = rm.default_params()
    paths = []
    for tag, workers in (("a", 1), ("b", 2)):
        result = run_position_sweep(params, trials=40, workers=workers)
        path = tmp_path / f"sweep_{tag}.csv"
        write_results(result, str(path), params)
        paths.append(path)
    identical = paths[0].read_bytes() == paths[1].read_bytes()
    report("sweep CSV byte-identical across runs and worker counts", identical)
