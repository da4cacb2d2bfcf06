"""Fixtures: locate real acceptance-run CSVs, or synthesize schema-identical ones."""

import csv
import math
from pathlib import Path

import pytest

ACCEPTANCE_ARTIFACTS = Path(__file__).resolve().parents[2] / "tests" / "artifacts"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return str(path)


def synth_sweep_rows(n=31):
    rows = []
    for i in range(n):
        d = -150.0 + 300.0 * i / (n - 1)
        base_dl, base_ul = 7.0, 5.5
        boost_dl = 1.5 * math.exp(-((d + 80.0) / 30.0) ** 2)
        boost_ul = 3.0 * math.exp(-((d - 55.0) / 25.0) ** 2)
        rows.append((d, base_dl + boost_dl, base_dl, base_ul + boost_ul, base_ul))
    return rows


def synth_cdf_rows(n=200):
    rows = []
    for i in range(n):
        u = (i + 0.5) / n
        none = 4.0 + 6.0 * u
        real = none + 0.8 * (1.2 - u)
        cplx = real + 1.2 * (1.3 - u)
        rows.append((cplx, real, none))
    return rows


@pytest.fixture
def sweep_csv(tmp_path):
    """Real acceptance sweep output when available, else a synthetic stand-in."""
    real = ACCEPTANCE_ARTIFACTS / "sweep.csv"
    if real.exists():
        return str(real)
    header = ("d_r_m", "median_se_dl_opt", "median_se_dl_base",
              "median_se_ul_opt", "median_se_ul_base")
    return write_csv(tmp_path / "sweep.csv", header, synth_sweep_rows())


@pytest.fixture
def cdf_csv(tmp_path):
    real = ACCEPTANCE_ARTIFACTS / "cdf_ul.csv"
    if real.exists():
        return str(real)
    return write_csv(tmp_path / "cdf.csv", ("se_complex", "se_real", "se_none"),
                     synth_cdf_rows())
