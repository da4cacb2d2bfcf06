"""Render experiment CSVs into the two standard figures.

Input files come from the simulator's ``sweep`` and ``cdf`` commands; this
package only depends on their CSV schemas. Rendering is deterministic:
rerunning on the same inputs reproduces the output image byte for byte.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "repmimo-plots"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

SWEEP_COLUMNS = ("d_r_m", "median_se_dl_opt", "median_se_dl_base",
                 "median_se_ul_opt", "median_se_ul_base")
CDF_COLUMNS = ("se_complex", "se_real", "se_none")

# Strip per-run timestamps so identical inputs give identical bytes.
_METADATA_BY_SUFFIX = {
    ".pdf": {"CreationDate": None},
    ".svg": {"Date": None},
}


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    kind: str                  # "sweep" or "cdf"
    output_image: str
    xlabel: str
    ylabel: str
    title: str = ""


def read_table(csv_path: str, required: tuple[str, ...]) -> dict[str, list[float]]:
    """Read a CSV into float columns, insisting on the expected header."""
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise ValueError(
                f"{csv_path}: missing required column(s) {', '.join(missing)}")
        table = {col: [] for col in required}
        for row in reader:
            for col in required:
                table[col].append(float(row[col]))
    return table


def _save(fig, out_path: str) -> str:
    metadata = _METADATA_BY_SUFFIX.get(Path(out_path).suffix.lower())
    fig.savefig(out_path, metadata=metadata)
    plt.close(fig)
    return out_path


def plot_sweep(csv_path: str, out_path: str, title: str = "") -> str:
    """Median SE versus repeater position: solid optimized, dotted baseline."""
    t = read_table(csv_path, SWEEP_COLUMNS)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    d = t["d_r_m"]
    ax.plot(d, t["median_se_dl_opt"], "-", color="C0", label="DL, optimized gain")
    ax.plot(d, t["median_se_dl_base"], ":", color="C0", label="DL, no repeater")
    ax.plot(d, t["median_se_ul_opt"], "-", color="C1", label="UL, optimized gain")
    ax.plot(d, t["median_se_ul_base"], ":", color="C1", label="UL, no repeater")
    ax.set_xlabel("Repeater position (m)")
    ax.set_ylabel("Median SE (bit/s/Hz)")
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_path)


def _ecdf(samples: list[float]):
    xs = sorted(samples)
    n = len(xs)
    ys = [(i + 1) / n for i in range(n)]
    return xs, ys


def plot_cdf(csv_path: str, out_path: str, title: str = "") -> str:
    """Empirical SE CDFs of the three repeater modes."""
    t = read_table(csv_path, CDF_COLUMNS)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    styles = (("se_complex", "-", "Optimized complex gain"),
              ("se_real", "--", "Optimized real gain"),
              ("se_none", ":", "No repeater"))
    for col, style, label in styles:
        if t[col]:
            xs, ys = _ecdf(t[col])
            ax.plot(xs, ys, style, drawstyle="steps-post", label=label)
    ax.set_xlabel("SE (bit/s/Hz)")
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.0)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(loc="lower right")
    fig.tight_layout()
    return _save(fig, out_path)


def render_figure(spec: FigureSpec) -> str:
    if spec.kind == "sweep":
        return plot_sweep(spec.input_csv, spec.output_image, spec.title)
    if spec.kind == "cdf":
        return plot_cdf(spec.input_csv, spec.output_image, spec.title)
    raise ValueError(f"unknown figure kind {spec.kind!r}, expected 'sweep' or 'cdf'")
