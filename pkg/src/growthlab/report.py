"""Render figures and a plot-ready long-format CSV from a finished run directory.

Reads the CSV series a suite wrote, emits one longform.csv with rows
(series, t, value) covering every scalar column, and renders a small set of
PNG overview figures next to it.  Rendering is strictly offline (Agg).
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def _read_csv(path):
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader]
    cols = {}
    for i, name in enumerate(header):
        vals = []
        for row in rows:
            try:
                vals.append(float(row[i]))
            except ValueError:
                vals.append(row[i])
        cols[name] = vals
    return cols


def write_longform(run_dir: str, out_name: str = "longform.csv") -> str:
    """Flatten every *.csv time series in run_dir to (series, t, value) rows."""
    out_path = os.path.join(run_dir, out_name)
    with open(out_path, "w") as out:
        out.write("series,t,value\n")
        for name in sorted(os.listdir(run_dir)):
            if not name.endswith(".csv") or name == out_name:
                continue
            cols = _read_csv(os.path.join(run_dir, name))
            tkey = "t" if "t" in cols else next(iter(cols))
            stem = name[:-4]
            for key, vals in cols.items():
                if key == tkey:
                    continue
                for t, v in zip(cols[tkey], vals):
                    if isinstance(v, float) and np.isfinite(v):
                        out.write(f"{stem}.{key},{t!r},{v!r}\n")
    return out_path


def _plot_series(ax, t, y, label):
    finite = np.isfinite(y)
    ax.plot(np.asarray(t)[finite], np.asarray(y)[finite], label=label, lw=1.2)


def render_figures(run_dir: str) -> list[str]:
    """Overview PNGs for whichever series the run directory contains."""
    written = []
    for name in sorted(os.listdir(run_dir)):
        if not name.endswith(".csv") or name in ("longform.csv", "identities.csv",
                                                 "eigenvalues.csv", "radial_sweep.csv"):
            continue
        cols = _read_csv(os.path.join(run_dir, name))
        if "t" not in cols:
            continue
        stem = name[:-4]
        t = np.asarray(cols["t"], dtype=float)

        if "J" in cols:  # square-domain diagnostics
            fig, axes = plt.subplots(1, 3, figsize=(12, 3.4))
            _plot_series(axes[0], t, np.asarray(cols["J"], float), "J")
            axes[0].set_xlabel("t"); axes[0].set_ylabel("J"); axes[0].set_title("energy")
            for key in ("l2", "h2"):
                y = np.asarray(cols[key], float)
                good = np.isfinite(y) & (y > 0)
                axes[1].semilogy(t[good], y[good], label=key, lw=1.2)
            axes[1].legend(); axes[1].set_xlabel("t"); axes[1].set_title("norms")
            h2 = np.asarray(cols["h2"], float)
            good = np.isfinite(h2) & (h2 > 0)
            axes[2].plot(t[good], 1.0 / h2[good], lw=1.2)
            axes[2].set_xlabel("t"); axes[2].set_ylabel("1/h2")
            axes[2].set_title("blow-up diagnostic")
        elif "phi" in cols:  # radial series
            fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))
            _plot_series(axes[0], t, np.asarray(cols["phi"], float), "phi")
            _plot_series(axes[0], t, np.asarray(cols["phi_byparts"], float), "by parts")
            axes[0].legend(); axes[0].set_xlabel("t"); axes[0].set_title("blow-up functional")
            _plot_series(axes[1], t, np.asarray(cols["l2"], float), "l2")
            axes[1].set_xlabel("t"); axes[1].set_title("weighted L2")
        else:
            continue
        fig.tight_layout()
        out = os.path.join(run_dir, f"{stem}.png")
        fig.savefig(out, dpi=130)
        plt.close(fig)
        written.append(out)
    return written


def report(run_dir: str) -> dict:
    longform = write_longform(run_dir)
    figures = render_figures(run_dir)
    return {"longform": longform, "figures": figures}
