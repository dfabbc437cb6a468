"""Figure rendering for experiment reports.

Each experiment writes one PNG next to its CSV.  Figures visualize the
measured growth rates against the reference rates; they carry no extra
data beyond the CSV.
"""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _group(records, keys):
    groups = defaultdict(list)
    for rec in records:
        ident = tuple((k, str(rec.params.get(k, rec.seed if k == "seed" else ""))) for k in keys)
        tag = tuple((k, str(rec.seed)) if k == "seed" else (k, str(rec.params.get(k, ""))) for k in keys)
        groups[tag].append(rec)
    return groups


def _plot_ratio_vs_k(ax, records, ratio_key, expected_key=None):
    groups = _group(records, ("n", "seed"))
    for tag, recs in sorted(groups.items()):
        ks = [r.params["k"] for r in recs]
        ratios = [r.metrics[ratio_key] for r in recs]
        label = ", ".join(f"{k}={v}" for k, v in tag)
        ax.plot(ks, ratios, "o-", ms=3, lw=0.8, alpha=0.6, label=label)
    if expected_key and records:
        rec = records[0]
        slope = rec.metrics.get(expected_key)
        if slope is not None and math.isfinite(slope):
            ks = sorted({r.params["k"] for r in records})
            anchor = records[0].metrics[ratio_key]
            ref = [anchor * (k / ks[0]) ** slope for k in ks]
            ax.plot(ks, ref, "k--", lw=1.2, label=f"slope {slope:+.3g}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("k (vectors)")
    if len(records) <= 60:
        ax.legend(fontsize=6)


def render_figure(experiment: str, records, png_path) -> Path | None:
    if not records:
        return None
    png_path = Path(png_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=120)
    if experiment in ("bennett_ratio", "pi1_log_example"):
        key = "ratio"
        _plot_ratio_vs_k(ax, records, key, "expected_slope" if experiment == "bennett_ratio" else None)
        ax.set_ylabel("pi^k estimate / certified lower bound")
        ax.set_title(experiment)
    elif experiment == "identity_l2_growth":
        groups = _group(records, ("n",))
        for tag, recs in sorted(groups.items()):
            ks = [r.params["k"] for r in recs]
            ax.plot(ks, [r.metrics["pi_k"] for r in recs], "o-", ms=3, label=f"pi_k {tag[0][1]}")
            ax.plot(ks, [r.metrics["k_bound"] for r in recs], "k--", lw=0.8)
        ax.set_xlabel("k")
        ax.set_ylabel("pi_pq^k(Id) vs k^(1/p)")
        ax.set_title(experiment)
        ax.legend(fontsize=6)
    elif experiment == "tomczak_suite":
        vals = [r.metrics["ratio"] for r in records]
        ax.plot(vals, "o", ms=3)
        ax.axhline(math.sqrt(2), color="k", ls="--", lw=1.0, label="sqrt(2)")
        ax.set_xlabel("instance")
        ax.set_ylabel("pi^(4n) / pi^n")
        ax.set_title(experiment)
        ax.legend(fontsize=7)
    elif experiment == "quotient_suite":
        lhs = [r.metrics["lhs"] for r in records]
        rhs = [r.metrics["rhs"] for r in records]
        lim = max(lhs + rhs + [1.0]) * 1.1
        ax.plot([0, lim], [0, lim], "k--", lw=0.8)
        ax.plot(lhs, rhs, "o", ms=4)
        ax.set_xlabel("pi_pq^k (lhs)")
        ax.set_ylabel("quotient rhs")
        ax.set_title(experiment)
    elif experiment == "cotype_suite":
        vals = [r.metrics["value"] for r in records]
        bounds = [r.metrics["dim_bound"] for r in records]
        idx = range(len(records))
        ax.plot(idx, vals, "o", ms=4, label="estimate")
        ax.plot(idx, bounds, "k_", ms=10, label="n^(1/q)")
        ax.set_xlabel("instance")
        ax.set_ylabel("cotype estimate")
        ax.set_title(experiment)
        ax.legend(fontsize=7)
    else:
        plt.close(fig)
        return None
    fig.tight_layout()
    fig.savefig(png_path)
    plt.close(fig)
    return png_path
