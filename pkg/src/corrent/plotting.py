"""Figure rendering for sweep reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_sweep_figure(rows: list[dict], criterion: str, path: str):
    """Plot numeric and analytic critical visibilities against alpha.

    `rows` are the sweep records; points with no detection below full
    visibility are skipped on the numeric curve.
    """
    alphas = [r["alpha"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))

    num_a = [r["alpha"] for r in rows if r["v_crit_numeric"] is not None]
    num_v = [r["v_crit_numeric"] for r in rows if r["v_crit_numeric"] is not None]
    ax.plot(num_a, num_v, "o", ms=5, label=f"{criterion} (bisection)")

    ana = [(r["alpha"], r["v_crit_analytic"]) for r in rows if r["v_crit_analytic"] is not None]
    if ana:
        ax.plot([a for a, _ in ana], [v for _, v in ana], "-", lw=1.2, label="closed form")

    ax.set_xlabel(r"$\alpha$ (rad)")
    ax.set_ylabel(r"critical visibility $v_{crit}$")
    if min(alphas) < max(alphas):
        ax.set_xlim(min(alphas), max(alphas))
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
