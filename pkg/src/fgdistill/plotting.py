"""Figure rendering for sweep and report outputs."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_rate_curve", "render_report_figure"]


def render_rate_curve(reports, path):
    """Rate-per-site curve over block length, with the f and p diagnostics."""
    d = np.array([r.d for r in reports])
    rate = np.array([r.rate_per_site if r.rate_per_site is not None else np.nan for r in reports])
    f = np.array([r.f for r in reports])
    p = np.array([r.p for r in reports])

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(d, rate, "o-", color="C0", markersize=3.5, label="$R/d$")
    ax.set_xlabel("block length $d$")
    ax.set_ylabel("distillation rate per site $R/d$", color="C0")
    ax.tick_params(axis="y", labelcolor="C0")
    ax.set_xlim(d.min() - 0.5, d.max() + 0.5)

    ax2 = ax.twinx()
    ax2.plot(d, f, "--", color="C1", linewidth=1.0, label="$f$")
    ax2.plot(d, p, ":", color="C2", linewidth=1.0, label="$p$")
    ax2.set_ylabel("conditional fidelity $f$, success probability $p$")
    ax2.set_ylim(0.0, 1.05)

    lines = ax.get_lines() + ax2.get_lines()
    ax.legend(lines, [ln.get_label() for ln in lines], loc="center right", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report_figure(report, path):
    """Kept singular values of a single run, annotated with the key numbers."""
    sv = np.asarray(report.singular_values)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.stem(np.arange(1, len(sv) + 1), sv)
    ax.set_xlabel("kept singular value index")
    ax.set_ylabel("singular value of $Y$")
    ax.set_ylim(0, 1.05)
    ax.set_xticks(np.arange(1, len(sv) + 1))
    rate_text = "n/a" if report.rate is None else f"{report.rate:.4f}"
    ax.set_title(
        f"$f_+$={report.f_plus:.4f}  $f_-$={report.f_minus:.4f}  "
        f"$p$={report.p:.4f}  $f$={report.f:.4f}  $R$={rate_text}",
        fontsize=9,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
