"""Figures for the report path: E2 pages and BN comparison grids."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .bncheck import BNReport, E2Page  # noqa: E402

# fixed metadata keeps repeated PNG renders byte-identical
_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def plot_e2_page(page: E2Page, path) -> Path:
    """Grid of E2 dimensions (rank over Z) with the abutment on the side."""
    pmax, qmax = page.window
    grid = [[page.entries[(p, q)].dim for p in range(pmax + 1)] for q in range(qmax + 1)]
    fig, (ax, bx) = plt.subplots(1, 2, figsize=(2 + 0.9 * (pmax + 1), 1.5 + 0.8 * (qmax + 1)),
                                 gridspec_kw={"width_ratios": [pmax + 1, 1.4]})
    ax.imshow(grid, origin="lower", cmap="Blues", vmin=0, vmax=max(2, max(map(max, grid))))
    for q in range(qmax + 1):
        for p in range(pmax + 1):
            ax.text(p, q, str(page.entries[(p, q)]), ha="center", va="center", fontsize=8)
    ax.set_xticks(range(pmax + 1))
    ax.set_yticks(range(qmax + 1))
    ax.set_xlabel("p")
    ax.set_ylabel("q")
    ax.set_title(r"$E_2^{p,q}$")

    degs = sorted(page.checks)
    flags = [page.checks[n] for n in degs]
    colors = ["tab:red" if f["differentials_nonzero"] else "tab:green" for f in flags]
    bx.barh(degs, [f["abutment"] for f in flags], color=colors, alpha=0.6, label=r"dim $H^n$")
    bx.plot([f["e2_total"] for f in flags], degs, "k.", label=r"$\sum_{p+q=n}$")
    bx.set_yticks(degs)
    bx.set_ylabel("n")
    bx.set_title("abutment")
    bx.legend(fontsize=6, loc="upper right")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)
    return out


def plot_bn_report(report: BNReport, path) -> Path:
    """Agreement grid for condition (4): one row per representation."""
    reps = sorted({e.rep_id for e in report.condition4})
    degs = sorted({e.degree for e in report.condition4})
    code = {True: 2, False: 0, None: 1}
    grid = [[1] * len(degs) for _ in reps]
    labels = {}
    for e in report.condition4:
        r, d = reps.index(e.rep_id), degs.index(e.degree)
        grid[r][d] = code[e.agree]
        labels[(r, d)] = f"{e.group_side if e.group_side is not None else '-'}\n" \
                         f"{e.sheaf_side if e.sheaf_side is not None else '-'}"
    fig, ax = plt.subplots(figsize=(1.5 + 1.2 * max(1, len(degs)), 1.2 + 0.7 * max(1, len(reps))))
    cmap = ListedColormap(["#e06666", "#cccccc", "#93c47d"])
    if reps:
        ax.imshow(grid, cmap=cmap, vmin=0, vmax=2, aspect="auto")
    for (r, d), text in labels.items():
        ax.text(d, r, text, ha="center", va="center", fontsize=7)
    ax.set_xticks(range(len(degs)))
    ax.set_xticklabels([str(d) for d in degs])
    ax.set_yticks(range(len(reps)))
    ax.set_yticklabels(reps)
    ax.set_xlabel("degree (top: group side, bottom: sheaf side)")
    status = report.asphericity.status
    ax.set_title(f"{status}; consistent={report.consistent}", fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, **_SAVE_KW)
    plt.close(fig)
    return out
