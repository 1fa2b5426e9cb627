"""Figure rendering for the report paths.

Every figure goes straight to a file next to the delimited output; there is
no interactive display.  Styling is deliberately plain.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .inequalities import BoundReport  # noqa: E402


def save_spectrum_figure(values: Sequence[float], residuals: Sequence[float],
                         path, title: str = "computed spectrum") -> Path:
    path = Path(path)
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(6.0, 5.0), sharex=True,
        gridspec_kw={"height_ratios": [2.2, 1.0]},
    )
    idx = range(1, len(values) + 1)
    ax0.plot(idx, values, "o-", ms=4)
    ax0.set_ylabel("eigenvalue")
    ax0.set_title(title)
    ax0.grid(alpha=0.3)
    ax1.semilogy(idx, [max(r, 1e-18) for r in residuals], "s--", ms=3, color="tab:red")
    ax1.set_xlabel("index")
    ax1.set_ylabel("rel. residual")
    ax1.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_bounds_figure(reports: Sequence[BoundReport], path,
                       title: str = "bound slack by index") -> Path:
    """Normalized slack (rhs - lhs)/|rhs| against k, one line per inequality."""
    path = Path(path)
    groups: dict[str, list[tuple[int, float, bool]]] = {}
    for rep in reports:
        denom = abs(rep.rhs) if rep.rhs != 0.0 else 1.0
        groups.setdefault(str(rep.inequality_id), []).append(
            (rep.k, rep.slack / denom, rep.satisfied)
        )
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    for name, rows in sorted(groups.items()):
        rows.sort()
        ks = [r[0] for r in rows]
        ys = [r[1] for r in rows]
        ax.plot(ks, ys, "o-", ms=4, label=name)
        bad = [(k, y) for k, y, ok in rows if not ok]
        if bad:
            ax.plot([b[0] for b in bad], [b[1] for b in bad], "x",
                    ms=9, color="red", mew=2)
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("slack / |rhs|")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
