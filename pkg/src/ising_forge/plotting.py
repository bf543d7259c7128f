"""Figure rendering behind the CLI report commands.

Uses the Agg backend only: every function draws to a file next to the
delimited output and returns the path.  The CSV stays the canonical
artifact; these are quick-look companions.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .kitaev_solver import LABEL_A, LABEL_CHIRAL, LABEL_LOW_FIELD

_LABEL_COLORS = {
    LABEL_LOW_FIELD: "tab:blue",
    LABEL_CHIRAL: "tab:red",
    LABEL_A[0]: "tab:green",
    LABEL_A[1]: "tab:orange",
    LABEL_A[2]: "tab:purple",
}


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_sweep(rows, path):
    """Log-log spectral error against lambda for ed-converge output."""
    lams = [r[0] for r in rows if r[0] > 0 and r[1] > 0]
    errs = [r[1] for r in rows if r[0] > 0 and r[1] > 0]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(lams, errs, "o-")
    ax.set_xlabel("lambda")
    ax.set_ylabel("spectral error")
    ax.grid(True, which="both", alpha=0.3)
    return _finish(fig, path)


def render_spt(rows, path):
    """Entropy and gap of the two-site model over lambda."""
    lams = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.semilogx(lams, [r[1] for r in rows], "o-", label="entropy")
    ax.axhline(np.log(2), color="gray", linestyle=":", label="ln 2")
    ax.semilogx(lams, [r[2] for r in rows], "s-", label="gap")
    ax.set_xlabel("lambda")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return _finish(fig, path)


def render_validation(rows, path):
    """First- and second-order Potts errors against lambda."""
    lams = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(lams, [r[1] for r in rows], "o-", label="first order")
    ax.loglog(lams, [r[2] for r in rows], "s-", label="second order")
    ax.set_xlabel("lambda / J")
    ax.set_ylabel("excitation error")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    return _finish(fig, path)


def render_bh(rows, path):
    """Cluster mismatch against the hierarchy ratio."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog([r[0] for r in rows], [r[1] for r in rows], "o-")
    ax.set_xlabel("hierarchy ratio")
    ax.set_ylabel("relative mismatch")
    ax.grid(True, which="both", alpha=0.3)
    return _finish(fig, path)


def render_phase_scan(rows, path):
    """Barycentric coupling triangle colored by phase label."""
    fig, ax = plt.subplots(figsize=(5.5, 5))
    seen = []
    for row in rows:
        a, b, c = abs(row.jx), abs(row.jy), abs(row.jz)
        x = b + 0.5 * c
        y = 0.5 * np.sqrt(3.0) * c
        color = _LABEL_COLORS.get(row.label, "black")
        ax.plot(x, y, ".", color=color,
                label=row.label if row.label not in seen else None, markersize=4)
        if row.label not in seen:
            seen.append(row.label)
    ax.text(-0.02, -0.02, "Jx", ha="right", va="top")
    ax.text(1.02, -0.02, "Jy", ha="left", va="top")
    ax.text(0.5, 0.5 * np.sqrt(3.0) + 0.02, "Jz", ha="center", va="bottom")
    ax.set_aspect("equal")
    ax.axis("off")
    ax.legend(loc="upper left", fontsize=8, framealpha=0.9)
    return _finish(fig, path)
