"""Figure rendering for level sets and trajectories (Agg backend, file output)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_levelset(curves, path=None, events=(), title=None, outfile=None):
    """Plot the Im Q~ = 0 curves, optionally overlaying a tracked trajectory.

    Writes the figure to ``outfile`` (format from the extension) and returns
    the matplotlib figure.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for poly in curves.polylines:
        ax.plot(np.real(poly), np.imag(poly), color="tab:blue", lw=1.2)
    for x in curves.contacts:
        ax.plot([x], [0.0], marker="o", ms=4, color="tab:blue", mfc="white")
    if path is not None:
        al = path.alphas()
        finite = np.isfinite(al)
        ax.plot(np.real(al[finite]), np.imag(al[finite]), color="tab:red", lw=0.9, ls="--",
                label="zero trajectory")
        ax.legend(loc="upper right", fontsize=8)
    for ev in events:
        ax.plot([ev.z0], [0.0], marker="x", ms=6, color="tab:red")
        ax.annotate(f"case {ev.report.case}", (ev.z0, 0.0), textcoords="offset points",
                    xytext=(4, 4), fontsize=8)
    box = curves.box
    ax.set_xlim(box.x0, box.x1)
    ax.set_ylim(box.y0, box.y1)
    ax.axhline(0.0, color="0.6", lw=0.6)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title)
    ax.set_aspect("equal", adjustable="box")
    fig.tight_layout()
    if outfile is not None:
        fig.savefig(outfile, dpi=150)
        plt.close(fig)
    return fig


def render_trajectory(path, title=None, outfile=None):
    """Plot a tracked trajectory in the z-plane, colour-split by axis flag."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    al = path.alphas()
    finite = np.isfinite(al)
    on = np.array([s.on_axis for s in path.samples])
    ax.plot(np.real(al[finite]), np.imag(al[finite]), color="0.75", lw=0.8)
    ax.plot(np.real(al[finite & ~on]), np.imag(al[finite & ~on]), ".", ms=2.0,
            color="tab:red", label="off axis")
    if np.any(on & finite):
        ax.plot(np.real(al[on & finite]), np.imag(al[on & finite]), ".", ms=2.0,
                color="tab:green", label="on axis")
    ax.axhline(0.0, color="0.6", lw=0.6)
    ax.set_xlabel("Re alpha")
    ax.set_ylabel("Im alpha")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    if outfile is not None:
        fig.savefig(outfile, dpi=150)
        plt.close(fig)
    return fig
