"""Matplotlib figure rendering for CLI reports.

Figures are written straight to files (Agg backend, no display) next to
the delimited output they illustrate.  Software metadata is stripped
from the PNGs so reruns produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KW = {"dpi": 110, "bbox_inches": "tight", "metadata": {"Software": None}}


def save_signal_figure(path, signals: dict, title: str) -> None:
    """Overlay |f(t)| traces for the named signals."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, sig in signals.items():
        ax.plot(sig.grid.times(), np.abs(sig.values), label=name, lw=1.0)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("|f(t)|")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_boundary_figure(path, F, title: str) -> None:
    """Magnitude and phase of boundary data against its grid nodes."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    x = F.grid.nodes
    order = np.argsort(x)
    ax0.plot(x[order], np.abs(F.values)[order], lw=0.8)
    ax0.set_ylabel("|F|")
    ax0.set_yscale("log")
    ax1.plot(x[order], np.angle(F.values)[order], lw=0.8)
    ax1.set_ylabel("arg F [rad]")
    ax1.set_xlabel("y" if F.grid.kind == "axis" else "theta")
    ax0.set_title(title)
    for ax in (ax0, ax1):
        ax.grid(alpha=0.3)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_error_heatmap(path, row_labels, col_labels, errors, title: str) -> None:
    """log10 error matrix as an annotated heatmap."""
    errors = np.asarray(errors, dtype=float)
    fig, ax = plt.subplots(
        figsize=(1.4 + 0.9 * len(col_labels), 1.2 + 0.5 * len(row_labels)))
    with np.errstate(divide="ignore"):
        logs = np.log10(np.maximum(errors, 1e-300))
    im = ax.imshow(logs, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(col_labels)), col_labels, rotation=30, ha="right",
                  fontsize=8)
    ax.set_yticks(range(len(row_labels)), row_labels, fontsize=8)
    for i in range(errors.shape[0]):
        for j in range(errors.shape[1]):
            ax.text(j, i, f"{errors[i, j]:.1e}", ha="center", va="center",
                    fontsize=7, color="white")
    fig.colorbar(im, ax=ax, label="log10 rel error")
    ax.set_title(title)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_comparison_figure(path, t, pairs: dict, title: str) -> None:
    """Reference vs reconstruction overlays plus their difference."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for name, (ref, got) in pairs.items():
        ax0.plot(t, np.abs(ref), lw=1.0, label=f"{name} (truth)")
        ax0.plot(t, np.abs(got), lw=0.8, ls="--", label=f"{name} (identified)")
        ax1.semilogy(t, np.abs(got - ref) + 1e-18, lw=0.8, label=name)
    ax0.set_ylabel("|f(t)|")
    ax1.set_ylabel("|difference|")
    ax1.set_xlabel("t [s]")
    ax0.set_title(title)
    ax0.legend(fontsize=7)
    ax1.legend(fontsize=7)
    for ax in (ax0, ax1):
        ax.grid(alpha=0.3)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
