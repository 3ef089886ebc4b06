"""File-only matplotlib rendering for the sweep and region datasets.

matplotlib is imported lazily with the Agg backend so that plain dataset
runs never touch a display stack.
"""
from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def line_plot(xs, series: dict, xlabel: str, path: str) -> None:
    """One curve per named series over a common abscissa."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, ys in series.items():
        ax.plot(xs, ys, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("S")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plane_plot(xs, ys, values: dict, xlabel: str, ylabel: str, path: str) -> None:
    """Scatter panels over a 2-parameter grid, one panel per value column.

    Points with value > 0 are drawn filled; zeros stay hollow, which makes
    the steerable region boundaries visible without any contouring.
    """
    plt = _pyplot()
    n = len(values)
    fig, axes = plt.subplots(1, n, figsize=(5.0 * n, 4.2), squeeze=False)
    for ax, (name, vs) in zip(axes[0], values.items()):
        pos = [v is not None and v == v and v > 0 for v in vs]
        xs_pos = [x for x, p in zip(xs, pos) if p]
        ys_pos = [y for y, p in zip(ys, pos) if p]
        xs_zero = [x for x, p in zip(xs, pos) if not p]
        ys_zero = [y for y, p in zip(ys, pos) if not p]
        ax.scatter(xs_zero, ys_zero, s=12, facecolors="none", edgecolors="#888888")
        ax.scatter(xs_pos, ys_pos, s=12, c="#1f4fa3")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(name)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def region_plot(n_values, s_values, path: str) -> None:
    """(N, S) scatter with the S = N/2 reference on the local segment."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.scatter(n_values, s_values, s=4, alpha=0.4, c="#1f4fa3", edgecolors="none")
    ax.plot([0.0, 2.0], [0.0, 1.0], "k--", linewidth=1.0, label="S = N/2")
    ax.set_xlabel("N")
    ax.set_ylabel("S")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
