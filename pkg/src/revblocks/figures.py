"""Diagnostic figures: cuboid colorings and cycle-pattern bars."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .cuboid import Cuboid


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_cuboid(cub: Cuboid, path: str | Path) -> Path:
    """Black/white grid: rows are (r1, r2) bit pairs, columns the remaining bits."""
    plt = _pyplot()
    n, r1, r2 = cub.n, cub.r1, cub.r2
    m1, m2 = 1 << (n - r1), 1 << (n - r2)
    x = np.arange(1 << n)
    rest = x[(x & (m1 | m2)) == 0]
    grid = np.array([[cub.color[z | (m1 if p else 0) | (m2 if q else 0)] for z in rest]
                     for p in (1, 0) for q in (0, 1)], dtype=float)
    fig, ax = plt.subplots(figsize=(max(4.5, 0.25 * len(rest) + 1.5), 2.6))
    ax.imshow(grid, cmap="Greys", vmin=0, vmax=1, aspect="auto", interpolation="nearest")
    ax.set_yticks(range(4), ["p=1 q=0", "p=1 q=1", "p=0 q=0", "p=0 q=1"])
    ax.set_xticks([])
    ax.set_xlabel(f"{len(rest)} columns over the other {n - 2} bits")
    c = cub.counts.as_tuple()
    ax.set_title(f"r1={r1}, r2={r2}\na={c[:4]}  b={c[4:]}", fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_cycle_pattern(pattern: dict[int, int], path: str | Path, title: str = "") -> Path:
    """Bar chart of cycle counts by length (fix-points omitted)."""
    plt = _pyplot()
    items = sorted((k, c) for k, c in pattern.items() if k > 1 and c)
    fig, ax = plt.subplots(figsize=(max(3.0, 0.35 * len(items) + 1.5), 2.6))
    if items:
        ax.bar([str(k) for k, _ in items], [c for _, c in items], color="0.3")
    ax.yaxis.get_major_locator().set_params(integer=True)
    ax.set_xlabel("cycle length")
    ax.set_ylabel("count")
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
