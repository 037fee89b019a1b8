"""A 2x2 grid of colormaps: secure rate per pair over the (Q_Z, Q_X) lattice."""
from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt
import numpy as np

from . import io
from ._style import COLORMAP, save, wants_vector

FIGSIZE = (8.0, 6.4)


def lattice(points: list[io.RatePoint]) -> dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per-scheme (q_z values, q_x values, rate matrix), validated.

    Each scheme must cover the full rectangle: one row per (q_z, q_x)
    combination. The matrix is indexed [q_x, q_z] so q_z runs along x.
    Insecure points carry rate zero, the bottom of the shared color scale.
    """
    io.require_schemes(points)
    out = {}
    for scheme, rows in io.by_scheme(points).items():
        qzs = np.array(sorted({p.q_z for p in rows}))
        qxs = np.array(sorted({p.q_x for p in rows}))
        cells = {}
        for p in rows:
            key = (p.q_z, p.q_x)
            if key in cells:
                raise ValueError(f"{scheme}: duplicate lattice cell {key}")
            cells[key] = p.r
        if len(cells) != qzs.size * qxs.size:
            raise ValueError(
                f"{scheme}: ragged lattice, {len(cells)} cells for a "
                f"{qzs.size} x {qxs.size} grid"
            )
        matrix = np.empty((qxs.size, qzs.size))
        for i, qx in enumerate(qxs):
            for j, qz in enumerate(qzs):
                matrix[i, j] = cells[(qz, qx)]
        out[scheme] = (qzs, qxs, matrix)
    return out


def render(points: list[io.RatePoint], out_path: str, *, vector: bool = False):
    data = lattice(points)
    vmax = max(float(m.max()) for _, _, m in data.values())
    if vmax <= 0.0:
        vmax = 1.0  # all-insecure file still renders, uniformly dark
    fig, axes = plt.subplots(2, 2, figsize=FIGSIZE, sharex=True, sharey=True)
    image = None
    for ax, scheme in zip(axes.flat, io.SCHEMES):
        qzs, qxs, matrix = data[scheme]
        image = ax.imshow(
            matrix,
            origin="lower",
            extent=(qzs[0], qzs[-1], qxs[0], qxs[-1]),
            vmin=0.0,
            vmax=vmax,
            cmap=COLORMAP,
            aspect="auto",
        )
        ax.set_title(io.SCHEME_LABELS[scheme])
    for ax in axes[1, :]:
        ax.set_xlabel("$Q_Z$")
    for ax in axes[:, 0]:
        ax.set_ylabel("$Q_X$")
    fig.colorbar(image, ax=axes, label="R (secure bits per EPR pair)", fraction=0.05)
    save(fig, out_path, vector)
    plt.close(fig)
    return data


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figstudio-qber-colormaps",
        description="Render per-scheme rate colormaps from a QBER lattice CSV.",
    )
    parser.add_argument("input", help="lattice CSV from the rate engine")
    parser.add_argument("output", help="image path (.png, or .svg with --vector)")
    parser.add_argument("--vector", action="store_true", help="write SVG instead of PNG")
    args = parser.parse_args(argv)
    try:
        points = io.read_rates_csv(args.input)
        render(points, args.output, vector=wants_vector(args.output, args.vector))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
