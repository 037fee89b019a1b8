"""Two stacked panels: secure bits per ensemble and per pair versus ensemble size."""
from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from . import io
from ._style import SERIES_STYLE, save, wants_vector

FIGSIZE = (6.4, 7.2)


def series(points: list[io.RatePoint]) -> dict[str, tuple[list[int], list[float], list[float]]]:
    """Per-scheme (n values, C values, R values), validated.

    Every scheme must be present and cover a contiguous n-range with one row
    per n; gaps or duplicates mean the sweep file is not the figure's input.
    """
    io.require_schemes(points)
    out = {}
    for scheme, rows in io.by_scheme(points).items():
        rows = sorted(rows, key=lambda p: p.n)
        ns = [p.n for p in rows]
        if len(set(ns)) != len(ns):
            raise ValueError(f"{scheme}: duplicate rows for one ensemble size")
        if ns != list(range(ns[0], ns[-1] + 1)):
            raise ValueError(f"{scheme}: ensemble sizes {ns} are not contiguous")
        out[scheme] = (ns, [p.c for p in rows], [p.r for p in rows])
    return out


def render(points: list[io.RatePoint], out_path: str, *, vector: bool = False):
    data = series(points)
    fig, (ax_c, ax_r) = plt.subplots(2, 1, figsize=FIGSIZE, sharex=True)
    for scheme, (ns, cs, rs) in data.items():
        style = SERIES_STYLE[scheme]
        label = io.SCHEME_LABELS[scheme]
        ax_c.plot(ns, cs, label=label, **style)
        ax_r.plot(ns, rs, label=label, **style)
    ax_c.set_ylabel("C (secure bits per ensemble)")
    ax_r.set_ylabel("R (secure bits per EPR pair)")
    ax_r.set_xlabel("ensemble size n")
    ax_r.set_xticks(next(iter(data.values()))[0])
    ax_c.legend()
    for ax in (ax_c, ax_r):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    save(fig, out_path, vector)
    plt.close(fig)
    return data


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figstudio-rates-vs-n",
        description="Render C and R versus ensemble size from a sweep CSV.",
    )
    parser.add_argument("input", help="sweep CSV from the rate engine")
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
