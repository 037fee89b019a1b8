"""Shared rendering defaults: deterministic output, fixed sizes and colors."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
# stable element ids so repeated SVG renders are byte-identical
matplotlib.rcParams["svg.hashsalt"] = "figstudio"

DPI = 150

SERIES_STYLE = {
    "full": {"color": "#1f77b4", "marker": "o"},
    "excess": {"color": "#d62728", "marker": "s"},
    "weight": {"color": "#2ca02c", "marker": "^"},
    "parity": {"color": "#9467bd", "marker": "d"},
}

# sequential map whose low end is near-black, so rate 0 renders darkest
COLORMAP = "magma"


def save(fig, out_path: str, vector: bool) -> None:
    """Write the figure without timestamps or tool-version metadata."""
    if vector:
        fig.savefig(out_path, format="svg", metadata={"Date": None})
    else:
        fig.savefig(out_path, format="png", dpi=DPI, metadata={"Software": None})


def wants_vector(out_path: str, flag: bool) -> bool:
    return flag or out_path.lower().endswith(".svg")
