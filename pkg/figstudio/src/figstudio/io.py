"""Strict reader for the rate engine's sweep CSV schema."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

CSV_HEADER = "scheme,n,b,q_z,q_x,p_star,t_star,chi_b,chi_e,c_per_ensemble,r_per_pair,status"
FIELDS = CSV_HEADER.split(",")
SCHEMES = ("full", "excess", "weight", "parity")
SCHEME_LABELS = {
    "full": "Full Outcome",
    "excess": "Excess Bits",
    "weight": "Weight",
    "parity": "Parity",
}


@dataclass(frozen=True)
class RatePoint:
    """One data row of a sweep file."""

    scheme: str
    n: int
    b: str
    q_z: float
    q_x: float
    p_star: float
    t_star: float
    chi_b: float
    chi_e: float
    c: float
    r: float
    status: str

    @property
    def insecure(self) -> bool:
        return self.status == "insecure"


def _parse_float(text: str) -> float:
    return math.nan if text == "" else float(text)


def read_rates_csv(path: str) -> list[RatePoint]:
    """Parse a sweep file, enforcing the schema.

    The header must match the rate engine's schema byte for byte. Trailing
    `#` comment lines (the engine's provenance footer) are ignored. Rows
    whose status is neither ok nor insecure mark failed sweep points and are
    rejected, since their numeric cells are empty.
    """
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].rstrip("\n")
    if header != CSV_HEADER:
        raise ValueError(
            f"{path}: header mismatch\n  expected: {CSV_HEADER}\n  found:    {header}"
        )
    points = []
    for lineno, row in enumerate(csv.reader(lines[1:]), start=2):
        if not row:
            continue
        if len(row) != len(FIELDS):
            raise ValueError(f"{path}:{lineno}: expected {len(FIELDS)} fields, found {len(row)}")
        status = row[11]
        if status not in ("ok", "insecure"):
            raise ValueError(f"{path}:{lineno}: cannot plot row with status {status!r}")
        if row[0] not in SCHEMES:
            raise ValueError(f"{path}:{lineno}: unknown scheme {row[0]!r}")
        points.append(
            RatePoint(
                scheme=row[0],
                n=int(row[1]),
                b=row[2],
                q_z=_parse_float(row[3]),
                q_x=_parse_float(row[4]),
                p_star=_parse_float(row[5]),
                t_star=_parse_float(row[6]),
                chi_b=_parse_float(row[7]),
                chi_e=_parse_float(row[8]),
                c=_parse_float(row[9]),
                r=_parse_float(row[10]),
                status=status,
            )
        )
    if not points:
        raise ValueError(f"{path}: no data rows")
    return points


def require_schemes(points: list[RatePoint], needed: tuple[str, ...] = SCHEMES) -> None:
    present = {p.scheme for p in points}
    missing = [s for s in needed if s not in present]
    if missing:
        raise ValueError(f"missing schemes: {', '.join(missing)}")


def by_scheme(points: list[RatePoint]) -> dict[str, list[RatePoint]]:
    """Group points by scheme, keeping the canonical panel order."""
    groups: dict[str, list[RatePoint]] = {}
    for scheme in SCHEMES:
        rows = [p for p in points if p.scheme == scheme]
        if rows:
            groups[scheme] = rows
    return groups
