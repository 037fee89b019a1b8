import pytest

from figstudio.io import CSV_HEADER, SCHEMES

ENGINE_FOOTER = "# engine: coarse_grid=129 golden_section_tol=1e-07 n_default_cap=5 version=0.1.0"


def fmt(x: float) -> str:
    return f"{x:.9f}"


def sweep_row(scheme, n, q_z, q_x, c, r, status="ok", b="z"):
    if status == "ok" or status == "insecure":
        cells = [
            scheme, str(n), b, fmt(q_z), fmt(q_x), fmt(0.5), fmt(q_z + q_x),
            fmt(min(1.0, 2 * c)), fmt(c * 0.1), fmt(c), fmt(r), status,
        ]
    else:
        cells = [scheme, str(n), b, fmt(q_z), fmt(q_x), "", "", "", "", "", "", status]
    return ",".join(cells)


@pytest.fixture
def sweep_csv(tmp_path):
    """Synthetic rates-vs-n file: all four schemes, n 1..4, made-up numbers."""

    def build(path=None, schemes=SCHEMES, ns=range(1, 5), footer=True, rows_extra=()):
        lines = [CSV_HEADER]
        for scheme in schemes:
            for i, n in enumerate(ns):
                c = 0.1 + 0.05 * i + 0.01 * SCHEMES.index(scheme)
                lines.append(sweep_row(scheme, n, 0.05, 0.05, c, c / n))
        lines.extend(rows_extra)
        if footer:
            lines.append(ENGINE_FOOTER)
        target = path or (tmp_path / "sweep.csv")
        target.write_text("\n".join(lines) + "\n")
        return target

    return build


@pytest.fixture
def lattice_csv(tmp_path):
    """Synthetic QBER lattice file: 3x3 grid per scheme, rate falls with QBER."""

    def build(path=None, schemes=SCHEMES, qs=(0.0, 0.05, 0.1), drop=()):
        lines = [CSV_HEADER]
        for scheme in schemes:
            for qz in qs:
                for qx in qs:
                    if (scheme, qz, qx) in drop:
                        continue
                    r = max(0.0, 0.28 - 2.0 * qz - 1.2 * qx - 0.01 * SCHEMES.index(scheme))
                    status = "insecure" if r == 0.0 else "ok"
                    lines.append(sweep_row(scheme, 2, qz, qx, 2 * r, r, status=status))
        lines.append(ENGINE_FOOTER)
        target = path or (tmp_path / "lattice.csv")
        target.write_text("\n".join(lines) + "\n")
        return target

    return build
