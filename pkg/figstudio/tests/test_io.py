import math

import pytest

from figstudio.io import CSV_HEADER, by_scheme, read_rates_csv, require_schemes


def test_reads_synthetic_sweep(sweep_csv):
    points = read_rates_csv(str(sweep_csv()))
    assert len(points) == 16
    first = points[0]
    assert first.scheme == "full" and first.n == 1 and first.b == "z"
    assert first.c == pytest.approx(0.1)
    assert first.r == pytest.approx(0.1)
    assert not first.insecure


def test_comment_footer_ignored(sweep_csv):
    with_footer = read_rates_csv(str(sweep_csv(footer=True)))
    without = read_rates_csv(str(sweep_csv(footer=False)))
    assert len(with_footer) == len(without)


def test_header_must_match_exactly(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text(CSV_HEADER.replace("r_per_pair", "rate") + "\nfull,1,z,0,0,0,0,0,0,0,0,ok\n")
    with pytest.raises(ValueError, match="header mismatch"):
        read_rates_csv(str(bad))


def test_empty_file_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError, match="empty"):
        read_rates_csv(str(empty))


def test_header_only_rejected(tmp_path):
    target = tmp_path / "header.csv"
    target.write_text(CSV_HEADER + "\n")
    with pytest.raises(ValueError, match="no data rows"):
        read_rates_csv(str(target))


def test_ragged_row_rejected(tmp_path):
    target = tmp_path / "ragged.csv"
    target.write_text(CSV_HEADER + "\nfull,1,z,0,0,0,0,0,0,0,ok\n")
    with pytest.raises(ValueError, match="fields"):
        read_rates_csv(str(target))


def test_error_status_row_rejected(sweep_csv):
    target = sweep_csv(rows_extra=["full,5,z,0.05,0.05,,,,,,,error:boom"])
    with pytest.raises(ValueError, match="status"):
        read_rates_csv(str(target))


def test_unknown_scheme_rejected(tmp_path):
    target = tmp_path / "scheme.csv"
    target.write_text(CSV_HEADER + "\nmystery,1,z,0,0,0,0,0,0,0,0,ok\n")
    with pytest.raises(ValueError, match="mystery"):
        read_rates_csv(str(target))


def test_insecure_rows_parse(tmp_path):
    target = tmp_path / "insecure.csv"
    target.write_text(
        CSV_HEADER + "\nweight,2,z,0.45,0.45,0.5,0.9,0.001,0.002,0.0,0.0,insecure\n"
    )
    points = read_rates_csv(str(target))
    assert points[0].insecure
    assert points[0].r == 0.0


def test_require_schemes_names_absentees(sweep_csv):
    points = read_rates_csv(str(sweep_csv(schemes=("parity",))))
    with pytest.raises(ValueError) as exc:
        require_schemes(points)
    message = str(exc.value)
    for name in ("full", "excess", "weight"):
        assert name in message
    assert "parity" not in message.replace("missing schemes:", "")


def test_by_scheme_groups_in_canonical_order(sweep_csv):
    points = read_rates_csv(str(sweep_csv()))
    groups = by_scheme(points)
    assert list(groups) == ["full", "excess", "weight", "parity"]
    assert all(len(rows) == 4 for rows in groups.values())


def test_nan_never_silently_enters(sweep_csv):
    points = read_rates_csv(str(sweep_csv()))
    assert not any(math.isnan(p.r) or math.isnan(p.c) for p in points)
