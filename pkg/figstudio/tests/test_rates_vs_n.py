import pytest

from figstudio.io import read_rates_csv
from figstudio.rates_vs_n import main, render, series


def test_render_writes_image(sweep_csv, tmp_path):
    out = tmp_path / "fig.png"
    data = render(read_rates_csv(str(sweep_csv())), str(out))
    assert out.exists() and out.stat().st_size > 1000
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert set(data) == {"full", "excess", "weight", "parity"}


def test_series_carries_csv_numbers_verbatim(sweep_csv):
    points = read_rates_csv(str(sweep_csv()))
    data = series(points)
    ns, cs, rs = data["parity"]
    assert ns == [1, 2, 3, 4]
    expected_c = [p.c for p in points if p.scheme == "parity"]
    assert cs == expected_c
    assert rs == [p.r for p in points if p.scheme == "parity"]


def test_missing_scheme_listed(sweep_csv, tmp_path):
    points = read_rates_csv(str(sweep_csv(schemes=("full", "parity"))))
    with pytest.raises(ValueError) as exc:
        render(points, str(tmp_path / "x.png"))
    assert "excess" in str(exc.value) and "weight" in str(exc.value)
    assert not (tmp_path / "x.png").exists()


def test_gap_in_n_range_rejected(sweep_csv, tmp_path):
    points = read_rates_csv(str(sweep_csv(ns=(1, 2, 4))))
    with pytest.raises(ValueError, match="contiguous"):
        render(points, str(tmp_path / "x.png"))
    assert not (tmp_path / "x.png").exists()


def test_duplicate_n_rejected(sweep_csv, tmp_path):
    points = read_rates_csv(str(sweep_csv(ns=(1, 2, 2))))
    with pytest.raises(ValueError, match="duplicate"):
        render(points, str(tmp_path / "x.png"))


def test_rerenders_are_byte_identical(sweep_csv, tmp_path):
    points = read_rates_csv(str(sweep_csv()))
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(points, str(a))
    render(points, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_vector_output_deterministic(sweep_csv, tmp_path):
    points = read_rates_csv(str(sweep_csv()))
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render(points, str(a), vector=True)
    render(points, str(b), vector=True)
    body = a.read_bytes()
    assert body == b.read_bytes()
    assert body.lstrip().startswith(b"<?xml")
    assert b"dc:date" not in body


def test_tampered_cell_changes_output(sweep_csv, tmp_path):
    source = sweep_csv()
    baseline = tmp_path / "base.png"
    render(read_rates_csv(str(source)), str(baseline))
    text = source.read_text()
    target_row = [ln for ln in text.split("\n") if ln.startswith("weight,3")][0]
    cells = target_row.split(",")
    cells[10] = f"{float(cells[10]) + 0.07:.9f}"
    source.write_text(text.replace(target_row, ",".join(cells)))
    tampered = tmp_path / "tampered.png"
    render(read_rates_csv(str(source)), str(tampered))
    assert baseline.read_bytes() != tampered.read_bytes()


def test_main_success(sweep_csv, tmp_path, capsys):
    out = tmp_path / "fig.png"
    assert main([str(sweep_csv()), str(out)]) == 0
    assert out.exists()
    assert capsys.readouterr().err == ""


def test_main_empty_csv_fails_without_output(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "fig.png"
    assert main([str(empty), str(out)]) == 1
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_main_missing_input_fails(tmp_path, capsys):
    assert main([str(tmp_path / "gone.csv"), str(tmp_path / "fig.png")]) == 1
    assert "error" in capsys.readouterr().err
