"""Command-line behavior: exit codes, JSON output, file emission."""

import csv
import json

import pytest

from ribbonfold.cli import run_command

TREFOIL = "X(4,2,5,1) X(2,6,3,5) X(6,4,1,3)"
HOPF = "X(4,1,3,2) X(2,3,1,4)"
FIG8 = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"


@pytest.fixture
def trefoil_pd(tmp_path):
    p = tmp_path / "trefoil.pd"
    p.write_text(TREFOIL + "\n")
    return p


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_bound_trefoil_values(trefoil_pd, capsys):
    assert run_command(["bound", str(trefoil_pd)]) == 0
    report = _json_out(capsys)
    assert report["name"] == "trefoil"
    assert report["crossings"] == 3
    assert report["certified_bound"] == 8
    assert report["theoretical_floor"] == 8
    assert report["theoretical_bound"] == 8.5
    assert report["tian_bound"] == 40


def test_bound_hopf_meets_closed_form(tmp_path, capsys):
    p = tmp_path / "hopf.pd"
    p.write_text(HOPF + "\n")
    assert run_command(["bound", str(p)]) == 0
    report = _json_out(capsys)
    assert report["certified_bound"] == 6
    assert report["theoretical_bound"] == 6.0


def test_bound_grid_input(tmp_path, capsys):
    from ribbonfold.bound import run_pipeline
    from ribbonfold.expand import bgd_to_text
    from ribbonfold.ingest import parse_pd

    g = run_pipeline(parse_pd(TREFOIL)).grid
    p = tmp_path / "trefoil.bgd"
    p.write_text(bgd_to_text(g) + "\n")
    assert run_command(["bound", str(p)]) == 0
    report = _json_out(capsys)
    assert report["certified_bound"] == 8
    assert "grid input" in report["note"]


def test_bound_unknot_needs_flag(tmp_path, capsys):
    p = tmp_path / "loop.pd"
    p.write_text("\n")
    assert run_command(["bound", str(p)]) == 1
    capsys.readouterr()
    assert run_command(["bound", str(p), "--allow-unknot"]) == 0
    report = _json_out(capsys)
    assert report["certified_bound"] == 0
    assert report["theoretical_bound"] is None


def test_nugatory_is_a_precondition_failure(tmp_path, capsys):
    p = tmp_path / "kink.pd"
    p.write_text("X(1,2,2,1)\n")
    assert run_command(["bound", str(p)]) == 2
    err = capsys.readouterr().err
    assert "crossing 0" in err


def test_parse_garbage_exits_one(tmp_path):
    p = tmp_path / "junk.pd"
    p.write_text("this is not a diagram\n")
    assert run_command(["bound", str(p)]) == 1


def test_unknown_extension_needs_format(tmp_path, capsys):
    p = tmp_path / "trefoil.txt"
    p.write_text(TREFOIL + "\n")
    assert run_command(["bound", str(p)]) == 1
    capsys.readouterr()
    assert run_command(["bound", str(p), "--format", "pd"]) == 0


def test_missing_file_exits_one(tmp_path):
    assert run_command(["bound", str(tmp_path / "nope.pd")]) == 1


def test_layout_writes_svg_and_schedule(trefoil_pd, tmp_path, capsys):
    svg = tmp_path / "out.svg"
    sched = tmp_path / "sched.json"
    code = run_command(
        ["layout", str(trefoil_pd), "-o", str(svg), "--schedule", str(sched)]
    )
    assert code == 0
    summary = _json_out(capsys)
    assert summary["planes"] == 4 and summary["caps"] == 4
    assert svg.read_text().startswith("<svg")
    doc = json.loads(sched.read_text())
    assert sorted(doc) == ["caps", "epsilon", "planes", "width"]
    assert len(doc["planes"]) == 4


def test_layout_byte_determinism(trefoil_pd, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run_command(["layout", str(trefoil_pd), "-o", str(a)]) == 0
    assert run_command(["layout", str(trefoil_pd), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_layout_epsilon_too_large(trefoil_pd, tmp_path, capsys):
    svg = tmp_path / "out.svg"
    code = run_command(
        ["layout", str(trefoil_pd), "-o", str(svg), "--epsilon", "10"]
    )
    assert code == 1
    assert "too large" in capsys.readouterr().err


def test_layout_rejects_nonpositive_epsilon(trefoil_pd, tmp_path):
    svg = tmp_path / "out.svg"
    assert run_command(
        ["layout", str(trefoil_pd), "-o", str(svg), "--epsilon", "0"]
    ) == 1


def test_verify_reports_all_stages(trefoil_pd, capsys):
    assert run_command(["verify", str(trefoil_pd), "--per-step"]) == 0
    report = _json_out(capsys)
    assert report["ok"] is True
    names = [s["stage"] for s in report["stages"]]
    assert names == ["leveling", "flips", "expansion", "rewrite", "layout"]
    assert all(s["ok"] for s in report["stages"])


def test_verify_figure_eight(tmp_path, capsys):
    p = tmp_path / "fig8.pd"
    p.write_text(FIG8 + "\n")
    assert run_command(["verify", str(p)]) == 0
    assert _json_out(capsys)["ok"] is True


def test_table_preserves_row_order(tmp_path, capsys):
    src = tmp_path / "in.csv"
    with open(src, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "crossings", "pd"])
        w.writerow(["fig8", "4", FIG8])
        w.writerow(["trefoil", "3", TREFOIL])
        w.writerow(["hopf", "2", HOPF])
    out = tmp_path / "out.csv"
    assert run_command(["table", str(src), "-o", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:3] == ["name", "crossings", "certified_bound"]
    assert [r[0] for r in rows[1:]] == ["fig8", "trefoil", "hopf"]
    assert [r[2] for r in rows[1:]] == ["10", "8", "6"]


def test_table_parallel_matches_serial(tmp_path):
    src = tmp_path / "in.csv"
    with open(src, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "crossings", "pd"])
        w.writerow(["trefoil", "3", TREFOIL])
        w.writerow(["hopf", "2", HOPF])
    serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
    assert run_command(["table", str(src), "-o", str(serial)]) == 0
    assert run_command(
        ["table", str(src), "-o", str(parallel), "--jobs", "2"]
    ) == 0
    assert serial.read_bytes() == parallel.read_bytes()


def test_table_bad_header(tmp_path, capsys):
    src = tmp_path / "in.csv"
    src.write_text("knot,pd\ntrefoil,whatever\n")
    assert run_command(["table", str(src), "-o", str(tmp_path / "o.csv")]) == 1
    assert "header" in capsys.readouterr().err


def test_bad_subcommand_exits_one(capsys):
    assert run_command(["frobnicate"]) == 1
    capsys.readouterr()