import csv
import io
import json

import pytest
from hypothesis import given, strategies as st

from garblecost import cli, report
from garblecost.report import COLUMNS, ReportRow, emit_report, schedule_modexp


def test_schedule_examples():
    s = schedule_modexp(4, 13)
    assert (s.squares, s.multiplies) == (3, 2)
    s = schedule_modexp(1, 1)
    assert (s.squares, s.multiplies) == (0, 0)
    for t in range(1, 20):
        s = schedule_modexp(t + 1, 2 ** t)
        assert (s.squares, s.multiplies) == (t, 0)
    s = schedule_modexp(139)
    assert (s.squares, s.multiplies) == (138, 69)
    assert s.total(10, 100) == 138 * 10 + 69 * 100
    with pytest.raises(ValueError):
        schedule_modexp(4, 0)


@given(st.integers(1, 2 ** 300))
def test_schedule_law(e):
    s = schedule_modexp(e.bit_length(), e)
    assert s.squares == e.bit_length() - 1
    assert s.multiplies == bin(e).count("1") - 1
    # replaying the schedule yields e
    acc = 1
    for bit in bin(e)[3:]:
        acc = 2 * acc + int(bit)
    assert acc == e


def test_random_exponent_seeded():
    a = report.random_exponent(64, 7)
    assert a == report.random_exponent(64, 7)
    assert a.bit_length() == 64


def rows():
    return [ReportRow(139, "rns", "mul", 151576, None, {"k": 23}, 148000),
            ReportRow(139, "base5", "mul", 283000, 283000, {"p": 5}, 377000),
            ReportRow(350, "rns", "mul", 1430000, None, {}, None)]


def test_row_validation():
    with pytest.raises(ValueError):
        ReportRow(139, "rns", "cube", 1)
    with pytest.raises(ValueError):
        ReportRow(139, "ecc", "mul", 1)
    with pytest.raises(ValueError):
        ReportRow(139, "rns", "mul", 0)


def test_emit_empty_is_header_only():
    assert emit_report([]) == ",".join(COLUMNS) + "\n"
    md = emit_report([], "markdown")
    assert md.count("\n") == 2 and md.startswith("| n_bits |")


def test_emit_csv_parses_back():
    text = emit_report(rows())
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == 3 and list(parsed[0]) == list(COLUMNS)
    assert int(parsed[0]["formula_cost"]) == 151576
    assert parsed[0]["constructive_cost"] == "" and parsed[1]["constructive_cost"] == "283000"
    assert json.loads(parsed[0]["params"]) == {"k": 23}
    assert emit_report(rows()) == text


def test_emit_pivot_golden():
    assert emit_report(rows(), "markdown", pivot=True) == (
        "| n_bits (mul) | rns | base5 |\n"
        "|---|---|---|\n"
        "| 139 | 1.52e+05 | 2.83e+05 |\n"
        "| 350 | 1.43e+06 |  |\n")
    assert emit_report(rows(), "csv", pivot=True).splitlines()[0] == "n_bits (mul),rns,base5"


def test_emit_unknown_format():
    with pytest.raises(ValueError):
        emit_report(rows(), "xml")


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_cli_rns_deterministic(capsys):
    a = run(capsys, "rns", "--nbits", "139")
    b = run(capsys, "rns", "--nbits", "139")
    assert a == b and a[0] == 0
    row = next(csv.DictReader(io.StringIO(a[1])))
    assert row["scheme"] == "rns" and int(row["formula_cost"]) == int(row["constructive_cost"])


def test_cli_rns_infeasible_exit_code(capsys):
    rc, _, err = run(capsys, "rns", "--nbits", "139", "--k", "1")
    assert rc == 2 and "infeasible" in err


def test_cli_rns_two_layer(capsys):
    rc, out, _ = run(capsys, "rns", "--two-layer", "--n", "97")
    row = next(csv.DictReader(io.StringIO(out)))
    assert rc == 0 and int(row["formula_cost"]) == int(row["constructive_cost"]) == 10604


def test_cli_basep_flags_digit_formula(capsys):
    rc, out, _ = run(capsys, "basep", "--base", "5", "--nbits", "64", "--thresholds", "3-6")
    assert rc == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert int(row["formula_cost"]) == int(row["constructive_cost"])
    assert "[DISCREPANCY]" in out and "constructive = 58" in out


def test_cli_params_file_and_dump(tmp_path, capsys):
    from garblecost.basep import MontgomeryContext
    from garblecost.circuit import Circuit

    pf = tmp_path / "ctx.json"
    pf.write_text(MontgomeryContext(3, 5, 200).to_json())
    dump = tmp_path / "c.json"
    rc, out, _ = run(capsys, "basep", "--params-file", str(pf), "--threshold", "4",
                     "--const-threshold", "4", "--dump-circuit", str(dump))
    assert rc == 0
    row = next(csv.DictReader(io.StringIO(out)))
    c = Circuit.from_dict(json.loads(dump.read_text()))
    assert c.total_cost == int(row["formula_cost"])


def test_cli_table_small(capsys):
    rc, out, _ = run(capsys, "table", "--bits", "64,96", "--bases", "3,5", "--mode", "both")
    assert rc == 0
    parsed = list(csv.reader(io.StringIO(out)))
    assert sum(1 for r in parsed if r[0] == "n_bits") == 2
    assert len([r for r in parsed if r[0] != "n_bits"]) == 12


def test_cli_modexp(capsys, monkeypatch):
    rc, out, _ = run(capsys, "modexp", "--nbits", "64", "--ebits", "4", "--exponent", "13",
                     "--scheme", "base3")
    line = out.splitlines()[1].split(",")
    assert rc == 0 and line[4:6] == ["3", "2"]
    assert int(line[8]) == 3 * int(line[6]) + 2 * int(line[7])
    monkeypatch.setenv("GARBLECOST_SEED", "11")
    a = run(capsys, "modexp", "--nbits", "64", "--ebits", "32", "--random-exponent")
    b = run(capsys, "modexp", "--nbits", "64", "--ebits", "32", "--random-exponent")
    assert a == b


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit):
        cli.main(["basep"])
    with pytest.raises(SystemExit):
        cli.main(["modexp", "--nbits", "64", "--ebits", "8", "--scheme", "ecc"])
