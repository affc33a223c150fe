import json

import pytest

from temporal_eca.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--eca", "57", "--rule", "<><>", "--input", "1000", "--tau", "1")
    assert code == 0 and out.strip() == "1110"
    code, out, _ = run(capsys, "simulate", "--eca", "57", "--rule", "<><", "--rule", "<>>",
                       "--input", "0", "--format", "json")
    assert json.loads(out)["output"] == "010"


def test_families(capsys):
    code, out, _ = run(capsys, "families", "--eca", "57")
    assert out.strip() == "{57, 99}"
    code, out, _ = run(capsys, "families", "--format", "json")
    assert len(json.loads(out)["families"]) == 88


def test_property_json(capsys):
    code, out, _ = run(capsys, "property", "--eca", "57", "--n", "5", "--which", "iii",
                       "--tau-max", "500", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert {"eca", "n", "property", "value", "witness", "tau_max"} <= set(rec)
    assert rec["tau_max"] == 500


def test_property_table_csv(capsys):
    code, out, _ = run(capsys, "property", "--table", "--ecas", "0,140", "--ns", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "family,n,o_max,i_min"
    assert lines[1] == "0,4,1,1"


def test_group_big_integer_as_string(capsys):
    code, out, _ = run(capsys, "group", "--eca", "57", "--n", "4", "--format", "json")
    rec = json.loads(out)
    assert rec["order"] == "10461394944000" and rec["generator_count"] == 14


def test_profile_and_map(capsys):
    code, out, _ = run(capsys, "profile", "--eca", "57", "--rule", "<=>>")
    assert out.strip() == "@(0)=2 @(1)=12 @(2)=2"
    code, out, _ = run(capsys, "map", "--eca", "57", "--rule", "<><", "--format", "json")
    assert json.loads(out)["table"] == [3, 5, 4, 6, 7, 2, 1, 0]


def test_representable_and_synthesize(capsys):
    code, out, _ = run(capsys, "check-representable", "--function", "MUL_2_BY_2", "--n", "4",
                       "--format", "json")
    rec = json.loads(out)
    assert rec["case"] == "nonbijective_pass" and rec["slack"] == 4
    code, out, _ = run(capsys, "synthesize", "--function", "[1,2,3,4,5,6,7,0]")
    assert code == 0 and isinstance(json.loads(out), list)
    code, out, err = run(capsys, "synthesize", "--function", "NEG", "--n", "4")
    assert code == 1 and "not representable" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify-paper", "--scope", "bogus"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "simulate", "--eca", "57", "--input", "000")
    assert code == 2 and "--rule" in err


def test_domain_error_exit(capsys):
    code, _, err = run(capsys, "simulate", "--eca", "57", "--rule", "<<<", "--input", "000")
    assert code == 1 and err.startswith("error:")


def test_json_is_deterministic(capsys):
    args = ["property", "--eca", "57", "--n", "5", "--which", "ii", "--format", "json"]
    _, a, _ = run(capsys, *args, "--threads", "1")
    _, b, _ = run(capsys, *args, "--threads", "3")
    assert a == b
    _, c, _ = run(capsys, *args, "--timing")
    assert "wall_time" in json.loads(c)
