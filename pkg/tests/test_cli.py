import json
from fractions import Fraction

import pytest

from klp import jsonio
from klp.cli import run
from klp.mlp import build_instance
from klp.oracle import buchheim_instance

F = Fraction


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def buchheim_file(tmp_path):
    # the fixture is generated from code so the demo and the solver share one source
    path = tmp_path / "buchheim.json"
    path.write_text(jsonio.dumps(jsonio.instance_to_obj(buchheim_instance())))
    return str(path)


@pytest.fixture
def bilevel_file(tmp_path):
    inst = build_instance(
        (1, 1),
        [
            [],
            [((-1, 1), 0), ((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)],
        ],
        [(0, -1), (0, 1)],
    )
    path = tmp_path / "bilevel.json"
    path.write_text(jsonio.dumps(jsonio.instance_to_obj(inst)))
    return str(path)


def test_solve_buchheim(capsys, buchheim_file):
    code, out = invoke(capsys, "solve", buchheim_file)
    assert code == 0
    assert out["status"] == "INFEASIBLE"
    assert out["value"] == "+inf"
    assert out["witness"] is None


def test_solve_bilevel(capsys, bilevel_file):
    code, out = invoke(capsys, "solve", bilevel_file)
    assert code == 0
    assert out == {
        "status": "FINITE",
        "value": "-1",
        "attained": True,
        "witness": ["1", "1"],
    }


def test_decide_val(capsys, bilevel_file):
    # negative rationals need the --t= form, as usual with argparse
    assert invoke(capsys, "decide-val", bilevel_file, "--t=-1")[1] == {"answer": True}
    assert invoke(capsys, "decide-val", bilevel_file, "--t=-3/2")[1] == {
        "answer": False
    }


def test_decide_unb_and_feasible(capsys, bilevel_file, buchheim_file):
    assert invoke(capsys, "decide-unb", bilevel_file)[1] == {"answer": False}
    assert invoke(capsys, "feasible", bilevel_file)[1] == {"answer": True}
    assert invoke(capsys, "feasible", buchheim_file)[1] == {"answer": False}


def test_check_point(capsys, bilevel_file):
    code, out = invoke(capsys, "check-point", bilevel_file, "--point", "1,1")
    assert out == {"feasible": True, "optimal": True}
    code, out = invoke(capsys, "check-point", bilevel_file, "--point", "1/2,1/2")
    assert out == {"feasible": True, "optimal": False}
    code, out = invoke(capsys, "check-point", bilevel_file, "--point", "1,1/2")
    assert out == {"feasible": False, "optimal": False}


def test_value_functions_dump(capsys, bilevel_file):
    code, out = invoke(capsys, "value-functions", bilevel_file)
    assert code == 0
    assert [entry["level"] for entry in out] == [2]
    cells = out[0]["function"]["cells"]
    assert any(cell["piece"] == "+inf" for cell in cells)
    assert any(
        isinstance(cell["piece"], dict) and cell["piece"]["c"] == ["1"]
        for cell in cells
    )


def test_transform_scale_identity_is_byte_identical(capsys, tmp_path):
    code = run(["gen", "--seed", "4", "--k", "2", "--dims", "1,1", "--rows", "1,2"])
    body = capsys.readouterr().out
    path = tmp_path / "base.json"
    path.write_text(body)
    code = run(["transform", str(path), "--op", "scale", "--lambda", "1/1"])
    assert capsys.readouterr().out == body


def test_transform_scale_and_forward(capsys, bilevel_file):
    code, out = invoke(capsys, "transform", bilevel_file, "--op", "scale", "--lambda", "2")
    assert code == 0
    rhs = [row["rhs"] for row in out["levels"][1]["rows"]]
    assert rhs == ["0", "0", "-2", "0", "-2"]
    code, out = invoke(capsys, "transform", bilevel_file, "--op", "forward")
    assert code == 0


def test_transform_gadget_then_decide_unb(capsys, tmp_path):
    neg = build_instance((1, 1), [[], [((1, 0), 0), ((-1, 0), -1)]], [(-1, 0), (0, 0)])
    path = tmp_path / "neg.json"
    path.write_text(jsonio.dumps(jsonio.instance_to_obj(neg)))
    code, out = invoke(capsys, "transform", str(path), "--op", "gadget")
    assert code == 0
    gadget_path = tmp_path / "gadget.json"
    gadget_path.write_text(jsonio.dumps(out))
    assert invoke(capsys, "decide-unb", str(gadget_path))[1] == {"answer": True}


def test_project_subcommand(capsys, tmp_path):
    poly = {
        "dim": 2,
        "weak": [[["1", "0"], "0"]],
        "strict": [[["-1", "1"], "0"]],
    }
    path = tmp_path / "poly.json"
    path.write_text(json.dumps(poly))
    code, out = invoke(capsys, "project", str(path), "--keep", "2")
    assert code == 0
    assert out["dim"] == 1
    assert out["strict"] == [[["1"], "0"]]  # projection of {x>=0, y>x} is {y>0}


def test_demo_buchheim(capsys):
    code, out = invoke(capsys, "demo-buchheim", "--t", "1/2")
    assert code == 0
    assert out["exact"]["status"] == "INFEASIBLE"
    assert out["naive"]["certificate"] == ["0", "0", "0", "1"]
    assert out["naive"]["certificate_feasible"] is True
    assert out["mismatch"] is True


def test_gen_deterministic(capsys):
    args = ["gen", "--seed", "9", "--k", "2", "--dims", "1,2", "--rows", "1,1",
            "--bound", "3", "--require", "C1,C2"]
    run(args)
    first = capsys.readouterr().out
    run(args)
    second = capsys.readouterr().out
    assert first == second


def test_roundtrip_parse_serialize_parse(capsys):
    run(["gen", "--seed", "12", "--k", "3", "--dims", "1,1,1", "--rows", "1,1,2"])
    body = capsys.readouterr().out
    inst = jsonio.instance_from_obj(json.loads(body))
    again = jsonio.instance_from_obj(json.loads(jsonio.dumps(jsonio.instance_to_obj(inst))))
    assert inst == again


def test_error_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = invoke(capsys, "solve", str(bad))
    assert code == 2 and "error" in out

    missing_code, out = invoke(capsys, "solve", str(tmp_path / "nope.json"))
    assert missing_code == 2

    # lambda <= 0 is an input error
    good = tmp_path / "good.json"
    inst = build_instance((1,), [[((1,), 2)]], [(1,)])
    good.write_text(jsonio.dumps(jsonio.instance_to_obj(inst)))
    code, out = invoke(capsys, "transform", str(good), "--op", "scale", "--lambda", "0")
    assert code == 2 and "error" in out

    # gadget precondition violation
    upper_row = build_instance((1, 1), [[((1, 0), 0)], []], [(1, 0), (0, 1)])
    path = tmp_path / "upper.json"
    path.write_text(jsonio.dumps(jsonio.instance_to_obj(upper_row)))
    code, out = invoke(capsys, "transform", str(path), "--op", "gadget")
    assert code == 2 and "error" in out

    # dimension mismatch in check-point
    code, out = invoke(capsys, "check-point", str(good), "--point", "1,2")
    assert code == 2 and "error" in out


def test_eps_field_roundtrips(capsys, tmp_path):
    inst = build_instance((1,), [[((1,), 0)]], [(1,)], eps=F(1, 3))
    path = tmp_path / "eps.json"
    path.write_text(jsonio.dumps(jsonio.instance_to_obj(inst)))
    parsed = jsonio.instance_from_obj(json.loads(path.read_text()))
    assert parsed.eps == F(1, 3)


def test_strict_rows_roundtrip():
    inst = build_instance((1,), [[((1,), 0, True)]], [(1,)])
    obj = jsonio.instance_to_obj(inst)
    assert obj["levels"][0]["rows"][0]["strict"] is True
    assert jsonio.instance_from_obj(obj) == inst
