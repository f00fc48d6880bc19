import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ilmf.cli import dumps, main
from ilmf.linalg import matrix_from_json, matrix_to_json
from ilmf.series import IlmfParams, SeriesPolicy, ilmf
from ilmf.verify import IDENTITY_IDS, make_draw


def one(v):
    return {"rows": 1, "cols": 1, "data": [[[v, 0.0]]]}


def gauss_payload(**changes):
    payload = {"family": "D", "kind": "complete", "A": one(1), "x": None, "B_list": [one(1)],
               "C_list": [one(2)], "z_list": [[0.5, 0.0]]}
    payload.update(changes)
    return payload


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_gauss_value(capsys):
    code, out, _ = run(capsys, "eval", "--json", json.dumps(gauss_payload()))
    assert code == 0
    value = matrix_from_json(json.loads(out)["value"])
    assert abs(value[0, 0] - 2 * math.log(2)) < 1e-7


def test_eval_upper_at_zero(capsys):
    payload = gauss_payload(family="A", kind="upper", x=0.5, z_list=[0])
    code, out, _ = run(capsys, "eval", "--json", json.dumps(payload))
    assert code == 0
    assert abs(matrix_from_json(json.loads(out)["value"])[0, 0] - math.exp(-0.5)) < 1e-15


def test_eval_round_trip_is_bit_exact(capsys, tmp_path):
    p = make_draw(11, "C", 2, 3).params
    path = tmp_path / "params.json"
    path.write_text(json.dumps(p.to_json()))
    code, out, _ = run(capsys, "eval", "--input", str(path))
    assert code == 0
    data = json.loads(out)
    expected = ilmf(IlmfParams.from_json(p.to_json()))
    assert np.array_equal(matrix_from_json(data["value"]), expected.value)
    assert data["terms_summed"] == expected.terms_summed
    assert data["tail_estimate"] == expected.tail_estimate


def test_dumps_uses_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert json.loads(dumps({"a": [1.0 / 3.0, 2]})) == {"a": [1.0 / 3.0, 2]}


def test_eval_named_kernel(capsys):
    payload = {"kernel": "hyp1f1", "B": one(1), "C": one(2), "z": 1.0}
    code, out, _ = run(capsys, "eval", "--json", json.dumps(payload))
    assert code == 0
    assert abs(matrix_from_json(json.loads(out)["value"])[0, 0] - (math.e - 1)) < 1e-14
    code, out, _ = run(capsys, "eval", "--json", json.dumps({"kernel": "bessel_matrix", "variant": "J",
                                                              "A": one(0), "z": 1.0}))
    assert code == 0
    assert abs(matrix_from_json(json.loads(out)["value"])[0, 0] - 0.76519768655796655) < 1e-14


def test_eval_table_format(capsys):
    code, out, _ = run(capsys, "eval", "--format", "table", "--json", json.dumps(gauss_payload()))
    assert code == 0
    assert out.startswith("value:") and "terms_summed" in out


@pytest.mark.parametrize("payload, field", [
    (gauss_payload(A={"rows": 2, "cols": 1, "data": [[[1, 0]]]}), "A.data"),
    (gauss_payload(kind="sideways"), "kind"),
    (gauss_payload(B_list=[]), "B_list"),
    ({"kernel": "nope"}, "kernel"),
    ({"kernel": "hyp1f1", "B": one(1), "z": 1.0}, "C"),
])
def test_eval_invalid_input(capsys, payload, field):
    code, _, err = run(capsys, "eval", "--json", json.dumps(payload))
    assert code == 2
    assert field in err


def test_eval_malformed_json(capsys):
    assert run(capsys, "eval", "--json", "{not json")[0] == 2
    assert run(capsys, "eval", "--input", "/nonexistent/file.json")[0] == 2
    assert run(capsys, "eval")[0] == 2


def test_eval_guard_violation(capsys):
    code, _, err = run(capsys, "eval", "--json", json.dumps(gauss_payload(z_list=[0.9])))
    assert code == 2 and "guard" in err


def test_eval_numeric_failure(capsys):
    code, _, err = run(capsys, "eval", "--max-order", "4", "--json", json.dumps(gauss_payload()))
    assert code == 1 and "numeric" in err


@pytest.mark.parametrize("flags", [["--max-order", "500"], ["--max-order", "0"], ["--tail-tol", "1e-20"]])
def test_policy_overrides_are_range_checked(capsys, flags):
    assert run(capsys, "eval", *flags, "--json", json.dumps(gauss_payload()))[0] == 2


def test_policy_override_in_payload(capsys):
    payload = gauss_payload(z_list=[0.1], policy={"max_total_order": 30, "max_order_per_index": 30})
    code, out, _ = run(capsys, "eval", "--json", json.dumps(payload))
    assert code == 0 and json.loads(out)["terms_summed"] == 31


def test_env_max_order(capsys, monkeypatch):
    monkeypatch.setenv("ILMF_MAX_ORDER", "20")
    code, out, _ = run(capsys, "eval", "--json", json.dumps(gauss_payload(z_list=[0.1])))
    assert code == 0 and json.loads(out)["terms_summed"] == 21
    # the flag wins over the environment
    code, out, _ = run(capsys, "eval", "--max-order", "25", "--json", json.dumps(gauss_payload(z_list=[0.1])))
    assert json.loads(out)["terms_summed"] == 26


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--ids", "decomposition", "--family", "A", "--seed", "42")
    assert code == 0
    data = json.loads(out)
    assert {c["identity_id"] for c in data["cases"]} == {"decomposition"}
    assert {c["family"] for c in data["cases"]} == {"A"}
    assert data["summary"]["all_passed"] is True


def test_verify_unknown_id(capsys):
    code, _, err = run(capsys, "verify", "--ids", "decomposition,bogus")
    assert code == 2
    assert "bogus" in err
    assert all(i in err for i in IDENTITY_IDS)


def test_verify_table_and_draws(capsys):
    code, out, _ = run(capsys, "verify", "--ids", "pde", "--draws", "2", "--format", "table")
    assert code == 0
    assert "pde  6/6" in out.replace(" " * 3, " " * 2)


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--ids", "recursion_B_down,integral_multi", "--draws", "2", "--seed", "9")
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]


def test_oracle_family_a(capsys):
    code, out, _ = run(capsys, "oracle", "--family", "A", "--n", "1", "--seed", "3")
    assert code == 0
    data = json.loads(out)
    assert set(data["values"]) == {"series", "single_integral", "multi_integral"}
    assert data["deviations"]["series vs single_integral"] <= 1e-6


def test_oracle_family_d_table(capsys):
    code, out, _ = run(capsys, "oracle", "--family", "D", "--n", "2", "--format", "table")
    assert code == 0
    assert "confluent_1g1_integral vs multi_integral" in out


def test_oracle_guard_violation(capsys):
    p = make_draw(1, "A", 1, 1).params.replace(z_list=(0.8,))
    code, _, err = run(capsys, "oracle", "--json", json.dumps(p.to_json()))
    assert code == 2 and "guard" in err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert json.loads(out)["identity_ids"] == list(IDENTITY_IDS)


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "verify", "--family", "Z")[0] == 2
    assert run(capsys, "eval", "--json", "{}", "--input", "x.json")[0] == 2


def test_module_entry_point():
    payload = json.dumps({"kernel": "hyp0f1", "C": one(1), "z": -0.25})
    proc = subprocess.run([sys.executable, "-m", "ilmf", "eval", "--json", payload],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    value = matrix_from_json(json.loads(proc.stdout)["value"])
    assert abs(value[0, 0] - 0.76519768655796655) < 1e-15
    proc = subprocess.run([sys.executable, "-m", "ilmf", "verify", "--ids", "nope"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2


def test_matrix_json_helper_round_trip():
    M = np.array([[1 / 3 + 2j, -0.1]])
    text = dumps(matrix_to_json(M))
    assert np.array_equal(matrix_from_json(json.loads(text)), M)
