import io
import json
import subprocess
import sys

import pytest

from k3nrefl.cli import main

DELTA5 = {"n": 5, "coords": [0] * 22 + [1]}


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def classify(payload, *flags):
    return run(["classify", *flags], json.dumps(payload))


def test_classify_delta():
    code, out, _ = classify(DELTA5)
    assert code == 0
    report = json.loads(out)
    assert report["degree"] == "-8" and report["divisibility"] == "8"
    assert report["rs"]["pair"] == ["1", "4"] and report["rs"]["lattice_type"] == "U"
    assert report["k"] == "2"
    assert report["verdict"] == "PrimeExceptionalPredicted"


def test_field_order_is_stable():
    _, out, _ = classify(DELTA5)
    keys = list(json.loads(out))
    assert keys[:4] == ["n", "degree", "divisibility", "primitive"]
    assert keys[-2:] == ["verdict", "reason"]


def test_classify_mukai_input():
    code, out, _ = classify({"n": 13, "mukai": {"r": 3, "c": 0, "s": 4}})
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "NotQEffectivePredicted"
    assert report["rs"]["pair"] == ["3", "4"]


def test_classify_mukai_with_explicit_v():
    payload = {"n": 11, "mukai": {"r": 2, "c": [0] * 22, "s": 5}, "v": {"r": 2, "c": 0, "s": -5}}
    code, out, _ = classify(payload)
    assert code == 0 and json.loads(out)["k"] == "1"


def test_classify_accepts_string_integers():
    payload = {"n": "5", "coords": ["0"] * 22 + ["1"]}
    assert classify(payload)[1] == classify(DELTA5)[1]


def test_round_trip_is_byte_identical():
    _, out, _ = classify(DELTA5)
    assert json.dumps(json.loads(out), indent=2, ensure_ascii=False) + "\n" == out


@pytest.mark.parametrize(
    "payload,message",
    [
        ({"n": 5, "coords": [0] * 23}, "zero class"),
        ({"n": 5, "coords": [1, 2]}, "dimension mismatch"),
        ({"n": 5}, "exactly one"),
        ({"n": 5, "coords": [0] * 22 + [1], "mukai": {"r": 1, "s": 0}}, "exactly one"),
        ({"n": 1, "coords": [0] * 22 + [1]}, "n must be"),
        ({"coords": [0] * 23}, "missing field n"),
        ({"n": 5, "coords": [0] * 22 + [1.5]}, "integer"),
        ({"n": 5, "mukai": {"r": 1, "c": 0, "s": 1}}, "orthogonal"),
    ],
)
def test_classify_input_errors(payload, message):
    code, out, err = classify(payload)
    assert code == 2 and out == ""
    assert message in err


def test_malformed_json():
    code, _, err = run(["classify"], "{not json")
    assert code == 2 and "malformed JSON" in err


def test_strict_flag():
    positive = {"n": 5, "coords": [0] * 16 + [1, 1] + [0] * 5}
    assert classify(positive)[0] == 0
    code, out, _ = classify(positive, "--strict")
    assert code == 1 and json.loads(out)["verdict"] == "NotReflective"
    assert classify(DELTA5, "--strict")[0] == 0


def test_table_format():
    code, out, _ = classify(DELTA5, "--format", "table")
    assert code == 0
    assert any(line.split()[:2] == ["verdict", "PrimeExceptionalPredicted"] for line in out.splitlines())


def test_catalog_default_lists_eleven_rows():
    code, out, _ = run(["catalog"])
    assert code == 0
    entries = json.loads(out)
    assert [e["row"] for e in entries] == [str(r) for r in range(1, 12)]
    assert all(e["mismatches"] == [] for e in entries)


def test_catalog_single_row():
    code, out, _ = run(["catalog", "--row", "4", "--n-max", "7"])
    entries = json.loads(out)
    assert code == 0 and [e["n"] for e in entries] == [str(n) for n in range(2, 8)]
    assert all(e["computed"]["k"] == "2" for e in entries)


def test_catalog_n_max_filters_rows():
    code, out, _ = run(["catalog", "--n-max", "3"])
    rows = [e["row"] for e in json.loads(out)]
    assert code == 0 and rows == ["1", "3", "4", "8"]


def test_catalog_table_and_errors():
    code, out, _ = run(["catalog", "--format", "table"])
    assert code == 0 and len(out.strip().splitlines()) == 12
    assert run(["catalog", "--row", "12"])[0] == 2
    assert run(["catalog", "--n-max", "1"])[0] == 2


def test_verify_with_zero_trials():
    code, out, _ = run(["verify", "--trials", "0"])
    assert code == 0 and json.loads(out) == {"suites": []}


def test_verify_passes_and_is_deterministic():
    argv = ["verify", "--seed", "1", "--trials", "50", "--n-range", "2:8"]
    code, out, _ = run(argv)
    assert code == 0
    summary = json.loads(out)
    names = [s["name"] for s in summary["suites"]]
    assert names == ["reflectivity_fuzz", "rs_route_equivalence", "monodromy_invariance", "structural_invariants"]
    assert all(s["failures"] == "0" for s in summary["suites"])
    assert run(argv)[1] == out


@pytest.mark.parametrize("bad", ["2-8", "8:2", "1:4", "a:b"])
def test_verify_rejects_bad_range(bad):
    assert run(["verify", "--n-range", bad])[0] == 2


def test_unknown_command_is_an_input_error():
    assert run(["frobnicate"])[0] == 2
    assert run([])[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "k3nrefl", "classify"],
        input=json.dumps(DELTA5),
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["k"] == "2"
