"""End-to-end tests for the JSON command line interface."""

import cmath
import json
import math

import pytest

from ut4class import cases, cli
from ut4class.characters import root_of_unity
from ut4class.core import conjugate, elt


def run(tmp_path, capsys, cmd, payload, *flags):
    path = tmp_path / "request.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    rc = cli.main([cmd, str(path), *flags])
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def rows_for(ranks, params):
    sub = cases.build_subgroup(ranks, params)
    return [[g.a, g.d, g.f, g.b, g.e, g.c] for g in sub.generators()]


FULL_GROUP = [
    [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1],
]


def test_ranks_of_full_group(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "ranks", {"generators": FULL_GROUP},
                     "--json")
    assert rc == 0
    assert json.loads(out) == {"rk1": 3, "rk2": 2, "rk3": 1,
                               "hirsch_length": 6}


def test_ranks_reads_standard_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin",
                        io.StringIO(json.dumps({"generators": FULL_GROUP})))
    rc = cli.main(["ranks", "--json"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["rk1"] == 3


def test_classify_reports_subset_and_normal_form(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "classify",
                     {"generators": rows_for((1, 1), (1, 0, 1, 0, 0))},
                     "--json")
    assert rc == 0
    res = json.loads(out)
    assert res["ranks"] == [1, 1]
    assert res["subset"] == "S4"
    assert res["params"] == [1, 0, 1, 0, 0]
    assert res["conjugator"] == [0, 0, 0, 0, 0, 0]


def test_classify_with_values_gives_verdict(tmp_path, capsys):
    payload = {"generators": rows_for((1, 1), (1, 0, 1, 0, 0)),
               "values": ["t", "z", "lam"]}
    rc, out, _ = run(tmp_path, capsys, "classify", payload, "--json")
    assert rc == 0
    res = json.loads(out)
    assert res["irreducible"] is True
    assert res["certificate"]["conditions"]


def test_numeric_lifting_exact_for_small_orders():
    # every root of unity with denominator up to 12 round-trips exactly
    lifter = cli._NumericLifter(q_max=120, tolerance=1e-9)
    for q in range(1, 13):
        for p in range(q):
            z = cmath.exp(2j * math.pi * p / q)
            got = lifter.lift(repr(z.real), repr(z.imag))
            assert got == root_of_unity(p, q), (p, q)


def test_numeric_lifting_fresh_symbols():
    lifter = cli._NumericLifter(q_max=120, tolerance=1e-9)
    off = lifter.lift("0.5", "0")
    assert off.modulus_class() == "off_circle"
    z = cmath.exp(2j * math.pi * 0.1234)
    free = lifter.lift(repr(z.real), repr(z.imag))
    assert free.modulus_class() == "circle_free"
    # identical literals share their lifted value
    assert lifter.lift("0.5", "0") == off


def test_numeric_lifting_ambiguity_refused(tmp_path, capsys):
    t = (1.0 / 119.0 + 1.0 / 120.0) / 2.0
    z = cmath.exp(2j * math.pi * t)
    lifter = cli._NumericLifter(q_max=120, tolerance=1e-3)
    with pytest.raises(ValueError, match="ambiguous"):
        lifter.lift(repr(z.real), repr(z.imag))
    payload = {"generators": rows_for((1, 1), (1, 0, 1, 0, 0)),
               "values": ["t", "z", {"numeric": [repr(z.real),
                                                 repr(z.imag)]}]}
    rc, _, err = run(tmp_path, capsys, "irreducible", payload,
                     "--tolerance", "1e-3")
    assert rc == 3
    assert "ambiguous" in err


def test_stratum_numeric_central_value_off_circle(tmp_path, capsys):
    payload = {"generators": rows_for((1, 1), (1, 0, 1, 0, 0)),
               "values": ["t", "z", {"numeric": ["0.5", "0"]}]}
    rc, out, _ = run(tmp_path, capsys, "stratum", payload, "--json")
    assert rc == 0
    res = json.loads(out)
    assert res["selector"] == "lambda off the circle"
    assert res["fibers"][-1] == {"kind": "Cstar", "constraint": "off_circle"}
    assert 1 <= res["row"] <= res["table_size"]


def test_stratum_rejects_reducible_pair(tmp_path, capsys):
    payload = {"generators": rows_for((1, 1), (1, 0, 1, 0, 0)),
               "values": ["t", "z", {"root_of_unity": [1, 3]}]}
    rc, _, err = run(tmp_path, capsys, "stratum", payload)
    assert rc == 3
    assert "not irreducible" in err


def test_equivalent_conjugated_pair(tmp_path, capsys):
    gens = [elt(a=g[0], d=g[1], f=g[2], b=g[3], e=g[4], c=g[5])
            for g in rows_for((1, 1), (2, 1, 2, 0, 0))]
    u = elt(a=1, b=2, e=-1)
    moved = [conjugate(g, u) for g in gens]
    rows2 = [[g.a, g.d, g.f, g.b, g.e, g.c] for g in moved]
    payload = {
        "first": {"generators": rows_for((1, 1), (2, 1, 2, 0, 0)),
                  "values": ["t", "z", "lam"]},
        "second": {"generators": rows2, "values": ["t", "z", "lam"]},
    }
    rc, out, _ = run(tmp_path, capsys, "equivalent", payload, "--json")
    assert rc == 0
    res = json.loads(out)
    assert res["status"] == "equivalent"
    assert "conjugator" in res


def test_equivalent_rank_mismatch_proved(tmp_path, capsys):
    payload = {
        "first": {"generators": rows_for((1, 1), (1, 0, 1, 0, 0)),
                  "values": ["t", "z", "lam"]},
        "second": {"generators": rows_for((2, 0), (1, 0, 0, 1, 0, 0)),
                   "values": ["t", "w", "lam"]},
    }
    rc, out, _ = run(tmp_path, capsys, "equivalent", payload, "--json")
    assert rc == 0
    assert json.loads(out)["status"] == "not equivalent (proved)"


def test_enumerate_contains_known_tuple(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "enumerate", {"case": [2, 0]},
                     "--json", "--box", "2", "--limit", "10000")
    assert rc == 0
    res = json.loads(out)
    allp = [tuple(it["params"]) for it in res["items"]]
    assert (1, 0, 0, 1, 0, 0) in allp
    assert allp == sorted(allp)
    assert res["count"] == len(res["items"])
    for it in res["items"]:
        assert it["subset"] == "S"
        assert len(it["generators"][0]) == 6


def test_enumerate_subset_filter(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "enumerate",
                     {"case": [1, 1], "subset": "N1"},
                     "--json", "--box", "2", "--limit", "10000")
    assert rc == 0
    res = json.loads(out)
    assert res["items"]
    for it in res["items"]:
        assert it["subset"] == "N1"
        a, d, f, b, e = it["params"]
        assert d == 0 and f == 0 and b == 1


def test_enumerate_empty_box(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "enumerate", {"case": [1, 1]},
                     "--json", "--box", "-1")
    assert rc == 0
    assert json.loads(out)["items"] == []


def test_exit_code_for_malformed_requests(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops", encoding="utf-8")
    assert cli.main(["ranks", str(path)]) == 2
    capsys.readouterr()
    rc, _, err = run(tmp_path, capsys, "ranks",
                     {"generators": [[1, 2, 3]]})
    assert rc == 2 and "request error" in err
    rc, _, err = run(tmp_path, capsys, "ranks",
                     {"command": "classify", "payload": {}})
    assert rc == 2 and "envelope" in err


def test_exit_code_for_preconditions(tmp_path, capsys):
    # no central element at all: classification refuses the subgroup
    rc, _, err = run(tmp_path, capsys, "classify",
                     {"generators": [[1, 0, 0, 0, 0, 0]]})
    assert rc == 3
    assert "precondition failed" in err


def test_inconsistent_values_refused(tmp_path, capsys):
    rows = [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0, 1]]
    bad = {"generators": rows,
           "values": ["x", "y", {"root_of_unity": [1, 2]}, "lam"]}
    rc, _, err = run(tmp_path, capsys, "classify", bad)
    assert rc == 3
    assert "inconsistent values" in err
    # the commutator of the first two rows is the third, so its value
    # is forced to 1; with that the pair classifies normally
    good = {"generators": rows,
            "values": ["x", "y", {"root_of_unity": [0, 1]}, "lam"]}
    rc, out, _ = run(tmp_path, capsys, "classify", good, "--json")
    assert rc == 0
    res = json.loads(out)
    assert res["ranks"] == [2, 1]
    assert res["irreducible"] is True


def test_json_output_round_trips_and_is_deterministic(tmp_path, capsys):
    payload = {"generators": rows_for((1, 1), (2, 1, 2, 0, 0)),
               "values": ["t", "z", "lam"]}
    rc, out1, _ = run(tmp_path, capsys, "irreducible", payload, "--json")
    assert rc == 0
    res = json.loads(out1)
    assert json.dumps(res, sort_keys=True,
                      separators=(",", ":")) == out1.strip()
    rc, out2, _ = run(tmp_path, capsys, "irreducible", payload, "--json")
    assert out2 == out1


def test_isolator_command(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "isolator",
                     {"generators": [[2, 0, 0, 0, 0, 0],
                                     [0, 0, 0, 0, 0, 3]]},
                     "--json")
    assert rc == 0
    res = json.loads(out)
    assert res["is_isolated"] is False
    assert res["isolator"]["rank_signature"] == [1, 0, 1]


def test_f_equivalents_command(tmp_path, capsys):
    payload = {"generators": rows_for((1, 1), (1, 0, 1, 0, 0)),
               "values": ["t", "z", "lam"]}
    rc, out, _ = run(tmp_path, capsys, "f-equivalents", payload, "--json")
    assert rc == 0
    res = json.loads(out)
    assert isinstance(res["companions"], list)


def test_verify_command_limited_sweep(tmp_path, capsys):
    rc, out, _ = run(tmp_path, capsys, "verify", {"case": [1, 1]},
                     "--json", "--limit", "30")
    assert rc == 0
    res = json.loads(out)
    assert res["params_checked"] == 30
    assert res["discrepancies"] == []
