import json

import pytest

from preproj.cli import main
from preproj.series import from_json_obj

A0 = "vertices: 1\narrow l: 1 -> 1\n"
A2 = "vertices: 1 2\narrow a: 1 -> 2\n"
A2T = ("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n"
       "arrow c: 3 -> 1\n")
D4T = ("vertices: 0 1 2 3 4\n" +
       "".join("arrow a%d: %d -> 0\n" % (k, k) for k in range(1, 5)))
STAR1 = "vertices: 1 2\narrow a1: 2 -> 1\nwhite: 2\n"
ALLWHITE = "vertices: 1 2\narrow a: 1 -> 2\nwhite: 1 2\n"
TWOLOOP = "vertices: 1\narrow x: 1 -> 1\narrow y: 1 -> 1\n"
ISOLATED = "vertices: 1 2\narrow l: 1 -> 1\n"
GAMMA2 = ("vertices: 1 2\narrow a: 2 -> 1\nwhite: 2\n"
          "gamma a = 2\ngamma a* = 1\n")


def run(tmp_path, capsys, text, argv_head, *extra):
    f = tmp_path / "q.quiver"
    f.write_text(text, encoding="utf-8")
    code = main([argv_head, str(f), *extra])
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_dynkin(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2, "classify")
    assert code == 0
    assert out == "connected, Dynkin (A_2)\n"


def test_classify_extended(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2T, "classify")
    assert code == 0
    assert out == "connected, extended Dynkin (A~_2)\n"


def test_classify_other_names_a_contained_cycle(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWOLOOP, "classify")
    assert code == 0
    assert out == "connected, other (contains A~_0)\n"


def test_classify_disconnected(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, ISOLATED, "classify")
    assert code == 0
    assert out == "disconnected\n"


def test_classify_json(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, TWOLOOP, "classify",
                       "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["command"] == "classify"
    assert obj["connected"] is True
    assert obj["verdict"] == "OtherNonDynkin"
    assert obj["contains"] == "A~_0"


def test_hilbert_one_loop_counts(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A0, "hilbert", "--degree", "3")
    assert code == 0
    assert out == "0\t1\n1\t2\n2\t3\n3\t4\n"


def test_hilbert_single_arm_star(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, STAR1, "hilbert", "--degree", "2")
    assert code == 0
    assert out.splitlines() == ["0\t1\t0\t0\t1", "1\t0\t1\t1\t0",
                                "2\t0\t0\t0\t1"]


def test_hilbert_json_round_trip(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2T, "hilbert", "--degree", "4",
                       "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["vertices"] == ["1", "2", "3"]
    assert obj["field"] == "q"
    s = from_json_obj(obj["series"])
    assert s.truncation == 4
    assert s[0] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_hilbert_prime_field(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2T, "hilbert", "--degree", "3",
                       "--field", "f5", "--format", "json")
    assert code == 0
    assert json.loads(out)["field"] == "f5"


def test_closed_form_dynkin_goes_negative(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2, "closed-form", "--degree", "4")
    assert code == 0
    assert out.splitlines()[3] == "3\t0\t-1\t-1\t0"


def test_verify_extended_dynkin(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, D4T, "verify", "--degree", "8")
    assert code == 0
    assert out == "verified: series equals the closed form through degree 8\n"


def test_verify_mismatch_witness(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2, "verify")
    assert code == 1
    assert out == ("mismatch at degree 3 entry (1, 2): "
                   "computed 0, closed form -1\n")


def test_verify_json_witness(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2, "verify", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    assert obj["equal"] is False
    assert obj["witness"] == {"degree": 3, "row": "1", "col": "2",
                              "computed": 0, "closed_form": -1}


def test_koszul_extended_dynkin(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2T, "koszul")
    assert code == 0
    assert out.splitlines() == [
        "Koszul up to (3, 8)",
        "series equals the closed form through degree 10"]


def test_koszul_path_algebra(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, ALLWHITE, "koszul")
    assert code == 0


def test_koszul_dynkin_fails_with_series_witness(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2, "koszul")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "not Koszul up to (3, 8)"
    assert ("series differs from the closed form at degree 3 entry (1, 2)"
            in lines)


def test_koszul_json(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2, "koszul", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    assert obj["koszul"] is False
    assert obj["complete"] is True
    assert {"kind": "series", "degree": 3, "row": "1",
            "col": "2"} in obj["witnesses"]
    assert all(set(e) == {"i", "degree", "matrix"} for e in obj["tor"])


def test_torsion_clean(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A2T, "torsion", "--degree", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "degree\trow\tcol\tdivisors"
    assert lines[-1] == "no torsion"
    assert lines[1] == "2\t1\t1\t1"


def test_torsion_json(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, D4T, "torsion", "--degree", "5",
                       "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["torsion_found"] is False
    assert obj["witnesses"] == []
    assert obj["primes"] == [2, 3]
    assert all(set(e["divisors"]) <= {0, 1} for e in obj["entries"])


def test_torsion_non_unit_gamma_is_input_error(tmp_path, capsys):
    code, out, err = run(tmp_path, capsys, GAMMA2, "torsion")
    assert code == 2
    assert err.startswith("error:")
    assert out == ""


def test_gamma_vanishing_mod_p(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, GAMMA2, "hilbert", "--field", "f2")
    assert code == 2
    assert err.startswith("error:")
    # over the rationals the same file is fine
    code, _, _ = run(tmp_path, capsys, GAMMA2, "hilbert", "--degree", "4")
    assert code == 0


def test_seed_echo_tsv_and_json(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, A0, "hilbert", "--degree", "2",
                       "--seed", "42")
    assert code == 0
    assert out.splitlines()[0] == "seed\t42"
    code, out, _ = run(tmp_path, capsys, A0, "hilbert", "--degree", "2",
                       "--seed", "42", "--format", "json")
    assert json.loads(out)["seed"] == 42


def test_missing_file(tmp_path, capsys):
    code = main(["classify", str(tmp_path / "absent.quiver")])
    _, err = capsys.readouterr()
    assert code == 2
    assert err.startswith("error:")


def test_malformed_quiver(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "vertices: 1\narrow a: 1 - 1\n",
                       "classify")
    assert code == 2
    assert "error:" in err


def test_unknown_white_vertex(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys,
                       "vertices: 1 2\narrow a: 1 -> 2\nwhite: 3\n",
                       "classify")
    assert code == 2
    assert "error:" in err


def test_bad_field_spec(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, A0, "hilbert", "--field", "f9")
    assert code == 2
    assert "error:" in err


def test_negative_degree_rejected(tmp_path, capsys):
    f = tmp_path / "q.quiver"
    f.write_text(A0, encoding="utf-8")
    with pytest.raises(SystemExit) as exc:
        main(["hilbert", str(f), "--degree", "-1"])
    assert exc.value.code == 2


def test_unknown_command_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "x"])
    assert exc.value.code == 2
