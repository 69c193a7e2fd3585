"""End-to-end CLI checks through main(argv)."""

import json

import pytest

from grzlab.cli import main
from grzlab.finlat import chain_heyting, chain_poset, antichain_poset
from grzlab.modal import complex_algebra


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def test_grz_check_standard(capsys):
    code, doc, _ = run_json(capsys, "grz-check", "--std", "S2")
    assert code == 1
    assert doc == {
        "K": True,
        "atoms": 2,
        "grz": False,
        "interior": True,
        "witness": 1,
    }


def test_grz_check_grz_algebra(capsys, tmp_path):
    rec = complex_algebra(chain_poset(2)).to_record()
    path = write_json(tmp_path / "m.json", rec)
    code, doc, _ = run_json(capsys, "grz-check", "--input", path)
    assert code == 0
    assert doc["grz"] and doc["witness"] is None


def test_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "blok-char", "--std", "S12")
    _, second, _ = run(capsys, "blok-char", "--std", "S12")
    assert first == second


def test_json_flag_compacts(capsys):
    _, out, _ = run(capsys, "grz-check", "--std", "S2", "--json")
    assert out.count("\n") == 1
    json.loads(out)


def test_blok_char_witness_fields(capsys):
    code, doc, _ = run_json(capsys, "blok-char", "--std", "S12")
    assert code == 1 and not doc["is_grz"]
    w = doc["witness"]
    assert w["target"] == "S12"
    assert w["subalgebra"] == list(range(8))
    assert w["filter_least"] == 7
    assert len(w["iso"]) == 8


def test_stable_witness(capsys):
    code, doc, _ = run_json(
        capsys, "stable-witness", "--std", "S12", "--element", "5"
    )
    assert code == 0
    assert doc["target"] == "S2" and doc["map"][5] == 1
    # a non-failing element is a usage error
    code, _, err = run(capsys, "stable-witness", "--std", "S12", "--element", "4")
    assert code == 2 and "error" in err


def test_build_b(capsys, tmp_path):
    path = write_json(tmp_path / "h.json", chain_heyting(3).to_record())
    code, doc, _ = run_json(capsys, "build-B", "--input", path)
    assert code == 0
    assert doc["embedding"] == [0, 1, 3]
    assert doc["algebra"]["atoms"] == 2
    assert doc["algebra"]["box"] == [0, 1, 0, 3]


def test_build_o(capsys):
    code, doc, _ = run_json(capsys, "build-O", "--std", "S12")
    assert code == 0
    assert doc["opens"] == [0, 4, 7]
    assert doc["algebra"]["size"] == 3


def test_build_roundtrip(capsys, tmp_path):
    path = write_json(tmp_path / "h.json", chain_heyting(3).to_record())
    _, built, _ = run_json(capsys, "build-B", "--input", path)
    bpath = write_json(tmp_path / "b.json", built["algebra"])
    code, doc, _ = run_json(capsys, "build-O", "--input", bpath)
    assert code == 0
    assert doc["opens"] == built["embedding"]


def test_finite_blok(capsys, tmp_path):
    rec = complex_algebra(chain_poset(2)).to_record()
    path = write_json(tmp_path / "m.json", rec)
    code, doc, _ = run_json(capsys, "finite-blok", "--input", path)
    assert code == 0
    assert doc["iso"] == [0, 1, 2, 3]
    assert doc["chain"] == [0, 1, 3]
    # non-Grz input is rejected up front
    code, _, err = run(capsys, "finite-blok", "--std", "S2")
    assert code == 2 and "error" in err


def test_box_extend_golden_step(capsys, tmp_path):
    doc_in = {
        "algebra": complex_algebra(chain_poset(3)).to_record(),
        "blocks": [[0, 1, 2]],
        "g": 2,
    }
    path = write_json(tmp_path / "step.json", doc_in)
    code, doc, _ = run_json(capsys, "box-extend", "--input", path)
    assert code == 0
    assert doc["p"] == 2
    assert doc["opens_used"] == [0, 1, 3, 7]
    assert doc["map"] == {"domain": [0, 2, 5, 7], "map": [0, 2, 5, 7]}
    assert doc["target_elements"] == list(range(8))

    bad = dict(doc_in, blocks=[[0, 9]])
    path = write_json(tmp_path / "bad.json", bad)
    code, _, err = run(capsys, "box-extend", "--input", path)
    assert code == 2 and "out of range" in err


def test_be_check_both_ways(capsys, tmp_path):
    catalog = [chain_heyting(3).to_record()]
    good = {
        "catalog": catalog,
        "algebra": complex_algebra(chain_poset(2)).to_record(),
    }
    path = write_json(tmp_path / "good.json", good)
    code, doc, _ = run_json(capsys, "be-check", "--input", path)
    assert code == 0 and doc["holds"]

    bad = {
        "catalog": catalog,
        "algebra": complex_algebra(antichain_poset(2)).to_record(),
    }
    path = write_json(tmp_path / "bad.json", bad)
    code, doc, _ = run_json(capsys, "be-check", "--input", path)
    assert code == 1 and not doc["holds"]


def test_translate(capsys):
    code, doc, _ = run_json(capsys, "translate", "p, p -> q / q")
    assert code == 0
    assert doc["classification"] == "quasi-identity"
    assert doc["variables"] == ["p", "q"]
    assert doc["sentence"]["premises"] == [["p", "top"], ["p -> q", "top"]]
    code, doc, _ = run_json(capsys, "translate", "box p -> p", "--signature", "modal")
    assert doc["classification"] == "identity"


def test_eval_on_files(capsys, tmp_path):
    path = write_json(tmp_path / "c3.json", chain_heyting(3).to_record())
    code, doc, _ = run_json(capsys, "eval", "/ p | ~p", "--input", path)
    assert code == 1
    assert doc == {"valid": False, "counterexample": {"p": 1}}

    code, doc, _ = run_json(capsys, "eval", "p, p -> q / q", "--input", path)
    assert code == 0 and doc["valid"]

    sent = write_json(
        tmp_path / "s.json",
        {"premises": [], "conclusions": [["p | ~p", "top"]]},
    )
    code, doc, _ = run_json(capsys, "eval", "--input", path, "--sentence", sent)
    assert code == 1

    code, _, err = run(capsys, "eval", "/ p | (q -> r)", "--input", path, "--cap", "10")
    assert code == 3 and "cap" in err


def test_catalog_eval(capsys):
    code, doc, _ = run_json(capsys, "catalog-eval", "/ p | ~p", "--heyting", "2")
    assert code == 0 and doc["valid"]
    code, doc, _ = run_json(capsys, "catalog-eval", "/ p | ~p", "--heyting", "3")
    assert code == 1
    assert doc["failing_member"] == 2 and doc["counterexample"] == {"p": 1}


def test_catalog_eval_from_file(capsys, tmp_path):
    from grzlab import catalog as catalog_mod

    path = tmp_path / "cat.json"
    catalog_mod.save(path, {"a": chain_heyting(2), "b": chain_heyting(3)})
    code, doc, _ = run_json(capsys, "catalog-eval", "/ p | ~p", "--input", str(path))
    assert code == 1 and doc["failing_member"] == 1


def test_free(capsys):
    code, doc, _ = run_json(capsys, "free", "--heyting", "2", "--k", "1")
    assert code == 0
    assert doc["size"] == 4 and doc["generators"] == [1]
    assert doc["terms"] == {"0": "bot", "1": "x0", "2": "x0 -> bot", "3": "top"}
    code, _, err = run(capsys, "free", "--heyting", "3", "--k", "4", "--element-cap", "64")
    assert code == 3


def test_admissible(capsys):
    code, doc, _ = run_json(capsys, "admissible", "p, p -> q / q", "--heyting", "2", "--k", "1")
    assert code == 0 and doc["admissible_k"]
    code, doc, _ = run_json(capsys, "admissible", "/ bot", "--heyting", "2", "--k", "1")
    assert code == 1 and not doc["admissible_k"]
    assert doc["sentence"]["conclusions"] == [["bot", "top"]]


def test_completeness_report(capsys):
    code, doc, _ = run_json(
        capsys,
        "completeness-report", "--heyting", "2", "--k", "1",
        "--max-vars", "1", "--max-premises", "1", "--depth", "0",
    )
    assert code == 0
    assert doc["checked"] == 12 and doc["violations"] == []


def test_sigma_free(capsys):
    code, doc, _ = run_json(capsys, "sigma-free", "--heyting", "2", "--k", "1")
    assert code == 0
    assert doc["embedding"]["injective"]
    assert doc["free_sigma_in_quasivariety"]["holds"]
    code, _, _ = run(capsys, "sigma-free", "--heyting", "5", "--k", "1")
    assert code == 3


def test_enumerate(capsys, tmp_path):
    code, doc, _ = run_json(capsys, "enumerate", "--what", "posets", "--n", "3")
    assert code == 0
    assert doc["counts"] == [1, 1, 2, 5] and doc["total"] == 9

    code, doc, _ = run_json(capsys, "enumerate", "--what", "topologies", "--n", "2")
    assert doc["counts"] == [1, 1, 3]

    out = tmp_path / "heyting.json"
    code, doc, _ = run_json(
        capsys, "enumerate", "--what", "heyting", "--n", "5", "--out", str(out)
    )
    assert doc["count"] == 8
    assert doc["by_size"] == {"1": 1, "2": 1, "3": 1, "4": 2, "5": 3}
    from grzlab import catalog as catalog_mod

    assert len(catalog_mod.load(out).entries) == 8

    code, _, err = run(capsys, "enumerate", "--what", "posets", "--n", "9")
    assert code == 3


def test_verify_all_single_criterion(capsys):
    code, doc, err = run_json(capsys, "verify-all", "--criteria", "1")
    assert code == 0 and doc["ok"]
    assert len(doc["checks"]) == 1
    assert doc["checks"][0]["criterion"] == 1
    assert "[ 1]" in err and ": ok" in err

    code, _, err = run(capsys, "verify-all", "--criteria", "x")
    assert code == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["grz-check"])  # a modal source is required
    assert info.value.code == 2
    capsys.readouterr()

    with pytest.raises(SystemExit):
        main(["no-such-verb"])
    capsys.readouterr()

    code, _, err = run(capsys, "eval", "/ p", "--input", "/no/such/file.json")
    assert code == 2 and "error" in err

    bad = "not json"
    import pathlib
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        fh.write(bad)
        name = fh.name
    try:
        code, _, err = run(capsys, "eval", "/ p", "--input", name)
        assert code == 2 and "JSON" in err
    finally:
        pathlib.Path(name).unlink()


@pytest.mark.filterwarnings("ignore:.*TBB.*")
def test_threads_flag_accepted(capsys):
    code, _, _ = run(capsys, "grz-check", "--std", "S2", "--threads", "2")
    assert code == 1
