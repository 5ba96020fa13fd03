import json

import pytest

from viannalift import potentials
from viannalift.cli import main
from viannalift.laurent import from_json
from viannalift.markov import MarkovNode
from viannalift.potentials import PotentialRecord, clifford


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_tree(capsys):
    code, out = run(capsys, "tree", "--max", "13")
    data = json.loads(out.out)
    assert code == 0
    assert [d["sorted"] for d in data] == [["1", "1", "1"], ["1", "1", "2"], ["1", "2", "5"], ["1", "5", "13"]]
    assert [MarkovNode.from_json(d).key for d in data][-1] == (1, 5, 13)
    code, out = run(capsys, "tree", "--max", "1")
    assert len(json.loads(out.out)) == 1


@pytest.mark.parametrize("argv", [["tree", "--max", "0"], ["potential", "1,2,4"], ["potential", "1,2"],
                                  ["verify", "--max", "5", "--dims", "1"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_potential(capsys):
    code, out = run(capsys, "potential", "1,1,1", "--dim", "2")
    rec = PotentialRecord.from_json(json.loads(out.out))
    assert code == 0 and rec.poly == clifford(2).poly and len(rec.poly) == 3
    code, out = run(capsys, "potential", "2,1,1", "--dim", "3")
    assert from_json(json.loads(out.out)["poly"]) == potentials.vianna((1, 1, 2), 3).poly


def test_output_is_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        potentials.clear_cache()
        assert main(["potential", "2,5,29", "--dim", "3", "--out", str(d)]) == 0
        assert main(["render", "1,1,2", "--dim", "2", "--out", str(d)]) == 0
    for f in sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file()):
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_newton_table(capsys):
    code, out = run(capsys, "newton", "1,1,2", "--dim", "3", "--format", "table")
    assert code == 0 and out.out.splitlines()[0].split() == ["from", "to", "length"]


def test_verify_and_cache(capsys, tmp_path):
    code, out = run(capsys, "verify", "--max", "34", "--dims", "2,3", "--out", str(tmp_path), "--workers", "2")
    assert code == 0
    report = json.loads((tmp_path / "verify_max34_n2-3.json").read_text())
    assert report["ok"] and len(report["reports"]) == 12
    cached = tmp_path / "cache" / "1_2_5_n3.json"
    assert cached.exists()
    code, out = run(capsys, "verify", "--max", "34", "--dims", "2,3", "--out", str(tmp_path))
    assert code == 0
    text = cached.read_text().replace('"coef": "1"', '"coef": "2"', 1)
    cached.write_text(text)
    potentials.clear_cache()
    code, out = run(capsys, "verify", "--max", "34", "--dims", "2,3", "--out", str(tmp_path))
    assert code != 0 and "integrity" in out.err


def test_env_var_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("VIANNALIFT_OUT", str(tmp_path))
    assert main(["tree", "--max", "5"]) == 0
    assert (tmp_path / "tree_max5.json").exists()


def test_distinguish(capsys):
    code, out = run(capsys, "distinguish", "--max", "433", "--dims", "3")
    data = json.loads(out.out)
    assert code == 0 and data["ok"] and len(data["pairs"]) == 55


def test_render(capsys, tmp_path):
    code, out = run(capsys, "render", "1,1,2", "--dim", "2")
    assert code == 0 and out.out.startswith("<?xml") and out.out.count(">2</text>") == 1
    code, out = run(capsys, "render", "1,1,1", "--dim", "3")
    assert code == 0 and out.out.count("<line") == 6 + 3
    code, out = run(capsys, "render", "1,1,1", "--dim", "5")
    assert code != 0
