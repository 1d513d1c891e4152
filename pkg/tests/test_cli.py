import json
import subprocess
import sys
from pathlib import Path

import pytest

from rigidcat.cli import main

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def run_cli(args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "rigidcat.cli", *args],
                          input=stdin, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_validate_fixture_file(capsys):
    code = main(["validate", str(FIXTURES / "P2.json"), "--no-timings"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["schema"] == 1
    assert out["sections"]["validation"]["ok"]
    assert out["input"]["sha256"]


def test_validate_rejects_invalid_presentation(capsys):
    bad = json.dumps({"objects": ["*"],
                      "morphisms": [{"name": "e", "dom": "*", "cod": "*"}],
                      "composition": []})
    code, out, err = run_cli(["validate", "-"], stdin=bad)
    assert code == 1
    assert json.loads(out)["sections"]["validation"]["error"] == "MissingComposite"


def test_validate_malformed_json_is_input_error():
    code, out, err = run_cli(["validate", "-"], stdin="{nope")
    assert code == 2


def test_missing_file_is_input_error():
    code, out, err = run_cli(["census", "no_such_file.json"])
    assert code == 2


def test_fixture_pipes_into_validate():
    code, out, err = run_cli(["fixture", "one"])
    assert code == 0
    code2, out2, err2 = run_cli(["validate", "-"], stdin=out)
    assert code2 == 0


def test_fixture_unknown_name():
    code, _, err = run_cli(["fixture", "zzz"])
    assert code == 2


def test_census_delta1(capsys):
    code = main(["census", str(FIXTURES / "delta1.json"), "--no-timings"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    census = out["sections"]["census"]
    assert census["count"] == 3
    assert census["bijection_holds"] is True
    assert census["all_rigid"] is True


def test_census_m2_negative(capsys):
    code = main(["census", str(FIXTURES / "M2.json"), "--no-timings"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    census = out["sections"]["census"]
    assert census["count"] == 3
    assert census["all_rigid"] is False
    # the double-negation topology appears with no irreducibles
    assert any(e["irreducibles"] == [] and not e["rigid"]
               for e in census["topologies"])


def test_census_budget_error():
    code, out, err = run_cli(["census", str(FIXTURES / "delta2.json"),
                              "--budget", "10"])
    assert code == 2 and "budget" in err.lower()


def test_rigidity_m2_exit_1(capsys):
    code = main(["rigidity", str(FIXTURES / "M2.json"), "--no-timings"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["universally_rigid"] is False
    assert out["sections"]["agreement"]["agree"] is True
    assert out["sections"]["local"]["cauchy"]["witness"] == "e"
    assert out["sections"]["game"]["reducer_cycle"] == [["e", "C"], ["e", "R"]]
    assert out["sections"]["census"]["all_rigid"] is False


def test_rigidity_delta1_exit_0(capsys):
    code = main(["rigidity", str(FIXTURES / "delta1.json"), "--no-timings"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["universally_rigid"] is True


def test_game_strategy_export(tmp_path, capsys):
    target = tmp_path / "strategy.json"
    code = main(["game", str(FIXTURES / "delta1.json"), "--no-timings",
                 "--strategy", str(target)])
    capsys.readouterr()
    assert code == 0
    arenas = json.loads(target.read_text())
    assert [a["codomain"] for a in arenas] == ["[0]", "[1]"]
    for arena in arenas:
        for p in arena["positions"]:
            assert p["winner"] == "Cleaner"
            assert p["turn"] in ("R", "C")


def test_game_single_object(capsys):
    code = main(["game", str(FIXTURES / "delta1.json"), "--no-timings",
                 "--object", "[1]"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert len(out["sections"]["game"]["arenas"]) == 1


def test_game_unknown_object():
    code, _, err = run_cli(["game", str(FIXTURES / "delta1.json"),
                            "--object", "[9]"])
    assert code == 2


def test_complete_emits_envelope_with_sidecar():
    code, out, err = run_cli(["complete", str(FIXTURES / "M2.json")])
    assert code == 0
    data = json.loads(out)
    assert set(data["objects"]) == {"id_*", "e"}
    assert data["embedding"] == {"*": "id_*"}
    # the envelope (with the sidecar key ignored) validates
    code2, _, _ = run_cli(["validate", "-"], stdin=out)
    assert code2 == 0


def test_degree_inline_and_file(tmp_path, capsys):
    code = main(["degree", str(FIXTURES / "delta2.json"), "--no-timings",
                 "--degrees", '{"[0]": 0, "[1]": 1, "[2]": 2}'])
    out = json.loads(capsys.readouterr().out)
    assert code == 0 and out["sections"]["degree"]["ok"]

    dmap = tmp_path / "degrees.json"
    dmap.write_text('{"a": 0, "b": 0}')
    code = main(["degree", str(FIXTURES / "P2.json"), "--no-timings",
                 "--degrees", str(dmap)])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["sections"]["degree"]["failing_morphism"] == "a<b"


def test_degree_missing_objects_is_input_error():
    code, _, err = run_cli(["degree", str(FIXTURES / "P2.json"),
                            "--degrees", '{"a": 0}'])
    assert code == 2


def test_corpus_check(capsys):
    code = main(["corpus", "--seed", "5", "--count", "15", "--check",
                 "--no-timings"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    section = out["sections"]["corpus"]
    assert section["all_agree"] is True
    assert len(section["elements"]) == 15
    assert all(e["agree"] and e["lemma4"] for e in section["elements"])


def test_reports_byte_identical_without_timings():
    args = ["census", str(FIXTURES / "KaroubiM2.json"), "--no-timings"]
    _, out1, _ = run_cli(args)
    _, out2, _ = run_cli(args)
    assert out1 == out2


def test_timings_present_by_default(capsys):
    code = main(["census", str(FIXTURES / "One.json")])
    out = json.loads(capsys.readouterr().out)
    assert "timings" in out and "census" in out["timings"]


@pytest.mark.parametrize("name", ["One", "P2", "Chain3", "M2", "KaroubiM2",
                                  "delta1", "delta2", "semidelta2"])
def test_validate_all_pinned_fixtures(name):
    code, out, err = run_cli(["validate", str(FIXTURES / f"{name}.json"),
                              "--no-timings"])
    assert code == 0
