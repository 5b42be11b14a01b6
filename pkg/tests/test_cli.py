from __future__ import annotations

import json
import subprocess
import sys

import pytest

from dynsub.cli import ExperimentConfig, main, parse_mix, parse_n
from dynsub.catalog import ConfigError

RUN = ["run", "--h", "K3", "--protocol", "memlist_k3_edge_ins", "--n", "64", "--delta", "4",
       "--events", "60", "--seed", "3", "--mix", "edge_ins=1,quiet=0.4"]


def _json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_parse_n_and_mix():
    assert parse_n("64") == [64]
    assert parse_n("16,64") == [16, 64]
    assert parse_n("2^4..2^16") == [2 ** e for e in range(4, 17, 2)]
    assert parse_mix("edge_ins=1,quiet=0.2") == {"edge_ins": 1.0, "quiet": 0.2}
    with pytest.raises(ConfigError):
        parse_mix("bogus=1")


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json({"command": "run", "nope": 1})
    assert "out" not in ExperimentConfig(command="run", out="x").record()


def test_params_rows(capsys):
    code, obj = _json(capsys, ["params", "--h", "C5"])
    assert code == 0
    assert obj["params"]["r_H"] == 2 and obj["params"]["r_H_prime"] == 1
    cells = {(r["problem"], r["change"]): r["complexity"] for r in obj["regimes"]}
    assert cells[("memlist", "edge_ins")] == "Impossible"
    assert cells[("list", "edge_del")] == "Impossible"
    code, obj = _json(capsys, ["params", "--h", "K3", "--r", "2"])
    cells = {(r["problem"], r["change"]): r["complexity"] for r in obj["regimes"]}
    assert cells[("memlist", "edge_ins")] == "Θ(1)"
    assert cells[("memlist", "node_del")] == "0"


def test_run_passes_and_is_deterministic(capsys):
    code, a = _json(capsys, RUN)
    assert code == 0 and a["report"]["verdict"] == "pass"
    assert a["report"]["max_bits"] <= a["bound"]
    main(RUN)
    first = capsys.readouterr().out
    main(RUN)
    assert capsys.readouterr().out == first


def test_run_writes_json_and_csv(tmp_path, capsys):
    prefix = tmp_path / "r"
    assert main(RUN + ["--out", str(prefix)]) == 0
    obj = json.loads((tmp_path / "r.json").read_text())
    csv = (tmp_path / "r.csv").read_text().splitlines()
    assert csv[0].split(",") == ["round", "max_bits", "verdict"]
    assert len(csv) - 1 == len(obj["report"]["round_max_bits"])


def test_replay_matches(tmp_path, capsys):
    code, a = _json(capsys, RUN)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(a["schedule"]))
    code, b = _json(capsys, RUN + ["--schedule", str(path)])
    assert code == 0 and b["report"] == a["report"]


def test_cap_violation_exits_one(capsys):
    code, obj = _json(capsys, RUN + ["--bcap", "4"])
    assert code == 1 and obj["report"]["verdict"] == "cap-violation"


@pytest.mark.parametrize("argv", [
    ["run", "--h", "K3", "--protocol", "memlist_k3_edge_ins", "--n", "64"],   # no delta
    ["run", "--h", "C4", "--protocol", "memlist_k3_edge_ins", "--delta", "4"],
    ["run", "--h", "C5", "--protocol", "memlist_general", "--r", "1"],
    ["run", "--h", "K3"],
    ["run", "--h", "nonsense!", "--protocol", "silent"],
    ["run", "--protocol", "no_such_protocol"],
    ["run", "--h", "C4", "--protocol", "list_star_del"],
    ["audit", "--choices", "10"],
])
def test_config_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_bad_schedule_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(RUN + ["--schedule", str(p)]) == 2


def test_sweep(capsys):
    code, obj = _json(capsys, ["sweep", "--h", "K3", "--protocol", "list_k3_mixed_ins", "--n", "16,64",
                               "--delta", "4", "--events", "40", "--repeats", "2"])
    assert code == 0
    assert [r["n"] for r in obj["per_n"]] == [16, 64]
    assert all(r["passed"] == r["runs"] == 2 for r in obj["per_n"])


def test_audit_hand_example(capsys):
    code, obj = _json(capsys, ["audit", "--choices", "12870", "--x", "6", "--bcap", "2"])
    assert code == 0 and obj["audits"][0]["satisfied"] is False
    code, obj = _json(capsys, ["audit", "--choices", "12870", "--x", "6", "--bcap", "3"])
    assert obj["audits"][0]["satisfied"] is True
    code, obj = _json(capsys, ["audit", "--n", "16,64"])
    assert len(obj["audits"]) == 8


def test_attacks(capsys):
    code, obj = _json(capsys, ["attack", "--attack", "locality", "--h", "C5", "--change", "edge_del",
                               "--T", "1"])
    assert code == 0 and obj["result"]["verdict"] == "violation"
    code, obj = _json(capsys, ["attack", "--attack", "memdetect_clique", "--h", "K3", "--n", "64",
                               "--protocol", "id_echo", "--bcap", "1"])
    assert code == 0 and obj["result"]["result"] == "violation"
    code, obj = _json(capsys, ["attack", "--attack", "blowup", "--h", "C4", "--n", "4",
                               "--protocol", "list_center_del"])
    assert code == 0 and obj["result"]["probe"]["survived"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dynsub", "params", "--h", "K3"], capture_output=True,
                         text=True, check=True)
    assert json.loads(out.stdout)["params"]["is_clique"]
