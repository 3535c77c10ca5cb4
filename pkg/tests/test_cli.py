import json

import pytest

from twogauge import cli


def run(argv):
    report, code = cli.dispatch(argv)
    return report, code


def test_partition_sphere_values():
    report, code = run(["partition", "--two-group", "Z2", "--complex", "sphere:4"])
    assert code == 0
    assert report["result"] == {"value": "1/2", "exact": True}
    report, code = run(["partition", "--two-group", "BZ2", "--complex", "sphere:4"])
    assert report["result"] == {"value": "2", "exact": True}


def test_partition_deterministic_bytes():
    a = json.dumps(run(["partition", "--two-group", "Z2", "--complex", "sphere:3"])[0],
                   sort_keys=True)
    b = json.dumps(run(["partition", "--two-group", "Z2", "--complex", "sphere:3"])[0],
                   sort_keys=True)
    assert a == b


def test_verify_shipped_and_broken(tmp_path):
    report, code = run(["verify", "--two-group", "Z2"])
    assert code == 0 and report["result"]["valid"]
    broken = {
        "G": {"order": 2, "mul": [[0, 1], [1, 0]], "names": ["e", "u"]},
        "A": {"order": 2, "mul": [[0, 1], [1, 0]], "names": ["e", "u"]},
        "action": [[0, 1], [0, 1]],
        "alpha": {"u,e,u": "u"},
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(broken))
    report, code = run(["verify", "--two-group", str(path)])
    assert code == 1
    assert report["result"]["violations"]


def test_unknown_group_is_input_error():
    report, code = run(["partition", "--two-group", "nope", "--complex", "sphere:3"])
    assert code == 2 and "error" in report


def test_toric_commands():
    report, code = run(["toric", "gsd", "--L", "2"])
    assert code == 0 and report["result"] == {"gsd": 8, "dual_gsd": 8}
    report, code = run(["toric", "modules", "--L", "3"])
    assert code == 0 and report["result"]["match_categorical"]


def test_toric_defect_with_loop_file(tmp_path):
    loop = [0, 1, 4, 3]  # square in the xy plane at L = 3
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(loop))
    report, code = run(["toric", "defect", "--L", "3", "--loop", str(path)])
    assert code == 0
    assert report["result"]["dim_v"] == 2


def test_pachner_check_seeded():
    argv = ["pachner-check", "--two-group", "Z2", "--complex", "sphere:3",
            "--seed", "3", "--moves", "3"]
    report, code = run(argv)
    assert code == 0 and report["result"]["invariant"]
    again, _ = run(argv)
    assert report == again


def test_gsd_command():
    report, code = run(["gsd", "--two-group", "BZ2", "--space", "sphere:3"])
    assert code == 0
    assert report["result"] == {"gsd": 1, "gauge_classes": 1, "agree": True}


def test_fusion_table_command():
    report, code = run(["fusion-table", "--two-group", "Z2"])
    assert code == 0
    assert len(report["result"]["simples"]) == 4


def test_modules_command():
    report, code = run(["modules"])
    assert code == 0
    assert set(report["result"]["checks"].values()) == {"OK"}


def test_string_fusion_command():
    report, code = run(["string-fusion", "--two-group", "Z2xZ2[alpha]",
                        "--space", "sphere:3"])
    assert code == 0 and report["result"]["failures"] == []
