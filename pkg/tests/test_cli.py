import json
from pathlib import Path

import pytest

from cyclogaudin.cli import EXIT, config_hash, main, parse_config, ConfigError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def sl3_doc(**changes):
    doc = json.loads((CONFIGS / "sl3_flip_m2.json").read_text())
    doc.update(changes)
    return doc


def run(args, tmp_path):
    return main(list(args) + ["--runs", str(tmp_path / "runs")])


def run_dir(tmp_path, doc):
    return tmp_path / "runs" / config_hash(doc)


def test_validate_ok_and_report(tmp_path, capsys):
    assert run(["validate", str(CONFIGS / "sl3_flip_m2.json")], tmp_path) == EXIT["ok"]
    out = capsys.readouterr().out
    assert "lambda0" in out.lower() or "λ" in out


@pytest.mark.parametrize("change,code", [
    ({"sites": [{"z": 0, "weight": [1, 0]}, {"z": 2, "weight": [1, 0]}]}, "validation"),
    ({"sites": [{"z": 1, "weight": [1, 0]}, {"z": -1, "weight": [1, 0]}]}, "validation"),
    ({"automorphism": {"permutation": [1, 1], "phases": [0, 0]}}, "validation"),
    ({"sites": [{"z": 1, "weight": [1, 0]}, {"z": 2, "weight": [-1, 0]}]}, "validation"),
    ({"algebra": {"series": "G", "rank": 2}}, "validation"),
    ({"bethe": {"m": 1, "colors": [3]}}, "validation"),
    ({"sites": "nope"}, "parse"),
    ({"bethe": {"m": 2, "colors": [1]}}, "parse"),
    ({"T": "2"}, "parse"),
])
def test_validation_exit_codes(tmp_path, change, code):
    cmd = "bethe" if "bethe" in change else "validate"
    assert run([cmd, write(tmp_path, sl3_doc(**change))], tmp_path) == EXIT[code]


def test_broken_json_and_missing_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["validate", str(p)], tmp_path) == EXIT["parse"]
    assert run(["validate", str(tmp_path / "missing.json")], tmp_path) == EXIT["parse"]


def test_parse_config_conventions():
    doc = sl3_doc(sites=[{"z": "3/2", "weight": ["1", 0]}, {"z": [0.5, -2], "weight": [1, 0], "module": "verma"}])
    spec, colors, opts = parse_config(doc)
    assert spec.permutation == (1, 0)
    assert colors == (0, 1)
    assert spec.z[0] == __import__("fractions").Fraction(3, 2)
    assert spec.z[1] == complex(0.5, -2)
    assert spec.modules == ("irrep", "verma")
    with pytest.raises(ConfigError):
        parse_config([])


def test_spectrum_cached_and_forced(tmp_path):
    cfg = str(CONFIGS / "sl3_flip_m2.json")
    doc = json.loads(Path(cfg).read_text())
    assert run(["spectrum", cfg], tmp_path) == 0
    d = run_dir(tmp_path, doc)
    first = (d / "spectrum.csv").read_bytes()
    assert len(first.decode().strip().splitlines()) == 4
    assert run(["spectrum", cfg], tmp_path) == 0
    assert (d / "spectrum.csv").read_bytes() == first
    assert run(["spectrum", cfg, "--force", "--out", str(tmp_path / "copy.csv")], tmp_path) == 0
    assert (d / "spectrum.csv").read_bytes() == first
    assert (tmp_path / "copy.csv").read_bytes() == first
    records = json.loads((d / "record.json").read_text())
    assert [r["cached"] for r in records] == [False, True, False]
    assert all(r["config_hash"] == d.name for r in records)
    assert run(["spectrum", cfg, "--site", "2"], tmp_path) == 0
    assert (d / "spectrum-site2.csv").exists()
    assert run(["spectrum", cfg, "--site", "3"], tmp_path) == EXIT["validation"]
    assert run(["spectrum", cfg, "--cap", "4", "--force"], tmp_path) == EXIT["validation"]


def test_bethe_then_verify(tmp_path):
    cfg = str(CONFIGS / "sl3_flip_m2.json")
    doc = json.loads(Path(cfg).read_text())
    assert run(["bethe", cfg], tmp_path) == 0
    d = run_dir(tmp_path, doc)
    sols = json.loads((d / "solutions.json").read_text())
    assert sols["m"] == 2 and sols["config_hash"] == d.name
    assert len(sols["solutions"]) == 1
    before = (d / "solutions.json").read_bytes()
    assert run(["bethe", cfg], tmp_path) == 0
    assert (d / "solutions.json").read_bytes() == before
    assert run(["verify", cfg], tmp_path) == 0
    certs = json.loads((d / "certificates.json").read_text())
    assert certs and all(c["ok"] for c in (certs if isinstance(certs, list) else certs["certificates"]))

    # perturbed roots fail verification
    bad = json.loads(before)
    bad["solutions"][0]["roots"][0][0] += 1e-3
    p = tmp_path / "bad_solutions.json"
    p.write_text(json.dumps(bad))
    assert run(["verify", cfg, "--solutions", str(p)], tmp_path) == EXIT["verification"]


def test_verify_without_solutions(tmp_path):
    cfg = write(tmp_path, sl3_doc(bethe={"m": 1, "colors": [1]}))
    assert run(["verify", cfg], tmp_path) in (EXIT["verification"], EXIT["parse"])


def test_m0_bethe_and_verify(tmp_path):
    cfg = write(tmp_path, sl3_doc(bethe={"m": 0}))
    assert run(["bethe", cfg], tmp_path) == 0
    assert run(["verify", cfg], tmp_path) == 0


def test_no_solution_exit(tmp_path):
    # colour 2 decouples from the sites in the inner model: no admissible root
    doc = json.loads((CONFIGS / "sl3_inner_T3.json").read_text())
    doc["bethe"] = {"m": 1, "colors": [2]}
    doc["solver"] = {"starts": 8}
    assert run(["bethe", write(tmp_path, doc)], tmp_path) == EXIT["no_solution"]


def test_repro_and_selftest(tmp_path, capsys):
    assert main(["repro-sl3"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert main(["repro-sl3", "--z1", "1", "--z2", "-1"]) == EXIT["validation"]
    assert main(["selftest", "--subset", "t1"]) == 0
    assert main(["selftest", "--corrupt-sign"]) == EXIT["verification"]
    assert "FAIL" in capsys.readouterr().out


def test_corrupt_sign_leaves_shared_algebra_intact():
    from cyclogaudin.lie_core import build_simple_lie_algebra
    from cyclogaudin.selftest import corrupted_algebra
    alg = build_simple_lie_algebra("A", 2)
    before = {k: dict(v) for k, v in alg.table.items()}
    bad = corrupted_algebra("A", 2)
    assert bad is not alg and bad.table != alg.table
    assert alg.table == before
