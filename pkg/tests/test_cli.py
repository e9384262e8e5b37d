import json

import pytest

from finsheaf.cli import main
from finsheaf.cochain import cech_diff
from finsheaf.finsite import load_space
from finsheaf.gerbe import translate_gerbe, trivial_gerbe
from finsheaf.sheaf import constant_sheaf
from finsheaf.abgrp import cyclic_group
from finsheaf.cli import whole_cover


C4_COVER = None


def c4_cover_comps():
    x = load_space("C4")
    return [sorted(x.down("c")), sorted(x.down("d"))]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cohomology_json_output(capsys):
    code, out, _ = run(capsys, "cohomology", "C4", "Z", "1")
    assert code == 0
    assert out == '{"H":"Z","rank":1,"torsion":[]}\n'


def test_cohomology_deterministic(capsys):
    _, first, _ = run(capsys, "cohomology", "C4", "Z/2", "0")
    _, second, _ = run(capsys, "cohomology", "C4", "Z/2", "0")
    assert first == second


def test_csv_format(capsys):
    code, out, _ = run(capsys, "cohomology", "SIERP", "Z", "0", "--format", "csv")
    assert code == 0
    assert out == "H,Z\nrank,1\ntorsion,\n"


def test_torsor_classification(capsys):
    code, out, _ = run(capsys, "torsors", "C4", "Z/2")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 2
    assert data["torsion"] == [2]


def test_bad_sheaf_spec_exits_2(capsys):
    code, _, err = run(capsys, "cohomology", "C4", "Q", "1")
    assert code == 2
    assert "sheaf" in err


def test_missing_file_exits_2(capsys):
    code, _, _ = run(capsys, "rtc", "validate", "/nonexistent.json")
    assert code == 2


def test_rtc_validate_neutral(tmp_path, capsys):
    from finsheaf.rtc import neutral_rtc
    from finsheaf.semisimp import cech_covering

    x = load_space("C4")
    F = constant_sheaf(x, cyclic_group(2))
    h = cech_covering(whole_cover(x, c4_cover_comps()), depth=3)
    width = neutral_rtc(h, 1, F).phi.group.ngens
    f = tmp_path / "neutral.json"
    f.write_text(
        json.dumps(
            {
                "space": "C4",
                "sheaf": "Z/2",
                "degree": 1,
                "cover": c4_cover_comps(),
                "torsor": None,
                "phi": [0] * width,
            }
        )
    )
    code, out, _ = run(capsys, "rtc", "validate", str(f))
    assert code == 0
    assert json.loads(out) == {"valid": True}


def test_gerbe_check_exit_codes(tmp_path, capsys):
    x = load_space("C4")
    comps = c4_cover_comps()
    F = constant_sheaf(x, cyclic_group(2))
    g0 = trivial_gerbe(whole_cover(x, comps), F)
    base = {
        "space": "C4",
        "sheaf": "Z/2",
        "cover": comps,
        "pair_torsor": None,
        "multiplication": g0.mu.coords,
    }
    ok = tmp_path / "trivial.json"
    ok.write_text(json.dumps(base))
    code, out, _ = run(capsys, "gerbe", "check", str(ok))
    assert code == 0 and json.loads(out) == {"associative": True}

    sg2 = F.sections(g0.h.level(2))
    d2 = cech_diff(g0.h, F, 2)
    t = next(
        sg2.group.gen(i)
        for i in range(sg2.group.ngens)
        if not d2(sg2.group.gen(i)).is_zero()
    )
    bad = tmp_path / "perturbed.json"
    bad.write_text(json.dumps(dict(base, multiplication=translate_gerbe(g0, t).mu.coords)))
    code, _, err = run(capsys, "gerbe", "check", str(bad))
    assert code == 1
    assert "q_alt(mu) != 0" in err


def test_selftest_green(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    data = json.loads(out)
    assert all(v == "ok" for v in data["checks"].values())
