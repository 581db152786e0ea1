import json
import subprocess
import sys

import pytest

from higgstwist.cli import build_parser, cmd_example, cmd_twist, cmd_verify, corpus_names, main
from higgstwist.errors import ManifestError, UnknownExample
from higgstwist.manifest import emit_manifest, manifest_from_dict, parse_manifest

REQUIRED = {
    "a1-two-lifts", "a1-three-lifts", "gm-lifts", "a2-rank2",
    "a2-rank3-taylor", "fq-base", "nontrivial-transitions",
}


def base_manifest():
    return json.loads(cmd_example("a1-two-lifts"))


def write(tmp_path, data, name="m.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


# -- manifest ---------------------------------------------------------------


def test_corpus_contents():
    assert REQUIRED <= set(corpus_names())


def test_builtin_example_parses():
    m = parse_manifest(cmd_example("a1-two-lifts"))
    assert (m.p, m.dim, m.rank) == (5, 1, 2)
    assert [P.name for P in m.patches] == ["a", "b"]


@pytest.mark.parametrize("name", sorted(REQUIRED | {"a2-single"}))
def test_corpus_is_canonical(name):
    text = cmd_example(name)
    m = parse_manifest(text)
    assert emit_manifest(m) == text
    assert parse_manifest(emit_manifest(m)) == m


def test_nontrivial_transitions_are_nontrivial():
    m = parse_manifest(cmd_example("nontrivial-transitions"))
    assert any(not M.is_identity() for M in m.higgs.transitions.values())


def test_fq_base_uses_extension_field():
    m = parse_manifest(cmd_example("fq-base"))
    assert m.field.e == 2


def test_rank3_taylor_has_two_coordinates_and_exponent_two():
    m = parse_manifest(cmd_example("a2-rank3-taylor"))
    assert (m.dim, m.exponent, m.rank) == (2, 2, 3)
    # |j| = 2 terms with a nonzero matrix coefficient exist
    J1, J2 = m.higgs.theta["a"]
    assert not (J1 * J1).is_zero() and not (J1 * J2).is_zero()


def test_exponent_bound_rejected():
    data = base_manifest()
    data["exponent"] = 5
    with pytest.raises(ManifestError, match="exponent bound") as exc:
        manifest_from_dict(data)
    assert exc.value.path == "exponent"


def test_bad_lift_rejected():
    data = base_manifest()
    data["patches"][1]["lift"] = ["t1^5 + t1"]
    with pytest.raises(ManifestError, match="patch validation") as exc:
        manifest_from_dict(data)
    assert exc.value.path == "patches[1].lift"


def test_json_syntax_error_has_line():
    text = cmd_example("a1-two-lifts").replace('"dim": 1,', '"dim": 1')
    with pytest.raises(ManifestError) as exc:
        parse_manifest(text)
    assert exc.value.line == 9
    assert str(exc.value).startswith("line 9")


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.pop("p"), "<root>"),
        (lambda d: d.update(p="5"), "p"),
        (lambda d: d.update(dim=0), "dim"),
        (lambda d: d["patches"][0].update(inverted=[2]), "patches[0].inverted"),
        (lambda d: d["patches"][0].update(lift=["t1^^5"]), "patches[0].lift[0]"),
        (lambda d: d["patches"][1].update(name="a"), "patches[1].name"),
        (lambda d: d["bundle"]["theta"].pop("b"), "bundle.theta.b"),
        (lambda d: d["bundle"]["theta"]["a"][0].pop(), "bundle.theta.a[0]"),
        (lambda d: d["bundle"]["transitions"][0].update(to="zz"), "bundle.transitions[0].to"),
        (lambda d: d["bundle"]["theta"].update(a=[[["0", "1"], ["1", "0"]]]), "bundle"),
        (lambda d: d.update(e=2, modulus=[1, 0, 1]), "modulus"),
    ],
)
def test_semantic_errors_are_located(mutate, path):
    data = base_manifest()
    mutate(data)
    with pytest.raises(ManifestError) as exc:
        manifest_from_dict(data)
    assert exc.value.path == path


def test_unknown_example():
    with pytest.raises(UnknownExample) as exc:
        cmd_example("unknown")
    assert "a1-two-lifts" in str(exc.value)


# -- commands -----------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(REQUIRED | {"a2-single"}))
def test_verify_corpus(name, capsys):
    assert cmd_verify(f"builtin:{name}") == 0
    out = capsys.readouterr().out
    assert "overall: VERIFIED" in out
    assert "FAIL" not in out


def test_verify_a1_all_checks_pass(tmp_path):
    report = tmp_path / "r.json"
    assert main(["verify", "builtin:a1-two-lifts", "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["overall"] == "VERIFIED"
    assert data["records"] and all(r["passed"] for r in data["records"])


def test_verify_corrupt_exits_one(capsys):
    assert main(["verify", "builtin:a1-two-lifts", "--corrupt", "G:0"]) == 1
    out = capsys.readouterr().out
    assert "FAIL  gluing-cocycle" in out
    assert "overall: FAILED" in out


def test_verify_missing_file_exits_two(capsys):
    assert main(["verify", "/nonexistent/manifest.json"]) == 2
    assert "cannot read manifest" in capsys.readouterr().err


def test_verify_invalid_manifest_exits_two(tmp_path, capsys):
    data = base_manifest()
    data["exponent"] = 7
    assert main(["verify", write(tmp_path, data)]) == 2
    assert "exponent bound" in capsys.readouterr().err


def test_verify_bad_hook_exits_two():
    assert main(["verify", "builtin:a1-two-lifts", "--corrupt", "nope:0"]) == 2


def test_verify_json_format_and_check_subset(capsys):
    assert main(["verify", "builtin:a1-three-lifts", "--format", "json", "--checks", "di-cocycle,exp-taylor"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {r["kind"] for r in data["records"]} == {"input-validation", "di-cocycle", "exp-taylor"}


def test_verify_unknown_check_kind_exits_two():
    assert main(["verify", "builtin:a1-two-lifts", "--checks", "bogus"]) == 2


def test_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    outs = []
    for path in paths:
        assert main(["verify", "builtin:nontrivial-transitions", "--report", str(path)]) == 0
        outs.append(capsys.readouterr().out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert outs[0] == outs[1]


def test_twist_output(tmp_path):
    out = tmp_path / "atlas.json"
    assert cmd_twist("builtin:a1-two-lifts", str(out)) == 0
    data = json.loads(out.read_text())
    ab = next(g for g in data["gluing"] if (g["from"], g["to"]) == ("a", "b"))
    assert ab["G"] == [["1", "4*t1^2"], ["0", "1"]]
    assert ab["z"] == ["4*t1^2"]
    assert data["connections"]["a"] == [["0", "t1^4*dt1"], ["0", "0"]]


def test_twist_single_patch(tmp_path):
    out = tmp_path / "atlas.json"
    assert cmd_twist("builtin:a2-single", str(out)) == 0
    data = json.loads(out.read_text())
    assert list(data["connections"]) == ["a"]
    assert data["gluing"] == []


def test_twist_invalid_manifest_writes_nothing(tmp_path):
    out = tmp_path / "atlas.json"
    assert main(["twist", write(tmp_path, "{not json"), str(out)]) == 2
    assert not out.exists()


def test_example_and_list(capsys):
    assert main(["example", "gm-lifts"]) == 0
    assert json.loads(capsys.readouterr().out)["p"] == 3
    assert main(["list-examples"]) == 0
    listed = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    assert listed == corpus_names()
    assert main(["example", "unknown"]) == 2


def test_corrupt_flag_hidden_from_help(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "--help"])
    assert "--corrupt" not in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "higgstwist", "verify", "builtin:a1-two-lifts"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.rstrip().endswith("overall: VERIFIED (26/26 checks passed)")
