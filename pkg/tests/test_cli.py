import json

import jsonschema
import pytest

from klrtorsion.bmp import ComparisonReport
from klrtorsion.cli import RunConfig, main, schema_path
from klrtorsion.exact import GradedRank
from klrtorsion.weyl import KS_X, KS_Y

KS_D = "2,4,4,4,2"
SIGMA = "[1,2]+[2,3]+[3,4]+[4,5]+[1,4]+[2,5]"
PI = "2[3,3]+2[1,2]+2[4,5]+2[2,4]"

CASES = [
    (["roots", "--quiver", "a5.qv"], ("roots", None)),
    (["strata", "enumerate", "--dim", "1,2,1,0,0"], ("strata", "enumerate")),
    (["strata", "order", "--dim", KS_D, "--lam", SIGMA, "--mu", PI], ("strata", "order")),
    (["strata", "info", "--dim", KS_D, "--lam", PI], ("strata", "info")),
    (["seqcount", "--dim", KS_D], ("seqcount", None)),
    (["klpoly", "--n", "4", "--y", "1234", "--w", "3412"], ("klpoly", None)),
    (["zelevinsky", "--to-multisegment", "62845173"], ("zelevinsky", None)),
    (["zelevinsky", "--to-perm", "[1,2]+[2,3]", "--n", "2"], ("zelevinsky", None)),
    (["ks", "count", "--q", "3", "--method", "brute"], ("ks", "count")),
    (["ks", "count", "--q", "9"], ("ks", "count")),
    (["ks", "dimension"], ("ks", "dimension")),
    (["bmp", "probe", "--y", "1324", "--w", "3412", "--p", "2"], ("bmp", "probe")),
    (["decomp-matrix", "--n", "3"], ("decomp-matrix", None)),
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def validate(doc, command, action=None):
    schema = json.loads(schema_path(command, action).read_text())
    jsonschema.validate(doc, schema)


@pytest.mark.parametrize("argv, schema", CASES, ids=lambda x: " ".join(x) if isinstance(x, list) else "")
def test_output_validates_and_is_deterministic(argv, schema, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    validate(json.loads(out), *schema)
    code2, out2, _ = run(argv, capsys)
    assert code2 == 0 and out2 == out


def test_roots_example(capsys):
    _, out, _ = run(["roots", "--quiver", "a5.qv"], capsys)
    doc = json.loads(out)
    assert doc["count"] == 15
    assert sorted(map(tuple, doc["intervals"])) == [(i, j) for i in range(1, 6) for j in range(i, 6)]


def test_klpoly_example(capsys):
    _, out, _ = run(["klpoly", "--n", "4", "--y", "1234", "--w", "3412"], capsys)
    assert json.loads(out)["P"] == "1+q"


def test_human_summary_goes_to_stderr(capsys):
    _, out, err = run(["seqcount", "--dim", "1,1"], capsys)
    assert json.loads(out)["count"] == "2"
    assert "2" in err and not err.lstrip().startswith("{")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "roots.json"
    code, out, _ = run(["-o", str(target), "roots"], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["count"] == 15


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["klpoly", "--y", "12"],
        ["klpoly", "--y", "1134", "--w", "1234"],
        ["klpoly", "--n", "3", "--y", "1234", "--w", "3412"],
        ["bmp", "probe", "--y", "12", "--w", "21", "--p", "4"],
        ["bmp", "probe", "--y", "12", "--w", "21", "--p", "2", "--budget", "0"],
        ["ks", "count", "--q", "6"],
        ["ks", "count", "--q", "5", "--method", "brute"],
        ["strata", "info", "--dim", "1,1,1,1,1", "--lam", "[1,6]"],
        ["strata", "enumerate", "--dim", "1,2,1", "--quiver", "a5.qv"],
        ["strata", "info", "--dim", "1,1,0,0,0", "--lam", "[3,3]"],
        ["roots", "--quiver", "/no/such/file.qv"],
        ["zelevinsky", "--to-perm", "[1,2]"],
        ["predict-identity", "--report", "/no/such/report.json"],
    ],
)
def test_domain_and_usage_errors_exit_1(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1
    assert out == "" and err


def test_budget_exhaustion_exits_2_with_partial_report(capsys):
    argv = ["bmp", "probe", "--y", "1234", "--w", "4321", "--p", "2", "--max-unknowns", "5"]
    code, out, err = run(argv, capsys)
    assert code == 2 and "budget" in err
    doc = json.loads(out)
    validate(doc, "bmp", "probe")
    assert doc["budget_exhausted"] and doc["verdict"] == "INCOMPLETE"
    assert doc["interval"]["vertices"] == 24


def test_ks_dimension_budget(capsys):
    code, out, _ = run(["ks", "dimension", "--budget", "1e-9"], capsys)
    assert code == 2
    validate(json.loads(out), "ks", "dimension")


def _write_report(path, divergent):
    r = ComparisonReport(
        KS_Y, KS_X, 2,
        {KS_Y: GradedRank((0, 2))},
        {KS_Y: GradedRank((0, 2, 2)) if divergent else GradedRank((0, 2))},
        [KS_Y] if divergent else [],
        False,
        {"vertices": 712, "edges": 3160, "vertices_by_length": {}},
    )
    path.write_text(json.dumps(r.to_json()))


def test_predict_identity(tmp_path, capsys):
    rep = tmp_path / "r.json"
    _write_report(rep, divergent=True)
    code, out, _ = run(["predict-identity", "--report", str(rep)], capsys)
    assert code == 0
    doc = json.loads(out)
    validate(doc, "predict-identity")
    assert doc["decomposition"] == "[L(π, Z_2) ⊗ F_2] = [L(π, F_2)] + [L(σ, F_2)]"
    code, out, _ = run(
        ["predict-identity", "--report", str(rep), "--lower", f"low={PI}", "--upper", f"high={SIGMA}"], capsys
    )
    assert code == 0 and "L(low, F_2)" in json.loads(out)["decomposition"]


def test_predict_identity_refuses_clean_report(tmp_path, capsys):
    rep = tmp_path / "r.json"
    _write_report(rep, divergent=False)
    code, _, err = run(["predict-identity", "--report", str(rep)], capsys)
    assert code == 1 and "no torsion" in err
    _write_report(rep, divergent=True)
    code, _, err = run(["predict-identity", "--report", str(rep), "--lower", "sigma", "--upper", "pi"], capsys)
    assert code == 1 and "closure order" in err


def test_run_config_invariants():
    RunConfig("bmp", p=3, budget=1.0)
    with pytest.raises(ValueError):
        RunConfig("bmp", p=6)
    with pytest.raises(ValueError):
        RunConfig("bmp", p=2, budget=-1.0)


def test_every_schema_is_valid():
    from klrtorsion.cli import SCHEMA_DIR

    files = sorted(SCHEMA_DIR.glob("*.json"))
    assert len(files) == 12
    for f in files:
        jsonschema.Draft202012Validator.check_schema(json.loads(f.read_text()))
