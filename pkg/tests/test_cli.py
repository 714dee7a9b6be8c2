import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from dcmedia import cli
from dcmedia.serialize import DocumentError, MediumDocument, dumps, loads, to_jsonable

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def _schema(name):
    return json.loads((SCHEMAS / name).read_text())


MEDIUM_SCHEMA = _schema("medium_document.schema.json")
REPORT_SCHEMA = _schema("report_document.schema.json")
REGISTRY = Registry().with_resource("medium_document.schema.json",
                                    Resource.from_contents(MEDIUM_SCHEMA))
MEDIUM_VALIDATOR = Draft202012Validator(MEDIUM_SCHEMA)
REPORT_VALIDATOR = Draft202012Validator(REPORT_SCHEMA, registry=REGISTRY)


def documents():
    rng = np.random.default_rng(0)
    bo = rng.standard_normal((4, 4))
    bo[3, 3] -= np.trace(bo)
    P = rng.standard_normal((4, 4))
    return {
        "qdcm": MediumDocument("qdcm", {"alpha": 0.5, "M": 1.2, "Q": rng.standard_normal((4, 4)),
                                        "D": rng.standard_normal(6), "C": rng.standard_normal(6)}),
        "pdcm": MediumDocument("pdcm", {"alpha": 0.1, "M": 0.7, "P": rng.standard_normal((4, 4)),
                                        "D": rng.standard_normal(6), "C": rng.standard_normal(6)}),
        "sdcm": MediumDocument("sdcm", {"alpha": 0.2, "Bo": bo, "A": rng.standard_normal(6),
                                        "B": rng.standard_normal(6)}),
        "q_medium": MediumDocument("q_medium", {"M": 1.0, "Q": np.diag([1.0, 1, 1, -1])}),
        "p_medium": MediumDocument("p_medium", {"M": 1.3, "P": P}),
        "uniaxial": MediumDocument("uniaxial", {"eps_t": 2, "eps_z": 5, "mu_t": 3, "mu_z": 7}),
        "gibbsian": MediumDocument("gibbsian", {"eps": np.eye(3) * (2 + 0.5j),
                                                "xi": np.zeros((3, 3)),
                                                "zeta": np.zeros((3, 3)), "mu": np.eye(3)}),
        "raw6x6": MediumDocument("raw6x6", {"M": rng.standard_normal((6, 6))}),
        "axion": MediumDocument("qdcm", {"alpha": 2.0, "M": 0.0, "Q": np.eye(4),
                                         "D": np.zeros(6), "C": np.zeros(6)}),
    }


DOCS = documents()


@pytest.fixture
def write_doc(tmp_path):
    def write(name_or_text):
        text = DOCS[name_or_text].dumps() if name_or_text in DOCS else name_or_text
        p = tmp_path / "in.json"
        p.write_text(text)
        return str(p)
    return write


def run(*argv):
    code, report, _ = cli.run(list(argv))
    REPORT_VALIDATOR.validate(to_jsonable(report))
    return code, report


@pytest.mark.parametrize("name", sorted(DOCS))
def test_documents_validate_and_round_trip(name):
    text = DOCS[name].dumps()
    MEDIUM_VALIDATOR.validate(json.loads(text))
    assert loads(text).dumps() == text
    assert text.endswith("\n") and "-0," not in text


@pytest.mark.parametrize("name", sorted(DOCS))
def test_build_every_kind(name, write_doc):
    code, report = run("build", "--input", write_doc(name))
    assert code == 0, report.get("error")
    assert report["results"]["M"].shape == (6, 6)


def test_build_reports_witness(write_doc):
    code, report = run("build", "--input", write_doc("qdcm"))
    w = report["results"]["witness"]
    assert report["results"]["class"] == "QDCM" and w["gamma"] == 1 and w["residual"] < 1e-9


def test_ho_decompose(write_doc):
    code, report = run("ho-decompose", "--input", write_doc("sdcm"))
    assert code == 0
    assert max(report["results"]["checks"].values()) < 1e-12


def test_detect_uniaxial(write_doc):
    code, report = run("detect-dcm", "--input", write_doc("uniaxial"))
    res = report["results"]
    assert code == 0 and res["found"] and res["te_tm_unique"]
    assert any("TE" in n and "TM" in n for n in res["notes"])
    assert min(w["residual"] for w in res["witnesses"]) < 1e-8


def test_dispersion_axion_warns(write_doc):
    code, report = run("dispersion", "--input", write_doc("axion"))
    assert code == 0
    assert not np.any(report["results"]["quartic"])
    assert any("no dispersion constraint" in w for w in report["warnings"])


def test_dispersion_sdcm(write_doc):
    code, report = run("dispersion", "--input", write_doc("sdcm"), "--samples", "2")
    res = report["results"]
    assert code == 0 and res["factor_check"]["max_rel_err"] < 1e-8
    assert len(res["waves"]) == 8
    for w in res["waves"]:
        assert w["residual_a" if w["factor"] == 0 else "residual_b"] < 1e-7


def test_planewave(write_doc):
    code, report = run("planewave", "--input", write_doc("q_medium"), "--nu", "0,0,1,1")
    assert code == 0 and max(report["results"]["orthogonality"]) < 1e-12
    code, report = run("planewave", "--input", write_doc("pdcm"), "--seed", "4")
    assert code == 0 and report["results"]["classification"]["tag"] in ("AWave", "Both")
    code, report = run("planewave", "--input", write_doc("q_medium"), "--nu", "0,0,1,2")
    assert code == 3 and report["error"]["kind"] == "numeric"
    code, report = run("planewave", "--input", write_doc("q_medium"), "--nu", "1,2")
    assert code == 2


def test_convert(write_doc):
    code, report = run("convert", "--input", write_doc("uniaxial"), "--to", "gibbsian")
    assert code == 0 and report["results"]["round_trip_error"] < 1e-10
    MEDIUM_VALIDATOR.validate(to_jsonable(report["results"]["document"]))
    code, report = run("convert", "--input", write_doc("sdcm"))
    assert code == 0 and report["results"]["document"]["kind"] == "raw6x6"


def test_convert_singular_mu(write_doc):
    code, report = run("convert", "--input", write_doc("raw6x6"), "--to", "gibbsian")
    assert code == 0
    doc = MediumDocument("raw6x6", {"M": np.eye(6)}).dumps()
    code, report = run("convert", "--input", write_doc(doc), "--to", "gibbsian")
    assert code == 3 and "mu_inv" in report["error"]["message"]


def test_classify_quadratic(write_doc):
    code, report = run("classify-quadratic", "--input", write_doc("p_medium"))
    assert code == 0
    assert report["results"]["kind"] == "P-medium" and report["results"]["residual"] < 1e-8
    code, report = run("classify-quadratic", "--input", write_doc("q_medium"), "--alpha", "-1")
    assert report["results"]["kind"] == "Q-medium"
    code, report = run("classify-quadratic", "--input", write_doc("raw6x6"))
    assert code == 2 and "quadratic equation" in report["error"]["message"]
    code, report = run("classify-quadratic", "--input", write_doc("axion"))
    assert code == 3 and "degenerate" in report["error"]["message"]


@pytest.mark.parametrize("text, fragment", [
    ('{"kind": "qdcm",\n  "parameters": }', "line 2 column"),
    ('{"kind": "cube", "parameters": {}}', "unknown kind"),
    ('{"kind": "raw6x6", "parameters": {"M": [[1, 2]]}}', "expected shape"),
    ('{"kind": "raw6x6", "parameters": {}}', "missing"),
    ('[1, 2]', "JSON object"),
    ('{"schema_version": "9", "kind": "raw6x6", "parameters": {}}', "schema_version"),
])
def test_invalid_input_exit_2(text, fragment, write_doc):
    code, report = run("build", "--input", write_doc(text))
    assert code == 2 and report["error"]["kind"] == "validation"
    assert fragment in report["error"]["message"]
    assert "results" not in report


def test_missing_file_and_bad_tol(tmp_path):
    code, report = run("build", "--input", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in report["error"]["message"]
    code, report = run("build", "--input", str(tmp_path / "nope.json"), "--tol", "-1")
    assert code == 2


def test_same_seed_same_bytes(write_doc, tmp_path, capsys):
    path = write_doc("pdcm")
    outs = []
    for _ in range(2):
        assert cli.main(["dispersion", "--input", path, "--seed", "7"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    cli.main(["dispersion", "--input", path, "--seed", "8"])
    assert capsys.readouterr().out != outs[0]
    out = tmp_path / "r.json"
    cli.main(["dispersion", "--input", path, "--seed", "7", "--output", str(out)])
    assert out.read_text() == outs[0]


def test_report_round_trip_bytes(write_doc, capsys):
    cli.main(["build", "--input", write_doc("sdcm")])
    text = capsys.readouterr().out
    assert dumps(json.loads(text)) == text
    REPORT_VALIDATOR.validate(json.loads(text))


def test_canonical_writer():
    assert dumps({"b": [1.0, -0.0], "a": 1 + 2j}) == '{\n  "a": [1, 2],\n  "b": [1, 0]\n}\n'
    assert dumps({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}\n'
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})
    with pytest.raises(DocumentError):
        loads('{"kind": "raw6x6", "parameters": {"M": 3}}')


def test_module_entry_point(write_doc):
    proc = subprocess.run([sys.executable, "-m", "dcmedia", "build", "--input", write_doc("qdcm")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "build"
