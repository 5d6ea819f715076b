import json

import pytest

from ringcoding import reference
from ringcoding.cli import main
from ringcoding.documents import (
    chain_doc,
    chain_to_doc,
    dump_document,
    function_to_doc,
    modular_ring_doc,
    presentation_to_doc,
    triangular_ring_doc,
)


@pytest.fixture()
def docs(tmp_path):
    dump_document(modular_ring_doc(4), tmp_path / "z4.json")
    dump_document(triangular_ring_doc(2), tmp_path / "ml2.json")
    dump_document(
        chain_doc(["0", "1", "2", "3"], reference._SOURCE_ROWS), tmp_path / "source.json"
    )
    dump_document(chain_to_doc(reference.joint_chain()), tmp_path / "joint.json")
    dump_document(
        chain_doc(reference._VALUE_STATES, reference._VALUE_ROWS),
        tmp_path / "values.json",
    )
    dump_document(function_to_doc(reference.target_function()), tmp_path / "g.json")
    dump_document(
        presentation_to_doc(reference.presentation_z4(), ring_doc=modular_ring_doc(4)),
        tmp_path / "pres4.json",
    )
    dump_document(
        presentation_to_doc(reference.presentation_z5(), ring_doc=modular_ring_doc(5)),
        tmp_path / "pres5.json",
    )
    reducible = chain_doc(["a", "b"], [["1", "0"], ["0", "1"]])
    dump_document(reducible, tmp_path / "reducible.json")
    (tmp_path / "broken.json").write_text("{oops")
    return tmp_path


def run(args, tmp_path):
    return main(["--workspace", str(tmp_path)] + args)


def test_ring_ideals_lists_three(docs, capsys):
    assert run(["ring", "ideals", "z4.json"], docs) == 0
    out = capsys.readouterr().out
    assert "3 left ideals" in out


def test_ring_inspect_triangular(docs, capsys):
    assert run(["ring", "inspect", "ml2.json"], docs) == 0
    out = capsys.readouterr().out
    assert "order 4" in out and "Char 2" in out


def test_malformed_doc_fails_validation(docs, capsys):
    assert run(["ring", "inspect", "broken.json"], docs) == 1
    assert "error:" in capsys.readouterr().err


def test_chain_analyze_reference(docs, capsys):
    assert run(["chain", "analyze", "source.json"], docs) == 0
    out = capsys.readouterr().out
    assert "H(P|pi) = 0.1595" in out


def test_chain_analyze_value_chain(docs, capsys):
    assert run(["chain", "analyze", "values.json"], docs) == 0
    out = capsys.readouterr().out
    assert "H(P|pi) = 0.44" in out


def test_chain_analyze_subset(docs, capsys):
    assert run(["chain", "analyze", "source.json", "--subset", "0,2"], docs) == 0
    assert "stochastic complement" in capsys.readouterr().out


def test_chain_analyze_reducible(docs, capsys):
    assert run(["chain", "analyze", "reducible.json"], docs) == 1
    assert "reducible" in capsys.readouterr().err


def test_rate_single(docs, capsys):
    assert run(["rate", "single", "z4.json", "source.json"], docs) == 0
    out = capsys.readouterr().out
    assert "R0 = 0.1595" in out


def test_rate_single_wrong_argc(docs, capsys):
    assert run(["rate", "single", "z4.json"], docs) == 1


def test_rate_compute(docs, capsys):
    assert run(["rate", "compute", "g.json", "pres5.json", "joint.json"], docs) == 0
    out = capsys.readouterr().out
    assert "0.4635" in out
    assert "injective on reachable sums: False" in out


def test_rate_cover(docs, capsys):
    assert run(["rate", "cover", "joint.json"], docs) == 0
    out = capsys.readouterr().out
    assert "{1,2,3}" in out and "1.4247" in out


def test_rate_compare(docs, capsys):
    code = run(
        [
            "rate", "compare", "g.json", "joint.json",
            "--presentation", "z4=pres4.json",
            "--presentation", "z5=pres5.json",
        ],
        docs,
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "best threshold: z4" in out


def test_simulate_deterministic_output(docs, tmp_path, capsys):
    doc = {
        "kind": "simconfig",
        "ring": "z4.json",
        "source": "source.json",
        "n": 8,
        "k": 2,
        "trials": 50,
        "seed": 5,
    }
    dump_document(doc, docs / "sim.json")
    out1 = docs / "out1"
    out2 = docs / "out2"
    assert run(["-o", str(out1), "simulate", "sim.json"], docs) == 0
    assert run(["-o", str(out2), "simulate", "sim.json"], docs) == 0
    b1 = (out1 / "simresult.json").read_bytes()
    b2 = (out2 / "simresult.json").read_bytes()
    assert b1 == b2
    assert "error probability" in capsys.readouterr().out


def test_simulate_budget_refusal(docs, capsys):
    doc = {
        "kind": "simconfig",
        "ring": "z4.json",
        "source": "source.json",
        "n": 40,
        "k": 2,
        "trials": 5,
    }
    dump_document(doc, docs / "big.json")
    assert run(["simulate", "big.json"], docs) == 1
    assert "budget" in capsys.readouterr().err


def test_reproduce_case_1(docs, capsys):
    assert run(["reproduce", "1"], docs) == 0
    out = capsys.readouterr().out
    assert "pass" in out and "FAIL" not in out


def test_reproduce_emits_json(docs, capsys):
    out_dir = docs / "rep"
    assert run(["-o", str(out_dir), "reproduce", "6"], docs) == 0
    payload = json.loads((out_dir / "reproduce.json").read_text())
    assert all(row["ok"] is not False for row in payload["6"])


def test_reproduce_case_3_flags_intermediates(docs, capsys):
    assert run(["reproduce", "3"], docs) == 0
    out = capsys.readouterr().out
    assert "info" in out
    assert "do not match the published intermediates" in out
