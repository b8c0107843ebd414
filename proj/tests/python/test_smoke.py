"""End-to-end smoke tests for the python bindings."""

import os

import pytest

import cqproof

DATA = os.environ.get("CQPROOF_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def read(name):
    with open(os.path.join(DATA, name)) as f:
        return f.read()


@pytest.fixture(scope="module")
def example():
    return read("example1.kb"), read("example1.q")


def test_prove_example(example):
    kb, query = example
    r = cqproof.prove(kb, query, deriver="sk", measure="tree")
    assert r["value"] == 39
    assert r["size"] == 11
    assert r["tree_size"] == 39
    assert r["depth"] == 5
    assert "digraph proof" in r["dot"]
    assert cqproof.validate(kb, r["json"], deriver="sk")["ok"]


def test_tree_shaped_fast_agrees(example):
    kb, query = example
    assert cqproof.is_tree_shaped(query)
    fast = cqproof.prove(kb, query, tree_shaped_fast=True)
    assert fast["value"] == 39


def test_decide_example(example):
    kb, query = example
    assert cqproof.decide(kb, query, bound=39)
    assert not cqproof.decide(kb, query, bound=38)
    assert cqproof.decide(kb, query, bound=11, measure="size")


def test_translate_round_trip(example):
    kb, query = example
    r = cqproof.prove(kb, query)
    cq_proof = cqproof.translate(kb, r["json"], to="cq")
    assert cqproof.validate(kb, cq_proof, deriver="cq")["ok"]
    back = cqproof.translate(kb, cq_proof, to="sk")
    assert cqproof.validate(kb, back, deriver="sk")["ok"]


def test_prerequisite_is_checked(example):
    kb, _ = example
    bad_query = "cqproof/1\nq() :- Nope(x).\n"
    with pytest.raises(ValueError):
        cqproof.decide(kb, bad_query, bound=5)


def test_temporal_eval_and_prove():
    kb = "cqproof/1\nA sub B.\n"
    temporal = "cqproof/1\nA(a)@[0,5].\nquery q(x) : BOXP[1,2] { B(x) } .\nanswers a.\n"
    intervals = cqproof.eval_temporal(kb, temporal)
    assert intervals == [(-1, 3)]
    r = cqproof.temporal_prove(kb, temporal, at_lo=0, at_hi=2)
    assert r["value"] > 0
    assert ("-1", "3") in r["certain_intervals"]


def test_next_form_expansion():
    kb = "cqproof/1\n"
    temporal = "cqproof/1\nA(a)@[0,3].\nquery q : BOXP[0,2] { A($a) } .\n"
    out = cqproof.expand_next_form(kb, temporal)
    assert out["equivalent"]


def test_fixtures():
    chain = cqproof.gen_chain("cqproof/1\nq(x) :- A(x).\n", 3)
    assert chain["bound"] == 3
    assert not cqproof.decide(chain["kb"], chain["query"], bound=chain["bound"])

    sat = cqproof.gen_sat([[1], [-1, 2]])
    assert sat["expected"]
    assert cqproof.decide(
        sat["kb"], sat["query"], bound=sat["bound"], deriver="sk-prime", measure="tree"
    )
    unsat = cqproof.gen_sat([[1], [-1]])
    assert not unsat["expected"]
    assert not cqproof.decide(
        unsat["kb"], unsat["query"], bound=unsat["bound"], deriver="sk-prime", measure="tree"
    )
