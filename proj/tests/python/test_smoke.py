import os
from pathlib import Path

import pytest

import vccts

DEMOS = Path(os.environ.get("VCCTS_DEMO_DIR", Path(__file__).resolve().parents[2] / "demos"))


@pytest.fixture
def interleaving():
    return vccts.load(DEMOS / "interleaving.vccts")


def test_processes_in_file_order(interleaving):
    assert interleaving.processes == ["par", "interleaved"]


def test_transmitter_loops():
    m = vccts.load(DEMOS / "transmitter.vccts")
    space = m.reachable("S")
    assert space["status"] == "complete"
    assert len(space["states"]) == 1


def test_weak_bisim_witness(interleaving):
    r = interleaving.weak_bisim("par", "interleaved", universe=[1, 2])
    assert r["verdict"] == "not"
    assert r["witness"][0]["size"] == 2


def test_barbed_bisim(interleaving):
    r = interleaving.barbed_bisim("par", "interleaved")
    assert r["verdict"] == "not"
    assert r["barb"] == ["~f", "~g"]


def test_stratified_agrees(interleaving):
    r = interleaving.stratified_bisim("par", "interleaved", 3, universe=[1, 2])
    assert r["verdict"] == "not"


def test_inline_terms_and_padding(interleaving):
    assert interleaving.weak_bisim("par", "~f(1).(0) | ~g(2).(0) | *")["verdict"] == "bisimilar"
    assert interleaving.key("par") == interleaving.key("~g(2).(0) | ~f(1).(0)")


def test_distinguishing_context(interleaving):
    c = interleaving.distinguishing_context("par", "interleaved", universe=[1, 2])
    assert c["verified"]


def test_transitions_and_diamond():
    m = vccts.load(DEMOS / "two_taus.vccts")
    steps = m.transitions("PQ", universe=[1, 2], width=2)
    assert any(len(s["labels"]) == 2 for s in steps)
    assert m.diamond("PQ", universe=[1, 2])["counterexamples"] == []


def test_tree_automaton():
    m = vccts.load(DEMOS / "tree_automaton.vccts")
    assert not m.recognizes("Fg", "Q", "t")


def test_reduces_to_idle():
    m = vccts.Module("symbol f/1; process P = ~f(1).(*) | f(x).(*);")
    assert m.reduces_to_idle("P")["found"]


def test_protocol():
    assert vccts.abp_delivers([1, 2])
    assert vccts.abp_delivers([], bit=1)


def test_errors():
    with pytest.raises(vccts.ParseError):
        vccts.Module("process P = ;")
    with pytest.raises(vccts.VcctsError):
        vccts.Module("symbol f/1;").weak_bisim("~f(1).(*)", "*", universe=[])
