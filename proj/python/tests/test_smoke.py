import json
import pathlib

import pytest

import metac

ROOT = pathlib.Path(__file__).resolve().parents[2]
TINY = "a :- initially.\nnext((2,3),b) :- a.\n"


def test_parse_and_print():
    p = metac.parse(TINY)
    assert len(p) == 2
    assert p.alphabet() == ["a", "b"]
    assert metac.parse(str(p)) == p


def test_parse_error():
    with pytest.raises(metac.InputError):
        metac.parse("at(X,home).")


def test_compile_and_emit():
    p = metac.parse(TINY)
    g = metac.compile(p, "bool", 2, nu=3)
    assert g.backend == "bool"
    assert g.asp().startswith("o(a,0).\no(b,1) :- o(a,0).\n")
    s = g.stats()
    assert (s["rules"]["core"], s["rules"]["delta"], s["rules"]["psi"]) == (4, 5, 4)
    d = metac.compile(p, "dc", 2)
    assert "&sum{t(0) ; -t(1)} <= -2 :- o(a,0)." in d.dc()
    assert metac.read_json(d.json()) == d
    assert json.loads(g.json())["format"] == "metac-ground"


def test_bool_needs_nu():
    with pytest.raises(metac.InputError):
        metac.compile(metac.parse(TINY), "bool", 2)


def test_solve_both_backends():
    p = metac.parse(TINY)
    expected = [{"states": [["a"], ["b"]], "times": [0, 2]}]
    assert metac.solve(p, "bool", 2, nu=3) == expected
    assert metac.solve(p, "dc", 2) == expected
    assert metac.metric_models(p, 2, 3) == expected


def test_cap():
    with pytest.raises(metac.CapExceeded):
        metac.solve(metac.load(str(ROOT / "corpus" / "dentist.mlp")), "dc", 4)


def test_verify_random():
    for p in metac.random_programs(10, seed=3):
        for backend in ("bool", "dc", "both"):
            report = metac.verify(p, 2, 3, backend)
            assert report["pass"], report


def test_dentist_scaling():
    p = metac.load(str(ROOT / "corpus" / "dentist.mlp"))
    sizes = {len(metac.compile(p.scaled(f), "dc", 4)) for f in (1, 5, 10)}
    assert len(sizes) == 1
