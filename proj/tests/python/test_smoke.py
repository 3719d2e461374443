import pytest

import bcaret

T1 = """
controls p q r ;
alphabet a b c ;
rule p a -call-> q b c ;
rule q b -ret-> r ;
rule r c -int-> r c ;
"""

LABELS = "atom isr states { r } ;"


def test_pds_parse_and_dump_round_trip():
    pds = bcaret.Pds.parse(T1)
    assert pds.control_count == 3
    assert pds.alphabet_size == 3
    assert pds.rule_count == 3
    again = bcaret.Pds.parse(pds.dump())
    assert again.rule_count == 3


def test_successor_queries():
    pds = bcaret.Pds.parse(T1)
    assert pds.successors("p : a #") == ["q : b c #"]
    targets, complete = pds.abstract_successors("p : a #", budget=16)
    assert complete
    assert targets == ["r : c #"]
    targets, complete = pds.abstract_successors("q : b c #")
    assert complete
    assert targets == ["BOTTOM"]


def test_formula_normalization():
    f = bcaret.Formula.parse("!(EX^g e1)")
    assert str(f) == "AX^g !e1"
    assert f.closure_size == 2
    assert str(f.negate()) == "EX^g e1"


def test_check_all_engines_agree_on_the_running_example():
    sat = bcaret.check(T1, "EX^a isr", LABELS, "p : a #")
    assert sat["verdict"] == "SAT"
    assert sat["certified"]
    game = bcaret.check(T1, "EX^a isr", LABELS, "p : a #", engine="game", bound=6)
    assert game["verdict"] == "SAT"
    sem = bcaret.check(T1, "EX^a isr", LABELS, "p : a #", engine="semantic")
    assert sem["verdict"] == "SAT"
    unsat = bcaret.check(T1, "EX^a true", LABELS, "q : b c #")
    assert unsat["verdict"] == "UNSAT"


def test_product_stats():
    stats = bcaret.product_stats(T1, "EX^a isr", LABELS)
    assert stats["controls"] == 10
    assert stats["symbols"] == 10


def test_compile_asm():
    prog = "entry L0;\nproc main { L0: call f ; L1: exit ; }\nproc f { f0: ret ; }\n"
    d = bcaret.compile_asm(prog)
    assert d["entry"] == "v : L0 #"
    assert d["controls"] == 1
    assert d["rules"] == 2
    assert "-call->" in d["pds"]


def test_cli_passthrough(tmp_path):
    pds = tmp_path / "t1.pds"
    pds.write_text(T1)
    formula = tmp_path / "f.bcl"
    formula.write_text("EX^a isr")
    labels = tmp_path / "l.lbl"
    labels.write_text(LABELS)
    code, out, err = bcaret.run_cli(
        ["check", "--pds", str(pds), "--formula", str(formula),
         "--labels", str(labels), "--config", "p : a #"])
    assert code == 0
    assert out.startswith("SAT")
    assert err == ""


def test_errors_surface_as_exceptions():
    with pytest.raises(bcaret.BcaretError):
        bcaret.Pds.parse("controls p ; alphabet a ; rule p a -ret-> p a ;")
    with pytest.raises(bcaret.BcaretError):
        bcaret.Formula.parse("EX e")
