import pytest

from gatc import deriv
from gatc.errors import DuplicateName, ForwardReference, UnknownSymbol
from gatc.expr import App, Var
from gatc.gatcat import check_interpretation, renaming_interpretation
from gatc.theory import (
    TermEqKind,
    check_theory,
    extend,
    mk_El,
    mk_Ty,
    stdlib,
    term_eq_ax,
    term_sym,
    terminal_theory,
    type_sym,
)


def test_theory_of_categories_has_seven_declarations():
    cat = stdlib()["Cat"]
    assert len(cat.decls) == 7
    assert len(cat.symbols()) == 4
    assert len(cat.axioms()) == 3


def test_empty_theory_is_terminal():
    t = check_theory([])
    assert t.decls == ()
    assert terminal_theory().decls == ()


def test_forward_reference_rejected():
    mon = App("Mon")
    decls = [
        type_sym("Mon"),
        term_eq_ax("_1", (("y", mon),), App("mul", (App("u"), Var("y"))), Var("y"), mon),
        term_sym("u", (), mon),
        term_sym("mul", (("y1", mon), ("y2", mon)), mon),
    ]
    with pytest.raises(ForwardReference):
        check_theory(decls)


def test_unknown_symbol_rejected():
    with pytest.raises(UnknownSymbol):
        check_theory([term_sym("u", (), App("Nowhere"))])


def test_duplicate_name_rejected():
    with pytest.raises(DuplicateName):
        check_theory([type_sym("A"), type_sym("A")])


def test_mk_ty_zero():
    t = mk_Ty(0)
    assert [d.name for d in t.decls] == ["A0"]
    assert len(t.decls[0].ctx) == 0


def test_mk_el_zero():
    t = mk_El(0)
    assert [d.name for d in t.decls] == ["A0", "e0"]
    assert t.decl("e0").kind.ty == App("A0")


def test_mk_ty_two_counts():
    t = mk_Ty(2)
    assert len(t.symbols()) == 3
    assert len(t.axioms()) == 0
    assert len(t.decl("A2").ctx) == 2


def test_stdlib_names_and_counts():
    lib = stdlib()
    expected = ["Cat", "Mon", "CatPt"] + [f"{k}{i}" for i in range(4) for k in ("Ty", "El")] + ["STLC", "MLTT-N"]
    assert set(lib) == set(expected)
    mon = lib["Mon"]
    assert len(mon.symbols()) == 3
    assert len(mon.axioms()) == 3
    assert len(lib["CatPt"].decls) == len(lib["Cat"].decls) + 1


def test_extend_cat_by_point_gives_catpt():
    lib = stdlib()
    got = extend(lib["Cat"], term_sym("b", (), App("Ob")))
    assert got.decls == lib["CatPt"].decls


def test_extend_terminal_by_type_gives_ty0():
    got = extend(terminal_theory(), type_sym("A0"))
    assert got.decls == mk_Ty(0).decls


def test_extend_monoid_with_idempotency():
    # both sides must infer the monoid sort; checked by the certifier
    mon = stdlib()["Mon"]
    ax = term_eq_ax("idem", (("y", App("Mon")),), App("mul", (Var("y"), Var("y"))), Var("y"))
    got = extend(mon, ax)
    filled = got.decl("idem").kind
    assert isinstance(filled, TermEqKind)
    assert filled.ty == App("Mon")


def test_prefix_closure():
    for name, t in stdlib().items():
        rules = deriv.WITH_PI if t.pi else deriv.BASE
        for i in range(len(t.decls) + 1):
            check_theory(t.decls[:i], rules)  # must not raise


def test_reordering_invariance_monoid():
    # pulling the right-unit axiom before the left-unit one preserves the
    # dependency order; both orders certify and the identity maps are
    # valid both ways
    mon = stdlib()["Mon"]
    d = list(mon.decls)
    permuted = [d[0], d[1], d[2], d[4], d[3], d[5]]
    mon2 = check_theory(permuted, name="Mon-permuted")
    ident = {x.name: x.name for x in mon.decls if x.is_symbol}
    assert check_interpretation(renaming_interpretation(mon, mon2, ident)).ok
    assert check_interpretation(renaming_interpretation(mon2, mon, ident)).ok


def test_term_axiom_type_elaborated():
    mon = App("Mon")
    decls = [
        type_sym("Mon"),
        term_sym("u", (), mon),
        term_sym("mul", (("y1", mon), ("y2", mon)), mon),
        term_eq_ax("_1", (("y", mon),), App("mul", (App("u"), Var("y"))), Var("y")),
    ]
    t = check_theory(decls)
    assert t.decl("_1").kind.ty == mon
