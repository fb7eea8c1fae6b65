import itertools
import random

import pytest

from conftest import MONOID_SIG, random_expr
from gatc import deriv
from gatc.errors import BudgetExceeded, ModelError
from gatc.expr import App, Var
from gatc.gatcat import (
    coequalizer,
    compose,
    coproduct,
    corpus_interpretations,
    mon_to_catpt,
    mon_to_catpt_variant,
    pushout,
)
from gatc.models import (
    Model,
    check_colimit_duality,
    count_models,
    enumerate_models,
    eval_term,
    reduct,
    validate_model,
)
from gatc.theory import stdlib

LIB = stdlib()


def naive_monoid_count(max_size: int) -> int:
    """Independent oracle: loop over every (size, unit, table) triple and
    check the three monoid laws directly."""
    count = 0
    for size in range(max_size + 1):
        elems = range(size)
        for unit in elems:
            for flat in itertools.product(elems, repeat=size * size):
                mul = {}
                it = iter(flat)
                for a in elems:
                    for b in elems:
                        mul[(a, b)] = next(it)
                if any(mul[(unit, y)] != y for y in elems):
                    continue
                if any(mul[(y, unit)] != y for y in elems):
                    continue
                if any(
                    mul[(mul[(a, b)], c)] != mul[(a, mul[(b, c)])]
                    for a in elems
                    for b in elems
                    for c in elems
                ):
                    continue
                count += 1
    return count


def test_monoid_count_matches_independent_oracle():
    oracle = naive_monoid_count(2)
    assert oracle == 5  # frozen: 1 of size one, 4 of size two
    assert count_models(LIB["Mon"], 2) == oracle


def test_ty0_models_are_the_three_initial_segments():
    ms = enumerate_models(LIB["Ty0"], 2)
    assert [m.carriers["A0"][()] for m in ms] == [0, 1, 2]


def test_el0_models_are_pointed_sets():
    ms = enumerate_models(LIB["El0"], 2)
    got = [(m.carriers["A0"][()], m.funcs["e0"][()]) for m in ms]
    assert got == [(1, 0), (2, 0), (2, 1)]


def test_ty1_model_count():
    # a set and a family over it: 1 + 3 + 9 at bound two
    assert count_models(LIB["Ty1"], 2) == 13


def test_enumeration_deterministic_and_duplicate_free():
    a = enumerate_models(LIB["Mon"], 2)
    b = enumerate_models(LIB["Mon"], 2)
    assert [m.key() for m in a] == [m.key() for m in b]
    assert len({m.key() for m in a}) == len(a)


def test_every_enumerated_model_checks():
    for name in ("Mon", "El1", "Ty2"):
        for m in enumerate_models(LIB[name], 2):
            validate_model(m)


def test_eval_variable_is_environment_lookup():
    m = enumerate_models(LIB["Mon"], 2)[-1]
    assert eval_term(m, {"y": 1}, Var("y")) == 1


def test_unit_law_forces_square_of_unit():
    for m in enumerate_models(LIB["Mon"], 2):
        u = eval_term(m, {}, App("u"))
        assert eval_term(m, {}, App("mul", (App("u"), App("u")))) == u


def test_proved_equalities_hold_in_every_model():
    # soundness bridge between the symbolic engine and the oracle
    rng = random.Random(41)
    mon = LIB["Mon"]
    ms = enumerate_models(mon, 2)
    ctx = (("a", App("Mon")), ("b", App("Mon")))
    checked = 0
    while checked < 100:
        lhs = random_expr(rng, MONOID_SIG, ["a", "b"], 3)
        rhs = random_expr(rng, MONOID_SIG, ["a", "b"], 3)
        v = deriv.eq_check(mon, ctx, lhs, rhs)
        if not v.proved:
            continue
        checked += 1
        for m in ms:
            for env_a in range(m.carriers["Mon"][()]):
                for env_b in range(m.carriers["Mon"][()]):
                    env = {"a": env_a, "b": env_b}
                    assert eval_term(m, env, lhs) == eval_term(m, env, rhs)


def test_substitution_lemma():
    rng = random.Random(43)
    m = enumerate_models(LIB["Mon"], 2)[-1]
    size = m.carriers["Mon"][()]
    for _ in range(200):
        e = random_expr(rng, MONOID_SIG, ["a", "b"], 3)
        sub = {
            "a": random_expr(rng, MONOID_SIG, ["c"], 2),
            "b": random_expr(rng, MONOID_SIG, ["c"], 2),
        }
        from gatc.expr import substitute

        for c in range(size):
            env = {"c": c}
            pushed = {v: eval_term(m, env, t) for v, t in sub.items()}
            assert eval_term(m, pushed, e) == eval_term(m, env, substitute(e, sub))


def test_reduct_along_identity():
    from gatc.gatcat import identity

    m = enumerate_models(LIB["Mon"], 2)[2]
    r = reduct(m, identity(LIB["Mon"]))
    assert r.key() == m.key()


def hand_catpt_model() -> Model:
    # one object; the hom-set at it is the two-element group
    return Model(
        LIB["CatPt"],
        carriers={"Ob": {(): 1}, "Hom": {(0, 0): 2}},
        funcs={
            "id": {(0,): 0},
            "comp": {(0, 0, 0, a, b): (a + b) % 2 for a in range(2) for b in range(2)},
            "b": {(): 0},
        },
    )


def test_reduct_endomorphism_monoid():
    m = hand_catpt_model()
    validate_model(m)
    r = reduct(m, mon_to_catpt())
    validate_model(r)
    assert r.carriers["Mon"][()] == 2
    assert r.funcs["u"][()] == 0
    assert r.funcs["mul"][(1, 1)] == 0


def test_equivalent_interpretations_same_reduct():
    m = hand_catpt_model()
    assert reduct(m, mon_to_catpt()).key() == reduct(m, mon_to_catpt_variant()).key()


def test_reduct_functoriality():
    m = hand_catpt_model()
    a = corpus_interpretations()["Ty0ToMon"]
    b = mon_to_catpt()
    lhs = reduct(m, compose(a, b))
    rhs = reduct(reduct(m, b), a)
    assert lhs.key() == rhs.key()


def test_coproduct_duality_ty0_ty0():
    cp = coproduct(LIB["Ty0"], LIB["Ty0"])
    r = check_colimit_duality(cp, 2)
    assert r.bijection
    assert r.colimit_count == 9
    assert r.component_counts == (3, 3)


def test_duality_at_every_bound_up_to_two():
    cp = coproduct(LIB["Mon"], LIB["El0"])
    po = pushout(LIB["Ty0"], LIB["El0"], corpus_interpretations()["Ty0ToMon"])
    for k in (0, 1, 2):
        assert check_colimit_duality(cp, k).bijection
        assert check_colimit_duality(po, k).bijection


def test_coproduct_duality_mon_ty0():
    cp = coproduct(LIB["Mon"], LIB["Ty0"])
    r = check_colimit_duality(cp, 2)
    assert r.bijection
    assert r.colimit_count == 15


def test_pushout_duality_pointed_monoid():
    po = pushout(LIB["Ty0"], LIB["El0"], corpus_interpretations()["Ty0ToMon"])
    r = check_colimit_duality(po, 2)
    assert r.bijection
    assert r.colimit_count == 9


def test_general_pushout_agrees_with_prefix_pushout_on_models():
    # the coproduct+coequalizer route gives the same model content as the
    # small presentation: models biject with matching pairs
    from gatc.gatcat import Interpretation, identity, pushout_general

    el0, mon, ty0 = LIB["El0"], LIB["Mon"], LIB["Ty0"]
    incl = Interpretation(ty0, el0, {"A0": App("A0")})
    span = pushout_general(incl, corpus_interpretations()["Ty0ToMon"])
    ms = enumerate_models(span.theory, 2)
    a_side = enumerate_models(el0, 2)
    b_side = enumerate_models(mon, 2)
    fibre = {
        (a.key(), b.key())
        for a in a_side
        for b in b_side
        if reduct(a, incl).key() == reduct(b, corpus_interpretations()["Ty0ToMon"]).key()
    }
    pairs = [(reduct(m, span.into_left).key(), reduct(m, span.into_right).key()) for m in ms]
    assert len(pairs) == len(set(pairs))
    assert set(pairs) == fibre
    assert len(ms) == 9


def test_coequalizer_duality_reflexive_pair():
    i = corpus_interpretations()["Ty0ToMon"]
    ce = coequalizer(i, i)
    r = check_colimit_duality(ce, 2)
    assert r.bijection
    assert r.colimit_count == count_models(LIB["Mon"], 2)


def test_budget_error_on_blowup():
    with pytest.raises(BudgetExceeded):
        enumerate_models(LIB["Cat"], 2, budget=2000)


def test_binder_theories_rejected():
    with pytest.raises(ModelError):
        enumerate_models(LIB["STLC"], 1)
