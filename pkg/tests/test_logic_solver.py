import pytest

from reasonlab.logic import (Literal, LogicError, cr_solve, ground,
                             is_stable, oracle_stable_models, parse,
                             stable_models)
from randprog import random_program

EVEN_CYCLE = """
#pred a.
#pred b.
a :- not b.
b :- not a.
"""


def names(answer_set):
    return frozenset(str(l) for l in answer_set.literals)


def model_sets(answer_sets):
    return {frozenset(m.literals) for m in answer_sets}


# -- grounding --------------------------------------------------------------

def test_ground_rule_per_sort_member():
    g = ground(parse("#sort s = {b1, b2}.\n#pred r(s).\n#pred q(s).\nr(X) :- q(X)."))
    assert len(g.rules) == 2


def test_ground_fact_identity():
    g = ground(parse("#pred a.\na."))
    assert len(g.rules) == 1
    assert g.rules[0].head == g.atom(Literal("a"))
    assert g.rules[0].pos == ()


def test_contradictory_comparison_eliminates_instances():
    g = ground(parse("#sort s = {b1, b2}.\n#pred r(s).\n#pred q(s).\n"
                     "r(X) :- q(X), X != X."))
    assert len(g.rules) == 0


def test_comparisons_evaluated_away():
    g = ground(parse("#sort n = 1..3.\n#pred r(n).\n#pred q(n).\n"
                     "r(X) :- q(X), X < 3."))
    assert len(g.rules) == 2
    assert all(len(r.pos) == 1 for r in g.rules)


def test_ground_cap():
    with pytest.raises(LogicError, match="cap"):
        ground(parse("#sort n = 1..50.\n#pred r(n, n, n).\n#pred q(n).\n"
                     "r(X, Y, Z) :- q(X), q(Y), q(Z)."), max_rules=1000)


def test_grounding_soundness_and_completeness():
    # every instance is a sort-respecting substitution; every substitution
    # with satisfiable comparisons appears
    prog = parse("#sort s = {b1, b2, b3}.\n#pred r(s, s).\n#pred q(s).\n"
                 "r(X, Y) :- q(X), q(Y), X != Y.")
    g = ground(prog)
    heads = {str(g.atoms[r.head]) for r in g.rules}
    members = ["b1", "b2", "b3"]
    expected = {f"r({x}, {y})" for x in members for y in members if x != y}
    assert heads == expected


# -- stable models ----------------------------------------------------------

def test_even_cycle_two_models():
    g = ground(parse(EVEN_CYCLE))
    assert model_sets(stable_models(g)) == {
        frozenset({Literal("a")}), frozenset({Literal("b")})}
    # oracle gives the same answer by construction of the test
    assert model_sets(oracle_stable_models(g)) == model_sets(stable_models(g))


def test_unfounded_self_support():
    g = ground(parse("#pred a.\na :- a."))
    ms = stable_models(g)
    assert len(ms) == 1 and ms[0].literals == frozenset()


def test_classical_inconsistency():
    g = ground(parse("#pred a.\na.\n-a."))
    assert stable_models(g) == []


def test_constraint_prunes():
    g = ground(parse(EVEN_CYCLE + ":- a."))
    assert model_sets(stable_models(g)) == {frozenset({Literal("b")})}


def test_is_stable_on_even_cycle():
    g = ground(parse(EVEN_CYCLE))
    assert is_stable(g, [Literal("a")])
    assert not is_stable(g, [Literal("a"), Literal("b")])
    assert not is_stable(g, [])


def test_is_stable_empty_program():
    g = ground(parse("#pred a."))
    assert is_stable(g, [])


def test_oracle_trivial_cases():
    g = ground(parse("#pred a."))
    assert [m.literals for m in oracle_stable_models(g)] == [frozenset()]
    g = ground(parse("#pred a.\n:- not a."))
    assert oracle_stable_models(g) == []


def test_oracle_cap():
    prog = parse("#sort n = 1..20.\n#pred r(n).\n" +
                 "\n".join(f"r({i})." for i in range(1, 21)))
    with pytest.raises(LogicError, match="cap"):
        oracle_stable_models(ground(prog))


def test_model_order_deterministic():
    text = EVEN_CYCLE
    first = [names(m) for m in stable_models(ground(parse(text)))]
    second = [names(m) for m in stable_models(ground(parse(text)))]
    assert first == second


def test_limit():
    g = ground(parse(EVEN_CYCLE))
    assert len(stable_models(g, limit=1)) == 1


# -- CR rules ---------------------------------------------------------------

def test_cr_restores_consistency():
    prog = parse("#pred a.\n:- not a.\na :+ .")
    ms = cr_solve(prog)
    assert len(ms) == 1
    assert ms[0].literals == frozenset({Literal("a")})
    assert ms[0].cr_applied == frozenset({prog.cr_rules()[0].id})


def test_cr_minimality_at_zero():
    prog = parse("#pred a.\n#pred b.\na.\nb :+ .")
    ms = cr_solve(prog)
    assert len(ms) == 1
    assert ms[0].cr_applied == frozenset()
    assert Literal("b") not in ms[0].literals


def test_two_alternative_cr_rules():
    prog = parse("#pred a.\n#pred b.\n:- not a, not b.\na :+ .\nb :+ .")
    ms = cr_solve(prog)
    assert len(ms) == 2
    assert all(len(m.cr_applied) == 1 for m in ms)
    assert model_sets(ms) == {frozenset({Literal("a")}), frozenset({Literal("b")})}


def test_cr_inclusion_preference():
    prog = parse("#pred a.\n#pred b.\n:- not a.\n:- not b.\na :+ .\nb :+ .")
    ms = cr_solve(prog, preference="inclusion")
    assert len(ms) == 1 and len(ms[0].cr_applied) == 2


def test_stable_models_rejects_cr():
    g = ground(parse("#pred a.\na :+ ."))
    with pytest.raises(LogicError):
        stable_models(g)


# -- invariants over random programs ---------------------------------------

def _rule_satisfied(g, r, m):
    if all(a in m for a in r.pos) and not any(a in m for a in r.naf):
        return r.head is not None and r.head in m
    return True


@pytest.mark.parametrize("seed", range(40))
def test_solver_matches_oracle(seed):
    g = ground(random_program(seed))
    got = model_sets(stable_models(g))
    want = model_sets(oracle_stable_models(g))
    assert got == want


@pytest.mark.parametrize("seed", range(20))
def test_returned_models_satisfy_rules_and_stability(seed):
    g = ground(random_program(seed + 1000))
    for m in stable_models(g):
        idx = {g.atom(l) for l in m.literals}
        assert all(_rule_satisfied(g, r, idx) for r in g.rules)
        assert is_stable(g, m.literals)


def _subset_oracle_cr(prog):
    """Exhaustive CR oracle: try every subset of CR rules, smallest first."""
    import itertools
    from dataclasses import replace
    cr = prog.cr_rules()
    regular = [r for r in prog.rules if not r.is_cr]
    for k in range(len(cr) + 1):
        sizes = []
        for subset in itertools.combinations(cr, k):
            converted = [replace(r, is_cr=False) for r in subset]
            trial = type(prog)(prog.sorts, prog.predicates,
                               regular + converted, prog.show, prog.inputs)
            if oracle_stable_models(ground(trial)):
                sizes.append(frozenset(r.id for r in subset))
        if sizes:
            return k, sizes
    return None, []


@pytest.mark.parametrize("seed", range(25))
def test_cr_cardinality_matches_subset_oracle(seed):
    prog = random_program(seed + 2000, max_atoms=4, max_rules=8, n_cr=3)
    ms = cr_solve(prog)
    k, subsets = _subset_oracle_cr(prog)
    if not ms:
        assert k is None
    else:
        assert {len(m.cr_applied) for m in ms} == {k}
        assert {m.cr_applied for m in ms} == set(subsets)
