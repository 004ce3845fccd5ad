import pytest

from reasonlab.logic import Literal, LogicError, Naf, parse

PRELUDE = """
#sort s = {b1, b2}.
#sort step = 0..3.
#pred a.
#pred q.
#pred p(s).
#pred r(s).
#pred stable(s).
#pred block_displaced(s).
#pred holds(s, step).
"""


def test_single_fact():
    prog = parse("#pred a.\na.")
    assert len(prog.rules) == 1
    assert prog.rules[0].head == Literal("a")
    assert prog.rules[0].body == ()


def test_classically_negated_head():
    prog = parse(PRELUDE + "-stable(S) :- block_displaced(S).")
    rule = prog.rules[0]
    assert rule.head.negated
    assert rule.head.pred == "stable"
    assert isinstance(rule.body[0], Literal)
    assert rule.body[0].pred == "block_displaced"


def test_unsafe_variable_rejected():
    # X has no literal occurrence, so no sort binds it
    with pytest.raises(LogicError, match="safety violation"):
        parse(PRELUDE + "p(b1) :- q, X != b1.")


def test_default_negation_and_cr_rules():
    prog = parse(PRELUDE + "a :- not q.\na :+ .\np(X) :+ r(X).")
    assert isinstance(prog.rules[0].body[0], Naf)
    assert not prog.rules[0].is_cr
    assert prog.rules[1].is_cr and prog.rules[1].body == ()
    assert prog.rules[2].is_cr


def test_roundtrip_pretty_print():
    text = PRELUDE + """
a :- not q.
-stable(S) :- block_displaced(S), p(S).
:- a, q.
p(b1).
holds(X, I) :- p(X), I < 2, not r(X).
a :+ q.
#show stable.
"""
    prog = parse(text)
    again = parse(prog.to_text())
    assert again.sorts == prog.sorts
    assert again.predicates == prog.predicates
    assert again.rules == prog.rules
    assert again.show == prog.show


def test_duplicate_sort_member():
    with pytest.raises(LogicError, match="duplicate sort member"):
        parse("#sort s = {x, y, x}.")


def test_undeclared_predicate():
    with pytest.raises(LogicError, match="undeclared predicate"):
        parse("#pred a.\na :- missing.")


def test_undeclared_sort():
    with pytest.raises(LogicError, match="undeclared sort"):
        parse("#pred p(nosuch).")


def test_arity_mismatch():
    with pytest.raises(LogicError, match="arity mismatch"):
        parse(PRELUDE + "p(b1, b2).")


def test_syntax_error_has_position():
    with pytest.raises(LogicError) as err:
        parse("#pred a.\na :- .")
    assert "line" in str(err.value)


def test_constant_outside_sort():
    with pytest.raises(LogicError, match="does not belong to sort"):
        parse(PRELUDE + "p(zz).")


def test_comparison_sort_mixing():
    with pytest.raises(LogicError, match="mixes sorts"):
        parse(PRELUDE + "#sort t = {c1}.\n#pred w(t).\na :- p(X), w(Y), X = Y.")


def test_order_comparison_requires_integers():
    with pytest.raises(LogicError, match="order comparison"):
        parse(PRELUDE + "a :- p(X), X < b2.")


def test_integer_range_sort():
    prog = parse("#sort step = 2..5.\n#pred at(step).\nat(3).")
    assert prog.sorts["step"].members == (2, 3, 4, 5)
    with pytest.raises(LogicError, match="does not belong"):
        parse("#sort step = 2..5.\n#pred at(step).\nat(7).")


def test_comments_ignored():
    prog = parse("% leading comment\n#pred a. % trailing\na.\n")
    assert len(prog.rules) == 1


def test_cr_rule_requires_head():
    # ":+ body." never parses as a headless rule
    with pytest.raises(LogicError):
        parse("#pred a.\n:+ a.")
