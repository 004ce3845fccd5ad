"""Parser and validator for the rule language.

Grammar (one statement per ``.``):

    #sort name = {c1, c2, ...}.      enumerated sort (constants or integers)
    #sort name = 0..N.               bounded integer range
    #pred name(sort1, ..., sortk).   predicate declaration (0-ary: #pred name.)
    #show name.                      display hint
    #input name.                     assumption-controlled predicate
    head.                            fact
    head :- b1, ..., bn.             rule
    :- b1, ..., bn.                  constraint
    head :+ b1, ..., bn.             consistency-restoring rule
    % comment to end of line

Body elements are literals, ``not`` literals, or comparisons with one of
``= != < <= > >=``. A leading ``-`` on a literal is classical negation.
Variables start uppercase, constants lowercase.
"""
from __future__ import annotations

import re
from typing import Optional, Union

from .syntax import (CMP_OPS, Comparison, Literal, LogicError, Naf,
                     PredicateDecl, Program, Rule, SortDecl, Term)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#[a-z]+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<sym>:-|:\+|\.\.|!=|<=|>=|[-={}(),.<>])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LogicError(f"syntax error: unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, tok, line, pos - line_start + 1))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise LogicError(f"syntax error: expected {text!r}, found {tok.text!r}",
                             tok.line, tok.col)
        return tok

    def error(self, msg: str) -> LogicError:
        tok = self.peek()
        return LogicError(msg, tok.line, tok.col)

    def parse_program(self) -> Program:
        prog = Program()
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "directive":
                self._directive(prog)
            else:
                prog.rules.append(self._rule(len(prog.rules)))
        return prog

    def _directive(self, prog: Program) -> None:
        tok = self.next()
        if tok.text == "#sort":
            decl = self._sort_decl()
            if decl.name in prog.sorts:
                raise LogicError(f"duplicate sort {decl.name}", tok.line, tok.col)
            prog.sorts[decl.name] = decl
        elif tok.text == "#pred":
            decl = self._pred_decl()
            key = (decl.name, decl.arity)
            if key in prog.predicates:
                raise LogicError(f"duplicate predicate {decl.name}/{decl.arity}",
                                 tok.line, tok.col)
            prog.predicates[key] = decl
        elif tok.text in ("#show", "#input"):
            name = self.next()
            if name.kind != "ident":
                raise self.error("syntax error: expected predicate name")
            self.expect(".")
            target = prog.show if tok.text == "#show" else prog.inputs
            if name.text not in target:
                target.append(name.text)
        else:
            raise LogicError(f"syntax error: unknown directive {tok.text}",
                             tok.line, tok.col)

    def _sort_decl(self) -> SortDecl:
        name = self.next()
        if name.kind != "ident":
            raise self.error("syntax error: expected sort name")
        self.expect("=")
        tok = self.next()
        if tok.text == "{":
            members: list[Union[str, int]] = []
            while True:
                m = self.next()
                if m.kind == "ident":
                    members.append(m.text)
                elif m.kind == "int":
                    members.append(int(m.text))
                else:
                    raise LogicError("syntax error: expected sort member",
                                     m.line, m.col)
                nxt = self.next()
                if nxt.text == "}":
                    break
                if nxt.text != ",":
                    raise LogicError("syntax error: expected ',' or '}'",
                                     nxt.line, nxt.col)
            self.expect(".")
            if len(set(members)) != len(members):
                raise LogicError(f"duplicate sort member in {name.text}",
                                 name.line, name.col)
            return SortDecl(name.text, tuple(members))
        if tok.kind == "int":
            lo = int(tok.text)
            self.expect("..")
            hi_tok = self.next()
            if hi_tok.kind != "int":
                raise LogicError("syntax error: expected range upper bound",
                                 hi_tok.line, hi_tok.col)
            hi = int(hi_tok.text)
            self.expect(".")
            if hi < lo:
                raise LogicError(f"empty range sort {name.text}", name.line, name.col)
            return SortDecl(name.text, tuple(range(lo, hi + 1)), is_range=True)
        raise LogicError("syntax error: expected '{' or integer range",
                         tok.line, tok.col)

    def _pred_decl(self) -> PredicateDecl:
        name = self.next()
        if name.kind != "ident":
            raise self.error("syntax error: expected predicate name")
        sorts: list[str] = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text == ")":
                self.next()
            else:
                while True:
                    s = self.next()
                    if s.kind != "ident":
                        raise LogicError("syntax error: expected sort name",
                                         s.line, s.col)
                    sorts.append(s.text)
                    nxt = self.next()
                    if nxt.text == ")":
                        break
                    if nxt.text != ",":
                        raise LogicError("syntax error: expected ',' or ')'",
                                         nxt.line, nxt.col)
        self.expect(".")
        return PredicateDecl(name.text, tuple(sorts))

    def _rule(self, rule_id: int) -> Rule:
        head: Optional[Literal] = None
        is_cr = False
        tok = self.peek()
        if tok.text == ":-":
            self.next()
            body = self._body(allow_empty=False)
        else:
            head = self._literal()
            tok = self.next()
            if tok.text == ".":
                return Rule(rule_id, head, ())
            if tok.text == ":+":
                is_cr = True
            elif tok.text != ":-":
                raise LogicError("syntax error: expected '.', ':-' or ':+'",
                                 tok.line, tok.col)
            body = self._body(allow_empty=is_cr)
        return Rule(rule_id, head, tuple(body), is_cr)

    def _body(self, allow_empty: bool) -> list:
        elements = []
        if self.peek().text == ".":  # "a :+ ." fires unconditionally
            if not allow_empty:
                raise self.error("syntax error: empty rule body")
            self.next()
            return elements
        while True:
            elements.append(self._body_element())
            tok = self.next()
            if tok.text == ".":
                return elements
            if tok.text != ",":
                raise LogicError("syntax error: expected ',' or '.'",
                                 tok.line, tok.col)

    def _body_element(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "not":
            self.next()
            return Naf(self._literal())
        if tok.text == "-":
            return self._literal()
        if tok.kind in ("var", "int"):
            left = self._term()
            return self._comparison(left)
        if tok.kind == "ident":
            # constant comparison vs. literal: decide after the name
            name = self.next()
            if self.peek().text == "(":
                return self._literal_args(name, negated=False)
            if self.peek().text in CMP_OPS:
                return self._comparison(Term("const", name.text))
            return Literal(name.text)
        raise self.error("syntax error: expected body element")

    def _comparison(self, left: Term) -> Comparison:
        op = self.next()
        if op.text not in CMP_OPS:
            raise LogicError(f"syntax error: expected comparison operator, found {op.text!r}",
                             op.line, op.col)
        return Comparison(op.text, left, self._term())

    def _literal(self) -> Literal:
        negated = False
        if self.peek().text == "-":
            self.next()
            negated = True
        name = self.next()
        if name.kind != "ident":
            raise LogicError("syntax error: expected predicate name",
                             name.line, name.col)
        if self.peek().text == "(":
            return self._literal_args(name, negated)
        return Literal(name.text, (), negated)

    def _literal_args(self, name: _Token, negated: bool) -> Literal:
        self.expect("(")
        args = [self._term()]
        while True:
            tok = self.next()
            if tok.text == ")":
                break
            if tok.text != ",":
                raise LogicError("syntax error: expected ',' or ')'", tok.line, tok.col)
            args.append(self._term())
        return Literal(name.text, tuple(args), negated)

    def _term(self) -> Term:
        tok = self.next()
        if tok.kind == "var":
            return Term("var", tok.text)
        if tok.kind == "ident":
            return Term("const", tok.text)
        if tok.kind == "int":
            return Term("int", int(tok.text))
        raise LogicError(f"syntax error: expected term, found {tok.text!r}",
                         tok.line, tok.col)


def parse(text: str) -> Program:
    """Parse and validate a complete source unit."""
    prog = _Parser(text).parse_program()
    validate(prog)
    return prog


def validate(prog: Program) -> None:
    for decl in prog.predicates.values():
        for s in decl.arg_sorts:
            if s not in prog.sorts:
                raise LogicError(f"undeclared sort {s} in predicate {decl.name}")
    for name in list(prog.show) + list(prog.inputs):
        if not any(k[0] == name for k in prog.predicates):
            raise LogicError(f"undeclared predicate {name} in directive")
    for rule in prog.rules:
        _validate_rule(prog, rule)


def _literal_decl(prog: Program, lit: Literal) -> PredicateDecl:
    decl = prog.predicates.get((lit.pred, lit.arity))
    if decl is None:
        if any(k[0] == lit.pred for k in prog.predicates):
            raise LogicError(f"arity mismatch for predicate {lit.pred} "
                             f"(used with {lit.arity} arguments)")
        raise LogicError(f"undeclared predicate {lit.pred}/{lit.arity}")
    return decl


def _validate_rule(prog: Program, rule: Rule) -> None:
    if rule.is_cr and rule.head is None:
        raise LogicError(f"CR rule without head: {rule}")
    var_sorts: dict[str, str] = {}

    def check_literal(lit: Literal) -> None:
        decl = _literal_decl(prog, lit)
        for term, sort_name in zip(lit.args, decl.arg_sorts):
            sort = prog.sorts[sort_name]
            if term.kind == "var":
                prev = var_sorts.setdefault(term.value, sort_name)
                if prev != sort_name:
                    raise LogicError(
                        f"variable {term.value} used with conflicting sorts "
                        f"{prev} and {sort_name} in: {rule}")
            elif term.value not in sort.members:
                raise LogicError(
                    f"constant {term.value} does not belong to sort {sort_name} "
                    f"in: {rule}")

    if rule.head is not None:
        check_literal(rule.head)
    for el in rule.body:
        if isinstance(el, Literal):
            check_literal(el)
        elif isinstance(el, Naf):
            check_literal(el.literal)
    # safety: every variable must be sort-bound through some literal occurrence;
    # a variable seen only in comparisons has no domain to ground over
    for el in rule.body:
        if isinstance(el, Comparison):
            for term in (el.left, el.right):
                if term.kind == "var" and term.value not in var_sorts:
                    raise LogicError(
                        f"safety violation: variable {term.value} occurs only "
                        f"in a comparison in: {rule}")
            _check_comparison(prog, el, var_sorts, rule)


def _check_comparison(prog: Program, cmp: Comparison,
                      var_sorts: dict[str, str], rule: Rule) -> None:
    def sort_of(term: Term) -> Optional[str]:
        if term.kind == "var":
            return var_sorts.get(term.value)
        if term.kind == "int":
            return None  # plain integer, comparable with integer sorts
        for s in prog.sorts.values():
            if term.value in s.members:
                return s.name
        raise LogicError(f"constant {term.value} belongs to no declared sort "
                         f"in comparison {cmp} in: {rule}")

    ls, rs = sort_of(cmp.left), sort_of(cmp.right)
    if ls is not None and rs is not None and ls != rs:
        raise LogicError(f"comparison {cmp} mixes sorts {ls} and {rs} in: {rule}")
    if cmp.op in ("<", "<=", ">", ">="):
        for term, s in ((cmp.left, ls), (cmp.right, rs)):
            if term.kind == "int":
                continue
            if s is None or not all(isinstance(m, int) for m in prog.sorts[s].members):
                raise LogicError(f"order comparison {cmp} on non-integer terms in: {rule}")
