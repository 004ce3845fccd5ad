"""AST for the sorted rule language: sorts, predicates, literals, rules, programs.

The language has default negation (``not l``), classical negation (``-l``),
constraints (headless rules), consistency-restoring rules (``:+``), and
builtin comparisons between same-sorted terms. Programs are immutable after
validation and print back to canonical source text.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Union

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")


class LogicError(Exception):
    """Any parse/validation/grounding failure, with source position when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


@dataclass(frozen=True)
class Term:
    kind: str  # "const" | "var" | "int"
    value: Union[str, int]

    def __str__(self) -> str:
        return str(self.value)


def const(name: str) -> Term:
    return Term("const", name)


def var(name: str) -> Term:
    return Term("var", name)


def num(value: int) -> Term:
    return Term("int", value)


@dataclass(frozen=True)
class Literal:
    pred: str
    args: tuple[Term, ...] = ()
    negated: bool = False  # classical "-", not default negation

    @property
    def arity(self) -> int:
        return len(self.args)

    def complement(self) -> "Literal":
        return replace(self, negated=not self.negated)

    def is_ground(self) -> bool:
        return all(t.kind != "var" for t in self.args)

    def __str__(self) -> str:
        sign = "-" if self.negated else ""
        if not self.args:
            return f"{sign}{self.pred}"
        return f"{sign}{self.pred}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Naf:
    """Default negation wrapper: ``not literal``."""

    literal: Literal

    def __str__(self) -> str:
        return f"not {self.literal}"


@dataclass(frozen=True)
class Comparison:
    op: str
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


BodyElement = Union[Literal, Naf, Comparison]


@dataclass(frozen=True)
class Rule:
    id: int
    head: Optional[Literal]  # None = constraint
    body: tuple[BodyElement, ...] = ()
    is_cr: bool = False

    def __str__(self) -> str:
        arrow = ":+" if self.is_cr else ":-"
        body = ", ".join(map(str, self.body))
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head} :+ ." if self.is_cr else f"{self.head}."
        return f"{self.head} {arrow} {body}."


@dataclass(frozen=True)
class SortDecl:
    name: str
    members: tuple[Union[str, int], ...]
    is_range: bool = False

    def __str__(self) -> str:
        if self.is_range:
            return f"#sort {self.name} = {self.members[0]}..{self.members[-1]}."
        return f"#sort {self.name} = {{{', '.join(map(str, self.members))}}}."


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    arg_sorts: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def __str__(self) -> str:
        if not self.arg_sorts:
            return f"#pred {self.name}."
        return f"#pred {self.name}({', '.join(self.arg_sorts)})."


@dataclass
class Program:
    """A validated program: declarations plus rules, with display hints.

    ``show`` lists predicate names whose literals appear in answer sets and
    support sets; empty means show everything. ``inputs`` lists predicates
    whose ground atoms are assumption-controlled (true only when asserted at
    solve time) - used by callers that cache a grounding and vary the facts.
    """

    sorts: dict[str, SortDecl] = field(default_factory=dict)
    predicates: dict[tuple[str, int], PredicateDecl] = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)
    show: list[str] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)

    def predicate(self, name: str, arity: int) -> PredicateDecl:
        try:
            return self.predicates[(name, arity)]
        except KeyError:
            raise LogicError(f"undeclared predicate {name}/{arity}")

    def cr_rules(self) -> list[Rule]:
        return [r for r in self.rules if r.is_cr]

    def shown(self, pred: str) -> bool:
        return not self.show or pred in self.show

    def to_text(self) -> str:
        lines = [str(s) for s in self.sorts.values()]
        lines += [str(p) for p in self.predicates.values()]
        lines += [f"#input {name}." for name in self.inputs]
        lines += [f"#show {name}." for name in self.show]
        lines += [str(r) for r in self.rules]
        return "\n".join(lines) + "\n"

    def extended(self, extra_rules: Iterable[Rule]) -> "Program":
        """New program with rules appended (ids renumbered)."""
        merged = list(self.rules) + list(extra_rules)
        rules = [replace(r, id=i) for i, r in enumerate(merged)]
        return Program(dict(self.sorts), dict(self.predicates), rules,
                       list(self.show), list(self.inputs))


def rule_variables(rule: Rule) -> set[str]:
    names: set[str] = set()
    for lit in _rule_literals(rule):
        names.update(t.value for t in lit.args if t.kind == "var")
    for el in rule.body:
        if isinstance(el, Comparison):
            for t in (el.left, el.right):
                if t.kind == "var":
                    names.add(t.value)
    return names


def _rule_literals(rule: Rule) -> list[Literal]:
    lits = [rule.head] if rule.head is not None else []
    for el in rule.body:
        if isinstance(el, Literal):
            lits.append(el)
        elif isinstance(el, Naf):
            lits.append(el.literal)
    return lits
