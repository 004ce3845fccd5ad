"""Sort-respecting instantiation of programs into ground rule sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .syntax import (Comparison, Literal, LogicError, Naf, Program, Rule,
                     Term)

DEFAULT_GROUND_CAP = 2_000_000


@dataclass(frozen=True)
class GroundRule:
    head: Optional[int]  # atom index, None = constraint
    pos: tuple[int, ...]
    naf: tuple[int, ...]
    source_id: int = -1  # id of the source Rule (-1 for generated constraints)
    is_cr: bool = False


class GroundProgram:
    """Variable-free program over an indexed universe of ground literals.

    Classically negated literals are distinct atoms; grounding adds a
    consistency constraint for every complementary pair in the universe.
    """

    def __init__(self, atoms: list[Literal], rules: list[GroundRule],
                 input_atoms: frozenset[int], show: list[str],
                 source: Program):
        self.atoms = atoms
        self.index = {lit: i for i, lit in enumerate(atoms)}
        self.rules = rules
        self.input_atoms = input_atoms
        self.show = show
        self.source = source

    @property
    def cr_ids(self) -> list[int]:
        return sorted({r.source_id for r in self.rules if r.is_cr})

    def atom(self, lit: Literal) -> int:
        try:
            return self.index[lit]
        except KeyError:
            raise LogicError(f"literal {lit} not in ground universe")

    def literals(self, atom_ids) -> frozenset[Literal]:
        return frozenset(self.atoms[i] for i in atom_ids)


def _substitute(lit: Literal, env: dict[str, Union[str, int]]) -> Literal:
    if lit.is_ground():
        return lit
    args = tuple(
        Term("int", env[t.value]) if t.kind == "var" and isinstance(env[t.value], int)
        else Term("const", env[t.value]) if t.kind == "var"
        else t
        for t in lit.args)
    return Literal(lit.pred, args, lit.negated)


def _term_value(term: Term, env: dict[str, Union[str, int]]) -> Union[str, int]:
    return env[term.value] if term.kind == "var" else term.value


def _comparison_holds(cmp: Comparison, env) -> bool:
    left, right = _term_value(cmp.left, env), _term_value(cmp.right, env)
    if cmp.op == "=":
        return left == right
    if cmp.op == "!=":
        return left != right
    if cmp.op == "<":
        return left < right
    if cmp.op == "<=":
        return left <= right
    if cmp.op == ">":
        return left > right
    return left >= right


def _rule_var_domains(prog: Program, rule: Rule) -> list[tuple[str, tuple]]:
    """Variables in first-occurrence order with their sort domains."""
    domains: dict[str, tuple] = {}
    order: list[str] = []

    def visit(lit: Literal) -> None:
        decl = prog.predicate(lit.pred, lit.arity)
        for term, sort_name in zip(lit.args, decl.arg_sorts):
            if term.kind == "var" and term.value not in domains:
                domains[term.value] = prog.sorts[sort_name].members
                order.append(term.value)

    if rule.head is not None:
        visit(rule.head)
    for el in rule.body:
        if isinstance(el, Literal):
            visit(el)
        elif isinstance(el, Naf):
            visit(el.literal)
    return [(v, domains[v]) for v in order]


def ground(prog: Program, max_rules: int = DEFAULT_GROUND_CAP) -> GroundProgram:
    """Instantiate every rule over the sorts of its variables.

    Comparisons are evaluated away: a false comparison deletes the instance,
    a true one is dropped from the body. Raises when the instance count
    exceeds ``max_rules``.
    """
    atoms: list[Literal] = []
    index: dict[Literal, int] = {}

    def intern(lit: Literal) -> int:
        i = index.get(lit)
        if i is None:
            i = len(atoms)
            atoms.append(lit)
            index[lit] = i
        return i

    ground_rules: list[GroundRule] = []
    count = 0
    for rule in prog.rules:
        var_domains = _rule_var_domains(prog, rule)
        names = [v for v, _ in var_domains]
        spaces = [d for _, d in var_domains]
        comparisons = [el for el in rule.body if isinstance(el, Comparison)]
        literal_elems = [el for el in rule.body if not isinstance(el, Comparison)]
        for combo in itertools.product(*spaces):
            env = dict(zip(names, combo))
            if not all(_comparison_holds(c, env) for c in comparisons):
                continue
            count += 1
            if count > max_rules:
                raise LogicError(
                    f"ground program exceeds cap of {max_rules} rules; "
                    f"domain too large")
            pos, naf = [], []
            for el in literal_elems:
                if isinstance(el, Naf):
                    naf.append(intern(_substitute(el.literal, env)))
                else:
                    pos.append(intern(_substitute(el, env)))
            head = None
            if rule.head is not None:
                head = intern(_substitute(rule.head, env))
            ground_rules.append(GroundRule(head, tuple(pos), tuple(naf),
                                           rule.id, rule.is_cr))

    input_atoms = set()
    for name in prog.inputs:
        for (pname, arity), decl in prog.predicates.items():
            if pname != name:
                continue
            spaces = [prog.sorts[s].members for s in decl.arg_sorts]
            for combo in itertools.product(*spaces):
                args = tuple(Term("int", v) if isinstance(v, int) else Term("const", v)
                             for v in combo)
                input_atoms.add(intern(Literal(pname, args)))

    # consistency: p and -p never hold together
    for i, lit in enumerate(list(atoms)):
        if lit.negated:
            continue
        j = index.get(lit.complement())
        if j is not None:
            ground_rules.append(GroundRule(None, (i, j), ()))

    return GroundProgram(atoms, ground_rules, frozenset(input_atoms),
                         list(prog.show), prog)
