"""Stable-model enumeration for ground programs.

The solver compiles a ground program's Clark completion to clauses (one
auxiliary variable per multi-literal rule body) and enumerates completion
models by DPLL with two-watched-literal propagation, branching on atoms in
index order with false tried first. That yields candidate models in
lexicographic order over the atom universe; every candidate is then checked
against the stable-model definition (least model of the reduct), which
filters out unfounded self-support. CR rules compile to regular rules guarded
by per-rule indicator variables so one compiled solver serves every
activation subset.

``oracle_stable_models`` is the brute-force reference: enumerate every subset
of the universe and keep the ones ``is_stable`` accepts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .ground import GroundProgram, GroundRule, ground
from .syntax import Literal, LogicError, Program

ORACLE_ATOM_CAP = 16


@dataclass(frozen=True)
class AnswerSet:
    literals: frozenset[Literal]
    cr_applied: frozenset[int] = frozenset()

    def holds(self, lit: Literal) -> bool:
        return lit in self.literals

    def __str__(self) -> str:
        body = ", ".join(sorted(map(str, self.literals)))
        return "{" + body + "}"


def _active_rules(g: GroundProgram, cr_active: frozenset[int]) -> Iterator[GroundRule]:
    for r in g.rules:
        if not r.is_cr or r.source_id in cr_active:
            yield r


def _least_model(g: GroundProgram, candidate: frozenset[int],
                 facts: frozenset[int], cr_active: frozenset[int]) -> set[int]:
    """Least model of the reduct of the active rules w.r.t. ``candidate``."""
    derived = set(facts)
    reduct = []
    for r in _active_rules(g, cr_active):
        if r.head is None:
            continue
        if any(a in candidate for a in r.naf):
            continue
        if not r.pos:
            derived.add(r.head)
        else:
            reduct.append(r)
    changed = True
    while changed:
        changed = False
        remaining = []
        for r in reduct:
            if all(a in derived for a in r.pos):
                if r.head not in derived:
                    derived.add(r.head)
                    changed = True
            else:
                remaining.append(r)
        reduct = remaining
    return derived


def _satisfies(g: GroundProgram, candidate: frozenset[int],
               cr_active: frozenset[int]) -> bool:
    for r in _active_rules(g, cr_active):
        if all(a in candidate for a in r.pos) and not any(a in candidate for a in r.naf):
            if r.head is None or r.head not in candidate:
                return False
    return True


def _consistent(g: GroundProgram, candidate: frozenset[int]) -> bool:
    lits = {g.atoms[i] for i in candidate}
    return not any(l.complement() in lits for l in lits)


def is_stable(g: GroundProgram, literals: Iterable[Literal],
              facts: frozenset[int] = frozenset(),
              cr_active: frozenset[int] = frozenset()) -> bool:
    """True iff the candidate set is a stable model of ``g``.

    ``facts`` are assumed-true input atoms; CR rules outside ``cr_active``
    are ignored. The public single-argument form checks the program as-is.
    """
    candidate = frozenset(g.atom(l) for l in literals)
    if not _consistent(g, candidate):
        return False
    if not _satisfies(g, candidate, cr_active):
        return False
    return _least_model(g, candidate, facts, cr_active) == set(candidate)


def _model_sort_key(n: int, candidate: frozenset[int]) -> int:
    # integer whose comparison order equals lexicographic order over the
    # characteristic vector (atom 0 most significant, absent < present)
    key = 0
    for i in candidate:
        key |= 1 << (n - 1 - i)
    return key


def oracle_stable_models(g: GroundProgram, cap: int = ORACLE_ATOM_CAP) -> list[AnswerSet]:
    """Ground-truth model set by exhaustive subset enumeration."""
    n = len(g.atoms)
    if n > cap:
        raise LogicError(f"oracle cap exceeded: {n} atoms > {cap}")
    if any(r.is_cr for r in g.rules):
        raise LogicError("oracle_stable_models does not handle CR rules")
    def mask(atoms_):
        m = 0
        for a in atoms_:
            m |= 1 << a
        return m

    rules = [(r.head, mask(r.pos), mask(r.naf)) for r in g.rules]
    models = []
    for mask in range(1 << n):
        ok = True
        for head, posmask, nafmask in rules:
            if posmask & mask == posmask and nafmask & mask == 0:
                if head is None or not (mask >> head) & 1:
                    ok = False
                    break
        if not ok:
            continue
        # least model of the reduct, as a bitmask fixpoint
        lm = 0
        changed = True
        active = [(h, pm) for (h, pm, nm) in rules if h is not None and nm & mask == 0]
        while changed:
            changed = False
            for head, posmask in active:
                bit = 1 << head
                if not lm & bit and posmask & lm == posmask:
                    lm |= bit
                    changed = True
        if lm == mask:
            models.append(frozenset(i for i in range(n) if (mask >> i) & 1))
    models.sort(key=lambda m: _model_sort_key(n, m))
    return [AnswerSet(g.literals(m)) for m in models]


class Solver:
    """Reusable compiled solver for one ground program.

    ``models`` may be called repeatedly with different input-atom
    assumptions and CR activation subsets; compilation happens once.
    """

    def __init__(self, g: GroundProgram):
        self.g = g
        n = len(g.atoms)
        self.natoms = n
        self._nvars = n
        clauses: list[list[int]] = []
        supports: list[list[int]] = [[] for _ in range(n)]
        facts: list[bool] = [False] * n
        self.cr_vars: dict[int, int] = {}
        self.input_vars: dict[int, int] = {}

        def new_var() -> int:
            self._nvars += 1
            return self._nvars

        for rid in g.cr_ids:
            self.cr_vars[rid] = new_var()

        for r in g.rules:
            body = [a + 1 for a in r.pos] + [-(a + 1) for a in r.naf]
            if r.is_cr:
                body.append(self.cr_vars[r.source_id])
            if r.head is None:
                clauses.append([-l for l in body])
                continue
            hv = r.head + 1
            if not body:
                facts[r.head] = True
            elif len(body) == 1:
                clauses.append([-body[0], hv])
                supports[r.head].append(body[0])
            else:
                bv = new_var()
                for l in body:
                    clauses.append([-bv, l])
                clauses.append([bv] + [-l for l in body])
                clauses.append([-bv, hv])
                supports[r.head].append(bv)

        for a in range(n):
            hv = a + 1
            if facts[a]:
                clauses.append([hv])
                continue
            sup = supports[a]
            if a in g.input_atoms:
                iv = new_var()
                self.input_vars[a] = iv
                clauses.append([-iv, hv])
                sup = sup + [iv]
            clauses.append([-hv] + sup)

        self._unsat = False
        self.base_units: list[int] = []
        self.clauses: list[list[int]] = []
        for c in clauses:
            c = sorted(set(c), key=abs)
            if any(-l in c for l in c):
                continue  # tautology
            if not c:
                self._unsat = True
            elif len(c) == 1:
                self.base_units.append(c[0])
            else:
                self.clauses.append(c)

        # watch the first two literals of every clause
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * self._nvars + 2)]
        for c in self.clauses:
            self.watches[self._widx(c[0])].append(c)
            self.watches[self._widx(c[1])].append(c)

    def _widx(self, lit: int) -> int:
        return 2 * abs(lit) + (lit < 0)

    # -- search state (fresh per models() call) --

    def _value(self, lit: int) -> int:
        v = self._assign[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int) -> bool:
        var = abs(lit)
        val = 1 if lit > 0 else -1
        cur = self._assign[var]
        if cur != 0:
            return cur == val
        self._assign[var] = val
        self._trail.append(var)
        return True

    def _propagate(self) -> bool:
        trail = self._trail
        assign = self._assign
        while self._qhead < len(trail):
            var = trail[self._qhead]
            self._qhead += 1
            false_lit = -var if assign[var] == 1 else var
            ws = self.watches[self._widx(false_lit)]
            keep = []
            i = 0
            while i < len(ws):
                clause = ws[i]
                i += 1
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                ov = assign[other] if other > 0 else -assign[-other]
                if ov == 1:
                    keep.append(clause)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lk = clause[k]
                    lv = assign[lk] if lk > 0 else -assign[-lk]
                    if lv != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[self._widx(lk)].append(clause)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(clause)
                if ov == -1:  # conflict
                    keep.extend(ws[i:])
                    ws[:] = keep
                    return False
                if not self._enqueue(other):
                    keep.extend(ws[i:])
                    ws[:] = keep
                    return False
            ws[:] = keep
        return True

    def models(self, assume: frozenset[int] = frozenset(),
               cr_active: frozenset[int] = frozenset(),
               limit: Optional[int] = None,
               decide_order: Optional[Sequence[int]] = None) -> Iterator[frozenset[int]]:
        """Enumerate stable models as frozensets of atom indices.

        ``assume`` holds the input atoms to treat as facts. ``decide_order``
        optionally reorders branching (atom indices); enumeration order then
        follows that order instead of the lexicographic default.
        """
        if self._unsat or (limit is not None and limit <= 0):
            return
        self._assign = [0] * (self._nvars + 1)
        self._trail: list[int] = []
        self._qhead = 0

        for lit in self.base_units:
            if not self._enqueue(lit):
                return
        for a, iv in self.input_vars.items():
            if not self._enqueue(iv if a in assume else -iv):
                return
        for rid, cv in self.cr_vars.items():
            if not self._enqueue(cv if rid in cr_active else -cv):
                return
        if not self._propagate():
            return

        order = list(decide_order) if decide_order is not None else list(range(self.natoms))
        if decide_order is not None:
            rest = [a for a in range(self.natoms) if a not in set(order)]
            order += rest
        order_vars = [a + 1 for a in order]

        # decision stack: [var, tried_true, trail_mark, order_pos]
        stack: list[list[int]] = []
        found = 0

        def pick(start: int) -> int:
            for pos in range(start, len(order_vars)):
                if self._assign[order_vars[pos]] == 0:
                    return pos
            return -1

        def undo(mark: int) -> None:
            while len(self._trail) > mark:
                self._assign[self._trail.pop()] = 0
            self._qhead = len(self._trail)

        def backtrack_flip() -> bool:
            # flip the deepest untried decision; pop exhausted levels
            while stack:
                var, tried_true, mark, _pos = stack[-1]
                undo(mark)
                if not tried_true:
                    stack[-1][1] = True
                    self._enqueue(var)
                    if self._propagate():
                        return True
                    undo(mark)
                stack.pop()
            return False

        pos = pick(0)
        while True:
            if pos == -1:
                model = frozenset(a for a in range(self.natoms)
                                  if self._assign[a + 1] == 1)
                if is_stable(self.g, self.g.literals(model),
                             facts=assume, cr_active=cr_active):
                    yield model
                    found += 1
                    if limit is not None and found >= limit:
                        return
                if not backtrack_flip():
                    return
            else:
                var = order_vars[pos]
                stack.append([var, False, len(self._trail), pos])
                self._enqueue(-var)
                if not self._propagate():
                    if not backtrack_flip():
                        return
            pos = pick(stack[-1][3] if stack else 0)


def stable_models(g: GroundProgram, limit: Optional[int] = None) -> list[AnswerSet]:
    """All stable models of a CR-free ground program, lexicographic order."""
    if any(r.is_cr for r in g.rules):
        raise LogicError("stable_models requires a CR-free program; use cr_solve")
    return [AnswerSet(g.literals(m)) for m in Solver(g).models(limit=limit)]


def cr_solve(prog: Program, limit: Optional[int] = None,
             preference: str = "cardinality") -> list[AnswerSet]:
    """Answer sets of a program with CR rules.

    A minimal set R of CR rules (by cardinality, or by set inclusion when
    ``preference="inclusion"``) is converted to regular rules so that the
    program becomes consistent; ``cr_applied`` on each model records R.
    """
    g = ground(prog)
    return cr_solve_ground(g, limit=limit, preference=preference)


def cr_solve_ground(g: GroundProgram, limit: Optional[int] = None,
                    preference: str = "cardinality",
                    assume: frozenset[int] = frozenset()) -> list[AnswerSet]:
    if preference not in ("cardinality", "inclusion"):
        raise ValueError(f"unknown CR preference {preference!r}")
    solver = Solver(g)
    cr_ids = g.cr_ids
    collected: list[tuple[frozenset[int], frozenset[int]]] = []
    admissible: list[frozenset[int]] = []
    for k in range(len(cr_ids) + 1):
        for subset in itertools.combinations(cr_ids, k):
            sub = frozenset(subset)
            if preference == "inclusion" and any(a <= sub for a in admissible):
                continue
            found = [(m, sub) for m in solver.models(assume=assume, cr_active=sub)]
            if found:
                admissible.append(sub)
                collected.extend(found)
        if collected and preference == "cardinality":
            break
    n = len(g.atoms)
    collected.sort(key=lambda mc: (_model_sort_key(n, mc[0]), sorted(mc[1])))
    if limit is not None:
        collected = collected[:limit]
    return [AnswerSet(g.literals(m), sub) for m, sub in collected]
