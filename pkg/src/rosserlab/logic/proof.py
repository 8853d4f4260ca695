"""A compact Hilbert-style calculus with checkable derivations.

Rules: theory axioms, term reflexivity, a Leibniz substitution scheme,
quantifier instantiation and witness schemes, a bridge from universal
negations to negated existentials, tautological consequence (verified by a
small SAT check over the propositional skeleton), and generalization.
Leibniz plus reflexivity recover symmetry, transitivity and congruence, so
no further equality axioms are needed.

Derivations are DAGs: shared subderivations are checked once, by identity.
"""

from __future__ import annotations

from typing import Iterable

from .syntax import (
    All,
    And,
    Eq,
    Ex,
    Formula,
    Imp,
    Not,
    Or,
    Term,
    subst,
)


class Derivation:
    __slots__ = ("rule", "conclusion", "children", "payload")

    def __init__(
        self,
        rule: str,
        conclusion: Formula,
        children: tuple["Derivation", ...] = (),
        payload: tuple = (),
    ) -> None:
        self.rule = rule
        self.conclusion = conclusion
        self.children = children
        self.payload = payload

    def __repr__(self) -> str:
        return f"<{self.rule}: {self.conclusion!r}>"


def axiom(f: Formula) -> Derivation:
    return Derivation("axiom", f)


def refl(t: Term) -> Derivation:
    return Derivation("refl", Eq(t, t), payload=(t,))


def leibniz(x: int, template: Formula, t: Term, u: Term) -> Derivation:
    conclusion = Imp(Eq(t, u), Imp(subst(template, x, t), subst(template, x, u)))
    return Derivation("leibniz", conclusion, payload=(x, template, t, u))


def q_inst(x: int, body: Formula, t: Term) -> Derivation:
    return Derivation(
        "q_inst", Imp(All(x, body), subst(body, x, t)), payload=(x, body, t)
    )


def q_wit(x: int, body: Formula, t: Term) -> Derivation:
    return Derivation(
        "q_wit", Imp(subst(body, x, t), Ex(x, body)), payload=(x, body, t)
    )


def nex(x: int, body: Formula) -> Derivation:
    return Derivation(
        "nex", Imp(All(x, Not(body)), Not(Ex(x, body))), payload=(x, body)
    )


def taut(conclusion: Formula, premises: Iterable[Derivation]) -> Derivation:
    return Derivation("taut", conclusion, children=tuple(premises))


def gen(x: int, d: Derivation) -> Derivation:
    return Derivation("gen", All(x, d.conclusion), children=(d,), payload=(x,))


# ---------------------------------------------------------------------------
# Propositional skeleton and SAT
# ---------------------------------------------------------------------------


class _Cnf:
    """Tseitin encoder mapping atoms (non-Boolean subformulas) to variables."""

    def __init__(self) -> None:
        self.atoms: dict[Formula, int] = {}
        self.clauses: list[tuple[int, ...]] = []
        self.next_var = 1

    def _fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def literal(self, f: Formula) -> int:
        if isinstance(f, Not):
            return -self.literal(f.f)
        if isinstance(f, (And, Or, Imp)):
            a = self.literal(f.f)
            b = self.literal(f.g)
            v = self._fresh()
            if isinstance(f, And):
                self.clauses += [(-v, a), (-v, b), (v, -a, -b)]
            elif isinstance(f, Or):
                self.clauses += [(-v, a, b), (v, -a), (v, -b)]
            else:
                self.clauses += [(-v, -a, b), (v, a), (v, -b)]
            return v
        lit = self.atoms.get(f)
        if lit is None:
            lit = self._fresh()
            self.atoms[f] = lit
        return lit


def _dpll(clauses: list[tuple[int, ...]], assign: dict[int, bool]) -> bool:
    """Satisfiability with unit propagation; assignments are passed down by
    copy so backtracking is trivial."""
    assign = dict(assign)
    while True:
        unit = None
        for c in clauses:
            unassigned = []
            satisfied = False
            for lit in c:
                val = assign.get(abs(lit))
                if val is None:
                    unassigned.append(lit)
                elif (lit > 0) == val:
                    satisfied = True
                    break
            if satisfied:
                continue
            if not unassigned:
                return False
            if len(unassigned) == 1:
                unit = unassigned[0]
                break
        if unit is None:
            break
        assign[abs(unit)] = unit > 0
    branch = None
    for c in clauses:
        satisfied = False
        free = None
        for lit in c:
            val = assign.get(abs(lit))
            if val is None:
                free = free or lit
            elif (lit > 0) == val:
                satisfied = True
                break
        if not satisfied and free is not None:
            branch = free
            break
        if not satisfied and free is None:
            return False
    if branch is None:
        return True
    for choice in (branch > 0, branch <= 0):
        trial = dict(assign)
        trial[abs(branch)] = choice
        if _dpll(clauses, trial):
            return True
    return False


def is_taut_consequence(premises: list[Formula], conclusion: Formula) -> bool:
    """Does the conclusion follow propositionally from the premises, reading
    quantified subformulas and atoms as propositional letters?"""
    enc = _Cnf()
    roots = [enc.literal(p) for p in premises]
    neg_goal = -enc.literal(conclusion)
    clauses = enc.clauses + [(r,) for r in roots] + [(neg_goal,)]
    return not _dpll(clauses, {})


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


class CheckResult:
    __slots__ = ("ok", "conclusion", "reason")

    def __init__(self, ok: bool, conclusion: Formula | None, reason: str = "") -> None:
        self.ok = ok
        self.conclusion = conclusion
        self.reason = reason

    def __bool__(self) -> bool:
        return self.ok


def _check_node(theory, d: Derivation) -> str | None:
    """None when the node is locally valid, else the offense."""
    c = d.conclusion
    if d.rule == "axiom":
        if not theory.is_axiom(c):
            return f"not an axiom of {theory.name}: {c!r}"
        return None
    if d.rule == "refl":
        (t,) = d.payload
        if c != Eq(t, t):
            return "reflexivity conclusion mismatch"
        return None
    if d.rule == "leibniz":
        x, template, t, u = d.payload
        want = Imp(Eq(t, u), Imp(subst(template, x, t), subst(template, x, u)))
        if c != want:
            return "substitution scheme mismatch"
        return None
    if d.rule == "q_inst":
        x, body, t = d.payload
        if c != Imp(All(x, body), subst(body, x, t)):
            return "instantiation scheme mismatch"
        return None
    if d.rule == "q_wit":
        x, body, t = d.payload
        if c != Imp(subst(body, x, t), Ex(x, body)):
            return "witness scheme mismatch"
        return None
    if d.rule == "nex":
        x, body = d.payload
        if c != Imp(All(x, Not(body)), Not(Ex(x, body))):
            return "negated-existential scheme mismatch"
        return None
    if d.rule == "gen":
        (x,) = d.payload
        if len(d.children) != 1 or c != All(x, d.children[0].conclusion):
            return "generalization mismatch"
        return None
    if d.rule == "taut":
        if not is_taut_consequence([ch.conclusion for ch in d.children], c):
            return "not a tautological consequence of the premises"
        return None
    return f"unknown rule {d.rule!r}"


def check_derivation(theory, d: Derivation) -> CheckResult:
    """Validate every node of the derivation DAG once; the result carries the
    root conclusion or the first offending node's reason."""
    seen: set[int] = set()
    stack = [(d, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if not expanded:
            stack.append((node, True))
            for ch in node.children:
                if id(ch) not in seen:
                    stack.append((ch, False))
            continue
        offense = _check_node(theory, node)
        if offense is not None:
            return CheckResult(False, None, offense)
        seen.add(id(node))
    return CheckResult(True, d.conclusion)


def derivation_size(d: Derivation) -> int:
    """Number of distinct nodes in the DAG."""
    seen: set[int] = set()
    stack = [d]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(node.children)
    return len(seen)
