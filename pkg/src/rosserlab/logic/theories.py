"""The numeral theory, the weak arithmetic R, the successor theory, and a
budgeted theorem enumerator realizing provability as an RE set.

Axiom schemes are held as builder/recognizer pairs over canonical variable
choices (the quantified variable is 0, the witness of <= is 1), so axiom
instances can be both enumerated and checked in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..coding import unpair
from ..kernel import register_extern
from . import proof
from .syntax import (
    All,
    And,
    Eq,
    Ex,
    Formula,
    Imp,
    Not,
    Num,
    Or,
    Plus,
    Times,
    code_formula,
    decode_formula,
    le,
    num,
    numeral,
    or_chain,
    subst,
    succ_term,
    var,
)


@dataclass(frozen=True)
class Theory:
    """An RE theory: a recognizer for axioms plus a deterministic axiom
    stream (axiom_at may return None for skipped slots)."""

    name: str
    signature: tuple[str, ...]
    is_axiom: Callable[[Formula], bool]
    axiom_at: Callable[[int], Formula | None]
    fixtures: tuple[Formula, ...] = ()


# ---------------------------------------------------------------------------
# The numeral theory
# ---------------------------------------------------------------------------


def distinct_numerals(m: int, n: int) -> Formula:
    if m == n:
        raise ValueError("the scheme needs distinct naturals")
    return Not(Eq(num(m), num(n)))


def _is_num_axiom(f: Formula) -> bool:
    return (
        isinstance(f, Not)
        and isinstance(f.f, Eq)
        and isinstance(f.f.t, Num)
        and isinstance(f.f.u, Num)
        and f.f.t.k != f.f.u.k
    )


def _num_axiom_at(k: int) -> Formula | None:
    m, n = unpair(k)
    if m == n:
        return None
    return distinct_numerals(m, n)


NUM = Theory("Num", ("0", "S"), _is_num_axiom, _num_axiom_at)


# ---------------------------------------------------------------------------
# The weak arithmetic R
# ---------------------------------------------------------------------------


def ax_add(m: int, n: int) -> Formula:
    return Eq(Plus(num(m), num(n)), num(m + n))


def ax_mul(m: int, n: int) -> Formula:
    return Eq(Times(num(m), num(n)), num(m * n))


def ax_neq(m: int, n: int) -> Formula:
    return distinct_numerals(m, n)


def ax_cases(n: int) -> Formula:
    """Everything below a numeral is one of the listed numerals."""
    disjuncts = [Eq(var(0), num(k)) for k in range(n + 1)]
    return All(0, Imp(le(var(0), num(n)), or_chain(disjuncts)))


def ax_dichotomy(n: int) -> Formula:
    """Every element compares with each numeral."""
    return All(0, Or(le(var(0), num(n)), le(num(n), var(0))))


def _is_r_axiom(f: Formula) -> bool:
    if isinstance(f, Eq):
        if isinstance(f.t, Plus) and isinstance(f.t.t, Num) and isinstance(f.t.u, Num):
            return isinstance(f.u, Num) and f.u.k == f.t.t.k + f.t.u.k
        if isinstance(f.t, Times) and isinstance(f.t.t, Num) and isinstance(f.t.u, Num):
            return isinstance(f.u, Num) and f.u.k == f.t.t.k * f.t.u.k
        return False
    if _is_num_axiom(f):
        return True
    if isinstance(f, All) and f.v == 0:
        body = f.f
        if isinstance(body, Imp):
            bound = _le_bound_of(body.f)
            return bound is not None and f == ax_cases(bound)
        if isinstance(body, Or):
            bound = _le_bound_of(body.f)
            return bound is not None and f == ax_dichotomy(bound)
    return False


def _le_bound_of(f: Formula) -> int | None:
    """The n in a canonical 'var 0 <= numeral n' guard."""
    if (
        isinstance(f, Ex)
        and f.v == 1
        and isinstance(f.f, Eq)
        and isinstance(f.f.t, Plus)
        and f.f.t.t == var(1)
        and f.f.t.u == var(0)
        and isinstance(f.f.u, Num)
    ):
        return f.f.u.k
    return None


def _r_axiom_at(k: int) -> Formula | None:
    scheme, rest = k % 5, k // 5
    if scheme in (0, 1, 2):
        m, n = unpair(rest)
        if scheme == 0:
            return ax_add(m, n)
        if scheme == 1:
            return ax_mul(m, n)
        return ax_neq(m, n) if m != n else None
    return ax_cases(rest) if scheme == 3 else ax_dichotomy(rest)


R = Theory("R", ("0", "S", "+", "*"), _is_r_axiom, _r_axiom_at)


# ---------------------------------------------------------------------------
# The successor theory and its extensions
# ---------------------------------------------------------------------------

S1 = All(0, All(1, Imp(Eq(succ_term(var(0)), succ_term(var(1))), Eq(var(0), var(1)))))
S2 = All(0, Not(Eq(succ_term(var(0)), num(0))))
S3 = All(0, Imp(Not(Eq(var(0), num(0))), Ex(1, Eq(var(0), succ_term(var(1))))))


def loop_sentence(n: int) -> Formula:
    """There is a point returning to itself after n successor steps."""
    if n < 1:
        raise ValueError("needs n >= 1")
    t = var(0)
    for _ in range(n):
        t = succ_term(t)
    return Ex(0, Eq(t, var(0)))


def _is_succ_axiom(f: Formula) -> bool:
    return f in (S1, S2, S3)


def _succ_axiom_at(k: int) -> Formula | None:
    return (S1, S2, S3)[k] if k < 3 else None


SUCC = Theory("Succ", ("0", "S"), _is_succ_axiom, _succ_axiom_at)


def succ_extension(
    in_left: Callable[[int], bool], in_right: Callable[[int], bool], name: str
) -> Theory:
    """The successor theory extended by loop sentences for members of one set
    and their negations for the other.  The membership tests stand in for the
    bounded approximations of the two RE components; no separation verdict is
    ever computed from this fixture."""

    def is_axiom(f: Formula) -> bool:
        if _is_succ_axiom(f):
            return True
        target, positive = (f, True) if not isinstance(f, Not) else (f.f, False)
        n = _loop_index(target)
        if n is None:
            return False
        return in_left(n) if positive else in_right(n)

    def axiom_at(k: int) -> Formula | None:
        if k < 3:
            return _succ_axiom_at(k)
        k -= 3
        n, side = (k // 2) + 1, k % 2
        if side == 0 and in_left(n):
            return loop_sentence(n)
        if side == 1 and in_right(n):
            return Not(loop_sentence(n))
        return None

    return Theory(name, ("0", "S"), is_axiom, axiom_at)


def _loop_index(f: Formula) -> int | None:
    from .syntax import S as SuccTerm

    if not (isinstance(f, Ex) and f.v == 0 and isinstance(f.f, Eq) and f.f.u == var(0)):
        return None
    n, t = 0, f.f.t
    while isinstance(t, SuccTerm):
        n += 1
        t = t.t
    return n if (t == var(0) and n >= 1) else None


# ---------------------------------------------------------------------------
# Theorem enumeration
# ---------------------------------------------------------------------------


class _EnumState:
    __slots__ = ("steps", "emitted", "first_step", "derivs")

    def __init__(self) -> None:
        self.steps = 0
        self.emitted: list[tuple[int, Formula]] = []
        self.first_step: dict[int, int] = {}
        self.derivs: list[proof.Derivation] = []


_ENUM: dict[str, _EnumState] = {}


def _advance(theory: Theory, state: _EnumState, upto: int) -> None:
    while state.steps < upto:
        s = state.steps
        state.steps += 1
        if s % 2 == 0:
            f = theory.axiom_at(s // 2)
            if f is None:
                continue
            d = proof.axiom(f)
        else:
            i, j = unpair(s // 2)
            if i >= len(state.emitted) or j >= len(state.emitted):
                continue
            fi = state.emitted[i][1]
            fj = state.emitted[j][1]
            if not (isinstance(fi, Imp) and fi.f == fj):
                continue
            f = fi.g
            d = proof.taut(f, (state.derivs[i], state.derivs[j]))
        code = code_formula(f)
        if code in state.first_step:
            continue
        state.first_step[code] = s
        state.emitted.append((code, f))
        state.derivs.append(d)


def enumerate_theorems(theory: Theory, budget: int) -> list[int]:
    """Codes of theorems found within the first ``budget`` enumeration steps.
    Monotone in the budget; every emitted code has a checked derivation."""
    state = _ENUM.setdefault(theory.name, _EnumState())
    _advance(theory, state, budget)
    return [c for c, _ in state.emitted if state.first_step[c] < budget]


def provable_within(theory: Theory, code: int, budget: int) -> bool:
    state = _ENUM.setdefault(theory.name, _EnumState())
    _advance(theory, state, budget)
    step = state.first_step.get(code)
    return step is not None and step < budget


def emitted_derivation(theory: Theory, code: int) -> proof.Derivation | None:
    state = _ENUM.get(theory.name)
    if state is None or code not in state.first_step:
        return None
    for i, (c, _) in enumerate(state.emitted):
        if c == code:
            return state.derivs[i]
    return None


# ---------------------------------------------------------------------------
# Externs: bounded provability in R and numeral substitution on codes
# ---------------------------------------------------------------------------


def _ext_provable0(args: tuple[int, ...]) -> int:
    """provable0(c, s) = 0 when the R-enumerator emits code c within s steps."""
    c, s = args[0], args[1]
    return 0 if provable_within(R, c, s) else 1


def _subst_numerals(code: int, xs: tuple[int, ...]) -> Formula:
    f = decode_formula(code)
    for i, x in enumerate(xs, start=1):
        f = subst(f, i, numeral(x))
    return f


def _ext_subst(args: tuple[int, ...]) -> int:
    """subst(c, xs...) = the code of formula c with variables 1..n replaced
    by the numerals of xs."""
    return code_formula(_subst_numerals(args[0], args[1:]))


def _ext_negsubst(args: tuple[int, ...]) -> int:
    """negsubst(c, xs...) = the code of the negated numeral instance."""
    return code_formula(Not(_subst_numerals(args[0], args[1:])))


for _tag, _fn in (
    ("provable0", _ext_provable0),
    ("subst", _ext_subst),
    ("negsubst", _ext_negsubst),
):
    register_extern(_tag, _fn)
