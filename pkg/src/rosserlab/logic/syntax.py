"""Terms and formulas over {0, S, +, *}, numerals, substitution, Goedel codes.

Numerals are kept as a dedicated ``Num`` node (S applied k times to 0, stored
as the single natural k), so formulas mentioning code-sized values stay small
and hashing stays O(1) per node.  ``S`` of a numeral normalizes to the next
numeral; the printer writes numerals as ``(num k)`` and the parser also
accepts the spelled-out ``(zero)`` / ``(s t)`` forms.

Hashes are cached at construction since derivation checking compares shared
subformulas constantly.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from ..coding import TAG_FORMULA, pair2, unpair


class Term:
    __slots__ = ("hash_",)

    def __hash__(self) -> int:
        return self.hash_

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self.hash_ != other.hash_:  # type: ignore[attr-defined]
            return False
        return self._key() == other._key()  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return print_term(self)


class Num(Term):
    __slots__ = ("k",)

    def __init__(self, k: int) -> None:
        if k < 0:
            raise ValueError("numerals are naturals")
        self.k = k
        self.hash_ = hash(("num", k))

    def _key(self):
        return self.k


class Var(Term):
    __slots__ = ("i",)

    def __init__(self, i: int) -> None:
        if i < 0:
            raise ValueError("variable indices are naturals")
        self.i = i
        self.hash_ = hash(("var", i))

    def _key(self):
        return self.i


class S(Term):
    __slots__ = ("t",)

    def __init__(self, t: Term) -> None:
        if isinstance(t, Num):
            raise ValueError("use succ_term; S of a numeral is a numeral")
        self.t = t
        self.hash_ = hash(("s", t.hash_))

    def _key(self):
        return self.t


class Plus(Term):
    __slots__ = ("t", "u")

    def __init__(self, t: Term, u: Term) -> None:
        self.t = t
        self.u = u
        self.hash_ = hash(("plus", t.hash_, u.hash_))

    def _key(self):
        return (self.t, self.u)


class Times(Term):
    __slots__ = ("t", "u")

    def __init__(self, t: Term, u: Term) -> None:
        self.t = t
        self.u = u
        self.hash_ = hash(("times", t.hash_, u.hash_))

    def _key(self):
        return (self.t, self.u)


@lru_cache(maxsize=4096)
def num(k: int) -> Num:
    return Num(k)


@lru_cache(maxsize=1024)
def var(i: int) -> Var:
    return Var(i)


def numeral(n: int) -> Term:
    """The numeral for n: S applied n times to 0."""
    return num(n)


def succ_term(t: Term) -> Term:
    """S t, normalized on numerals."""
    if isinstance(t, Num):
        return num(t.k + 1)
    return S(t)


class Formula:
    __slots__ = ("hash_",)

    def __hash__(self) -> int:
        return self.hash_

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self.hash_ != other.hash_:  # type: ignore[attr-defined]
            return False
        return self._key() == other._key()  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return print_formula(self)


class Eq(Formula):
    __slots__ = ("t", "u")

    def __init__(self, t: Term, u: Term) -> None:
        self.t = t
        self.u = u
        self.hash_ = hash(("eq", t.hash_, u.hash_))

    def _key(self):
        return (self.t, self.u)


class Not(Formula):
    __slots__ = ("f",)

    def __init__(self, f: Formula) -> None:
        self.f = f
        self.hash_ = hash(("not", f.hash_))

    def _key(self):
        return self.f


class _Binary(Formula):
    __slots__ = ("f", "g")
    _tag = ""

    def __init__(self, f: Formula, g: Formula) -> None:
        self.f = f
        self.g = g
        self.hash_ = hash((self._tag, f.hash_, g.hash_))

    def _key(self):
        return (self.f, self.g)


class And(_Binary):
    __slots__ = ()
    _tag = "and"


class Or(_Binary):
    __slots__ = ()
    _tag = "or"


class Imp(_Binary):
    __slots__ = ()
    _tag = "imp"


class _Quant(Formula):
    __slots__ = ("v", "f")
    _tag = ""

    def __init__(self, v: int, f: Formula) -> None:
        self.v = v
        self.f = f
        self.hash_ = hash((self._tag, v, f.hash_))

    def _key(self):
        return (self.v, self.f)


class All(_Quant):
    __slots__ = ()
    _tag = "all"


class Ex(_Quant):
    __slots__ = ()
    _tag = "ex"


def iff(f: Formula, g: Formula) -> Formula:
    return And(Imp(f, g), Imp(g, f))


def and_chain(fs: list[Formula]) -> Formula:
    if not fs:
        raise ValueError("empty conjunction")
    acc = fs[0]
    for f in fs[1:]:
        acc = And(acc, f)
    return acc


def or_chain(fs: list[Formula]) -> Formula:
    if not fs:
        raise ValueError("empty disjunction")
    acc = fs[0]
    for f in fs[1:]:
        acc = Or(acc, f)
    return acc


# ---------------------------------------------------------------------------
# Variables and substitution
# ---------------------------------------------------------------------------


def term_vars(t: Term) -> frozenset[int]:
    if isinstance(t, Var):
        return frozenset((t.i,))
    if isinstance(t, Num):
        return frozenset()
    if isinstance(t, S):
        return term_vars(t.t)
    return term_vars(t.t) | term_vars(t.u)  # type: ignore[union-attr]


def free_vars(f: Formula) -> frozenset[int]:
    if isinstance(f, Eq):
        return term_vars(f.t) | term_vars(f.u)
    if isinstance(f, Not):
        return free_vars(f.f)
    if isinstance(f, _Binary):
        return free_vars(f.f) | free_vars(f.g)
    if isinstance(f, _Quant):
        return free_vars(f.f) - {f.v}
    raise TypeError(f"unknown formula {f!r}")


def max_var(f: Formula) -> int:
    """Largest variable index occurring (free or bound); -1 if none."""
    if isinstance(f, Eq):
        return max(term_vars(f.t) | term_vars(f.u), default=-1)
    if isinstance(f, Not):
        return max_var(f.f)
    if isinstance(f, _Binary):
        return max(max_var(f.f), max_var(f.g))
    if isinstance(f, _Quant):
        return max(f.v, max_var(f.f))
    raise TypeError(f"unknown formula {f!r}")


def subst_term(t: Term, x: int, r: Term) -> Term:
    if isinstance(t, Var):
        return r if t.i == x else t
    if isinstance(t, Num):
        return t
    if isinstance(t, S):
        return succ_term(subst_term(t.t, x, r))
    if isinstance(t, Plus):
        return Plus(subst_term(t.t, x, r), subst_term(t.u, x, r))
    if isinstance(t, Times):
        return Times(subst_term(t.t, x, r), subst_term(t.u, x, r))
    raise TypeError(f"unknown term {t!r}")


def subst(f: Formula, x: int, r: Term) -> Formula:
    """Capture-avoiding substitution of the term r for the variable x."""
    if isinstance(f, Eq):
        return Eq(subst_term(f.t, x, r), subst_term(f.u, x, r))
    if isinstance(f, Not):
        return Not(subst(f.f, x, r))
    if isinstance(f, _Binary):
        return type(f)(subst(f.f, x, r), subst(f.g, x, r))
    if isinstance(f, _Quant):
        if f.v == x or x not in free_vars(f):
            return f
        if f.v in term_vars(r):
            fresh = max(max_var(f), max(term_vars(r), default=-1), x) + 1
            renamed = subst(f.f, f.v, var(fresh))
            return type(f)(fresh, subst(renamed, x, r))
        return type(f)(f.v, subst(f.f, x, r))
    raise TypeError(f"unknown formula {f!r}")


def le(t: Term, u: Term) -> Formula:
    """t <= u, sugar for 'some z with z + t = u' with a deterministic fresh z."""
    fresh = max(max(term_vars(t), default=-1), max(term_vars(u), default=-1)) + 1
    return Ex(fresh, Eq(Plus(var(fresh), t), u))


def le_parts(f: Formula) -> tuple[int, Term, Term] | None:
    """Recognize the <= sugar; returns (witness var, t, u) or None."""
    if (
        isinstance(f, Ex)
        and isinstance(f.f, Eq)
        and isinstance(f.f.t, Plus)
        and isinstance(f.f.t.t, Var)
        and f.f.t.t.i == f.v
        and f.v not in term_vars(f.f.t.u)
        and f.v not in term_vars(f.f.u)
    ):
        return f.v, f.f.t.u, f.f.u
    return None


# ---------------------------------------------------------------------------
# Printing, parsing, coding
# ---------------------------------------------------------------------------


def print_term(t: Term) -> str:
    if isinstance(t, Num):
        return f"(num {t.k})"
    if isinstance(t, Var):
        return f"(var {t.i})"
    if isinstance(t, S):
        return f"(s {print_term(t.t)})"
    if isinstance(t, Plus):
        return f"(plus {print_term(t.t)} {print_term(t.u)})"
    if isinstance(t, Times):
        return f"(times {print_term(t.t)} {print_term(t.u)})"
    raise TypeError(f"unknown term {t!r}")


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"(eq {print_term(f.t)} {print_term(f.u)})"
    if isinstance(f, Not):
        return f"(not {print_formula(f.f)})"
    if isinstance(f, _Binary):
        return f"({f._tag} {print_formula(f.f)} {print_formula(f.g)})"
    if isinstance(f, _Quant):
        return f"({f._tag} {f.v} {print_formula(f.f)})"
    raise TypeError(f"unknown formula {f!r}")


def _nat(atom: object) -> int:
    if not isinstance(atom, str) or not atom.isdigit():
        raise ValueError(f"expected a natural, got {atom!r}")
    return int(atom)


def term_from_tree(tree: object) -> Term:
    if not isinstance(tree, list) or not tree or not isinstance(tree[0], str):
        raise ValueError("term must be a tagged list")
    head, rest = tree[0], tree[1:]
    if head == "num" and len(rest) == 1:
        return num(_nat(rest[0]))
    if head == "zero" and not rest:
        return num(0)
    if head == "var" and len(rest) == 1:
        return var(_nat(rest[0]))
    if head == "s" and len(rest) == 1:
        return succ_term(term_from_tree(rest[0]))
    if head == "plus" and len(rest) == 2:
        return Plus(term_from_tree(rest[0]), term_from_tree(rest[1]))
    if head == "times" and len(rest) == 2:
        return Times(term_from_tree(rest[0]), term_from_tree(rest[1]))
    raise ValueError(f"unknown term form {head!r}")


def formula_from_tree(tree: object) -> Formula:
    if not isinstance(tree, list) or not tree or not isinstance(tree[0], str):
        raise ValueError("formula must be a tagged list")
    head, rest = tree[0], tree[1:]
    if head == "eq" and len(rest) == 2:
        return Eq(term_from_tree(rest[0]), term_from_tree(rest[1]))
    if head == "not" and len(rest) == 1:
        return Not(formula_from_tree(rest[0]))
    if head in ("and", "or", "imp") and len(rest) == 2:
        cls = {"and": And, "or": Or, "imp": Imp}[head]
        return cls(formula_from_tree(rest[0]), formula_from_tree(rest[1]))
    if head in ("all", "ex") and len(rest) == 2:
        cls = {"all": All, "ex": Ex}[head]
        return cls(_nat(rest[0]), formula_from_tree(rest[1]))
    raise ValueError(f"unknown formula form {head!r}")


def parse_formula(text: str) -> Formula:
    from ..kernel import parse_sexp

    return formula_from_tree(parse_sexp(text))


def parse_term(text: str) -> Term:
    from ..kernel import parse_sexp

    return term_from_tree(parse_sexp(text))


# A closed false atom; the decode target for ill-formed formula codes, so
# junk codes are never provable in a consistent theory.
FALSE_ATOM = Eq(Num(0), Num(1))


def code_formula(f: Formula) -> int:
    raw = int.from_bytes(print_formula(f).encode("ascii"), "big")
    return pair2(TAG_FORMULA, raw)


@lru_cache(maxsize=16384)
def decode_formula(code: int) -> Formula:
    if code < 0:
        return FALSE_ATOM
    tag, raw = unpair(code)
    if tag != TAG_FORMULA or raw == 0:
        return FALSE_ATOM
    try:
        text = raw.to_bytes((raw.bit_length() + 7) // 8, "big").decode("ascii")
        return parse_formula(text)
    except (ValueError, UnicodeDecodeError):
        return FALSE_ATOM


# ---------------------------------------------------------------------------
# Standard-model evaluation on the bounded fragment
# ---------------------------------------------------------------------------


def term_value(t: Term, env: dict[int, int] | None = None) -> int:
    env = env or {}
    if isinstance(t, Num):
        return t.k
    if isinstance(t, Var):
        if t.i not in env:
            raise ValueError(f"open term: variable {t.i}")
        return env[t.i]
    if isinstance(t, S):
        return term_value(t.t, env) + 1
    if isinstance(t, Plus):
        return term_value(t.t, env) + term_value(t.u, env)
    if isinstance(t, Times):
        return term_value(t.t, env) * term_value(t.u, env)
    raise TypeError(f"unknown term {t!r}")


class OutsideFragment(Exception):
    """Raised on formulas outside the numeral-bounded fragment."""


def bounded_shape(f: Formula) -> tuple[str, int, Formula, Formula] | None:
    """Recognize bounded quantification: all x (x <= B -> body) or
    ex x (x <= B and body), with x not occurring in the bound B.
    Returns (kind, var, bound_le_formula, body)."""
    if isinstance(f, All) and isinstance(f.f, Imp):
        parts = le_parts(f.f.f)
        if parts is not None:
            _, lo, hi = parts
            if isinstance(lo, Var) and lo.i == f.v and f.v not in term_vars(hi):
                return ("all", f.v, f.f.f, f.f.g)
    if isinstance(f, Ex) and isinstance(f.f, And):
        parts = le_parts(f.f.f)
        if parts is not None:
            _, lo, hi = parts
            if isinstance(lo, Var) and lo.i == f.v and f.v not in term_vars(hi):
                return ("ex", f.v, f.f.f, f.f.g)
    return None


def truth_bounded(f: Formula, env: dict[int, int] | None = None) -> bool:
    """Standard-model truth for the bounded fragment: closed atoms, Boolean
    connectives, the <= sugar, and numeral-bounded quantifiers."""
    env = env or {}
    if isinstance(f, Eq):
        return term_value(f.t, env) == term_value(f.u, env)
    parts = le_parts(f)
    if parts is not None:
        _, t, u = parts
        return term_value(t, env) <= term_value(u, env)
    if isinstance(f, Not):
        return not truth_bounded(f.f, env)
    if isinstance(f, And):
        return truth_bounded(f.f, env) and truth_bounded(f.g, env)
    if isinstance(f, Or):
        return truth_bounded(f.f, env) or truth_bounded(f.g, env)
    if isinstance(f, Imp):
        return (not truth_bounded(f.f, env)) or truth_bounded(f.g, env)
    shape = bounded_shape(f)
    if shape is not None:
        kind, v, guard, body = shape
        bound = le_parts(guard)[2]  # type: ignore[index]
        b = term_value(bound, env)
        saved = env.get(v)
        try:
            for k in range(b + 1):
                env[v] = k
                holds = truth_bounded(body, env)
                if kind == "ex" and holds:
                    return True
                if kind == "all" and not holds:
                    return False
            return kind == "all"
        finally:
            if saved is None:
                env.pop(v, None)
            else:
                env[v] = saved
    raise OutsideFragment(print_formula(f))
