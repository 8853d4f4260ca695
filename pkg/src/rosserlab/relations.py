"""RE relations as first-class values: membership, the witness-comparison
relation, the separation split, arity manipulation, and a library of
decidable fixtures.

A fixture's machine program is a mu-search whose body is an and/or tree of
term equalities compiled to straight-line code, so its step cost per
candidate is a known constant.  That shape is what lets the logic layer
write down step formulas with exact time accounting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, Sequence

from .kernel import (
    Compose,
    Converged,
    Extern,
    Lit,
    Mu,
    Program,
    Proj,
    Succ,
    Universal,
    code_program,
    count_nodes,
    eval_program,
    parse_sexp,
)
from .logic.syntax import Num, Plus, S, Term, Times, Var, num, succ_term, var
from .smn import smn_suffix


@dataclass(frozen=True)
class ReRelation:
    """The n-ary RE relation with a given index; equality is index equality,
    never extensional equality."""

    arity: int
    index: int


YES = "yes"
UNKNOWN = "unknown"


def member_within(r: ReRelation, args: Sequence[int], fuel: int) -> str:
    """Fuel-bounded membership: YES is definitive, UNKNOWN means not within
    fuel.  Monotone in fuel."""
    from .kernel import halts_within

    if len(args) != r.arity:
        raise ValueError("argument count must match the relation arity")
    return YES if halts_within(r.index, r.arity, args, fuel) else UNKNOWN


def membership_time(r: ReRelation, args: Sequence[int], fuel: int) -> int | None:
    """Exact halting time of the membership program, or None within fuel."""
    from .kernel import halting_time

    return halting_time(r.index, r.arity, args, fuel)


# ---------------------------------------------------------------------------
# Search conditions: and/or trees of term equalities
# ---------------------------------------------------------------------------
#
# Terms use Var(1..n) for the relation arguments and Var(n+1) for the search
# candidate.  "and" compiles to a sum of equality tests (zero iff all zero),
# "or" to a product (zero iff some factor zero).

CondTree = tuple


def cond_eq(left: Term, right: Term) -> CondTree:
    return ("eq", left, right)


def cond_and(*subs: CondTree) -> CondTree:
    return ("and", *subs)


def cond_or(*subs: CondTree) -> CondTree:
    return ("or", *subs)


COND_TRUE: CondTree = ("true",)
COND_FALSE: CondTree = ("false",)


def term_program(t: Term, total: int) -> Program:
    if isinstance(t, Var):
        return Proj(total, t.i)
    if isinstance(t, Num):
        return Lit(t.k, total)
    if isinstance(t, S):
        return Compose(Succ(), (term_program(t.t, total),))
    if isinstance(t, Plus):
        return Compose(
            Extern("add", 2), (term_program(t.t, total), term_program(t.u, total))
        )
    if isinstance(t, Times):
        return Compose(
            Extern("mul", 2), (term_program(t.t, total), term_program(t.u, total))
        )
    raise TypeError(f"cannot compile term {t!r}")


def cond_program(cond: CondTree, total: int) -> Program:
    kind = cond[0]
    if kind == "eq":
        return Compose(
            Extern("eq", 2), (term_program(cond[1], total), term_program(cond[2], total))
        )
    if kind in ("and", "or"):
        ext = Extern("add", 2) if kind == "and" else Extern("mul", 2)
        subs = [cond_program(c, total) for c in cond[1:]]
        if not subs:
            raise ValueError("empty connective")
        acc = subs[0]
        for s in subs[1:]:
            acc = Compose(ext, (acc, s))
        return acc
    if kind == "true":
        return Lit(0, total)
    if kind == "false":
        return Lit(1, total)
    raise ValueError(f"unknown condition {kind!r}")


def cond_holds(cond: CondTree, env: dict[int, int]) -> bool:
    from .logic.syntax import term_value

    kind = cond[0]
    if kind == "eq":
        return term_value(cond[1], env) == term_value(cond[2], env)
    if kind == "and":
        return all(cond_holds(c, env) for c in cond[1:])
    if kind == "or":
        return any(cond_holds(c, env) for c in cond[1:])
    return kind == "true"


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecidableFixture:
    """An RE relation paired with a total decider used as the test oracle.
    When the membership program is a mu-search over a condition tree, the
    tree and its constant body cost are carried along for arithmetization."""

    name: str
    relation: ReRelation
    decider: Callable[[tuple[int, ...]], bool]
    description: str
    cond: CondTree | None = None
    body_cost: int = 0

    @property
    def arity(self) -> int:
        return self.relation.arity

    def holds(self, args: Sequence[int]) -> bool:
        return self.decider(tuple(args))


def mu_cond_fixture(
    name: str,
    arity: int,
    cond: CondTree,
    decider: Callable[[tuple[int, ...]], bool],
    description: str,
    padding: int = 0,
) -> DecidableFixture:
    """Build a search fixture.  ``padding`` adds value-neutral body cost
    (adding zero), separating the halting-time lines of fixtures that would
    otherwise tie at overlap points of the witness comparison."""
    total = arity + 1
    body = cond_program(cond, total)
    for _ in range(padding):
        body = Compose(Extern("add", 2), (body, Lit(0, total)))
    program = Mu(body)
    return DecidableFixture(
        name=name,
        relation=ReRelation(arity, code_program(program)),
        decider=decider,
        description=description,
        cond=cond,
        body_cost=count_nodes(body),
    )


def mu_search_time(fix: DecidableFixture, witness: int) -> int:
    """Exact convergence time of a condition fixture whose least witness is
    the given candidate: one for the search node plus (witness + 1) rounds
    of candidate charge and body cost."""
    return 1 + (witness + 1) * (fix.body_cost + 1)


def _finite_set_cond(elements: Sequence[int]) -> CondTree:
    if not elements:
        return COND_FALSE
    return cond_or(*[cond_eq(var(1), num(e)) for e in sorted(elements)])


def _build_fixtures() -> dict[str, DecidableFixture]:
    x1, x2 = var(1), var(2)
    primes = [p for p in range(2, 98) if all(p % d for d in range(2, p))]
    composites = [c for c in range(4, 31) if any(c % d == 0 for d in range(2, c))]
    lib = [
        mu_cond_fixture(
            "evens", 1, cond_eq(Plus(var(2), var(2)), x1), lambda a: a[0] % 2 == 0,
            "even naturals (witness: the half)",
        ),
        mu_cond_fixture(
            "odds", 1, cond_eq(succ_term(Plus(var(2), var(2))), x1),
            lambda a: a[0] % 2 == 1, "odd naturals (witness: the floor half)",
        ),
        mu_cond_fixture(
            "mult3", 1, cond_eq(Times(var(2), num(3)), x1), lambda a: a[0] % 3 == 0,
            "multiples of three",
        ),
        mu_cond_fixture(
            "mult4", 1, cond_eq(Times(var(2), num(4)), x1), lambda a: a[0] % 4 == 0,
            "multiples of four", padding=1,
        ),
        mu_cond_fixture(
            "primes_small", 1, _finite_set_cond(primes),
            lambda a, s=frozenset(primes): a[0] in s, "primes up to 97",
        ),
        mu_cond_fixture(
            "composites_small", 1, _finite_set_cond(composites),
            lambda a, s=frozenset(composites): a[0] in s, "composites up to 30",
        ),
        mu_cond_fixture(
            "fin123", 1, _finite_set_cond([1, 2, 3]),
            lambda a: a[0] in (1, 2, 3), "the explicit set {1, 2, 3}",
        ),
        mu_cond_fixture("empty", 1, COND_FALSE, lambda a: False, "the empty set"),
        mu_cond_fixture("allnat", 1, COND_TRUE, lambda a: True, "all naturals"),
        mu_cond_fixture(
            "lt2", 2, cond_eq(Plus(x1, succ_term(var(3))), x2),
            lambda a: a[0] < a[1], "pairs with first below second",
        ),
        mu_cond_fixture(
            "gt2", 2, cond_eq(Plus(x2, succ_term(var(3))), x1),
            lambda a: a[0] > a[1], "pairs with first above second",
        ),
        mu_cond_fixture(
            "diag2", 2, cond_eq(x1, x2), lambda a: a[0] == a[1], "the diagonal",
        ),
        mu_cond_fixture("empty2", 2, COND_FALSE, lambda a: False, "the empty 2-ary set"),
        mu_cond_fixture("allnat2", 2, COND_TRUE, lambda a: True, "all pairs"),
    ]
    return {f.name: f for f in lib}


FIXTURES: dict[str, DecidableFixture] = _build_fixtures()


def fixture(name: str) -> DecidableFixture:
    return FIXTURES[name]


# ---------------------------------------------------------------------------
# Witness comparison and the separation split
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def before_program(n: int) -> Program:
    """The (n+2)-ary search program accepting (xs, y, z) exactly when xs
    enters relation y strictly before entering relation z."""
    if n < 1:
        raise ValueError("needs arity n >= 1")
    return Mu(Extern("before_step", n + 3))


@lru_cache(maxsize=64)
def before_index(n: int) -> int:
    return code_program(before_program(n))


def before_holds(
    a: DecidableFixture, b: DecidableFixture, args: Sequence[int], fuel: int
) -> bool:
    """Decide the witness comparison through the fixture deciders: membership
    in a strictly earlier than in b, with ties yielding neither side."""
    if not a.holds(args):
        return False
    ta = membership_time(a.relation, args, fuel)
    if ta is None:
        raise RuntimeError("fixture member did not converge within fuel")
    if not b.holds(args):
        return True
    tb = membership_time(b.relation, args, fuel)
    if tb is None:
        raise RuntimeError("fixture member did not converge within fuel")
    return ta < tb


def separation_split(a: ReRelation, b: ReRelation) -> tuple[ReRelation, ReRelation]:
    """RE relations (C, D) with A-B inside C, B-A inside D, C and D disjoint,
    and C union D = A union B; realized by the two orientations of the
    witness comparison."""
    if a.arity != b.arity:
        raise ValueError("the relations must share one arity")
    n = a.arity
    c = ReRelation(n, smn_suffix(before_index(n), n, (a.index, b.index)))
    d = ReRelation(n, smn_suffix(before_index(n), n, (b.index, a.index)))
    return c, d


def cylindrify(m_rel: ReRelation, m: int) -> ReRelation:
    """Lift an n-ary relation to arity m > n; membership depends only on the
    first n coordinates."""
    n = m_rel.arity
    if m <= n:
        raise ValueError("target arity must exceed the source arity")
    prog = Compose(
        Universal(n), (Lit(m_rel.index, m), *[Proj(m, i + 1) for i in range(n)])
    )
    return ReRelation(m, code_program(prog))


def relation_of_program(p: Program) -> ReRelation:
    return ReRelation(p.arity, code_program(p))


def window_points(arity: int, hi: int, lo: int = 0) -> Iterator[tuple[int, ...]]:
    """The probe grid: all points with coordinates between lo and hi."""
    yield from product(range(lo, hi + 1), repeat=arity)


# ---------------------------------------------------------------------------
# Fixture spec files
# ---------------------------------------------------------------------------

_BUILTIN_DECIDERS: dict[str, Callable[..., Callable[[tuple[int, ...]], bool]]] = {
    "evens": lambda: lambda a: a[0] % 2 == 0,
    "odds": lambda: lambda a: a[0] % 2 == 1,
    "mult": lambda k: lambda a: a[0] % k == 0,
    "finite": lambda *els: lambda a, s=frozenset(els): a[0] in s,
    "lt": lambda: lambda a: a[0] < a[1],
    "gt": lambda: lambda a: a[0] > a[1],
    "always": lambda: lambda a: True,
    "never": lambda: lambda a: False,
}


def parse_fixture_spec(text: str) -> DecidableFixture:
    """Parse ``(fixture <name> (arity n) (program <sexp>) (decider <builtin args>))``."""
    from .kernel import parse_program, print_program

    tree = parse_sexp(text)
    if not isinstance(tree, list) or len(tree) != 5 or tree[0] != "fixture":
        raise ValueError("expected (fixture name (arity n) (program p) (decider d ...))")
    name = tree[1]
    if not isinstance(name, str):
        raise ValueError("fixture name must be an atom")
    arity_part, program_part, decider_part = tree[2], tree[3], tree[4]
    if not (isinstance(arity_part, list) and arity_part[:1] == ["arity"] and len(arity_part) == 2):
        raise ValueError("missing (arity n)")
    arity = int(arity_part[1])
    if not (isinstance(program_part, list) and program_part[:1] == ["program"] and len(program_part) == 2):
        raise ValueError("missing (program sexp)")
    prog = parse_program(_tree_to_text(program_part[1]))
    if not (isinstance(decider_part, list) and decider_part[:1] == ["decider"] and len(decider_part) >= 2):
        raise ValueError("missing (decider builtin args)")
    builtin = decider_part[1]
    args = [int(a) for a in decider_part[2:]]
    if builtin not in _BUILTIN_DECIDERS:
        raise ValueError(f"unknown decider builtin {builtin!r}")
    decider = _BUILTIN_DECIDERS[builtin](*args)
    return DecidableFixture(
        name=name,
        relation=ReRelation(arity, code_program(coerce_to(prog, arity))),
        decider=decider,
        description=f"file fixture {name} ({print_program(prog)})",
    )


def coerce_to(p: Program, n: int) -> Program:
    from .kernel import coerce

    return coerce(p, n)


def _tree_to_text(tree: object) -> str:
    if isinstance(tree, str):
        return tree
    assert isinstance(tree, list)
    return "(" + " ".join(_tree_to_text(t) for t in tree) + ")"
