"""The computation model: partial recursive programs, fuel-bounded evaluation,
an acceptable numbering, and the decidable step predicate.

Programs are first-order partial recursive ASTs (zero, literal, successor,
projection, composition, primitive recursion, unbounded search) extended with
two opcodes that keep index constructions cheap and expressive:

* ``Universal(n)`` runs the program with a given index on n arguments, so
  s-m-n style specializers can mention indices as data instead of inlining
  their ASTs.
* ``Extern(tag, k)`` calls a host function from a fixed registry frozen before
  the first evaluation.  Externs are total and deterministic; they supply
  cheap arithmetic, the bounded halting tests, bounded provability, and the
  code-building helpers that recursion-theorem constructions need at run time.

Every evaluation rule application costs one unit of fuel; the search opcode
charges one unit per candidate plus the body cost.  This makes
``halts_within`` decidable and monotone in the step bound.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .coding import TAG_PROGRAM, pair2, unpair, unpair_k, unpair_l

sys.setrecursionlimit(100_000)
# Indices embed other indices as decimal literals, so their digit counts grow
# by a constant factor per construction layer; lift the conversion guard.
sys.set_int_max_str_digits(20_000_000)


# ---------------------------------------------------------------------------
# Program AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Program:
    """Base class; every node knows its arity."""

    @property
    def arity(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(Program):
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("arity must be a natural")

    @property
    def arity(self) -> int:
        return self.k


@dataclass(frozen=True)
class Lit(Program):
    """k-ary constant function.  Constant cost regardless of the value, which
    keeps code-valued constants affordable inside constructed programs."""

    value: int
    k: int

    def __post_init__(self) -> None:
        if self.value < 0 or self.k < 0:
            raise ValueError("literal value and arity must be naturals")

    @property
    def arity(self) -> int:
        return self.k


@dataclass(frozen=True)
class Succ(Program):
    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class Proj(Program):
    k: int
    i: int

    def __post_init__(self) -> None:
        if not 1 <= self.i <= self.k:
            raise ValueError("projection index out of range")

    @property
    def arity(self) -> int:
        return self.k


@dataclass(frozen=True)
class Compose(Program):
    f: Program
    gs: tuple[Program, ...]

    def __post_init__(self) -> None:
        if self.f.arity != len(self.gs):
            raise ValueError("outer arity must match the number of inner programs")
        if self.gs:
            k = self.gs[0].arity
            if any(g.arity != k for g in self.gs):
                raise ValueError("inner programs must share one arity")

    @property
    def arity(self) -> int:
        return self.gs[0].arity if self.gs else 0


@dataclass(frozen=True)
class PrimRec(Program):
    """f(xs, 0) = base(xs); f(xs, y+1) = step(xs, y, f(xs, y))."""

    base: Program
    step: Program

    def __post_init__(self) -> None:
        if self.step.arity != self.base.arity + 2:
            raise ValueError("step arity must be base arity + 2")

    @property
    def arity(self) -> int:
        return self.base.arity + 1


@dataclass(frozen=True)
class Mu(Program):
    """Least u with body(xs, u) = 0; diverges when no such u exists."""

    body: Program

    def __post_init__(self) -> None:
        if self.body.arity < 1:
            raise ValueError("search body needs at least the candidate argument")

    @property
    def arity(self) -> int:
        return self.body.arity - 1


@dataclass(frozen=True)
class Extern(Program):
    tag: str
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("arity must be a natural")

    @property
    def arity(self) -> int:
        return self.k


@dataclass(frozen=True)
class Universal(Program):
    """(n+1)-ary self-interpreter: on (i, xs) runs the program with index i,
    coerced to arity n, on xs."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("arity must be a natural")

    @property
    def arity(self) -> int:
        return self.n + 1


# The canonical diverging program: searches for a zero of a body that is
# always positive.  Ill-formed indices decode to it.
DIVERGER = Mu(Compose(Succ(), (Proj(2, 2),)))


# ---------------------------------------------------------------------------
# Outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Converged:
    value: int
    steps_used: int


@dataclass(frozen=True)
class FuelExhausted:
    pass


Outcome = Converged | FuelExhausted

FUEL_EXHAUSTED = FuelExhausted()


# ---------------------------------------------------------------------------
# Extern registry (frozen before the first evaluation)
# ---------------------------------------------------------------------------

_EXTERNS: dict[str, Callable[[tuple[int, ...]], int]] = {}
_FROZEN = False


def register_extern(tag: str, fn: Callable[[tuple[int, ...]], int]) -> None:
    """Install a host function under ``tag``.  Only possible before the first
    evaluation; tags are never replaced."""
    global _FROZEN
    if _FROZEN:
        raise RuntimeError("extern registry is frozen")
    if tag in _EXTERNS:
        raise ValueError(f"extern {tag!r} already registered")
    _EXTERNS[tag] = fn


def extern_tags() -> tuple[str, ...]:
    return tuple(sorted(_EXTERNS))


class _OutOfFuel(Exception):
    pass


class _Meter:
    __slots__ = ("remaining",)

    def __init__(self, fuel: int) -> None:
        self.remaining = fuel

    def spend(self) -> None:
        if self.remaining <= 0:
            raise _OutOfFuel
        self.remaining -= 1


# Counts entries into eval_program; lets construction code assert that it
# built indices by pure syntax manipulation.
EVAL_CALLS = 0


def coerce(p: Program, n: int) -> Program:
    """Adapt p to arity n: extra arguments are ignored, missing ones become 0."""
    m = p.arity
    if m == n:
        return p
    if m < n:
        return Compose(p, tuple(Proj(n, i + 1) for i in range(m)))
    gs = [Proj(n, i + 1) for i in range(n)] if n > 0 else []
    gs += [Zero(n) for _ in range(m - n)]
    return Compose(p, tuple(gs))


def _run(p: Program, args: tuple[int, ...], meter: _Meter) -> int:
    meter.spend()
    if isinstance(p, Zero):
        return 0
    if isinstance(p, Lit):
        return p.value
    if isinstance(p, Succ):
        return args[0] + 1
    if isinstance(p, Proj):
        return args[p.i - 1]
    if isinstance(p, Extern):
        fn = _EXTERNS.get(p.tag)
        if fn is None:
            raise _OutOfFuel  # unknown tag behaves like divergence
        return fn(args)
    if isinstance(p, Compose):
        vals = tuple(_run(g, args, meter) for g in p.gs)
        return _run(p.f, vals, meter)
    if isinstance(p, PrimRec):
        xs, y = args[:-1], args[-1]
        acc = _run(p.base, xs, meter)
        for z in range(y):
            meter.spend()
            acc = _run(p.step, xs + (z, acc), meter)
        return acc
    if isinstance(p, Mu):
        u = 0
        while True:
            meter.spend()  # one unit per candidate tested, plus the body cost
            if _run(p.body, args + (u,), meter) == 0:
                return u
            u += 1
    if isinstance(p, Universal):
        idx, rest = args[0], args[1:]
        return _run(coerce(decode_program(idx), p.n), rest, meter)
    raise TypeError(f"unknown program node {p!r}")


def eval_program(p: Program, args: Sequence[int], fuel: int) -> Outcome:
    """Deterministic fuel-bounded big-step evaluation.

    Monotone in fuel: a converged outcome is reproduced verbatim at any
    larger fuel.  Arity mismatches are resolved by coercion, never an error.
    """
    global _FROZEN, EVAL_CALLS
    _FROZEN = True
    EVAL_CALLS += 1
    args = tuple(args)
    if p.arity != len(args):
        p = coerce(p, len(args))
    meter = _Meter(fuel)
    try:
        value = _run(p, args, meter)
    except _OutOfFuel:
        return FUEL_EXHAUSTED
    except RecursionError:
        return FUEL_EXHAUSTED
    return Converged(value, fuel - meter.remaining)


# Halting times are canonical (evaluation is deterministic and reproduces a
# converged outcome verbatim at any larger fuel), so the step predicate can
# be answered from a cache of exact times.  Unknown entries are retried with
# doubled fuel, which keeps repeated probing of divergent programs linear.
_HALT_CACHE: dict[tuple[int, int, tuple[int, ...]], list[int | None]] = {}


def halting_time(i: int, n: int, args: Sequence[int], s: int) -> int | None:
    """The exact convergence time of index i at arity n on args, when it is
    at most s; None means no convergence within s steps."""
    key = (i, n, tuple(args))
    entry = _HALT_CACHE.get(key)
    if entry is None:
        entry = [0, None]  # [fuel already ruled out, known time]
        _HALT_CACHE[key] = entry
    ruled_out, known = entry
    if known is not None:
        return known if known <= s else None
    if s <= ruled_out:
        return None
    trial = max(s, 2 * ruled_out)
    out = eval_program(coerce(decode_program(i), n), args, trial)
    if isinstance(out, Converged):
        entry[1] = out.steps_used
        return out.steps_used if out.steps_used <= s else None
    entry[0] = trial
    return None


def halts_within(i: int, n: int, args: Sequence[int], s: int) -> bool:
    """The decidable step predicate: does index i, read at arity n, converge
    on args within s steps?  Monotone in s."""
    return halting_time(i, n, args, s) is not None


# ---------------------------------------------------------------------------
# Canonical S-expression serialization and the numbering
# ---------------------------------------------------------------------------


def print_program(p: Program) -> str:
    if isinstance(p, Zero):
        return f"(zero {p.k})"
    if isinstance(p, Lit):
        return f"(lit {p.value} {p.k})"
    if isinstance(p, Succ):
        return "(succ)"
    if isinstance(p, Proj):
        return f"(proj {p.k} {p.i})"
    if isinstance(p, Compose):
        inner = " ".join(print_program(g) for g in (p.f, *p.gs))
        return f"(comp {inner})"
    if isinstance(p, PrimRec):
        return f"(primrec {print_program(p.base)} {print_program(p.step)})"
    if isinstance(p, Mu):
        return f"(mu {print_program(p.body)})"
    if isinstance(p, Extern):
        return f"(extern {p.tag} {p.k})"
    if isinstance(p, Universal):
        return f"(universal {p.n})"
    raise TypeError(f"unknown program node {p!r}")


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_tokens(tokens: list[str], pos: int) -> tuple[object, int]:
    if pos >= len(tokens):
        raise ValueError("unexpected end of input")
    tok = tokens[pos]
    if tok == "(":
        items: list[object] = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _parse_tokens(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise ValueError("missing close paren")
        return items, pos + 1
    if tok == ")":
        raise ValueError("unexpected close paren")
    return tok, pos + 1


def parse_sexp(text: str) -> object:
    """Parse one S-expression into nested lists of atom strings."""
    tokens = _tokenize(text)
    tree, pos = _parse_tokens(tokens, 0)
    if pos != len(tokens):
        raise ValueError("trailing input after S-expression")
    return tree


def _nat(atom: object) -> int:
    if not isinstance(atom, str) or not atom.isdigit():
        raise ValueError(f"expected a natural, got {atom!r}")
    return int(atom)


def _program_from_tree(tree: object) -> Program:
    if not isinstance(tree, list) or not tree or not isinstance(tree[0], str):
        raise ValueError("program must be a tagged list")
    head, rest = tree[0], tree[1:]
    if head == "zero" and len(rest) == 1:
        return Zero(_nat(rest[0]))
    if head == "lit" and len(rest) == 2:
        return Lit(_nat(rest[0]), _nat(rest[1]))
    if head == "succ" and not rest:
        return Succ()
    if head == "proj" and len(rest) == 2:
        return Proj(_nat(rest[0]), _nat(rest[1]))
    if head == "comp" and rest:
        parts = [_program_from_tree(t) for t in rest]
        return Compose(parts[0], tuple(parts[1:]))
    if head == "primrec" and len(rest) == 2:
        return PrimRec(_program_from_tree(rest[0]), _program_from_tree(rest[1]))
    if head == "mu" and len(rest) == 1:
        return Mu(_program_from_tree(rest[0]))
    if head == "extern" and len(rest) == 2:
        tag = rest[0]
        if not isinstance(tag, str) or not tag or not all(
            c.isalnum() or c == "_" for c in tag
        ):
            raise ValueError(f"bad extern tag {tag!r}")
        return Extern(tag, _nat(rest[1]))
    if head == "universal" and len(rest) == 1:
        return Universal(_nat(rest[0]))
    raise ValueError(f"unknown program form {head!r}")


def parse_program(text: str) -> Program:
    """Inverse of print_program; raises ValueError on ill-formed input."""
    return _program_from_tree(parse_sexp(text))


def code_program(p: Program) -> int:
    """The index of p: the bytes of its canonical S-expression, read as a
    big-endian natural, tagged into the program namespace."""
    raw = int.from_bytes(print_program(p).encode("ascii"), "big")
    return pair2(TAG_PROGRAM, raw)


@lru_cache(maxsize=65536)
def decode_program(index: int) -> Program:
    """Total inverse of code_program: well-formed codes decode to their
    program, everything else to the canonical diverging program."""
    if index < 0:
        return DIVERGER
    tag, raw = unpair(index)
    if tag != TAG_PROGRAM or raw == 0:
        return DIVERGER
    try:
        text = raw.to_bytes((raw.bit_length() + 7) // 8, "big").decode("ascii")
        return parse_program(text)
    except (ValueError, UnicodeDecodeError):
        return DIVERGER


def count_nodes(p: Program) -> int:
    """AST size; equals the exact step cost of straight-line programs."""
    if isinstance(p, Compose):
        return 1 + count_nodes(p.f) + sum(count_nodes(g) for g in p.gs)
    if isinstance(p, PrimRec):
        return 1 + count_nodes(p.base) + count_nodes(p.step)
    if isinstance(p, Mu):
        return 1 + count_nodes(p.body)
    return 1


# ---------------------------------------------------------------------------
# Built-in externs
# ---------------------------------------------------------------------------


def _ext_add(args: tuple[int, ...]) -> int:
    return args[0] + args[1]


def _ext_mul(args: tuple[int, ...]) -> int:
    return args[0] * args[1]


def _ext_eq(args: tuple[int, ...]) -> int:
    return 0 if args[0] == args[1] else 1


def _ext_pair(args: tuple[int, ...]) -> int:
    return pair2(args[0], args[1])


def _ext_left(args: tuple[int, ...]) -> int:
    return unpair_k(args[0])


def _ext_right(args: tuple[int, ...]) -> int:
    return unpair_l(args[0])


def _ext_halts1(args: tuple[int, ...]) -> int:
    """halts1(i, s, xs...) = 1 if index i converges on xs within s steps."""
    i, s, xs = args[0], args[1], args[2:]
    return 1 if halts_within(i, len(xs), xs, s) else 0


def _ext_halts0(args: tuple[int, ...]) -> int:
    """halts0(i, s, xs...) = 0 if index i converges on xs within s steps;
    the search-friendly polarity."""
    i, s, xs = args[0], args[1], args[2:]
    return 0 if halts_within(i, len(xs), xs, s) else 1


def _ext_before_step(args: tuple[int, ...]) -> int:
    """before_step(xs..., y, z, s) = 0 when xs enters relation y within s
    steps while staying out of relation z for s steps."""
    xs, y, z, s = args[:-3], args[-3], args[-2], args[-1]
    n = len(xs)
    if halts_within(y, n, xs, s) and not halts_within(z, n, xs, s):
        return 0
    return 1


def _ext_smn_suffix(args: tuple[int, ...]) -> int:
    """smn_suffix(e, n, k, c1..ck): the index of the n-ary program running e
    at arity n+k on the free arguments followed by the constants c1..ck."""
    e, n, k = args[0], args[1], args[2]
    cs = list(args[3 : 3 + k])
    cs += [0] * (k - len(cs))
    gs: list[Program] = [Lit(e, n)]
    gs += [Proj(n, i + 1) for i in range(n)]
    gs += [Lit(c, n) for c in cs]
    return code_program(Compose(Universal(n + k), tuple(gs)))


def _ext_smn_prefix(args: tuple[int, ...]) -> int:
    """smn_prefix(e, n, k, c1..ck): the index of the n-ary program running e
    at arity k+n on the constants c1..ck followed by the free arguments."""
    e, n, k = args[0], args[1], args[2]
    cs = list(args[3 : 3 + k])
    cs += [0] * (k - len(cs))
    gs: list[Program] = [Lit(e, n)]
    gs += [Lit(c, n) for c in cs]
    gs += [Proj(n, i + 1) for i in range(n)]
    return code_program(Compose(Universal(k + n), tuple(gs)))


for _tag, _fn in (
    ("add", _ext_add),
    ("mul", _ext_mul),
    ("eq", _ext_eq),
    ("pair", _ext_pair),
    ("left", _ext_left),
    ("right", _ext_right),
    ("halts1", _ext_halts1),
    ("halts0", _ext_halts0),
    ("before_step", _ext_before_step),
    ("smn_suffix", _ext_smn_suffix),
    ("smn_prefix", _ext_smn_prefix),
):
    register_extern(_tag, _fn)
