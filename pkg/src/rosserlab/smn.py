"""Index manipulation: s-m-n specialization, Kleene fixed points, and the
strong double recursion theorem with vector parameters.

Every constructor here works by pure syntax manipulation on program ASTs;
none of them evaluates its input indices.  The returned transformers are
themselves machine programs, so the witnessing functions are recursive in
the literal sense, not merely host-computable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .kernel import (
    Compose,
    Converged,
    Extern,
    Lit,
    Program,
    Proj,
    Universal,
    code_program,
    eval_program,
)

TRANSFORMER_FUEL = 200_000


@dataclass(frozen=True)
class IndexTransformer:
    """A recursive function from index tuples to indices, carried as a
    machine program together with a human-readable description."""

    program: Program
    description: str
    fuel: int = TRANSFORMER_FUEL

    @property
    def arity(self) -> int:
        return self.program.arity

    def __call__(self, *args: int) -> int:
        out = eval_program(self.program, args, self.fuel)
        if not isinstance(out, Converged):
            raise RuntimeError(
                f"transformer {self.description!r} exhausted its fuel envelope"
            )
        return out.value


def _projs(total: int, positions: Sequence[int]) -> list[Program]:
    return [Proj(total, p) for p in positions]


def smn(e: int, m: int, n: int, fixed: Sequence[int]) -> int:
    """Specialize index e by fixing its first m arguments to ``fixed``:
    the returned index, run on n arguments, behaves as e on fixed ++ args.

    Pure syntax: the result wraps e in a dispatch through the universal
    opcode with literal constants, so e is never evaluated here and the
    fuel overhead is additive in m + n.
    """
    if len(fixed) != m:
        raise ValueError("need exactly m fixed arguments")
    gs: list[Program] = [Lit(e, n)]
    gs += [Lit(c, n) for c in fixed]
    gs += [Proj(n, i + 1) for i in range(n)]
    return code_program(Compose(Universal(m + n), tuple(gs)))


def smn_suffix(e: int, n: int, fixed: Sequence[int]) -> int:
    """Dual specialization fixing the last arguments of e."""
    k = len(fixed)
    gs: list[Program] = [Lit(e, n)]
    gs += [Proj(n, i + 1) for i in range(n)]
    gs += [Lit(c, n) for c in fixed]
    return code_program(Compose(Universal(n + k), tuple(gs)))


def fixed_point(transform: IndexTransformer, result_arity: int = 1) -> int:
    """Kleene fixed point: an index n with the same halting behaviour, on
    ``result_arity``-tuples, as the index transform(n).

    Built by the diagonal construction: let g(u) fix u as the leading
    argument of the program with index u, and take n = g(e) where e indexes
    the program (u, xs) -> run transform(g(u)) on xs.
    """
    if transform.arity != 1:
        raise ValueError("fixed_point needs a 1-ary transformer")
    r = result_arity
    total = r + 1
    # g(u) = smn_prefix(u, r, 1, u): the r-ary index for xs -> u applied to (u, xs).
    g_of_u = Compose(
        Extern("smn_prefix", 4),
        (Proj(total, 1), Lit(r, total), Lit(1, total), Proj(total, 1)),
    )
    transformed = Compose(transform.program, (g_of_u,))
    body = Compose(
        Universal(r),
        (transformed, *_projs(total, range(2, total + 1))),
    )
    e = code_program(body)
    return _host_smn_prefix(e, r, (e,))


def _host_smn_prefix(e: int, n: int, fixed: Sequence[int]) -> int:
    gs: list[Program] = [Lit(e, n)]
    gs += [Lit(c, n) for c in fixed]
    gs += [Proj(n, i + 1) for i in range(n)]
    return code_program(Compose(Universal(len(fixed) + n), tuple(gs)))


def quine_transform(result_arity: int = 1) -> IndexTransformer:
    """Maps an index e to the index of the constant function returning e;
    its fixed point is a program that outputs its own index."""
    r = result_arity
    const_builder = code_program(Proj(2, 2))  # (x, e) -> e
    prog = Compose(
        Extern("smn_suffix", 4),
        (Lit(const_builder, 1), Lit(r, 1), Lit(1, 1), Proj(1, 1)),
    )
    return IndexTransformer(prog, f"e -> index of the {r}-ary constant e")


def sdrt(a: int, b: int, n: int, m: int) -> tuple[IndexTransformer, IndexTransformer]:
    """Strong double recursion: given indices a, b of two (n+2m+2)-ary
    relations M1, M2, return 2m-ary recursive t1, t2 such that for all
    parameter vectors y1, y2 of length m:

        xs in R^n_{t1(y1,y2)}  iff  M1(xs, y1, y2, t1(y1,y2), t2(y1,y2))
        xs in R^n_{t2(y1,y2)}  iff  M2(xs, y1, y2, t1(y1,y2), t2(y1,y2))

    The construction is the classical one: a self-applicable specializer g
    with g(z, z1, z2, y1, y2, s) indexing xs -> R_s(xs, z, z1, z2, y1, y2, s),
    a diagonal index h that feeds g's own products back into the relation
    being run, and t_i = g(., a, b, y1, y2, h) at z = a resp. b.
    """
    if n < 1 or m < 1:
        raise ValueError("need relation arity n >= 1 and parameter arity m >= 1")
    big = n + 2 * m + 4  # arity of the diagonal program h
    k = 2 * m + 4  # number of suffix constants fed to the specializer
    z_pos = n + 1
    z1_pos = n + 2
    z2_pos = n + 3
    y1_pos = list(range(n + 4, n + 4 + m))
    y2_pos = list(range(n + 4 + m, n + 4 + 2 * m))
    s_pos = big

    def spec_call(first_const_pos: int) -> Program:
        args: list[Program] = [
            Proj(big, s_pos),
            Lit(n, big),
            Lit(k, big),
            Proj(big, first_const_pos),
            Proj(big, z1_pos),
            Proj(big, z2_pos),
        ]
        args += _projs(big, y1_pos)
        args += _projs(big, y2_pos)
        args += [Proj(big, s_pos)]
        return Compose(Extern("smn_suffix", 3 + k), tuple(args))

    h_body = Compose(
        Universal(n + 2 * m + 2),
        (
            Proj(big, z_pos),
            *_projs(big, range(1, n + 1)),
            *_projs(big, y1_pos),
            *_projs(big, y2_pos),
            spec_call(z1_pos),
            spec_call(z2_pos),
        ),
    )
    h = code_program(h_body)

    def transformer(z: int, which: str) -> IndexTransformer:
        t_arity = 2 * m
        args: list[Program] = [
            Lit(h, t_arity),
            Lit(n, t_arity),
            Lit(k, t_arity),
            Lit(z, t_arity),
            Lit(a, t_arity),
            Lit(b, t_arity),
        ]
        args += _projs(t_arity, range(1, 2 * m + 1))
        args += [Lit(h, t_arity)]
        prog = Compose(Extern("smn_suffix", 3 + k), tuple(args))
        return IndexTransformer(
            prog, f"{which}: double recursion witness at relation arity {n}"
        )

    return transformer(a, "t1"), transformer(b, "t2")


def _apply_functional_component(idx: int, z1: Program, z2: Program) -> Program:
    return Compose(Universal(2), (Lit(idx, z1.arity), z1, z2))


def sdrt_functional(
    m1: int, m2: int, n: int, components: Sequence[int]
) -> tuple[IndexTransformer, IndexTransformer]:
    """Double recursion through a recursive functional G on N^2: given
    indices m1, m2 of 3n-ary relations and the n component indices of G,
    return n-ary f1, f2 with

        xs in R^n_{f1(y)}  iff  M1(xs, y, G(f1(y), f2(y)))
        xs in R^n_{f2(y)}  iff  M2(xs, y, G(f1(y), f2(y)))

    Built by pushing G inside the relations (M1 reads the first parameter
    block, M2 the second) and collapsing the two parameter vectors on the
    diagonal.
    """
    if len(components) != n:
        raise ValueError("G needs exactly n component indices")
    big = 3 * n + 2  # (xs, y1, y2, z1, z2)
    z1 = Proj(big, big - 1)
    z2 = Proj(big, big)

    def star(rel: int, y_block_start: int) -> int:
        gs = [Lit(rel, big)]
        gs += _projs(big, range(1, n + 1))
        gs += _projs(big, range(y_block_start, y_block_start + n))
        gs += [_apply_functional_component(c, z1, z2) for c in components]
        return code_program(Compose(Universal(3 * n), tuple(gs)))

    m1_star = star(m1, n + 1)
    m2_star = star(m2, 2 * n + 1)
    t1, t2 = sdrt(m1_star, m2_star, n, n)

    def diag_transformer(t: IndexTransformer, which: str) -> IndexTransformer:
        projs = _projs(n, range(1, n + 1))
        prog = Compose(t.program, tuple(projs + projs))
        return IndexTransformer(prog, f"{which}: functional double recursion")

    return diag_transformer(t1, "f1"), diag_transformer(t2, "f2")


def rt1(f_index: int, n: int) -> tuple[IndexTransformer, IndexTransformer]:
    """Paired recursion through a 2-ary recursive function f: returns t1, t2
    with, for all indices i, j and all n-tuples a,

        R^n_{t1(i,j)}(a)  iff  R^{n+1}_i(a, f(t1(i,j), t2(i,j)))
        R^n_{t2(i,j)}(a)  iff  R^{n+1}_j(a, f(t1(i,j), t2(i,j)))
    """
    big = n + 4  # (xs, y1, y2, z1, z2) with m = 1
    z1 = Proj(big, big - 1)
    z2 = Proj(big, big)
    f_val = _apply_functional_component(f_index, z1, z2)

    def rel(y_pos: int) -> int:
        gs = [Proj(big, y_pos)]
        gs += _projs(big, range(1, n + 1))
        gs += [f_val]
        return code_program(Compose(Universal(n + 1), tuple(gs)))

    m1 = rel(n + 1)
    m2 = rel(n + 2)
    t1, t2 = sdrt(m1, m2, n, 1)
    return (
        IndexTransformer(t1.program, "t1: paired recursion through f"),
        IndexTransformer(t2.program, "t2: paired recursion through f"),
    )
