"""The disjoint-pair reduction algebra: canonical doubly-universal and
Kleene-style pairs, and the constructive implications

    semi-DU -> KP -> CEI -> EI -> WEI -> DU        (witnesses shared)
    semi-DU -> KP -> CEI -> DG -> DU               (index games)
    semi-DU -> separation functional -> DU         (diagonal games)

Every construction below is pure index manipulation; verification happens
afterwards on probe windows, with fixture deciders supplying the negative
sides.  Reductions are represented as functionals (tuples of component
program indices), and universality-style properties as builders from pairs
to functionals, never as global certified flags.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .coding import pair2, pair_n, unpair, unpair_n
from .kernel import (
    Compose,
    Converged,
    Extern,
    Lit,
    Mu,
    Program,
    Proj,
    Universal,
    code_program,
    eval_program,
)
from .relations import (
    COND_FALSE,
    COND_TRUE,
    DecidableFixture,
    ReRelation,
    before_holds,
    cond_program,
    member_within,
    membership_time,
    mu_cond_fixture,
    window_points,
    YES,
)
from .smn import IndexTransformer, sdrt_functional
from .verdicts import Check, Report, membership_check

APPLY_FUEL = 400_000


@dataclass(frozen=True)
class Functional:
    """An arity_out-tuple of arity_in-ary recursive functions, carried as
    component program indices."""

    arity_in: int
    arity_out: int
    components: tuple[int, ...]
    description: str = ""

    def __post_init__(self) -> None:
        if len(self.components) != self.arity_out:
            raise ValueError("component count must equal the output arity")

    def __call__(self, *args: int) -> tuple[int, ...]:
        if len(args) != self.arity_in:
            raise ValueError("argument count must match the input arity")
        from .kernel import decode_program

        values = []
        for c in self.components:
            out = eval_program(decode_program(c), args, APPLY_FUEL)
            if not isinstance(out, Converged):
                raise RuntimeError(f"functional {self.description!r} starved")
            values.append(out.value)
        return tuple(values)


@dataclass(frozen=True)
class RePair:
    left: ReRelation
    right: ReRelation

    def __post_init__(self) -> None:
        if self.left.arity != self.right.arity:
            raise ValueError("pair components must share one arity")

    @property
    def arity(self) -> int:
        return self.left.arity


PairDecider = Callable[[tuple[int, ...]], bool | None]


@dataclass(frozen=True)
class CertifiedPair:
    """A pair together with three-valued deciders for probe verification."""

    pair: RePair
    decide_left: PairDecider
    decide_right: PairDecider
    name: str


ReducerBuilder = Callable[[DecidableFixture, DecidableFixture], Functional]


def functional_from_programs(progs: Sequence[Program], description: str = "") -> Functional:
    arity = progs[0].arity
    if any(p.arity != arity for p in progs):
        raise ValueError("components must share one arity")
    return Functional(arity, len(progs), tuple(code_program(p) for p in progs), description)


def _lit_args(args: Sequence[int]) -> tuple[Program, ...]:
    return tuple(Lit(a, 0) for a in args)


def _apply_index(idx: int, arg_programs: Sequence[Program]) -> Program:
    """The program running index idx on the values of the given programs."""
    k = len(arg_programs)
    total = arg_programs[0].arity if arg_programs else 0
    return Compose(Universal(k), (Lit(idx, total), *arg_programs))


def _pair_chain(first: Program, rest: Sequence[Program]) -> Program:
    acc = first
    for r in rest:
        acc = Compose(Extern("pair", 2), (acc, r))
    return acc


# ---------------------------------------------------------------------------
# Canonical pairs
# ---------------------------------------------------------------------------


def _diag_guard_conds(n: int) -> list[Program]:
    """Programs testing equality of adjacent arguments (0 when equal)."""
    return [
        Compose(Extern("eq", 2), (Proj(n + 1, i), Proj(n + 1, i + 1)))
        for i in range(1, n)
    ]


def _and_programs(parts: Sequence[Program]) -> Program:
    acc = parts[0]
    for p in parts[1:]:
        acc = Compose(Extern("add", 2), (acc, p))
    return acc


def _unpair_left(p: Program) -> Program:
    return Compose(Extern("left", 1), (p,))


def _unpair_right(p: Program) -> Program:
    return Compose(Extern("right", 1), (p,))


@dataclass(frozen=True)
class DuBundle:
    """The doubly-universal pair built from the witness comparison over
    pair-coded diagonal points, with its canonical reduction builder."""

    certified: CertifiedPair
    n: int

    @property
    def pair(self) -> RePair:
        return self.certified.pair

    def reducer(self, a: DecidableFixture, b: DecidableFixture) -> Functional:
        """The canonical reduction of a disjoint pair (R_i, R_j) into the
        universal pair: x -> diag of the (n+1)-code of (J2(j, i), x)."""
        if a.arity != self.n or b.arity != self.n:
            raise ValueError("fixture arity mismatch")
        h = pair2(b.relation.index, a.relation.index)
        comp = _pair_chain(Lit(h, self.n), [Proj(self.n, i) for i in range(1, self.n + 1)])
        return functional_from_programs(
            [comp] * self.n, f"canonical reduction of ({a.name},{b.name}) into du"
        )

    def semi_reducer(self, a: DecidableFixture, b: DecidableFixture) -> Functional:
        """The same functional read as a semi-reduction from the differences
        (A-B, B-A); usable on arbitrary, not necessarily disjoint, pairs."""
        return self.reducer(a, b)


def _du_membership_program(n: int, left: bool) -> Program:
    """Membership search for one side of the universal pair: decompose the
    diagonal point as (J2(x, y), zs) and compare entering R_y against R_x
    (left side) or R_x against R_y (right side)."""
    total = n + 1  # arguments plus search candidate
    w1 = Proj(total, 1)
    core = w1
    zs: list[Program] = []
    for _ in range(n):
        zs.append(_unpair_right(core))
        core = _unpair_left(core)
    zs.reverse()
    x_part = _unpair_left(core)
    y_part = _unpair_right(core)
    first, second = (y_part, x_part) if left else (x_part, y_part)
    before = Compose(
        Extern("before_step", n + 3), (*zs, first, second, Proj(total, total))
    )
    guards = _diag_guard_conds(n)
    body = _and_programs([*guards, before]) if guards else before
    return Mu(body)


@lru_cache(maxsize=32)
def du_pair(n: int) -> DuBundle:
    if n < 1:
        raise ValueError("needs arity n >= 1")
    u1 = ReRelation(n, code_program(_du_membership_program(n, True)))
    u2 = ReRelation(n, code_program(_du_membership_program(n, False)))

    def decide(left: bool) -> PairDecider:
        def decider(point: tuple[int, ...]) -> bool | None:
            if len(set(point)) != 1:
                return False
            core = point[0]
            zs = []
            for _ in range(n):
                core, z = unpair(core)
                zs.append(z)
            zs.reverse()
            x, y = unpair(core)
            fx = _fixture_by_index(x)
            fy = _fixture_by_index(y)
            if fx is None or fy is None:
                return None
            a, b = (fy, fx) if left else (fx, fy)
            return before_holds(a, b, tuple(zs), APPLY_FUEL)

        return decider

    certified = CertifiedPair(RePair(u1, u2), decide(True), decide(False), f"du({n})")
    return DuBundle(certified, n)


_FIXTURE_INDEX: dict[int, DecidableFixture] = {}


def register_fixture_index(fix: DecidableFixture) -> None:
    _FIXTURE_INDEX.setdefault(fix.relation.index, fix)


def _fixture_by_index(index: int) -> DecidableFixture | None:
    return _FIXTURE_INDEX.get(index)


def _kp_membership_program(n: int, left: bool) -> Program:
    """Membership search for the Kleene-style pair: a diagonal point diag(x)
    is in the left component when it enters R_{Lx} strictly before R_{Kx}."""
    total = n + 1
    w1 = Proj(total, 1)
    first = _unpair_right(w1) if left else _unpair_left(w1)
    second = _unpair_left(w1) if left else _unpair_right(w1)
    before = Compose(
        Extern("before_step", n + 3),
        (*[Proj(total, i) for i in range(1, n + 1)], first, second, Proj(total, total)),
    )
    guards = _diag_guard_conds(n)
    body = _and_programs([*guards, before]) if guards else before
    return Mu(body)


@dataclass(frozen=True)
class KpBundle:
    certified: CertifiedPair
    functional: Functional
    n: int

    @property
    def pair(self) -> RePair:
        return self.certified.pair


@lru_cache(maxsize=32)
def kp_pair(n: int) -> KpBundle:
    """A pair that is Kleene-style productive: with F(x, y) = diag(J2(x, y)),
    landing in R_y - R_x forces the point into the left component and
    landing in R_x - R_y forces it into the right one."""
    if n < 1:
        raise ValueError("needs arity n >= 1")
    k1 = ReRelation(n, code_program(_kp_membership_program(n, True)))
    k2 = ReRelation(n, code_program(_kp_membership_program(n, False)))
    diag_comp = _pair_chain(Proj(2, 1), [Proj(2, 2)])

    def decide(left: bool) -> PairDecider:
        def decider(point: tuple[int, ...]) -> bool | None:
            if len(set(point)) != 1:
                return False
            x, y = unpair(point[0])
            fx, fy = _fixture_by_index(x), _fixture_by_index(y)
            if fx is None or fy is None:
                return None
            a, b = (fy, fx) if left else (fx, fy)
            return before_holds(a, b, point, APPLY_FUEL)

        return decider

    functional = functional_from_programs([diag_comp] * n, f"diag of J2 at arity {n}")
    certified = CertifiedPair(RePair(k1, k2), decide(True), decide(False), f"kp({n})")
    return KpBundle(certified, functional, n)


# ---------------------------------------------------------------------------
# Index constructions shared by the implication chain
# ---------------------------------------------------------------------------


def _halts0_call(idx_program: Program, s_program: Program, arg_programs: Sequence[Program]) -> Program:
    return Compose(
        Extern("halts0", 2 + len(arg_programs)), (idx_program, s_program, *arg_programs)
    )


def preimage_transformer(g: Functional) -> IndexTransformer:
    """The s-m-n function t with: xs in R_{t(y)} iff G(xs) in R_y."""
    n = g.arity_in
    if g.arity_out != n:
        raise ValueError("needs an endofunctional")
    total = n + 2  # (y, xs, candidate)
    y_prog = Proj(total, 1)
    cand = Proj(total, total)
    g_vals = [
        _apply_index(c, [Proj(total, i + 2) for i in range(n)]) for c in g.components
    ]
    body = _halts0_call(y_prog, cand, g_vals)
    e = code_program(Mu(body))
    prog = Compose(
        Extern("smn_prefix", 4), (Lit(e, 1), Lit(n, 1), Lit(1, 1), Proj(1, 1))
    )
    return IndexTransformer(prog, "membership preimage under the functional")


def union_transformer(n: int, fixed: ReRelation) -> IndexTransformer:
    """The s-m-n function t with: R_{t(x)} = R_x united with the fixed relation."""
    total = n + 2  # (x, ws, candidate)
    cand = Proj(total, total)
    ws = [Proj(total, i + 1) for i in range(1, n + 1)]
    body = Compose(
        Extern("mul", 2),
        (
            _halts0_call(Proj(total, 1), cand, ws),
            _halts0_call(Lit(fixed.index, total), cand, ws),
        ),
    )
    e = code_program(Mu(body))
    prog = Compose(
        Extern("smn_prefix", 4), (Lit(e, 1), Lit(n, 1), Lit(1, 1), Proj(1, 1))
    )
    return IndexTransformer(prog, "union with a fixed relation")


def gate_transformer(n: int, gate: ReRelation) -> IndexTransformer:
    """The s-m-n function t with: R_{t(ys)} is everything when ys is in the
    gate relation and empty otherwise."""
    total = 2 * n + 1  # (ys, ws, candidate)
    cand = Proj(total, total)
    ys = [Proj(total, i) for i in range(1, n + 1)]
    body = _halts0_call(Lit(gate.index, total), cand, ys)
    e = code_program(Mu(body))
    projs = tuple(Proj(n, i) for i in range(1, n + 1))
    prog = Compose(
        Extern("smn_prefix", 3 + n), (Lit(e, n), Lit(n, n), Lit(n, n), *projs)
    )
    return IndexTransformer(prog, "all-or-nothing gate on the parameter point")


@lru_cache(maxsize=32)
def constant_relation(n: int, full: bool) -> ReRelation:
    fix = mu_cond_fixture(
        f"{'all' if full else 'none'}@{n}",
        n,
        COND_TRUE if full else COND_FALSE,
        (lambda a: True) if full else (lambda a: False),
        "constant relation",
    )
    register_fixture_index(fix)
    return fix.relation


# ---------------------------------------------------------------------------
# The implication chain
# ---------------------------------------------------------------------------


def semidu_to_kp(target: CertifiedPair, semi_reducer: Functional) -> Functional:
    """From a semi-reduction G of the canonical Kleene pair into the target,
    produce a functional H showing the target is Kleene-style productive:
    H(x, y) = G(F(t(x), t(y))) with F the pair diagonal and t the preimage
    transformer of G."""
    n = target.pair.arity
    kp = kp_pair(n)
    if semi_reducer.arity_in != n or semi_reducer.arity_out != n:
        raise ValueError("semi-reduction must be an endofunctional")
    t = preimage_transformer(semi_reducer)
    tx = Compose(t.program, (Proj(2, 1),))
    ty = Compose(t.program, (Proj(2, 2),))
    f_vals = [_apply_index(c, [tx, ty]) for c in kp.functional.components]
    h_progs = [_apply_index(c, f_vals) for c in semi_reducer.components]
    return functional_from_programs(
        h_progs, f"productivity witness for {target.name} through the Kleene pair"
    )


def cei_witness(kp_witness: Functional) -> Functional:
    """A Kleene-style witness is itself a witness for the common-extension
    property (supersets of the two components agree on the witness point)."""
    return kp_witness


def swap_functional(f: Functional) -> Functional:
    progs = [
        _apply_index(c, [Proj(2, 2), Proj(2, 1)]) for c in f.components
    ]
    return functional_from_programs(progs, f"argument swap of ({f.description})")


def cei_to_dg(cei: Functional, a_rel: ReRelation, b_rel: ReRelation) -> Functional:
    """From a common-extension witness for (A, B), build the disjointness
    game witness: G(x, y) = F'(t2(x), t1(y)) where F' witnesses the swapped
    pair and t1, t2 unite an index with A resp. B."""
    n = cei.arity_in if cei.arity_in == cei.arity_out else None
    if n is None:
        raise ValueError("needs an endofunctional")
    swapped = swap_functional(cei)
    t1 = union_transformer(n, a_rel)
    t2 = union_transformer(n, b_rel)
    t2x = Compose(t2.program, (Proj(2, 1),))
    t1y = Compose(t1.program, (Proj(2, 2),))
    progs = [_apply_index(c, [t2x, t1y]) for c in swapped.components]
    return functional_from_programs(progs, "disjointness game witness")


def dg_to_du_reducer(dg: Functional, n: int) -> ReducerBuilder:
    """From a disjointness-game witness relative to the all/empty index pairs,
    build reducers: G(xs) = F(t1(xs), t2(xs)) with the all-or-nothing gates
    of the source pair."""

    def build(c_fix: DecidableFixture, d_fix: DecidableFixture) -> Functional:
        t1 = gate_transformer(n, c_fix.relation)
        t2 = gate_transformer(n, d_fix.relation)
        xs = [Proj(n, i) for i in range(1, n + 1)]
        t1xs = Compose(t1.program, tuple(xs))
        t2xs = Compose(t2.program, tuple(xs))
        progs = [_apply_index(c, [t1xs, t2xs]) for c in dg.components]
        return functional_from_programs(
            progs, f"reduction of ({c_fix.name},{d_fix.name}) through the index game"
        )

    return build


def key_lemma(
    a_fix: DecidableFixture,
    b_fix: DecidableFixture,
    c_rel: ReRelation,
    d_rel: ReRelation,
    g: Functional,
) -> tuple[IndexTransformer, IndexTransformer]:
    """Double recursion through G: recursive f1, f2 with

        ys in B  =>  R_{f1(ys)} = C plus the point G(f1(ys), f2(ys))
        ys not in B  =>  R_{f1(ys)} = C
        ys in A  =>  R_{f2(ys)} = D plus that point
        ys not in A  =>  R_{f2(ys)} = D
    """
    n = c_rel.arity
    total = 3 * n + 1  # (xs, ys, zs, candidate)
    cand = Proj(total, total)
    xs = [Proj(total, i) for i in range(1, n + 1)]
    ys = [Proj(total, i) for i in range(n + 1, 2 * n + 1)]
    zs = [Proj(total, i) for i in range(2 * n + 1, 3 * n + 1)]

    def member_or_pinned(base: ReRelation, pin_gate: ReRelation) -> int:
        eq_vec = _and_programs(
            [Compose(Extern("eq", 2), (x, z)) for x, z in zip(xs, zs)]
        )
        body = Compose(
            Extern("mul", 2),
            (
                _halts0_call(Lit(base.index, total), cand, xs),
                Compose(
                    Extern("add", 2),
                    (eq_vec, _halts0_call(Lit(pin_gate.index, total), cand, ys)),
                ),
            ),
        )
        return code_program(Mu(body))

    m1 = member_or_pinned(c_rel, b_fix.relation)
    m2 = member_or_pinned(d_rel, a_fix.relation)
    f1, f2 = sdrt_functional(m1, m2, n, list(g.components))
    return f1, f2


def wei_to_du_reducer(
    target: CertifiedPair, wei_witness: Functional
) -> ReducerBuilder:
    """From a weak-productivity witness G for the target pair (C, D), build
    reducers H(ys) = G(f1(ys), f2(ys)) with f1, f2 from the double-recursion
    lemma applied to the source pair."""
    c_rel, d_rel = target.pair.left, target.pair.right
    n = target.pair.arity

    def build(a_fix: DecidableFixture, b_fix: DecidableFixture) -> Functional:
        f1, f2 = key_lemma(a_fix, b_fix, c_rel, d_rel, wei_witness)
        ys = [Proj(n, i) for i in range(1, n + 1)]
        f1ys = Compose(f1.program, tuple(ys))
        f2ys = Compose(f2.program, tuple(ys))
        progs = [_apply_index(c, [f1ys, f2ys]) for c in wei_witness.components]
        return functional_from_programs(
            progs,
            f"reduction of ({a_fix.name},{b_fix.name}) through weak productivity",
        )

    return build


# ---------------------------------------------------------------------------
# Separation functionals (the diagonal route)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SfBundle:
    functional: Functional
    n: int
    target: CertifiedPair


def separation_functional(target: CertifiedPair, semi_from_du: Functional) -> SfBundle:
    """S(x, ys, z) = G applied to the diagonal of the code (x, diag-code of
    (ys, z)), where G semi-reduces the universal pair into the target."""
    n = target.pair.arity
    total = n + 2
    x = Proj(total, 1)
    ys = [Proj(total, i) for i in range(2, n + 2)]
    z = Proj(total, total)
    inner = _pair_chain(ys[0], [*ys[1:], z])
    outer = _pair_chain(x, [inner] * n)
    progs = [_apply_index(c, [outer] * n) for c in semi_from_du.components]
    return SfBundle(
        functional_from_programs(progs, f"separation functional for {target.name}"),
        n,
        target,
    )


def sf_to_du_reducer(sf: SfBundle) -> ReducerBuilder:
    """Close the separation functional through the diagonal: the reducer of
    (C, D) is xs -> S(h, xs, h), where h codes the two self-referential
    relations 'xs in C or S(y, xs, y) lands right' and its mirror."""
    n = sf.n

    def build(c_fix: DecidableFixture, d_fix: DecidableFixture) -> Functional:
        total = n + 2  # (xs, y, candidate)
        cand = Proj(total, total)
        xs = [Proj(total, i) for i in range(1, n + 1)]
        y = Proj(total, n + 1)

        def m_program(source: ReRelation, side: ReRelation) -> int:
            s_vals = [_apply_index(c, [y, *xs, y]) for c in sf.functional.components]
            body = Compose(
                Extern("mul", 2),
                (
                    _halts0_call(Lit(source.index, total), cand, xs),
                    _halts0_call(Lit(side.index, total), cand, s_vals),
                ),
            )
            return code_program(Mu(body))

        m1 = m_program(c_fix.relation, sf.target.pair.right)
        m2 = m_program(d_fix.relation, sf.target.pair.left)
        # h = J2(j, i) for the diagonal-coded sets of m1, m2 per the
        # canonical semi-reduction of differences into the universal pair
        i_idx = _diag_coded_index(m1, n)
        j_idx = _diag_coded_index(m2, n)
        h = pair2(j_idx, i_idx)
        final = [
            _apply_index(c, [Lit(h, n), *[Proj(n, i) for i in range(1, n + 1)], Lit(h, n)])
            for c in sf.functional.components
        ]
        return functional_from_programs(
            final, f"reduction of ({c_fix.name},{d_fix.name}) through the separation functional"
        )

    return build


def _diag_coded_index(m_index: int, n: int) -> int:
    """The index of the diagonal-coded set of an (n+1)-ary relation: the
    diagonal point diag(code(xs, y)) is a member exactly when (xs, y) is."""
    total = n + 1  # (ws, candidate)
    w1 = Proj(total, 1)
    parts: list[Program] = []
    core = w1
    for _ in range(n):
        parts.append(_unpair_right(core))
        core = _unpair_left(core)
    parts.append(core)
    parts.reverse()  # (xs..., y)
    guards = _diag_guard_conds(n)
    call = _halts0_call(Lit(m_index, total), Proj(total, total), parts)
    body = _and_programs([*guards, call]) if guards else call
    return code_program(Mu(body))


# ---------------------------------------------------------------------------
# Probe suites
# ---------------------------------------------------------------------------


def reduction_report(
    name: str,
    source_left: DecidableFixture,
    source_right: DecidableFixture,
    target: CertifiedPair,
    reducer: Functional,
    probe_max: int,
    fuel: int,
    semi_only: bool = False,
) -> Report:
    """Check the reduction clauses pointwise on the probe window: members of
    the source sides land in the matching target sides, and (unless checking
    only the semi-reduction clauses) points outside both stay outside."""
    report = Report(name)
    n = source_left.arity
    for point in window_points(n, probe_max):
        in_a = source_left.holds(point)
        in_b = source_right.holds(point)
        image = reducer(*point)
        if in_a:
            got = member_within(target.pair.left, image, fuel) == YES
            report.add(
                membership_check("left lands left", point, True, got, target.decide_left)
            )
        elif in_b:
            got = member_within(target.pair.right, image, fuel) == YES
            report.add(
                membership_check("right lands right", point, True, got, target.decide_right)
            )
        elif not semi_only:
            got_l = member_within(target.pair.left, image, fuel) == YES
            report.add(
                membership_check("outside stays out of left", point, False, got_l, target.decide_left)
            )
            got_r = member_within(target.pair.right, image, fuel) == YES
            report.add(
                membership_check("outside stays out of right", point, False, got_r, target.decide_right)
            )
    return report


def kp_report(
    name: str,
    pair: CertifiedPair,
    witness: Functional,
    index_pairs: Sequence[tuple[DecidableFixture, DecidableFixture]],
    probe_fuel: int,
) -> Report:
    """Kleene-style productivity on fixture index pairs: when the witness
    point lands in exactly one of the two indexed relations, it must land in
    the matching pair component."""
    report = Report(name)
    for fx, fy in index_pairs:
        x, y = fx.relation.index, fy.relation.index
        point = witness(x, y)
        in_x, in_y = fx.holds(point), fy.holds(point)
        if in_y and not in_x:
            got = member_within(pair.pair.left, point, probe_fuel) == YES
            report.add(
                membership_check(f"{fx.name},{fy.name}: lands left", (x % 97, y % 97), True, got, pair.decide_left)
            )
        elif in_x and not in_y:
            got = member_within(pair.pair.right, point, probe_fuel) == YES
            report.add(
                membership_check(f"{fx.name},{fy.name}: lands right", (x % 97, y % 97), True, got, pair.decide_right)
            )
        else:
            report.add(Check(f"{fx.name},{fy.name}: vacuous", (x % 97, y % 97), "pass", "no one-sided landing"))
    return report
