"""Specialization, fixed points, and double recursion against decidable
fixture relations."""

from __future__ import annotations

import random

import rosserlab.kernel as kernel
from rosserlab.config import OVERHEAD_SLOPE
from rosserlab.kernel import (
    Compose,
    Converged,
    DIVERGER,
    Extern,
    FuelExhausted,
    Lit,
    Mu,
    PrimRec,
    Proj,
    Succ,
    code_program,
    coerce,
    decode_program,
    eval_program,
    halts_within,
)
from rosserlab.relations import (
    ReRelation,
    cond_eq,
    cond_program,
    member_within,
    mu_cond_fixture,
    YES,
)
from rosserlab.logic.syntax import Plus, var
from rosserlab.smn import (
    IndexTransformer,
    fixed_point,
    quine_transform,
    rt1,
    sdrt,
    sdrt_functional,
    smn,
)

FUEL = 10_000
ADD = PrimRec(Proj(1, 1), Compose(Succ(), (Proj(3, 3),)))


def evaluation_free(construct):
    before = kernel.EVAL_CALLS
    result = construct()
    assert kernel.EVAL_CALLS == before, "construction must not evaluate"
    return result


# ---------------------------------------------------------------------------
# s-m-n
# ---------------------------------------------------------------------------


def test_smn_fixes_prefix_arguments():
    e = code_program(ADD)
    idx = evaluation_free(lambda: smn(e, 1, 1, [3]))
    out = eval_program(decode_program(idx), [4], FUEL)
    assert isinstance(out, Converged) and out.value == 7


def test_smn_with_no_fixed_arguments_behaves_like_original():
    e = code_program(ADD)
    idx = smn(e, 0, 2, [])
    for a, b in [(0, 0), (3, 4), (9, 2)]:
        got = eval_program(decode_program(idx), [a, b], FUEL)
        assert isinstance(got, Converged) and got.value == a + b


def test_smn_preserves_divergence():
    idx = smn(code_program(DIVERGER), 0, 1, [])
    assert isinstance(eval_program(decode_program(idx), [5], FUEL), FuelExhausted)


def test_smn_extensional_correctness_random_probes():
    rng = random.Random(101)
    programs = [ADD, Succ(), Proj(3, 2), Compose(Extern("mul", 2), (Proj(2, 1), Proj(2, 2)))]
    for _ in range(500):
        p = rng.choice(programs)
        e = code_program(p)
        total = p.arity
        m = rng.randint(0, total)
        n = total - m
        fixed = [rng.randint(0, 20) for _ in range(m)]
        args = [rng.randint(0, 20) for _ in range(n)]
        idx = smn(e, m, n, fixed)
        direct = eval_program(p, fixed + args, FUEL)
        assert isinstance(direct, Converged)
        specialized = eval_program(decode_program(idx), args, FUEL)
        assert isinstance(specialized, Converged)
        assert specialized.value == direct.value
        assert specialized.steps_used <= OVERHEAD_SLOPE * direct.steps_used + OVERHEAD_SLOPE


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------


def test_fixed_point_of_identity():
    identity = IndexTransformer(Proj(1, 1), "identity")
    n = evaluation_free(lambda: fixed_point(identity, result_arity=1))
    assert identity(n) == n  # trivially extensionally equal


def test_fixed_point_of_constant_behaves_like_target():
    succ_code = code_program(Succ())
    const = IndexTransformer(Lit(succ_code, 1), "constant successor index")
    n = fixed_point(const, result_arity=1)
    prog = decode_program(n)
    for x in range(100):
        got = eval_program(prog, [x], FUEL)
        assert isinstance(got, Converged) and got.value == x + 1


def test_quine_fixed_point_outputs_its_own_index():
    n = fixed_point(quine_transform(1), result_arity=1)
    prog = decode_program(n)
    for x in range(100):
        got = eval_program(prog, [x], FUEL)
        assert isinstance(got, Converged) and got.value == n


# ---------------------------------------------------------------------------
# Double recursion
# ---------------------------------------------------------------------------


def _relation_index(cond, arity) -> int:
    return code_program(Mu(cond_program(cond, arity + 1)))


def _diverger_index(arity: int) -> int:
    return code_program(coerce(DIVERGER, arity))


def test_sdrt_empty_relations_give_empty_sections():
    n, m = 1, 1
    a = _diverger_index(n + 2 * m + 2)
    b = _diverger_index(n + 2 * m + 2)
    t1, t2 = evaluation_free(lambda: sdrt(a, b, n, m))
    for y1, y2 in [(0, 0), (3, 7)]:
        i1, i2 = t1(y1, y2), t2(y1, y2)
        for x in range(0, 21, 5):
            assert not halts_within(i1, n, (x,), FUEL)
            assert not halts_within(i2, n, (x,), FUEL)


def test_sdrt_self_membership_fixture():
    # M1(x, y1, y2, z1, z2) holds exactly when x = z1, so the first section
    # is the singleton of its own index.
    n, m = 1, 1
    a = _relation_index(cond_eq(var(1), var(4)), n + 2 * m + 2)
    b = _diverger_index(n + 2 * m + 2)
    t1, t2 = sdrt(a, b, n, m)
    i1, i2 = t1(2, 5), t2(2, 5)
    assert halts_within(i1, n, (i1,), FUEL)
    for x in range(0, 21):
        assert not halts_within(i1, n, (x,), FUEL)
    assert not halts_within(i1, n, (i2,), FUEL)


def test_sdrt_ignores_parameters_fixture():
    # M1 holds exactly when x is even, whatever the parameters and the
    # diagonal indices are.
    n, m = 1, 1
    a = _relation_index(cond_eq(Plus(var(6), var(6)), var(1)), n + 2 * m + 2)
    b = _relation_index(cond_eq(var(1), var(5)), n + 2 * m + 2)
    t1, t2 = sdrt(a, b, n, m)
    i1 = t1(1, 9)
    i2 = t2(1, 9)
    for x in range(0, 21):
        assert halts_within(i1, n, (x,), FUEL) == (x % 2 == 0)
    # the second section is {x : x = z2} = its own singleton
    assert halts_within(i2, n, (i2,), FUEL)
    for x in range(0, 21):
        assert not halts_within(i2, n, (x,), FUEL)


def test_sdrt_functional_diagonal_fixture():
    # M1(xs, ys, zs) holds exactly when xs = zs: the first section becomes
    # the singleton {G(f1(y), f2(y))}.
    n = 1
    m1 = _relation_index(cond_eq(var(1), var(3)), 3 * n)
    m2 = _diverger_index(3 * n)
    g_first = code_program(Proj(2, 1))
    f1, f2 = evaluation_free(lambda: sdrt_functional(m1, m2, n, [g_first]))
    for y in (0, 4):
        i1, i2 = f1(y), f2(y)
        g_val = i1  # G projects the first index
        assert halts_within(i1, n, (g_val,), FUEL)
        for x in range(0, 21):
            assert not halts_within(i1, n, (x,), FUEL)
            assert not halts_within(i2, n, (x,), FUEL)


def test_sdrt_functional_even_fixture():
    n = 1
    m1 = _relation_index(cond_eq(Plus(var(4), var(4)), var(1)), 3 * n)
    m2 = _diverger_index(3 * n)
    g_first = code_program(Proj(2, 1))
    f1, _ = sdrt_functional(m1, m2, n, [g_first])
    i1 = f1(6)
    for x in range(0, 21):
        assert halts_within(i1, n, (x,), FUEL) == (x % 2 == 0)


def test_rt1_empty_relation_gives_empty_section():
    n = 1
    i_rel = _diverger_index(n + 1)
    j_rel = _diverger_index(n + 1)
    add_code = code_program(ADD)
    t1, _ = evaluation_free(lambda: rt1(add_code, n))
    idx = t1(i_rel, j_rel)
    for x in range(0, 21, 4):
        assert not halts_within(idx, n, (x,), FUEL)


def test_rt1_last_coordinate_even_fixture():
    # R^{n+1}_i holds when the appended coordinate is even; with f constant 2
    # the section is everything.
    n = 1
    i_rel = _relation_index(cond_eq(Plus(var(3), var(3)), var(2)), n + 1)
    j_rel = _diverger_index(n + 1)
    const2 = code_program(Lit(2, 2))
    t1, t2 = rt1(const2, n)
    idx = t1(i_rel, j_rel)
    for x in range(0, 21, 3):
        assert halts_within(idx, n, (x,), FUEL)


def test_rt1_first_equals_appended_fixture():
    # R^{n+1}_i holds when the first coordinate equals the appended value
    # f(t1, t2); with f = pairing the section is a singleton we can compute.
    n = 1
    i_rel = _relation_index(cond_eq(var(1), var(2)), n + 1)
    j_rel = _diverger_index(n + 1)
    pair_code = code_program(Compose(Extern("pair", 2), (Proj(2, 1), Proj(2, 2))))
    t1, t2 = rt1(pair_code, n)
    idx1, idx2 = t1(i_rel, j_rel), t2(i_rel, j_rel)
    from rosserlab.coding import pair2

    target = pair2(idx1, idx2)
    assert halts_within(idx1, n, (target,), FUEL)
    for x in range(0, 21):
        assert not halts_within(idx1, n, (x,), FUEL)


def test_constructed_sections_are_relations_with_indices():
    n, m = 1, 1
    a = _diverger_index(n + 2 * m + 2)
    t1, _ = sdrt(a, a, n, m)
    r = ReRelation(n, t1(0, 0))
    assert member_within(r, (5,), 2_000) != YES
