"""Evaluator semantics: determinism, fuel monotonicity, numbering totality,
universal dispatch, and the step predicate."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

import rosserlab  # noqa: F401  (registers every extern)
from rosserlab.kernel import (
    DIVERGER,
    Compose,
    Converged,
    Extern,
    FuelExhausted,
    Lit,
    Mu,
    PrimRec,
    Proj,
    Succ,
    Universal,
    Zero,
    code_program,
    count_nodes,
    decode_program,
    eval_program,
    halts_within,
    parse_program,
    print_program,
)

ADD = PrimRec(Proj(1, 1), Compose(Succ(), (Proj(3, 3),)))


def run(p, args, fuel=10_000):
    return eval_program(p, args, fuel)


def test_succ():
    out = run(Succ(), [4], 10)
    assert isinstance(out, Converged)
    assert out.value == 5
    assert out.steps_used <= 10


def test_empty_search_never_ends():
    out = run(Mu(Lit(1, 1)), [], 5_000)
    assert isinstance(out, FuelExhausted)


def test_primitive_recursion_addition():
    out = run(ADD, [3, 4], 1_000)
    assert isinstance(out, Converged)
    assert out.value == 3 + 4


def test_zero_fuel_exhausts_everything():
    assert isinstance(run(Succ(), [4], 0), FuelExhausted)
    assert isinstance(run(Zero(0), [], 0), FuelExhausted)


def test_arity_coercion_ignores_extras_and_pads_zeros():
    out = run(Succ(), [4, 99, 100], 50)
    assert isinstance(out, Converged) and out.value == 5
    out = run(ADD, [7], 50)  # missing argument becomes 0
    assert isinstance(out, Converged) and out.value == 7


def test_determinism_random_trials():
    rng = random.Random(11)
    programs = [Succ(), ADD, Mu(Compose(Extern("eq", 2), (Proj(2, 2), Proj(2, 1)))), DIVERGER]
    for _ in range(1_000):
        p = rng.choice(programs)
        args = [rng.randint(0, 30) for _ in range(p.arity)]
        fuel = rng.randint(0, 500)
        assert run(p, args, fuel) == run(p, args, fuel)


def test_fuel_monotonicity_sampled():
    rng = random.Random(13)
    programs = [Succ(), ADD, Mu(Compose(Extern("eq", 2), (Proj(2, 2), Proj(2, 1))))]
    for _ in range(300):
        p = rng.choice(programs)
        args = [rng.randint(0, 20) for _ in range(p.arity)]
        s = rng.randint(1, 200)
        out = run(p, args, s)
        if isinstance(out, Converged):
            for k in (1, 7, 100):
                again = run(p, args, s + k)
                assert again == out


def test_steps_used_is_exact_node_count_for_straight_line():
    p = Compose(Extern("add", 2), (Proj(2, 1), Proj(2, 2)))
    out = run(p, [3, 4], 100)
    assert isinstance(out, Converged)
    assert out.value == 7
    assert out.steps_used == count_nodes(p)


def test_code_decode_round_trip():
    for p in (Succ(), ADD, DIVERGER, Lit(12345, 3), Universal(2)):
        assert decode_program(code_program(p)) == p


def test_decode_is_total_and_deterministic_below_ten_thousand():
    first = [decode_program(i) for i in range(10_000)]
    decode_program.cache_clear()
    second = [decode_program(i) for i in range(10_000)]
    assert first == second
    # none of these small naturals are in the image of the coder, so they all
    # fall back to the canonical diverging program
    assert all(p == DIVERGER for p in first)


def test_malformed_payload_decodes_to_diverger():
    assert decode_program(0) == DIVERGER
    assert decode_program(123456789) == DIVERGER


def test_printer_parser_round_trip_bit_exact():
    for p in (Succ(), ADD, DIVERGER, Zero(4), Lit(7, 0), Proj(5, 2)):
        text = print_program(p)
        assert print_program(parse_program(text)) == text


def test_halts_within_basic():
    succ_code = code_program(Succ())
    assert not halts_within(succ_code, 1, (4,), 0)
    assert halts_within(succ_code, 1, (4,), 10)


def test_halts_within_monotone_sampled():
    rng = random.Random(17)
    codes = [code_program(Succ()), code_program(ADD), code_program(DIVERGER)]
    for _ in range(500):
        i = rng.choice(codes)
        n = rng.randint(1, 2)
        args = tuple(rng.randint(0, 15) for _ in range(n))
        s = rng.randint(0, 80)
        if halts_within(i, n, args, s):
            assert halts_within(i, n, args, s + 1)


@given(st.integers(min_value=0, max_value=25), st.integers(min_value=0, max_value=25))
@settings(max_examples=60, deadline=None)
def test_universal_agrees_with_direct_evaluation(a, b):
    idx = code_program(ADD)
    fuel = 5_000
    direct = run(ADD, [a, b], fuel)
    via_universal = run(Universal(2), [idx, a, b], fuel)
    assert isinstance(direct, Converged) and isinstance(via_universal, Converged)
    assert via_universal.value == direct.value
    assert direct.steps_used <= via_universal.steps_used <= fuel


def test_universal_soundness_sampled():
    rng = random.Random(23)
    programs = [Succ(), ADD, Mu(Compose(Extern("eq", 2), (Proj(2, 2), Proj(2, 1))))]
    for _ in range(200):
        p = rng.choice(programs)
        idx = code_program(p)
        args = [rng.randint(0, 12) for _ in range(p.arity)]
        fuel = rng.randint(0, 400)
        out = run(Universal(p.arity), [idx, *args], fuel)
        if isinstance(out, Converged):
            inner = run(p, args, fuel)
            assert isinstance(inner, Converged)
            assert inner.value == out.value
            assert inner.steps_used <= fuel
