"""Pairing laws and vector codes."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rosserlab.coding import (
    diag,
    pair2,
    pair_n,
    unpair,
    unpair_k,
    unpair_l,
    unpair_n,
)


def test_pair2_base_case():
    assert pair2(0, 0) == 0


def test_projections_recover_components():
    assert unpair_k(pair2(3, 5)) == 3
    assert unpair_l(pair2(3, 5)) == 5


def test_unpair_base_case():
    assert unpair(0) == (0, 0)


def test_round_trip_small():
    assert unpair(pair2(7, 2)) == (7, 2)


def test_unpair_then_pair_is_identity_below_ten_thousand():
    for z in range(10_000):
        x, y = unpair(z)
        assert pair2(x, y) == z


def test_pair2_injective_on_grid():
    seen = {}
    for x in range(201):
        for y in range(201):
            z = pair2(x, y)
            assert z not in seen
            seen[z] = (x, y)
            assert unpair(z) == (x, y)


@given(st.integers(min_value=0, max_value=10**30), st.integers(min_value=0, max_value=10**30))
@settings(max_examples=200, deadline=None)
def test_pair2_round_trip_large(x, y):
    assert unpair(pair2(x, y)) == (x, y)


def test_pair_n_base_case_is_pair2():
    assert pair_n([4, 9]) == pair2(4, 9)


def test_pair_n_left_nesting_instance():
    a, b, c = 3, 1, 7
    assert pair_n([a, b, c]) == pair2(pair2(a, b), c)


def test_pair_n_rejects_short_sequences():
    with pytest.raises(ValueError):
        pair_n([5])


def test_pair_n_decodes_componentwise():
    xs = (1, 2, 3, 4)
    assert unpair_n(pair_n(xs), 4) == xs


def test_left_nesting_law_random():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(2, 6)
        xs = [rng.randint(0, 500) for _ in range(k)]
        y = rng.randint(0, 500)
        assert pair_n(xs + [y]) == pair2(pair_n(xs), y)


def test_diag_shape_and_monotonicity():
    assert diag(5, 3) == (5, 5, 5)
    prev = -1
    for x in range(0, 60, 3):
        code = pair_n(diag(x, 4))
        assert code > prev
        prev = code
