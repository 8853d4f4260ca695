"""Membership, witness comparison, the separation split, cylindrification,
and fixture/decider consistency."""

from __future__ import annotations

import pytest

from rosserlab.coding import pair2
from rosserlab.kernel import code_program
from rosserlab.relations import (
    FIXTURES,
    UNKNOWN,
    YES,
    ReRelation,
    before_holds,
    before_index,
    cylindrify,
    fixture,
    member_within,
    membership_time,
    mu_search_time,
    parse_fixture_spec,
    separation_split,
    window_points,
)

FUEL = 10_000


def test_empty_relation_membership_unknown():
    empty = fixture("empty").relation
    for a in (0, 3, 17):
        assert member_within(empty, (a,), FUEL) == UNKNOWN


def test_fixture_membership_yes_when_decider_says_so():
    ev = fixture("evens")
    assert member_within(ev.relation, (10,), 100) == YES
    assert member_within(ev.relation, (5,), FUEL) == UNKNOWN


def test_membership_monotone_in_fuel():
    ev = fixture("evens")
    for a in range(0, 30, 2):
        t = membership_time(ev.relation, (a,), FUEL)
        assert t is not None
        assert member_within(ev.relation, (a,), t) == YES
        assert member_within(ev.relation, (a,), t - 1) == UNKNOWN
        assert member_within(ev.relation, (a,), t + 1) == YES


def test_fixture_deciders_agree_with_bounded_membership():
    for name, fix in FIXTURES.items():
        for point in window_points(fix.arity, 12):
            got = member_within(fix.relation, point, FUEL)
            assert (got == YES) == fix.holds(point), (name, point)


def test_mu_search_time_formula_is_exact():
    ev = fixture("evens")
    for a in range(0, 24, 2):
        assert membership_time(ev.relation, (a,), FUEL) == mu_search_time(ev, a // 2)
    odd = fixture("odds")
    for a in range(1, 24, 2):
        assert membership_time(odd.relation, (a,), FUEL) == mu_search_time(odd, a // 2)


def test_before_is_empty_on_equal_indices():
    n = 1
    b = ReRelation(n + 2, before_index(n))
    ev = fixture("evens").relation
    for a in range(0, 10):
        assert member_within(b, (a, ev.index, ev.index), FUEL) == UNKNOWN


def test_before_orients_disjoint_fixtures():
    n = 1
    b = ReRelation(n + 2, before_index(n))
    ev, od = fixture("evens"), fixture("odds")
    assert member_within(b, (4, ev.relation.index, od.relation.index), FUEL) == YES
    assert member_within(b, (4, od.relation.index, ev.relation.index), FUEL) == UNKNOWN
    assert not before_holds(od, ev, (4,), FUEL)


def test_before_clauses_on_fixture_pairs():
    pairs = [("evens", "odds"), ("mult4", "odds"), ("fin123", "empty"), ("mult3", "mult4")]
    n = 1
    b = ReRelation(n + 2, before_index(n))
    for left, right in pairs:
        lf, rf = fixture(left), fixture(right)
        i, j = lf.relation.index, rf.relation.index
        for (a,) in window_points(1, 50):
            fwd = member_within(b, (a, i, j), FUEL) == YES
            bwd = member_within(b, (a, j, i), FUEL) == YES
            # the two orientations are disjoint
            assert not (fwd and bwd)
            # each difference lands in its orientation
            if lf.holds((a,)) and not rf.holds((a,)):
                assert fwd
            if rf.holds((a,)) and not lf.holds((a,)):
                assert bwd
            # for disjoint fixtures the orientation equals the left member
            if not (lf.holds((a,)) and rf.holds((a,))):
                assert fwd == lf.holds((a,))
                assert bwd == rf.holds((a,))
            assert fwd == before_holds(lf, rf, (a,), FUEL)
            assert bwd == before_holds(rf, lf, (a,), FUEL)


def test_separation_split_clauses_on_fixture_pairs():
    cases = [
        ("evens", "odds"),
        ("mult4", "evens"),
        ("primes_small", "composites_small"),
        ("fin123", "empty"),
    ]
    for left, right in cases:
        lf, rf = fixture(left), fixture(right)
        c, d = separation_split(lf.relation, rf.relation)
        for (a,) in window_points(1, 50):
            in_c = member_within(c, (a,), FUEL) == YES
            in_d = member_within(d, (a,), FUEL) == YES
            in_a, in_b = lf.holds((a,)), rf.holds((a,))
            if in_a and not in_b:
                assert in_c
            if in_b and not in_a:
                assert in_d
            assert not (in_c and in_d)
            assert (in_c or in_d) == (in_a or in_b), (left, right, a)


def test_split_of_identical_relations_is_empty():
    ev = fixture("evens").relation
    c, d = separation_split(ev, ev)
    for (a,) in window_points(1, 20):
        assert member_within(c, (a,), FUEL) == UNKNOWN
        assert member_within(d, (a,), FUEL) == UNKNOWN


def test_cylindrify_depends_on_leading_coordinates():
    ev = fixture("evens").relation
    s = cylindrify(ev, 3)
    assert member_within(s, (4, 9, 9), FUEL) == YES
    assert member_within(s, (3, 0, 0), FUEL) == UNKNOWN
    empty3 = cylindrify(fixture("empty").relation, 3)
    for pt in [(0, 0, 0), (1, 2, 3)]:
        assert member_within(empty3, pt, FUEL) == UNKNOWN


def test_double_cylindrification_matches_single():
    ev = fixture("evens").relation
    once = cylindrify(cylindrify(ev, 2), 4)
    direct = cylindrify(ev, 4)
    for pt in [(4, 1, 2, 3), (5, 0, 0, 0), (8, 7, 7, 7)]:
        assert member_within(once, pt, FUEL) == member_within(direct, pt, FUEL)


def test_cylindrify_rejects_smaller_arity():
    with pytest.raises(ValueError):
        cylindrify(fixture("evens").relation, 1)


def test_fixture_spec_round_trip():
    text = "(fixture halfs (arity 1) (program (mu (comp (extern eq 2) (comp (extern add 2) (proj 2 2) (proj 2 2)) (proj 2 1)))) (decider evens))"
    fix = parse_fixture_spec(text)
    assert fix.name == "halfs"
    assert fix.arity == 1
    for a in range(12):
        assert (member_within(fix.relation, (a,), FUEL) == YES) == fix.holds((a,))


def test_program_codes_live_in_their_own_namespace():
    from rosserlab.coding import TAG_FORMULA, TAG_PROGRAM, untag_code
    from rosserlab.kernel import decode_program

    ev = fixture("evens").relation
    assert code_program(decode_program(ev.index)) == ev.index
    tag, raw = untag_code(ev.index)
    assert tag == TAG_PROGRAM
    assert pair2(TAG_FORMULA, raw) != ev.index
