import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from distrev.costs import OrderMode, PseudoDistance
from distrev.distops import (
    OperatorTable,
    apply,
    check_inclusion,
    check_loop,
    family_closure,
    find_loop_violation,
    recheck_chain,
    validate_family,
)
from distrev.errors import FamilyError, UndefinedPairError, UnknownAtomError

F = Fraction
U = ("a", "b", "c", "d")


def _dist(fn, universe=U, mode=OrderMode.REAL):
    return PseudoDistance.from_function(universe, mode, fn)


def _uniform():
    return _dist(lambda v, w: F(0) if v == w else F(1))


def test_apply_empty_arguments():
    d = _uniform()
    assert apply(d, set(), {"a"}) == frozenset()
    assert apply(d, {"a"}, set()) == frozenset()


def test_apply_picks_global_minima():
    def fn(v, w):
        if v == w:
            return F(0)
        return F(1) if {v, w} == {"a", "b"} else F(2)

    d = _dist(fn)
    assert apply(d, {"a"}, {"b", "c"}) == {"b"}
    assert apply(d, {"a"}, {"c", "d"}) == {"c", "d"}
    # overlap: identity pairs cost zero under an IR distance
    assert apply(d, {"a", "c"}, {"c", "d"}) == {"c"}


def test_apply_asymmetric_direction_matters():
    table = {(v, w): F(5) for v in ("a", "b") for w in ("a", "b")}
    table[("a", "b")] = F(1)
    d = PseudoDistance(("a", "b"), OrderMode.REAL, table)
    assert apply(d, {"a"}, {"b"}) == {"b"}
    assert apply(d, {"b"}, {"a", "b"}) == {"a", "b"}


def test_operator_table_lookup_precedence():
    d = _uniform()
    key = (frozenset({"a"}), frozenset({"b", "c"}))
    op = OperatorTable(U, {key: frozenset({"b"})}, backing=d)
    assert op.lookup({"a"}, {"b", "c"}) == {"b"}  # explicit entry wins
    assert op.lookup({"a"}, {"c", "d"}) == {"c", "d"}  # backing fallback


def test_operator_table_errors():
    with pytest.raises(UnknownAtomError):
        OperatorTable(U, {(frozenset({"z"}), frozenset({"a"})): frozenset()})
    op = OperatorTable(U, {})
    with pytest.raises(UndefinedPairError):
        op.lookup({"a"}, {"b"})


def test_validate_family():
    closed = [{"a"}, {"b"}, {"a", "b"}]
    assert len(validate_family(U, closed)) == 3
    with pytest.raises(FamilyError):
        validate_family(U, [{"a"}, set()])
    with pytest.raises(FamilyError):
        validate_family(U, [{"a"}, {"b"}])  # union missing
    with pytest.raises(FamilyError):
        validate_family(U, [{"a", "b"}, {"b", "c"}, {"a", "b", "c"}])  # cap missing


def test_family_closure():
    closed = family_closure([{"a", "b"}, {"b", "c"}])
    assert closed == {
        frozenset({"a", "b"}),
        frozenset({"b", "c"}),
        frozenset({"b"}),
        frozenset({"a", "b", "c"}),
    }
    validate_family(U, closed)


def test_check_inclusion():
    d = _uniform()
    family = family_closure([{"a"}, {"b"}, {"a", "b"}])
    op = OperatorTable(U, {}, backing=d)
    assert check_inclusion(op, family).passed
    bad = OperatorTable(
        U, {(frozenset({"a"}), frozenset({"b"})): frozenset({"c"})}, backing=d
    )
    assert not check_inclusion(bad).passed


def _all_nonempty_subsets(universe):
    return [
        frozenset(c)
        for r in range(1, len(universe) + 1)
        for c in itertools.combinations(universe, r)
    ]


def _random_symmetric(rng, universe=U):
    table = {}
    for i, v in enumerate(universe):
        for w in universe[i:]:
            c = F(0) if v == w else F(rng.randrange(1, 16), 4)
            table[(v, w)] = c
            table[(w, v)] = c
    return PseudoDistance(universe, OrderMode.REAL, table)


def test_loop_holds_for_symmetric_distances():
    rng = random.Random(7)
    family = _all_nonempty_subsets(U)
    for _ in range(10):
        op = OperatorTable(U, {}, backing=_random_symmetric(rng))
        verdict = check_loop(op, family, k_max=3)
        assert verdict.passed
        assert not verdict.sampled


def test_loop_sampling_kicks_in_under_budget():
    rng = random.Random(3)
    family = _all_nonempty_subsets(U)
    op = OperatorTable(U, {}, backing=_random_symmetric(rng))
    verdict = check_loop(op, family, k_max=3, budget=10, samples=50)
    assert verdict.passed
    assert verdict.sampled
    assert verdict.checked == 150


def _cyclic_override_op():
    # singleton sources pick their cyclic successor out of the other two:
    # b keeps a, c keeps b, but a drops b -- so the k=2 chain a,b,c has all
    # premises and a failing conclusion
    universe = ("a", "b", "c")
    d = PseudoDistance.from_function(
        universe, OrderMode.REAL, lambda v, w: F(0) if v == w else F(1)
    )
    entries = {
        (frozenset({"b"}), frozenset({"a", "c"})): frozenset({"a"}),
        (frozenset({"c"}), frozenset({"a", "b"})): frozenset({"b"}),
        (frozenset({"a"}), frozenset({"b", "c"})): frozenset({"c"}),
    }
    return OperatorTable(universe, entries, backing=d)


def test_loop_counterexample_on_cyclic_table():
    op = _cyclic_override_op()
    family = _all_nonempty_subsets(op.universe)
    verdict = check_loop(op, family, k_max=3)
    assert not verdict.passed
    assert recheck_chain(op, verdict.chain)


def test_recheck_chain_rejects_non_counterexamples():
    d = _uniform()
    op = OperatorTable(U, {}, backing=d)
    # premises hold but so does the conclusion
    chain = (frozenset({"a"}), frozenset({"a"}))
    assert not recheck_chain(op, chain)


def test_find_loop_violation_agrees_with_recheck():
    op = _cyclic_override_op()
    verdict = find_loop_violation(op, _all_nonempty_subsets(op.universe), k_max=6)
    assert not verdict.passed
    assert recheck_chain(op, verdict.chain)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_apply_result_always_within_w(seed):
    rng = random.Random(seed)
    d = _random_symmetric(rng)
    sets = _all_nonempty_subsets(U)
    v = rng.choice(sets)
    w = rng.choice(sets)
    result = apply(d, v, w)
    assert result
    assert result <= w
