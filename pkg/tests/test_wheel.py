import random
from fractions import Fraction

import pytest

from distrev.costs import INF, OrderMode, check_property
from distrev.distops import apply, recheck_chain
from distrev.errors import BoundExceededError, FamilyError
from distrev.realizability import solve_table
from distrev.wheel import (
    WheelParams,
    apply_int_scalar,
    apply_mask_matrix,
    build_hamming_wheel,
    build_modified_operator,
    build_patched,
    build_wheel_distance,
    build_wheel_gadget,
    distance_int_matrix,
    find_fresh_rung,
    hamming_operator,
    hamming_proof_fragment,
    proof_fragment,
    verify_hamming_claims,
    verify_wheel_claims,
    wheel_equality_sweep,
)

F = Fraction


def test_params_validation():
    with pytest.raises(FamilyError):
        WheelParams(3)
    with pytest.raises(FamilyError):
        WheelParams.for_arity(0)
    assert WheelParams.for_arity(1).m == 4


def test_wheel_distance_cases():
    params = WheelParams(4)
    d = build_wheel_distance(params)
    assert d.d("v1", "v1") == F(0)
    assert d.d("v1", "x1") == F(1)  # off the wheel
    assert d.d("v1", "v3") == F(11, 10)  # same side
    assert d.d("v2", "w2") == F(14, 10)  # rung
    assert d.d("v1", "w2") == F(2)  # adjacent
    assert d.d("v4", "w1") == F(2)  # wrap-adjacent
    assert d.d("v1", "w3") == F(12, 10)  # chord
    assert check_property(d, "symmetric").passed
    assert check_property(d, "ir").passed
    assert check_property(d, "positive").passed
    assert check_property(d, "tir").passed


def test_modified_operator_entries():
    params = WheelParams(4)
    d = build_wheel_distance(params)
    op = build_modified_operator(d, params)
    assert op.lookup({"v4", "v1"}, {"w4", "w1"}) == {"w4"}
    assert op.lookup({"w4", "w1"}, {"v4", "v1"}) == {"v4"}
    # away from the wrap rung the operator is plain minimization
    assert op.lookup({"v1", "v2"}, {"w1", "w2"}) == {"w1", "w2"}
    assert op.lookup({"v1"}, {"w1", "w2"}) == {"w1"}


def test_fragment_is_unrealizable_for_all_small_m():
    for m in (4, 5, 6):
        params = WheelParams(m)
        op = build_modified_operator(build_wheel_distance(params), params)
        verdict = solve_table(proof_fragment(op, params))
        assert verdict.status == "unsat", m
        assert verdict.conflict


def test_unmodified_operator_fragment_is_sat():
    params = WheelParams(4)
    d = build_wheel_distance(params)
    plain = build_modified_operator(d, params)
    fragment = proof_fragment(plain, params)
    # undo the modification: replace the wrap entry by the true minimization
    entries = dict(fragment.entries)
    vv = frozenset({"v4", "v1"})
    ww = frozenset({"w4", "w1"})
    entries[(vv, ww)] = apply(d, vv, ww)
    from distrev.distops import OperatorTable

    verdict = solve_table(OperatorTable(params.universe, entries))
    assert verdict.status == "sat"


def test_fresh_rung_pigeonhole():
    assert find_fresh_rung([], 4) == 1
    pair1 = ({"v1", "v2"}, {"w1", "w2"})
    assert find_fresh_rung([pair1], 4) == 2
    # order inside a pair is irrelevant
    assert find_fresh_rung([({"w1", "w2"}, {"v1", "v2"})], 4) == 2
    with pytest.raises(BoundExceededError):
        find_fresh_rung([pair1, pair1, pair1], 4)


def test_patched_distance_costs():
    gadget = build_wheel_gadget(n=1)
    assert gadget.r == 1
    dp = gadget.patched_dist
    assert dp.d("v1", "w1") == F(14, 10)  # rung r keeps its cost
    for i in (2, 3, 4):
        assert dp.d(f"v{i}", f"w{i}") == F(13, 10)
        assert dp.d(f"w{i}", f"v{i}") == F(13, 10)
    assert gadget.patched_op.lookup({"v1", "v2"}, {"w1", "w2"}) == {"w2"}
    assert gadget.patched_op.lookup({"w1", "w2"}, {"v1", "v2"}) == {"v2"}


def test_vectorized_apply_matches_scalar_reference():
    gadget = build_wheel_gadget(n=1)
    order = list(gadget.params.universe)
    cost = distance_int_matrix(gadget.patched_dist, order)
    full = apply_mask_matrix(cost)
    rng = random.Random(0)
    index = {lab: i for i, lab in enumerate(order)}
    for _ in range(300):
        vmask = rng.randrange(1 << len(order))
        wmask = rng.randrange(1 << len(order))
        expected = apply_int_scalar(cost, vmask, wmask)
        assert int(full[vmask, wmask]) == expected
        # and against the set-level operator
        vset = frozenset(lab for lab in order if vmask >> index[lab] & 1)
        wset = frozenset(lab for lab in order if wmask >> index[lab] & 1)
        got = apply(gadget.patched_dist, vset, wset)
        bits = 0
        for lab in got:
            bits |= 1 << index[lab]
        assert bits == expected


def test_full_claims_m4():
    gadget = build_wheel_gadget(n=1)
    report = verify_wheel_claims(gadget)
    assert report.fragment_verdict.status == "unsat"
    assert report.inclusion.passed
    assert report.equality.passed
    assert report.equality.pairs_checked == (1 << 10) ** 2
    assert all(r.passed for r in report.properties.values())
    assert not report.loop.passed
    assert report.loop.k <= 8
    assert report.passed


def test_loop_chain_is_independently_checkable():
    gadget = build_wheel_gadget(n=1)
    report = verify_wheel_claims(gadget)
    assert recheck_chain(gadget.op, report.loop.chain)


def test_corrupted_patched_rung_breaks_equality():
    # mutation check: nudging one patched rung cost off its value makes the
    # exhaustive operator-equality sweep fail
    gadget = build_wheel_gadget(n=1)
    corrupted = gadget.patched_dist.replaced(
        {("v3", "w3"): F(26, 10), ("w3", "v3"): F(26, 10)}
    )
    report = wheel_equality_sweep(gadget.params, gadget.patched_op, corrupted)
    assert not report.passed


def test_taken_pairs_shift_the_fresh_rung():
    taken = [({"v1", "v2"}, {"w1", "w2"})]
    gadget = build_wheel_gadget(n=1, taken_pairs=taken)
    assert gadget.r == 2
    assert verify_wheel_claims(gadget).passed


# ---------------------------------------------------------------------------
# Hamming variant


def test_hamming_points():
    g = build_hamming_wheel(n=1)
    assert len(g.signature) == 8
    assert len(g.universe) == 11
    from distrev.logic import hamming_diff

    # wheel points pairwise at difference 2; extras at 1 / 2 / >= 3
    assert len(hamming_diff(g.points["v1"], g.points["w3"])) == 2
    assert len(hamming_diff(g.points["e1"], g.points["v1"])) == 1
    assert len(hamming_diff(g.points["e2"], g.points["v1"])) == 2
    for lab in g.wheel_labels:
        assert len(hamming_diff(g.points["e3"], g.points[lab])) >= 3
    assert len(hamming_diff(g.points["e3"], g.points["e1"])) >= 3
    assert len(hamming_diff(g.points["e3"], g.points["e2"])) >= 3


def test_hamming_distance_cases():
    g = build_hamming_wheel(n=1)
    d = g.dist
    assert d.mode is OrderMode.LIBERAL
    assert d.d("v1", "v1") == F(0)
    assert d.d("e1", "v1") == F(14, 10)  # off-wheel, difference 1
    assert d.d("e2", "v1") == F(2)  # off-wheel, difference 2
    assert d.d("e3", "v1") == F(3)  # off-wheel, difference >= 3
    assert d.d("v1", "v3") == F(21, 10)  # same side
    assert d.d("v2", "w2") == F(24, 10)  # rung
    assert d.d("v1", "w2") == F(25, 10)  # adjacent
    assert d.d("v1", "w3") == F(22, 10)  # chord
    assert g.patched_dist.d("v3", "w3") == F(23, 10)


def test_hamming_guard_routes_to_minimization():
    g = build_hamming_wheel(n=1)
    op = hamming_operator(g)
    wrap_v = {"v4", "v1"}
    wrap_w = {"w4", "w1"}
    assert op(wrap_v, wrap_w) == {"w4"}
    assert op(wrap_w, wrap_v) == {"v4"}
    # polluting either side with a close extra triggers the guard
    assert op(wrap_v | {"e1"}, wrap_w) == apply(g.dist, wrap_v | {"e1"}, wrap_w)
    # a far extra keeps the special entry in force
    assert op(wrap_v | {"e3"}, wrap_w) == {"w4"}


def test_hamming_full_claims():
    g = build_hamming_wheel(n=1)
    report = verify_hamming_claims(g)
    assert report.equality.passed
    assert report.reduction.passed
    assert report.hir.passed
    assert report.liberal_tir.passed
    assert report.sandwich.passed
    assert report.fragment_verdict.status == "unsat"
    assert report.passed


def test_dropped_guard_breaks_equality():
    # mutation check: ignoring the closeness guard when keying the special
    # entries must surface as operator-equality mismatches
    g = build_hamming_wheel(n=1)
    op = hamming_operator(g, patched=True, guard=lambda *a: False)
    # a polluted wrap pair now fires the special entry, disagreeing with the
    # patched minimization
    polluted_v = frozenset({"v4", "v1", "e1"})
    wrap_w = frozenset({"w4", "w1"})
    assert op(polluted_v, wrap_w) == {"w4"}
    assert op(polluted_v, wrap_w) != apply(g.patched_dist, polluted_v, wrap_w)


def test_corrupted_hamming_rung_breaks_sandwich_not_hir():
    from distrev.costs import check_hir
    from distrev.wheel import check_sandwich

    g = build_hamming_wheel(n=1)
    corrupted = g.patched_dist.replaced(
        {("v3", "w3"): F(26, 10), ("w3", "v3"): F(26, 10)}
    )
    assert check_hir(corrupted, g.points).passed
    assert not check_sandwich(g, patched=corrupted).passed
