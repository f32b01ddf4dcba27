"""The minimization operator, explicit operator tables, and the inclusion
and loop condition checkers."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .costs import Ordering, PropertyReport, compare_costs
from .errors import FamilyError, UndefinedPairError, UnknownAtomError


def apply(dist, vset, wset):
    """Members of ``wset`` attaining the globally minimal cost over
    ``vset`` x ``wset``.  Empty on an empty argument."""
    vset = frozenset(vset)
    wset = frozenset(wset)
    if not vset or not wset:
        return frozenset()
    best = None
    for v in vset:
        for w in wset:
            c = dist.d(v, w)
            if best is None or compare_costs(c, best, dist.mode) is Ordering.LESS:
                best = c
    return frozenset(
        w
        for w in wset
        if any(
            compare_costs(dist.d(v, w), best, dist.mode) is Ordering.EQUAL
            for v in vset
        )
    )


def _canon(s):
    return frozenset(s)


@dataclass
class OperatorTable:
    """A finite (explicit or distance-backed) map (V, W) -> X over subsets
    of a universe.  Explicit entries win over the backing distance."""

    universe: tuple
    entries: dict = field(default_factory=dict)
    backing: object = None  # PseudoDistance or None

    def __post_init__(self):
        pts = set(self.universe)
        canon = {}
        for (v, w), x in self.entries.items():
            v, w, x = _canon(v), _canon(w), _canon(x)
            if not (v | w | x) <= pts:
                raise UnknownAtomError("entry mentions points outside the universe")
            if (v, w) in canon:
                raise FamilyError("duplicate entry for one (V, W) pair")
            canon[(v, w)] = x
        self.entries = canon

    def lookup(self, vset, wset):
        key = (_canon(vset), _canon(wset))
        if key in self.entries:
            return self.entries[key]
        if self.backing is not None:
            return apply(self.backing, *key)
        raise UndefinedPairError(f"no entry for pair {sorted(key[0])}|{sorted(key[1])}")

    def sorted_entries(self):
        return sorted(
            self.entries.items(),
            key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1])),
        )


def validate_family(universe, family):
    """Check the loop-condition family invariants: no empty set, closed
    under union, closed under non-disjoint intersection."""
    pts = set(universe)
    sets = []
    seen = set()
    for s in family:
        s = _canon(s)
        if not s:
            raise FamilyError("family contains the empty set")
        if not s <= pts:
            raise FamilyError("family member outside the universe")
        if s not in seen:
            seen.add(s)
            sets.append(s)
    for a in sets:
        for b in sets:
            if (a | b) not in seen:
                raise FamilyError(
                    f"family not closed under union: {sorted(a)} | {sorted(b)}"
                )
            if a & b and (a & b) not in seen:
                raise FamilyError(
                    f"family not closed under non-disjoint intersection: "
                    f"{sorted(a)} & {sorted(b)}"
                )
    return sets


def family_closure(generators):
    """Close a collection of non-empty sets under union and non-disjoint
    intersection."""
    closed = {_canon(s) for s in generators if s}
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                for c in (a | b,) + ((a & b,) if a & b else ()):
                    if c not in closed:
                        closed.add(c)
                        new.append(c)
        frontier = new
    return closed


def check_inclusion(op, family=None, witness_cap=16):
    """Verify V|W is a subset of W for all table entries, or for all pairs
    of the given family."""
    report = PropertyReport("inclusion", True, witness_cap=witness_cap)
    if family is None:
        pairs = [key for key, _ in op.sorted_entries()]
    else:
        sets = sorted({_canon(s) for s in family}, key=sorted)
        pairs = [(a, b) for a in sets for b in sets]
    for v, w in pairs:
        x = op.lookup(v, w)
        if not x <= w:
            report.record((sorted(v), sorted(w), sorted(x)))
    return report


@dataclass
class LoopVerdict:
    """Result of a loop-condition check.  On failure the witness chain
    V_0..V_k is re-checkable against the operator."""

    passed: bool
    k: int = 0
    chain: tuple = ()
    checked: int = 0
    sampled: bool = False
    note: str = ""


def _premise(op, a, b, c):
    # (V_b | (V_a u V_c)) n V_a is non-empty, written for chain positions
    # premise i: a = V_{i-1}, b = V_i, c = V_{i+1 mod k+1}
    return bool(op.lookup(b, a | c) & a)


def _conclusion(op, v0, v1, vk):
    return bool(op.lookup(v0, vk | v1) & v1)


def recheck_chain(op, chain):
    """Independently re-verify that a chain is a loop counterexample."""
    k = len(chain) - 1
    ring = list(chain) + [chain[0]]
    for i in range(1, k + 1):
        if not _premise(op, ring[i - 1], ring[i], ring[i + 1]):
            return False
    return not _conclusion(op, chain[0], chain[1], chain[k])


def check_loop(op, family, k_max, budget=10**6, samples=10**4, seed=0):
    """Check the loop condition for chains from ``family`` with k <= k_max.

    Exhaustive (with premise-pruned search) when the chain space fits the
    budget, uniformly sampled with a fixed seed otherwise.  Returns the
    first counterexample found, in deterministic order.
    """
    sets = validate_family(op.universe, family)
    sets = sorted(sets, key=sorted)
    cache = {}

    def premise(a, b, c):
        key = (a, b, c)
        if key not in cache:
            cache[key] = _premise(op, a, b, c)
        return cache[key]

    def conclusion(v0, v1, vk):
        return premise(v1, v0, vk)

    checked = 0
    any_sampled = False
    for k in range(1, k_max + 1):
        total = len(sets) ** (k + 1)
        if total <= budget:
            found = _loop_exhaustive(premise, conclusion, sets, k)
            checked += total
        else:
            any_sampled = True
            found = _loop_sampled(premise, conclusion, sets, k, samples, seed)
            checked += samples
        if found is not None:
            return LoopVerdict(False, k, found, checked, any_sampled)
    return LoopVerdict(True, k_max, (), checked, any_sampled)


def _loop_exhaustive(premise, conclusion, sets, k):
    chain = [None] * (k + 1)

    def extend(depth):
        # premise i is checkable once V_{i+1} is chosen
        for s in sets:
            chain[depth] = s
            if depth >= 2 and not premise(chain[depth - 2], chain[depth - 1], s):
                continue
            if depth == k:
                if not premise(chain[k - 1], chain[k], chain[0]):
                    continue
                if not conclusion(chain[0], chain[1], chain[k]):
                    return tuple(chain)
            else:
                hit = extend(depth + 1)
                if hit is not None:
                    return hit
        return None

    # k == 1 has a single premise (V_1 | (V_0 u V_0)) n V_0, checked at depth k
    return extend(0)


def _loop_sampled(premise, conclusion, sets, k, samples, seed):
    rng = random.Random(f"{seed}:{k}")
    for _ in range(samples):
        chain = tuple(rng.choice(sets) for _ in range(k + 1))
        ring = list(chain) + [chain[0]]
        if all(premise(ring[i - 1], ring[i], ring[i + 1]) for i in range(1, k + 1)):
            if not conclusion(chain[0], chain[1], chain[k]):
                return chain
    return None


def find_loop_violation(op, sets, k_max):
    """Directed search for a loop counterexample over the given candidate
    sets (no closure requirement; any found chain is re-checked).

    A chain V_0..V_k with all premises holding is a walk in the graph whose
    states are consecutive pairs (V_{i-1}, V_i) and whose transitions encode
    one premise each; the search does one BFS per start state.
    """
    sets = sorted({_canon(s) for s in sets if s}, key=sorted)
    n = len(sets)
    prem = {}

    def p(a, b, c):
        key = (a, b, c)
        if key not in prem:
            prem[key] = _premise(op, sets[a], sets[b], sets[c])
        return prem[key]

    succ = {}

    def successors(state):
        if state not in succ:
            a, b = state
            succ[state] = [c for c in range(n) if p(a, b, c)]
        return succ[state]

    best = None
    for i0 in range(n):
        for i1 in range(n):
            # BFS from (V_0, V_1) over premise transitions
            dist = {(i0, i1): 0}
            parent = {}
            queue = deque([(i0, i1)])
            while queue:
                state = queue.popleft()
                if dist[state] + 1 > k_max:
                    continue
                for c in successors(state):
                    nxt = (state[1], c)
                    if nxt not in dist:
                        dist[nxt] = dist[state] + 1
                        parent[nxt] = state
                        queue.append(nxt)
            for ik in range(n):
                goal = (ik, i0)
                if goal not in dist or dist[goal] < 1:
                    continue
                k = dist[goal]
                if _conclusion(op, sets[i0], sets[i1], sets[ik]):
                    continue
                # reconstruct V_0..V_k from the state path
                states = [goal]
                while states[-1] != (i0, i1):
                    states.append(parent[states[-1]])
                states.reverse()
                chain = tuple(sets[s[0]] for s in states)
                if recheck_chain(op, chain):
                    if best is None or k < best.k:
                        best = LoopVerdict(False, k, chain, note="directed search")
    if best is not None:
        return best
    return LoopVerdict(True, k_max, (), note="directed search")
