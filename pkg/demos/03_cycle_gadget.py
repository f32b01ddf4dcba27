"""Walkthrough: the abstract cycle gadget.

Take 2m points arranged as two rings joined by rungs, with carefully graded
costs, and redirect the operator on a single wrap-around entry.  The result
looks locally like a distance operator but provably is not: a small
sub-table of it already has no realizing distance, and the cyclic chain
condition fails.  Patching a fresh rung restores exact realizability.
"""

from distrev.realizability import solve_table
from distrev.wheel import (
    build_wheel_gadget,
    proof_fragment,
    verify_wheel_claims,
)

# ---------------------------------------------------------------------------
# Build the gadget for the smallest cycle (m = 4: points v1..v4, w1..w4,
# plus two off-cycle extras).

gadget = build_wheel_gadget(n=1)
params = gadget.params
print("cycle size m =", params.m)
print("universe:", params.universe)

d = gadget.dist
print("\nsample costs:")
print("  rung      d(v2, w2) =", d.d("v2", "w2"))
print("  adjacent  d(v1, w2) =", d.d("v1", "w2"))
print("  chord     d(v1, w3) =", d.d("v1", "w3"))

# The modification: on the wrap pair the operator drops one of the two
# minimal points.
print("\nmodified entry {v4,v1} | {w4,w1} ->",
      sorted(gadget.op.lookup({"v4", "v1"}, {"w4", "w1"})))

# ---------------------------------------------------------------------------
# The finite fragment that blocks realizability.

fragment = proof_fragment(gadget.op, params)
verdict = solve_table(fragment)
print("\nfragment of", len(fragment.entries), "entries:", verdict.status)

# ---------------------------------------------------------------------------
# The full claim verification: fragment unsat, the patched operator equals
# the patched minimization on every subset pair, the patched distance keeps
# all four real-order properties, and a chain violation exists.

report = verify_wheel_claims(gadget)
print("\nequality sweep:", report.equality.pairs_checked, "pairs,",
      "zero mismatches" if report.equality.passed else "MISMATCH")
for name, prop in report.properties.items():
    print(f"patched distance {name}: {'pass' if prop.passed else 'fail'}")

print("\nchain violation at k =", report.loop.k)
for i, vset in enumerate(report.loop.chain):
    print(f"  V_{i} = {{{', '.join(sorted(vset))}}}")

print("\nall claims verified:", report.passed)
