"""Run every combinatorial inequality grid and summarize the margins.

The bound kernels (factorial-composition sums, the Stirling sum, integer
tail sums, adjoint-closure prefactors) are checked pointwise on their
parameter grids.  Every point must pass; the interesting output is how much
slack each family has at its tightest point.
"""

from collections import defaultdict

from slowheat.inequalities import run_all_lemmas

reports = run_all_lemmas(seed=7)

by_lemma = defaultdict(list)
for r in reports:
    by_lemma[r.lemma].append(r)

print(f"{len(reports)} grid points across {len(by_lemma)} families\n")
print(f"{'family':<22} {'points':>7} {'fails':>6} {'tightest lhs/rhs':>17}")
for lemma, rs in sorted(by_lemma.items()):
    fails = sum(not r.passes for r in rs)
    tightest = max(r.lhs / r.rhs for r in rs if r.rhs > 0)
    print(f"{lemma:<22} {len(rs):>7} {fails:>6} {tightest:>17.6f}")
