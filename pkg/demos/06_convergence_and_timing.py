"""Index means against sample size, and the cost of each estimator.

A small version of the convergence study: 10 repetitions per size
instead of 100.
"""
from seggsa.experiments import convergence_study, ranking_instability, timing_study

grid = {"sobol": [500, 1_000, 2_000, 4_000], "mi": [1_250, 2_500, 5_000, 10_000],
        "delta": [1_250, 2_500, 5_000], "pawn": [25_000, 50_000, 100_000, 200_000]}
res = convergence_study(4.7, grid, repetitions=10, seed=0)
for m, sizes in res.sizes.items():
    print(f"\n{m}")
    for n, mean, ranking in zip(sizes, res.means[m], res.rankings[m]):
        vals = " ".join(f"{v}={mean[v]:.4f}" for v in mean)
        print(f"  N={n:>7}: {vals}  ranking {'>'.join(ranking)}")
    print(f"  instability from each size on: {[round(x, 2) for x in ranking_instability(res, m)]}")

print("\nmedian seconds per estimate (machine dependent)")
for r in timing_study({m: v[:3] for m, v in grid.items()}, repeats=3):
    print(f"  {r.method:>6} N={r.n:>7}: {r.seconds:.3f}")
