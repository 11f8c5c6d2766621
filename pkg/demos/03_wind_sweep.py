"""Index curves over the wind-speed mean and the U-over-RH crossovers.

Uses reduced sample sizes and a 0.2 km/h grid so it finishes quickly.
Where the methods disagree on the ranking, the stage label is Stage3.
"""
from seggsa.experiments import EstimatorSettings, SampleSizes, detect_crossover, peak_location, sweep_mu

sizes = SampleSizes(sobol=2_000, mi=5_000, delta=5_000, pawn=50_000)
sweep = sweep_mu(2.0, 8.0, 0.2, sizes, seed=0, settings=EstimatorSettings(with_ci=False))

methods = ("sobol_total", "mi", "delta", "pawn")
print(" mu_U  stage   " + "  ".join(f"{m:>12}" for m in methods))
for p in sweep.points:
    tops = "  ".join(f"{'>'.join(p.ranking(m)):>12}" for m in methods)
    print(f"{p.mu_U:5.1f}  {p.stage.value}  {tops}")

for m in methods:
    mu = detect_crossover(sweep, m, "U", "RH")
    where = "none" if mu is None else f"{mu:.2f}"
    print(f"{m:>12}: U overtakes RH at {where} km/h; U peaks at {peak_location(sweep, m, 'U'):.1f}")
