"""All four sensitivity indices at one wind-speed mean, with intervals.

The sample sizes here are a tenth of the full study so the script runs
in a few minutes; pass ``--full`` for the full sizes.
"""
import sys

from seggsa.experiments import EstimatorSettings, SampleSizes, run_point_study

sizes = SampleSizes() if "--full" in sys.argv else SampleSizes().scaled(0.1)
settings = EstimatorSettings(n_boot=200, jackknife_groups=100)

study = run_point_study(4.7, sizes, seed=0, settings=settings)
print(f"mu_U = {study.mu_U} km/h ({study.stage.value})")
for method, rows in study.estimates.items():
    print(f"\n{method}: ranking {' > '.join(study.ranking(method))}")
    for e in rows:
        print(f"  {e.variable:>2}  {e.value:7.4f}  [{e.ci_low:7.4f}, {e.ci_high:7.4f}]  rank {e.rank}")
