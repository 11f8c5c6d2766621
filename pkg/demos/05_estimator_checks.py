"""Each estimator against a case with a known answer."""
import math

import numpy as np

from seggsa.models import ishigami_model, linear_model
from seggsa.moment_independent import delta_given_data, differential_entropy, knn_mutual_information
from seggsa.pawn import pawn_given_data
from seggsa.sobol import estimate_sobol

rng = np.random.default_rng(0)

for e in estimate_sobol(linear_model([2.0, 1.0]), 20_000, seed=0):
    print(f"linear 2*x1 + x2, {e.variable}: main {e.main_effect:.3f} total {e.total_effect:.3f}  (exact 0.8 / 0.2)")

for e in estimate_sobol(ishigami_model(), 50_000, seed=0):
    print(f"ishigami {e.variable}: main {e.main_effect:.3f} total {e.total_effect:.3f}")

x = rng.standard_normal(50_000)
y = 0.5 * x + math.sqrt(0.75) * rng.standard_normal(50_000)
print(f"MI of a r=0.5 Gaussian pair: {knn_mutual_information(x, y):.4f}  (exact {-0.5 * math.log(0.75):.4f})")
print(f"entropy of N(0,1): {differential_entropy(rng.standard_normal(50_000)):.4f}  (exact {0.5 * math.log(2 * math.pi * math.e):.4f})")

u = rng.random(100_000)
print(f"PAWN of Y = X: {pawn_given_data(u, u).value:.4f}  (exact 0.7 with 10 intervals)")
a, b = rng.random(5_000), rng.random(5_000)
print(f"independent pair: delta {delta_given_data(a, b):.4f}, MI {knn_mutual_information(a, b):.4f}")
