"""Convergence and Cauchy sequences up to a finite horizon."""

import numpy as np

from fuzzynorm.fuzzy_norm import FuzzyNormSpec
from fuzzynorm.sequences import alternating_sequence, check_cauchy, check_convergence, drift_sequence
from fuzzynorm.vecspace import CrispNormKind

N = FuzzyNormSpec.crisp_induced(CrispNormKind.euclidean(), 2)
grid = np.geomspace(0.1, 10.0, 5)

drift = drift_sequence([0.0, 0.0], n_max=1000)
rep = check_convergence(N, drift, [0.0, 0.0], 0.1, grid)
print("drift converges:", rep.verdict, "tail starts", rep.meta["n0"])
print("drift is Cauchy:", check_cauchy(N, drift, 0.1, grid, p_max=10).verdict)

# too short a horizon: the tail for small thresholds has not started yet
short = drift_sequence([0.0, 0.0], n_max=50)
rep = check_convergence(N, short, [0.0, 0.0], 0.01, [1.0])
print("drift, horizon 50, eps 0.01:", rep.verdict, rep.witnesses[0].inputs["n"], rep.witnesses[0].values)

alt = alternating_sequence(2, 1000)
print("alternating converges to 0:", check_convergence(N, alt, [0.0, 0.0], 0.1, grid).verdict)
rep = check_cauchy(N, alt, 0.1, grid, p_max=3)
print("alternating is Cauchy:", rep.verdict, "first witness", rep.witnesses[0].inputs)
