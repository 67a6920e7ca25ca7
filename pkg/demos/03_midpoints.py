"""Metric midpoints: unique for the Euclidean norm, a whole segment for max-norm."""

import numpy as np

from fuzzynorm.fuzzy_norm import FuzzyNormSpec
from fuzzynorm.geometry import MidpointProblem, check_min_inequalities, find_midpoints, uniqueness_witness
from fuzzynorm.sampling import SamplePlan
from fuzzynorm.vecspace import CrispNormKind

plan = SamplePlan(seed=3)
a, b = [0.0, 0.0], [2.0, 0.0]

euclid = FuzzyNormSpec.crisp_induced(CrispNormKind.euclidean(), 2)
for s in (0.1, 1.0, 10.0):
    sol = find_midpoints(MidpointProblem(euclid, a, b, s), plan)
    print(f"euclidean s={s:<4}: {len(sol.solutions)} solution(s) {np.round(sol.solutions, 12).tolist()}"
          f"  discarded starts {sol.meta['discarded_starts']}/{sol.meta['n_starts']}")

maxn = FuzzyNormSpec.crisp_induced(CrispNormKind.max_norm(), 2)
prob = MidpointProblem(maxn, a, b, 1.0)
sol = find_midpoints(prob, plan)
ys = sorted(float(x[1]) for x in sol.solutions)
print(f"max-norm: {len(sol.solutions)} solutions, all with x=1, y from {ys[0]:.3f} to {ys[-1]:.3f}")
print("uniqueness witness:", uniqueness_witness(prob, sol).values)

# the min-inequalities at two midpoints hold with equality here
rep = check_min_inequalities(prob, [1.0, 0.75], [1.0, -0.75])
print("min-inequalities at m =", rep.m.tolist(), ":", rep.lhs_a, ">=", rep.rhs_a, "and", rep.lhs_b, ">=", rep.rhs_b)
