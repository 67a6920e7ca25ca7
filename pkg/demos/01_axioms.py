"""Checking the fuzzy-norm axioms by sampling.

The induced norm a / (a + |x|) passes every clause.  Squaring |x| looks
harmless but breaks the scaling clause, and rounding the threshold up to an
integer breaks upper semicontinuity.
"""

from fuzzynorm.fuzzy_norm import (
    FuzzyNormSpec,
    ceiling_threshold_evaluator,
    check_axioms,
    replay_axiom_witness,
    squared_norm_evaluator,
)
from fuzzynorm.sampling import SamplePlan
from fuzzynorm.vecspace import CrispNormKind

plan = SamplePlan(seed=0, n_points=2000)
euclid = CrispNormKind.euclidean()

good = FuzzyNormSpec.crisp_induced(euclid, 3)
print(check_axioms(good, plan).summary())

squared = FuzzyNormSpec.custom(squared_norm_evaluator(euclid), 2, "squared_norm")
rep = check_axioms(squared, plan)
print(rep.summary())
w = rep.witnesses_for("N3")[0]
print("  N3 witness:", w.inputs, "->", w.values)
print("  replayed:", replay_axiom_witness(squared, w, plan.equality_tol)[0])

ceil = FuzzyNormSpec.custom(ceiling_threshold_evaluator(euclid), 2, "ceiling")
rep = check_axioms(ceil, plan)
w = rep.witnesses_for("N6")[0]
# the jump sits at an integer threshold: the value there is below the limit from the right
print("ceiling threshold, N6:", w.inputs["a"], w.values)
