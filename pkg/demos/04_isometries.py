"""Fuzzy isometries and collinearity.

A rigid motion is an isometry and keeps lines straight.  The curve
t -> (t, sin t) is an isometry from the line into the max-norm plane (the
sine is 1-Lipschitz) yet bends lines.
"""

import math

from fuzzynorm.fuzzy_norm import FuzzyNormSpec
from fuzzynorm.isometry import (
    check_collinearity_preservation,
    check_isometry,
    make_rigid_map,
    make_scaling,
    make_sine_curve_map,
)
from fuzzynorm.sampling import SamplePlan
from fuzzynorm.vecspace import CrispNormKind

euclid = CrispNormKind.euclidean()
E3 = FuzzyNormSpec.crisp_induced(euclid, 3)
plan = SamplePlan(seed=1, n_points=500)

rigid = make_rigid_map(7, 3, [1.0, 2.0, 3.0])
print(rigid.label, check_isometry(E3, E3, rigid, plan).verdict, check_collinearity_preservation(rigid, plan).verdict)

E2 = FuzzyNormSpec.crisp_induced(euclid, 2)
rep = check_isometry(E2, E2, make_scaling(1.1), plan)
print("scaling(1.1):", rep.verdict, rep.witnesses[0].values)

sine = make_sine_curve_map()
E1 = FuzzyNormSpec.crisp_induced(euclid, 1)
M2 = FuzzyNormSpec.crisp_induced(CrispNormKind.max_norm(), 2)
sine_plan = SamplePlan(point_radius=math.pi)
print("sine curve into max-norm plane:", check_isometry(E1, M2, sine, sine_plan).verdict)
print("sine curve into Euclidean plane:", check_isometry(E1, E2, sine, sine_plan).verdict)
w = check_collinearity_preservation(sine, sine_plan).witnesses[0]
print("collinear triple bent by the sine curve:", w.inputs, "images", w.values)
