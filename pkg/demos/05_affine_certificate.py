"""Is a fuzzy isometry affine?

certify_affine runs the hypotheses (isometry, collinearity) and the
conclusions (midpoints, additivity, homogeneity, an affine fit) together and
reports one verdict.
"""

import math

import numpy as np

from fuzzynorm.fuzzy_norm import FuzzyNormSpec
from fuzzynorm.isometry import make_perturbed_isometry, make_rigid_map, make_scaling, make_sine_curve_map
from fuzzynorm.mazur_ulam import certify_affine
from fuzzynorm.sampling import SamplePlan
from fuzzynorm.vecspace import CrispNormKind


def show(cert):
    print(f"  verdict: {cert.verdict}, fit residual {cert.fit.residual:.2e}")
    for name, rep in {**cert.hypothesis_reports, **cert.conclusion_reports}.items():
        print(f"    {name:20s} {rep.verdict:5s} {len(rep.witnesses)} witnesses")


euclid = CrispNormKind.euclidean()
for dim in (1, 4):
    N = FuzzyNormSpec.crisp_induced(euclid, dim)
    f = make_rigid_map(seed=dim, dim=dim, translation=np.ones(dim))
    cert = certify_affine(f, N, N, SamplePlan(seed=dim))
    print(f.label)
    show(cert)
    print("  recovered the orthogonal part:", np.allclose(cert.fit.linear_part, f.params["linear"], atol=1e-9))

print("sine curve into the max-norm plane")
cert = certify_affine(
    make_sine_curve_map(),
    FuzzyNormSpec.crisp_induced(euclid, 1),
    FuzzyNormSpec.crisp_induced(CrispNormKind.max_norm(), 2),
    SamplePlan(point_radius=math.pi),
)
show(cert)
w = max(cert.midpoint_report.witnesses, key=lambda w: w.values["defect"])
print("  worst midpoint defect", round(w.values["defect"], 4), "at a =", w.inputs["a"], "b =", w.inputs["b"])

N2 = FuzzyNormSpec.crisp_induced(euclid, 2)
for f in (make_scaling(1.1), make_perturbed_isometry(3, 0.2)):
    print(f.label)
    show(certify_affine(f, N2, N2, SamplePlan(n_points=128)))
