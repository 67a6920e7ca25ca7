"""Strict convexity, fuzzy and crisp.

Taken literally, fuzzy strict convexity fails even for the Euclidean-induced
norm: scaling x and a by the same factor leaves N(x, a) unchanged.  The crisp
notion behaves as expected, Euclidean strictly convex and max-norm not.
"""

from fuzzynorm.fuzzy_norm import FuzzyNormSpec, check_crisp_strict_convexity, check_strict_convexity
from fuzzynorm.sampling import SamplePlan
from fuzzynorm.vecspace import CrispNormKind

plan = SamplePlan()
N = FuzzyNormSpec.crisp_induced(CrispNormKind.euclidean(), 2)
rep = check_strict_convexity(N, plan)
for clause in ("scaled_pair", "zero_vector"):
    w = rep.witnesses_for(clause)[0]
    print(f"{clause:12s} x={w.inputs['x']} y={w.inputs['y']} a={w.inputs['a']:.4g} b={w.inputs['b']:.4g}")
    print(" " * 13, {k: round(v, 6) for k, v in w.values.items()})

for kind in (CrispNormKind.euclidean(), CrispNormKind.p_norm(1), CrispNormKind.max_norm()):
    rep = check_crisp_strict_convexity(kind, plan)
    line = f"crisp {kind.kind:10s} p={kind.p}: {rep.verdict}"
    if rep.witnesses:
        w = rep.witnesses[0]
        line += f"  |u+v| = |u|+|v| at u={w.inputs['u']}, v={w.inputs['v']}"
    print(line)
