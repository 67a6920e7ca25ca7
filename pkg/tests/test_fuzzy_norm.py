import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fuzzynorm.errors import ContractViolation, StructuralError
from fuzzynorm.fuzzy_norm import (
    AXIOMS,
    FuzzyNormSpec,
    ceiling_threshold_evaluator,
    check_axioms,
    check_crisp_strict_convexity,
    check_strict_convexity,
    evaluate,
    overflowing_evaluator,
    replay_axiom_witness,
    replay_crisp_convexity_witness,
    replay_strict_convexity_witness,
    squared_norm_evaluator,
)
from fuzzynorm.sampling import SamplePlan, Witness
from fuzzynorm.vecspace import CrispNormKind

import oracles
from support import reproduces

EUC = CrispNormKind.euclidean()
coord = st.floats(-50, 50, allow_nan=False)
threshold = st.floats(1e-3, 1e3)


def euclid_space(dim=2):
    return FuzzyNormSpec.crisp_induced(EUC, dim)


def test_evaluate_known_values():
    N = euclid_space()
    # [DERIVED] oracle: a / (a + |x|) with exact fractions
    assert evaluate(N, [3.0, 4.0], 5.0) == float(oracles.induced_exact(Fraction(5), Fraction(5)))
    assert evaluate(N, [1.0, 0.0], 1.0) == 0.5
    # [TRIVIAL] non-positive thresholds give 0, zero vector gives 1
    assert evaluate(N, [1.0, 0.0], 0.0) == 0.0
    assert evaluate(N, [1.0, 0.0], -3.0) == 0.0
    assert evaluate(N, [0.0, 0.0], 0.25) == 1.0


@settings(max_examples=200, deadline=None)
@given(arrays(float, 3, elements=coord), threshold)
def test_evaluate_matches_oracle(x, a):
    N = euclid_space(3)
    assert N.evaluate(x, a) == pytest.approx(oracles.induced(oracles.euclid(x), a), rel=1e-12)
    M = FuzzyNormSpec.crisp_induced(CrispNormKind.max_norm(), 3)
    assert M.evaluate(x, a) == pytest.approx(oracles.induced(oracles.maxnorm(x), a), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(arrays(float, 2, elements=coord), st.floats(0.01, 100), threshold)
def test_scaling_identity(x, c, b):
    # N(cx, b) = N(x, b/|c|) for the induced norm
    N = euclid_space()
    assert N.evaluate(c * x, b) == pytest.approx(N.evaluate(x, b / c), rel=1e-12, abs=1e-15)
    assert N.evaluate(-c * x, b) == pytest.approx(N.evaluate(x, b / c), rel=1e-12, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(arrays(float, 2, elements=coord), arrays(float, 2, elements=coord), threshold, threshold)
def test_min_inequality(x, y, a, b):
    N = euclid_space()
    assert N.evaluate(x + y, a + b) >= min(N.evaluate(x, a), N.evaluate(y, b)) - 1e-12


@settings(max_examples=100, deadline=None)
@given(arrays(float, 2, elements=coord), threshold, threshold)
def test_monotone_in_threshold(x, a, b):
    N = euclid_space()
    lo, hi = sorted((a, b))
    assert N.evaluate(x, lo) <= N.evaluate(x, hi) + 1e-15


def test_evaluate_many_matches_scalar():
    N = euclid_space()
    rng = np.random.default_rng(3)
    X = rng.normal(size=(20, 2))
    A = rng.uniform(0.1, 5, 20)
    np.testing.assert_array_equal(N.evaluate_many(X, A), [N.evaluate(x, a) for x, a in zip(X, A)])


def test_dimension_checked():
    with pytest.raises(StructuralError):
        euclid_space(2).evaluate([1.0, 2.0, 3.0], 1.0)


def test_custom_range_contract_names_input():
    N = FuzzyNormSpec.custom(overflowing_evaluator(), 2, "overflowing")
    with pytest.raises(ContractViolation, match=r"x="):
        N.evaluate([1.0, 0.0], 3.0)


@pytest.mark.parametrize("dim", [1, 2, 5])
def test_axioms_pass_for_induced(dim):
    rep = check_axioms(euclid_space(dim), SamplePlan(seed=dim, n_points=500))
    assert rep.verdict == "pass"
    assert [c.name for c in rep.clauses] == list(AXIOMS)
    assert all(c.samples > 0 for c in rep.clauses)


@pytest.mark.parametrize("kind", [CrispNormKind.max_norm(), CrispNormKind.p_norm(1), CrispNormKind.weighted_euclidean([2, 0.5])])
def test_axioms_pass_for_other_kinds(kind):
    assert check_axioms(FuzzyNormSpec.crisp_induced(kind, 2), SamplePlan(n_points=300)).passed


def test_squared_norm_breaks_n3_with_expected_values():
    N = FuzzyNormSpec.custom(squared_norm_evaluator(), 2, "squared")
    rep = check_axioms(N, SamplePlan(n_points=300))
    assert rep.verdict == "fail"
    assert rep.clause("N3").verdict == "fail"
    assert rep.clause("N1").verdict == "pass"
    for w in rep.witnesses:
        assert reproduces(replay_axiom_witness(N, w, 1e-9), w)
    # [DERIVED] x=(1,0), c=2, b=1: N(cx, b) = 1/(1+4) and N(x, b/2) = (1/2)/(1/2+1)
    w = Witness("N3", {"x": [1.0, 0.0], "c": 2.0, "b": 1.0}, {})
    violated, values = replay_axiom_witness(N, w, 1e-9)
    assert violated
    assert values["N(cx,b)"] == pytest.approx(float(Fraction(1, 5)))
    assert values["N(x,b/|c|)"] == pytest.approx(float(Fraction(1, 3)))


def test_ceiling_threshold_breaks_usc():
    N = FuzzyNormSpec.custom(ceiling_threshold_evaluator(), 2, "ceil")
    rep = check_axioms(N, SamplePlan(n_points=300))
    assert rep.clause("N6").verdict == "fail"
    w = rep.witnesses_for("N6")[0]
    assert reproduces(replay_axiom_witness(N, w, 1e-9), w)


def test_overflow_is_contract_violation_not_verdict():
    N = FuzzyNormSpec.custom(overflowing_evaluator(), 2, "overflowing")
    with pytest.raises(ContractViolation):
        check_axioms(N, SamplePlan(n_points=50))


def test_axioms_deterministic():
    plan = SamplePlan(seed=11, n_points=200)
    N = FuzzyNormSpec.custom(squared_norm_evaluator(), 2, "squared")
    assert check_axioms(N, plan).to_dict() == check_axioms(N, plan).to_dict()


def test_strict_convexity_refuted_by_scaled_pair():
    N = euclid_space()
    rep = check_strict_convexity(N, SamplePlan())
    assert rep.verdict == "fail"
    w = rep.witnesses_for("scaled_pair")[0]
    # [DERIVED] x=(1,0), y=(2,0), a=1, b=2: every value is 1/2
    assert w.inputs["x"] == [1.0, 0.0]
    assert w.inputs["y"] == [2.0, 0.0]
    assert (w.inputs["a"], w.inputs["b"]) == (1.0, 2.0)
    half = float(oracles.induced_exact(Fraction(1), Fraction(1)))
    assert w.values["N(x,a)"] == w.values["N(y,b)"] == w.values["N(x+y,a+b)"] == half
    assert reproduces(replay_strict_convexity_witness(N, w, 1e-9), w)
    z = rep.witnesses_for("zero_vector")[0]
    assert z.values["N(x,a)"] == 1.0 and z.inputs["a"] != z.inputs["b"]


@settings(max_examples=100, deadline=None)
@given(arrays(float, 2, elements=st.floats(-10, 10)).filter(lambda v: np.linalg.norm(v) > 1e-3), st.floats(0.1, 10), st.floats(0.05, 20))
def test_every_scaled_pair_is_a_witness(x, a, c):
    # (x, a) and (cx, ca) always satisfy both equalities for the induced norm
    if abs(c - 1) < 1e-3:
        c = 2.0
    N = euclid_space()
    w = Witness("scaled_pair", {"x": x, "y": c * x, "a": a, "b": c * a}, {})
    nx, ny = N.evaluate(x, a), N.evaluate(c * x, c * a)
    assert nx == pytest.approx(ny, rel=1e-12)
    assert N.evaluate(x + c * x, a + c * a) == pytest.approx(nx, rel=1e-12)
    assert replay_strict_convexity_witness(N, w, 1e-9)[0]


def test_crisp_strict_convexity():
    plan = SamplePlan(n_points=200)
    assert check_crisp_strict_convexity(EUC, plan).verdict == "pass"
    assert check_crisp_strict_convexity(CrispNormKind.p_norm(3), plan, dim=3).verdict == "pass"
    for kind, u, v in [
        (CrispNormKind.max_norm(), [1.0, 0.0], [1.0, 1.0]),
        (CrispNormKind.p_norm(1), [1.0, 0.0], [0.0, 1.0]),
    ]:
        rep = check_crisp_strict_convexity(kind, plan)
        assert rep.verdict == "fail"
        w = rep.witnesses_for("vertex_pairs")[0]
        assert (w.inputs["u"], w.inputs["v"]) == (u, v)
        assert reproduces(replay_crisp_convexity_witness(kind, w, 1e-9), w)


def test_witness_json_roundtrip():
    rep = check_strict_convexity(euclid_space(), SamplePlan(n_points=32))
    for w in rep.witnesses:
        assert Witness.from_dict(w.to_dict()) == w
    assert type(rep).from_dict(rep.to_dict()).to_dict() == rep.to_dict()
    assert math.isclose(rep.witnesses[0].values["separation"], math.hypot(1, 0) + 1)
