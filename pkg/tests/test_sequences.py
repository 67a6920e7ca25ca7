import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzynorm.errors import DomainError, StructuralError
from fuzzynorm.fuzzy_norm import FuzzyNormSpec
from fuzzynorm.sequences import (
    alternating_sequence,
    check_cauchy,
    check_convergence,
    constant_sequence,
    drift_sequence,
    replay_sequence_witness,
)
from fuzzynorm.vecspace import CrispNormKind

import oracles
from support import reproduces

N2 = FuzzyNormSpec.crisp_induced(CrispNormKind.euclidean(), 2)


def test_drift_converges_with_exact_tail_start():
    seq = drift_sequence([0.0, 0.0], n_max=1000)
    rep = check_convergence(N2, seq, [0.0, 0.0], 0.01, [1.0, 10.0])
    assert rep.verdict == "pass"
    assert rep.meta["up_to_horizon"] == 1000
    # [DERIVED] brute-force tail start in exact arithmetic
    assert rep.meta["n0"]["1.0"] == oracles.drift_n0("0.01", 1, 1000) == 100
    assert rep.meta["n0"]["10.0"] == oracles.drift_n0("0.01", 10, 1000)


def test_drift_fails_when_tail_not_reached():
    seq = drift_sequence([0.0, 0.0], n_max=50)
    rep = check_convergence(N2, seq, [0.0, 0.0], 0.01, [1.0])
    assert rep.verdict == "fail"
    w = rep.witnesses[0]
    assert w.inputs["n"] == 50
    assert reproduces(replay_sequence_witness(N2, seq, w), w)


def test_wrong_limit_fails():
    seq = drift_sequence([0.0, 0.0], n_max=500)
    assert check_convergence(N2, seq, [1.0, 0.0], 0.1, [1.0]).verdict == "fail"


def test_constant_and_alternating():
    const = constant_sequence([2.0, -1.0], n_max=200)
    assert check_convergence(N2, const, [2.0, -1.0], 0.05, [0.5]).passed
    assert check_cauchy(N2, const, 0.05, [0.5], 5).passed
    alt = alternating_sequence(2, 200)
    rep = check_cauchy(N2, alt, 0.5, [1.0], 3)
    assert rep.verdict == "fail"
    w = rep.witnesses[0]
    # [DERIVED] |x_{n+1} - x_n| = 2, so N = 1/(1+2)
    assert w.inputs["p"] % 2 == 1
    assert list(w.values.values())[0] == pytest.approx(oracles.induced(2.0, 1.0))
    assert reproduces(replay_sequence_witness(N2, alt, w), w)
    assert not check_convergence(N2, alt, [0.0, 0.0], 0.5, [1.0]).passed


@settings(max_examples=40, deadline=None)
@given(st.floats(0.001, 0.5), st.floats(0.01, 100), st.integers(1, 20))
def test_convergence_implies_cauchy(eps, a, p_max):
    # convergent at eps/2 gives Cauchy at eps by the min-inequality
    seq = drift_sequence([1.0, 1.0], n_max=400)
    conv = check_convergence(N2, seq, [1.0, 1.0], eps / 2, [a / 2])
    cauchy = check_cauchy(N2, seq, eps, [a], p_max)
    if conv.passed:
        assert cauchy.passed


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 1.5])
def test_eps_domain(eps):
    with pytest.raises(DomainError):
        check_convergence(N2, constant_sequence([0.0, 0.0], 10), [0.0, 0.0], eps, [1.0])


def test_structural_errors():
    seq = constant_sequence([0.0, 0.0], 10)
    with pytest.raises(StructuralError):
        check_convergence(N2, seq, [0.0, 0.0], 0.1, [])
    with pytest.raises(StructuralError):
        check_cauchy(N2, seq, 0.1, [1.0], 10)
    with pytest.raises(StructuralError):
        check_convergence(N2, constant_sequence([0.0], 10), [0.0], 0.1, [1.0])
