"""Acceptance gate: the eight primary criteria at their stated tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary (and
directly when this file is run as a script).
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from fuzzynorm import cli
from fuzzynorm.fuzzy_norm import FuzzyNormSpec, check_axioms, check_strict_convexity, replay_strict_convexity_witness
from fuzzynorm.geometry import MidpointProblem, find_midpoints, midpoint_residual
from fuzzynorm.isometry import make_rigid_map, make_sine_curve_map
from fuzzynorm.mazur_ulam import certify_affine
from fuzzynorm.sampling import SamplePlan
from fuzzynorm.sequences import alternating_sequence, check_cauchy, check_convergence, constant_sequence, drift_sequence
from fuzzynorm.vecspace import CrispNormKind

from conftest import ACCEPTANCE_LINES

EUC = CrispNormKind.euclidean()
MAX = CrispNormKind.max_norm()
CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def record(k, name, ok, detail):
    line = f"[{k}] {'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def test_1_axiom_suite():
    t0 = time.perf_counter()
    failing = []
    for dim in range(1, 9):
        rep = check_axioms(FuzzyNormSpec.crisp_induced(EUC, dim), SamplePlan(seed=dim, n_points=10_000))
        if rep.verdict != "pass" or len(rep.clauses) != 6:
            failing.append((dim, [c.name for c in rep.clauses if c.verdict != "pass"]))
    elapsed = time.perf_counter() - t0
    record(1, "axiom suite dims 1-8 x 1e4 points", not failing and elapsed < 10.0,
           f"failing={failing} runtime={elapsed:.2f}s (limit 10s)")


def test_2_strict_convexity_refutation():
    N = FuzzyNormSpec.crisp_induced(EUC, 2)
    t0 = time.perf_counter()
    rep = check_strict_convexity(N, SamplePlan())
    elapsed = time.perf_counter() - t0
    ws = rep.witnesses_for("scaled_pair")
    ok = bool(ws) and elapsed < 1.0
    detail = f"runtime={elapsed:.3f}s"
    if ws:
        w = ws[0]
        x, y = np.array(w.inputs["x"]), np.array(w.inputs["y"])
        c = w.inputs["b"] / w.inputs["a"]
        scaled = np.allclose(y, c * x, rtol=0, atol=1e-12)
        violated, v = replay_strict_convexity_witness(N, w, 1e-9)
        eq_min = abs(v["N(x+y,a+b)"] - min(v["N(x,a)"], v["N(y,b)"])) <= 1e-9
        eq_vals = abs(v["N(x,a)"] - v["N(y,b)"]) <= 1e-9
        canonical = (w.inputs["x"], w.inputs["y"], w.inputs["a"], w.inputs["b"]) == ([1.0, 0.0], [2.0, 0.0], 1.0, 2.0)
        ok = ok and scaled and violated and eq_min and eq_vals and canonical
        detail += f" witness x={w.inputs['x']} y={w.inputs['y']} a={w.inputs['a']} b={w.inputs['b']}"
    record(2, "strict-convexity refutation by scaled pair", ok, detail)


def test_3_euclidean_midpoint_unique():
    rng = np.random.default_rng(2024)
    worst_err, failures, problems = 0.0, 0, 0
    t0 = time.perf_counter()
    for i in range(100):
        dim = int(rng.integers(2, 5))
        space = FuzzyNormSpec.crisp_induced(EUC, dim)
        a = rng.uniform(-5, 5, dim)
        b = rng.uniform(-5, 5, dim)
        exact = (a + b) / 2
        for s in (0.1, 1.0, 10.0):
            problems += 1
            sol = find_midpoints(MidpointProblem(space, a, b, s), SamplePlan(seed=i))
            err = max(float(np.max(np.abs(x - exact))) for x in sol.solutions)
            worst_err = max(worst_err, err)
            if not sol.unique_within_probe or err > 1e-6:
                failures += 1
    elapsed = time.perf_counter() - t0
    record(3, "Euclidean midpoint exact and unique, s in {0.1,1,10}", failures == 0,
           f"{problems} problems, failures={failures}, worst error={worst_err:.2e} (tol 1e-6), runtime={elapsed:.2f}s")


def test_4_max_norm_midpoints_not_unique():
    space = FuzzyNormSpec.crisp_induced(MAX, 2)
    prob = MidpointProblem(space, [0.0, 0.0], [2.0, 0.0], 1.0)
    sol = find_midpoints(prob, SamplePlan())
    S = np.array(sol.solutions)
    gaps = np.max(np.abs(S[:, None, :] - S[None, :, :]), axis=2)
    best_gap = float(gaps.max())
    worst_res = max(midpoint_residual(prob, x) for x in sol.solutions)
    known = midpoint_residual(prob, [1.0, 0.75]) <= 1e-8 and midpoint_residual(prob, [1.0, 0.0]) <= 1e-8
    ok = len(sol.solutions) >= 2 and best_gap >= 0.1 and worst_res <= 1e-8 and known
    record(4, "max-norm plane has several midpoints", ok,
           f"{len(sol.solutions)} solutions, widest max-norm gap={best_gap:.3f}, worst residual={worst_res:.1e}")


def test_5_rigid_maps_certified():
    t0 = time.perf_counter()
    bad, worst = [], 0.0
    for dim in range(1, 7):
        space = FuzzyNormSpec.crisp_induced(EUC, dim)
        for seed in range(50):
            trans = np.random.default_rng(10_000 + seed).uniform(-3, 3, dim)
            f = make_rigid_map(seed, dim, trans)
            cert = certify_affine(f, space, space, SamplePlan(seed=seed))
            worst = max(worst, cert.fit.residual)
            if cert.verdict != "certified_affine" or cert.fit.residual > 1e-6:
                bad.append((dim, seed, cert.verdict))
    elapsed = time.perf_counter() - t0
    record(5, "300 rigid maps certified affine", not bad and elapsed < 30.0,
           f"failures={bad[:5]} worst fit residual={worst:.1e} (tol 1e-6), runtime={elapsed:.2f}s (limit 30s)")


def test_6_sine_curve_refuted():
    f = make_sine_curve_map()
    cert = certify_affine(
        f,
        FuzzyNormSpec.crisp_induced(EUC, 1),
        FuzzyNormSpec.crisp_induced(MAX, 2),
        SamplePlan(point_radius=math.pi),
    )
    col = cert.collinearity_report.witnesses
    mid = cert.midpoint_report.witnesses
    best = max((w.values["defect"] for w in mid), default=0.0)
    ok = cert.verdict == "refuted" and cert.isometry_report.passed and bool(col) and best >= 0.9
    record(6, "sine curve isometry refuted as affine", ok,
           f"verdict={cert.verdict} isometry={cert.isometry_report.verdict} "
           f"collinearity witnesses={len(col)} best midpoint defect={best:.3f} (need >= 0.9)")


def test_7_convergence_implies_cauchy():
    # Both notions quantify over every threshold a > 0; a geometric ladder of
    # thresholds is the matched a_grid.  At threshold level the exact
    # consequence is: convergent at (eps, a/2) => Cauchy at (eps, a).
    N = FuzzyNormSpec.crisp_induced(EUC, 2)
    cases = [
        ("drift", drift_sequence([0.5, -1.0], 1000), [0.5, -1.0]),
        ("constant", constant_sequence([3.0, 2.0], 1000), [3.0, 2.0]),
        ("alternating", alternating_sequence(2, 1000), [0.0, 0.0]),
    ]
    ladders = [np.geomspace(1e-2, 1e2, 9), np.geomspace(0.1, 10.0, 5), np.geomspace(1.0, 1e3, 4)]
    table, breaches = [], []
    for name, seq, limit in cases:
        for eps in (0.5, 0.1, 0.01):
            for p_max in (1, 10):
                for grid in ladders:
                    conv = check_convergence(N, seq, limit, eps, grid).passed
                    cauchy = check_cauchy(N, seq, eps, grid, p_max).passed
                    if conv and not cauchy:
                        breaches.append((name, eps, p_max, float(grid[0])))
                for a in ladders[0]:
                    if check_convergence(N, seq, limit, eps, [a / 2]).passed and not check_cauchy(N, seq, eps, [a], p_max).passed:
                        breaches.append((name, eps, p_max, float(a), "threshold"))
        # summary row where the horizon n_max = 1000 covers the drift tail
        grid = ladders[1]
        table.append(f"{name}: conv={check_convergence(N, seq, limit, 0.1, grid).verdict}"
                     f" cauchy={check_cauchy(N, seq, 0.1, grid, 10).verdict}")
    expected = table == [
        "drift: conv=pass cauchy=pass",
        "constant: conv=pass cauchy=pass",
        "alternating: conv=fail cauchy=fail",
    ]
    record(7, "convergent sequences are Cauchy", not breaches and expected, f"breaches={breaches}; " + "; ".join(table))


RUNS = [
    ("check-axioms", "axioms_squared_norm.json"),
    ("check-axioms", "axioms_euclidean.json"),
    ("check-strict-convexity", "strict_convexity_euclidean.json"),
    ("check-crisp-strict-convexity", "crisp_convexity_max.json"),
    ("check-convergence", "convergence_alternating.json"),
    ("check-cauchy", "convergence_alternating.json"),
    ("check-convergence", "convergence_drift.json"),
    ("find-midpoint", "midpoint_max_norm.json"),
    ("verify-isometry", "isometry_scaling.json"),
    ("certify-affine", "certify_sine_curve.json"),
    ("certify-affine", "certify_rigid.json"),
]


def test_8_determinism_and_roundtrip(tmp_path):
    nondeterministic, not_reproduced, n_witnesses = [], [], 0
    for command, config in RUNS:
        cfg = json.loads((CONFIGS / config).read_text())
        first = cli.run_command(command, cfg)
        second = cli.run_command(command, cfg)
        if cli.canonical(first) != cli.canonical(second):
            nondeterministic.append(command)
        if first["witnesses"]:
            path = tmp_path / f"{command}-{config}"
            path.write_text(cli.dumps(first))
            n_witnesses += len(first["witnesses"])
            if cli.main(["verify-witness", "--report", str(path)]) != 0:
                not_reproduced.append((command, config))
    record(8, "deterministic reports, witnesses replay", not nondeterministic and not not_reproduced and n_witnesses > 0,
           f"{len(RUNS)} runs, {n_witnesses} witnesses; nondeterministic={nondeterministic} not reproduced={not_reproduced}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
