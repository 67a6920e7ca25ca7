"""Maps between spaces, fuzzy-isometry checks and collinearity preservation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContractViolation, StructuralError
from .fuzzy_norm import FuzzyNormSpec
from .geometry import collinear
from .sampling import CheckReport, SamplePlan, Witness
from .vecspace import as_points, as_vector

__all__ = [
    "MapSpec",
    "check_isometry",
    "check_collinearity_preservation",
    "replay_isometry_witness",
    "replay_collinearity_witness",
    "random_orthogonal",
    "make_rigid_map",
    "make_scaling",
    "make_identity",
    "make_sine_curve_map",
    "make_perturbed_isometry",
    "COLLINEAR_T_FIXED",
]

COLLINEAR_T_FIXED = (0.0, 1.0, 0.5)


@dataclass(frozen=True)
class MapSpec:
    """A map ``R^dom_dim -> R^cod_dim``.

    With ``vectorized=True`` the evaluator takes and returns ``(n, dim)``
    arrays; otherwise it maps one vector at a time.
    """

    evaluator: Callable
    dom_dim: int
    cod_dim: int
    label: str = ""
    vectorized: bool = False
    params: dict | None = None

    def __post_init__(self):
        if self.dom_dim < 1 or self.cod_dim < 1:
            raise StructuralError("map dimensions must be positive")

    def __call__(self, x) -> np.ndarray:
        return self.map_points(as_vector(x, self.dom_dim)[None, :])[0]

    def map_points(self, X) -> np.ndarray:
        X = as_points(X, self.dom_dim)
        if self.vectorized:
            Y = np.asarray(self.evaluator(X), dtype=float)
        else:
            Y = np.array([np.asarray(self.evaluator(x), dtype=float).reshape(-1) for x in X])
        Y = Y.reshape(X.shape[0], -1)
        if Y.shape[1] != self.cod_dim:
            raise ContractViolation(f"{self.label}: expected images of dimension {self.cod_dim}, got {Y.shape[1]}")
        if not np.all(np.isfinite(Y)):
            bad = int(np.flatnonzero(~np.all(np.isfinite(Y), axis=1))[0])
            raise ContractViolation(f"{self.label}: non-finite image at x={X[bad].tolist()}")
        return Y


def _check_dims(domN, codN, f):
    if domN.dimension != f.dom_dim or codN.dimension != f.cod_dim:
        raise StructuralError(
            f"map {f.label!r} is {f.dom_dim}->{f.cod_dim} but spaces are {domN.dimension}->{codN.dimension}"
        )


def _isometry_clause(domN, codN, f, inp, tol):
    x = as_vector(inp["x"], f.dom_dim)
    y = as_vector(inp["y"], f.dom_dim)
    a = float(inp["a"])
    lhs = domN.evaluate(x - y, a)
    rhs = codN.evaluate(f(x) - f(y), a)
    return abs(lhs - rhs) > tol, {"N(x-y,a)": lhs, "N(f(x)-f(y),a)": rhs}


def replay_isometry_witness(domN, codN, f, witness: Witness, tol: float) -> tuple[bool, dict]:
    return _isometry_clause(domN, codN, f, witness.inputs, tol)


def check_isometry(
    domN: FuzzyNormSpec,
    codN: FuzzyNormSpec,
    f: MapSpec,
    plan: SamplePlan | None = None,
    swap_pairs: bool = False,
) -> CheckReport:
    """Sampled check of ``N(x - y, a) = N(f(x) - f(y), a)``.

    Every sampled pair is tested against all ``plan.n_thresholds`` thresholds.
    ``swap_pairs`` evaluates each pair as ``(y, x)``; the verdict must not
    change.
    """
    plan = plan or SamplePlan()
    _check_dims(domN, codN, f)
    tol, n, k = plan.equality_tol, plan.n_points, plan.n_thresholds
    rng = plan.rng(5)
    X = plan.ball(rng, n, f.dom_dim)
    Y = plan.ball(rng, n, f.dom_dim)
    A = plan.thresholds(rng, k)
    if swap_pairs:
        X, Y = Y, X
    FX, FY = f.map_points(X), f.map_points(Y)
    D = np.repeat(X - Y, k, axis=0)
    FD = np.repeat(FX - FY, k, axis=0)
    T = np.tile(A, n)
    bad = np.abs(domN.evaluate_many(D, T) - codN.evaluate_many(FD, T)) > tol
    found = []
    for idx in np.flatnonzero(bad):
        i, j = divmod(int(idx), k)
        inp = {"x": X[i], "y": Y[i], "a": A[j]}
        violated, values = _isometry_clause(domN, codN, f, inp, tol)
        if violated:
            found.append(Witness("isometry", inp, values))
            if len(found) >= plan.max_witnesses:
                break
    return CheckReport.build({"isometry": found}, {"isometry": n * k}, plan.max_witnesses, meta={"map": f.label})


def _collinearity_clause(f, inp, tol):
    a = as_vector(inp["a"], f.dom_dim)
    c = as_vector(inp["c"], f.dom_dim)
    b = c + inp["t"] * (a - c)
    fa, fb, fc = f(a), f(b), f(c)
    ok, t_img = collinear(fa, fb, fc, tol)
    return not ok, {"f(a)": fa, "f(b)": fb, "f(c)": fc, "t_image": t_img}


def replay_collinearity_witness(f, witness: Witness, tol: float) -> tuple[bool, dict]:
    return _collinearity_clause(f, witness.inputs, tol)


def check_collinearity_preservation(f: MapSpec, plan: SamplePlan | None = None, tol: float | None = None) -> CheckReport:
    """Do images of collinear triples stay collinear?

    Triples are ``(a, b, c)`` with ``b = c + t (a - c)``.  Each sampled
    ``(a, c)`` pair is tried with the fixed ratios ``t = 0, 1, 1/2`` and one
    ratio drawn uniformly from ``[-2, 2]``.
    """
    plan = plan or SamplePlan()
    tol = plan.equality_tol if tol is None else tol
    n = plan.n_points
    rng = plan.rng(6)
    A = plan.ball(rng, n, f.dom_dim)
    C = plan.ball(rng, n, f.dom_dim)
    ts = np.concatenate([np.tile(COLLINEAR_T_FIXED, (n, 1)), rng.uniform(-2.0, 2.0, (n, 1))], axis=1)
    m = ts.shape[1]
    Ar, Cr, Tr = np.repeat(A, m, axis=0), np.repeat(C, m, axis=0), ts.reshape(-1)
    FA, FB, FC = f.map_points(Ar), f.map_points(Cr + Tr[:, None] * (Ar - Cr)), f.map_points(Cr)
    # batched version of geometry.collinear; flagged triples are re-checked one by one
    D, E = FA - FC, FB - FC
    dd = np.einsum("ij,ij->i", D, D)
    degenerate = np.sqrt(dd) <= tol
    t_fit = np.where(degenerate, 0.0, np.einsum("ij,ij->i", D, E) / np.where(degenerate, 1.0, dd))
    resid = np.linalg.norm(E - t_fit[:, None] * D, axis=1)
    suspect = np.where(degenerate, np.linalg.norm(E, axis=1) > 0.5 * tol, resid > 0.5 * tol)
    found = []
    for k in np.flatnonzero(suspect):
        inp = {"a": Ar[k], "c": Cr[k], "t": float(Tr[k])}
        violated, values = _collinearity_clause(f, inp, tol)
        if violated:
            found.append(Witness("collinearity", inp, values))
            if len(found) >= plan.max_witnesses:
                break
    return CheckReport.build(
        {"collinearity": found}, {"collinearity": ts.size}, plan.max_witnesses, meta={"map": f.label, "tol": tol}
    )


# -- map generators ------------------------------------------------------------------


def random_orthogonal(rng: np.random.Generator, dim: int, max_tries: int = 10) -> np.ndarray:
    """Haar-random orthogonal matrix from the QR factorisation of a Gaussian matrix."""
    for _ in range(max_tries):
        G = rng.standard_normal((dim, dim))
        Q, R = np.linalg.qr(G)
        diag = np.diag(R)
        if np.min(np.abs(diag)) < 1e-8:
            continue
        Q = Q * np.sign(diag)
        if np.max(np.abs(Q.T @ Q - np.eye(dim))) <= 1e-12:
            return Q
    raise StructuralError(f"could not draw a well-conditioned {dim}x{dim} orthogonal matrix")


def make_rigid_map(seed: int, dim: int, translation=None) -> MapSpec:
    """``x -> Q x + t`` with a seeded Haar-random orthogonal ``Q``."""
    Q = random_orthogonal(np.random.default_rng(seed), dim)
    t = np.zeros(dim) if translation is None else as_vector(translation, dim)
    return MapSpec(
        lambda X: X @ Q.T + t,
        dim,
        dim,
        f"rigid(seed={seed}, dim={dim})",
        vectorized=True,
        params={"linear": Q, "translation": t},
    )


def make_scaling(c: float, dim: int = 2) -> MapSpec:
    return MapSpec(lambda X: c * X, dim, dim, f"scaling({c})", vectorized=True, params={"c": c})


def make_identity(dim: int) -> MapSpec:
    return MapSpec(lambda X: X.copy(), dim, dim, "identity", vectorized=True)


def make_sine_curve_map() -> MapSpec:
    """``t -> (t, sin t)``: isometric from the line into the max-norm plane, but not affine."""
    return MapSpec(lambda X: np.concatenate([X, np.sin(X)], axis=1), 1, 2, "sine_curve", vectorized=True)


def make_perturbed_isometry(seed: int, magnitude: float, dim: int = 2) -> MapSpec:
    """A rigid map plus a smooth bump ``magnitude * sin(x . w) u``."""
    rng = np.random.default_rng(seed)
    Q = random_orthogonal(rng, dim)
    w = rng.standard_normal(dim)
    u = rng.standard_normal(dim)
    u /= np.linalg.norm(u)
    return MapSpec(
        lambda X: X @ Q.T + magnitude * np.sin(X @ w)[:, None] * u,
        dim,
        dim,
        f"perturbed_isometry(seed={seed}, magnitude={magnitude})",
        vectorized=True,
    )
