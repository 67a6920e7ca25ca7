"""Affine certification of fuzzy isometries.

The pipeline mirrors the classical argument that a collinearity-preserving
isometry into a strictly convex space is affine:

1. check the hypotheses (isometry, collinearity preservation);
2. normalise ``h = f - f(0)`` and re-check that it is still an isometry;
3. check the intermediate identities on ``h``: midpoint preservation,
   additivity plus dyadic homogeneity, real homogeneity;
4. fit an affine model by least squares and measure its worst residual.

A map that fails the hypotheses but shows no defect in step 3/4 is
``inconclusive`` -- the implication simply does not apply to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructuralError
from .fuzzy_norm import FuzzyNormSpec
from .isometry import MapSpec, check_collinearity_preservation, check_isometry
from .sampling import CheckReport, SamplePlan, Witness, plain
from .vecspace import CrispNormKind, as_points, as_vector, crisp_norms

__all__ = [
    "AffineFit",
    "AffinityCertificate",
    "normalize",
    "check_midpoint_preservation",
    "check_q_linearity",
    "check_real_homogeneity",
    "fit_affine",
    "certify_affine",
    "dyadic_rationals",
    "midpoint_defect",
    "replay_conclusion_witness",
    "replay_fit_witness",
    "IRRATIONAL_PROBES",
    "CERT_TOL",
]

CERT_TOL = 1e-6
IRRATIONAL_PROBES = (math.sqrt(2.0), math.pi, 1.0 / math.e)
DYADIC_SWEEP_POINTS = 64


def normalize(f: MapSpec) -> MapSpec:
    """``h(x) = f(x) - f(0)``.  ``h(0)`` is exactly the zero vector."""
    f0 = f(np.zeros(f.dom_dim))

    def h(X):
        Y = f.map_points(X) - f0
        Y[~X.any(axis=1)] = 0.0
        return Y

    return MapSpec(h, f.dom_dim, f.cod_dim, f"{f.label} - f(0)", vectorized=True, params={"offset": f0})


def _require_origin_fixed(h: MapSpec, tol: float) -> None:
    h0 = h(np.zeros(h.dom_dim))
    if np.max(np.abs(h0)) > tol:
        raise DomainError(f"{h.label}: h(0) = {h0.tolist()} is not 0; normalise the map first")


def _defects(codN: FuzzyNormSpec | None, D: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Size of each row of ``D``: crisp norm when available, else max(1 - N(d, a))."""
    if codN is None:
        return np.max(np.abs(D), axis=1)
    if codN.kind is not None:
        return crisp_norms(D, codN.kind)
    k = thresholds.size
    vals = codN.evaluate_many(np.repeat(D, k, axis=0), np.tile(thresholds, D.shape[0]))
    return np.max(1.0 - vals.reshape(D.shape[0], k), axis=1)


def midpoint_defect(h: MapSpec, a, b, codN: FuzzyNormSpec | None = None, thresholds=(1.0,)) -> float:
    """Defect of ``h((a+b)/2) = (h(a) + h(b)) / 2``."""
    a, b = as_vector(a, h.dom_dim), as_vector(b, h.dom_dim)
    diff = h((a + b) / 2.0) - (h(a) + h(b)) / 2.0
    return float(_defects(codN, diff[None, :], np.asarray(thresholds, dtype=float))[0])


def _structured_pairs(dim: int, radius: float) -> list[tuple[np.ndarray, np.ndarray]]:
    pairs = []
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = radius
        pairs += [(np.zeros(dim), e), (-e, e)]
    return pairs


def check_midpoint_preservation(
    h: MapSpec, codN: FuzzyNormSpec, plan: SamplePlan | None = None, tol: float | None = None
) -> CheckReport:
    """``h((a+b)/2) = (h(a) + h(b)) / 2`` on structured and sampled pairs.

    The structured pairs ``(0, r e_i)`` and ``(-r e_i, r e_i)`` use the plan's
    point radius ``r``; random pairs follow.
    """
    plan = plan or SamplePlan()
    tol = plan.equality_tol if tol is None else tol
    _require_origin_fixed(h, tol)
    rng = plan.rng(7)
    structured = _structured_pairs(h.dom_dim, plan.point_radius)
    A = np.concatenate([np.array([p[0] for p in structured]), plan.ball(rng, plan.n_points, h.dom_dim)])
    B = np.concatenate([np.array([p[1] for p in structured]), plan.ball(rng, plan.n_points, h.dom_dim)])
    thresholds = plan.thresholds(rng)
    D = h.map_points((A + B) / 2.0) - (h.map_points(A) + h.map_points(B)) / 2.0
    defects = _defects(codN, D, thresholds)
    found = []
    for i in np.flatnonzero(defects > tol):
        d = midpoint_defect(h, A[i], B[i], codN, thresholds)
        if d > tol:
            found.append(Witness("midpoint", {"a": A[i], "b": B[i], "thresholds": thresholds}, {"defect": d}))
            if len(found) >= plan.max_witnesses:
                break
    return CheckReport.build(
        {"midpoint": found}, {"midpoint": A.shape[0]}, plan.max_witnesses,
        meta={"max_defect": float(defects.max()), "tol": tol},
    )


def dyadic_rationals(depth: int) -> np.ndarray:
    """All ``m / 2^k`` with ``k <= depth`` and ``|m| <= 2^k`` (i.e. the dyadics in [-1, 1])."""
    if depth < 0:
        raise DomainError(f"dyadic depth must be non-negative, got {depth}")
    n = 2**depth
    return np.arange(-n, n + 1) / n


def _sup(D):
    return np.max(np.abs(D), axis=1)


def check_q_linearity(
    h: MapSpec, plan: SamplePlan | None = None, dyadic_depth: int = 6, tol: float | None = None
) -> CheckReport:
    """Additivity ``h(a+b) = h(a) + h(b)`` and ``h(q a) = q h(a)`` for dyadic ``q``.

    Defects are measured in the max norm of the codomain coordinates.  The
    dyadic sweep uses the first 64 sampled points.
    """
    plan = plan or SamplePlan()
    tol = plan.equality_tol if tol is None else tol
    _require_origin_fixed(h, tol)
    rng = plan.rng(8)
    A = plan.ball(rng, plan.n_points, h.dom_dim)
    B = plan.ball(rng, plan.n_points, h.dom_dim)
    add_def = _sup(h.map_points(A + B) - h.map_points(A) - h.map_points(B))

    qs = dyadic_rationals(dyadic_depth)
    P = A[:DYADIC_SWEEP_POINTS]
    HP = h.map_points(P)
    QP = (qs[None, :, None] * P[:, None, :]).reshape(-1, h.dom_dim)
    hom_def = _sup(h.map_points(QP) - (qs[None, :, None] * HP[:, None, :]).reshape(-1, h.cod_dim))

    found_add, found_hom = [], []
    for i in np.flatnonzero(add_def > tol)[: plan.max_witnesses]:
        inp = {"a": A[i], "b": B[i]}
        violated, values = _additivity_clause(h, inp, tol)
        if violated:
            found_add.append(Witness("additivity", inp, values))
    for idx in np.flatnonzero(hom_def > tol)[: plan.max_witnesses]:
        i, j = divmod(int(idx), qs.size)
        inp = {"a": P[i], "r": float(qs[j])}
        violated, values = _homogeneity_clause(h, inp, tol, scaled=False)
        if violated:
            found_hom.append(Witness("rational_homogeneity", inp, values))
    return CheckReport.build(
        {"additivity": found_add, "rational_homogeneity": found_hom},
        {"additivity": A.shape[0], "rational_homogeneity": QP.shape[0]},
        plan.max_witnesses,
        meta={"dyadic_depth": dyadic_depth, "tol": tol},
    )


def _additivity_clause(h, inp, tol):
    a, b = as_vector(inp["a"], h.dom_dim), as_vector(inp["b"], h.dom_dim)
    d = float(np.max(np.abs(h(a + b) - h(a) - h(b))))
    return d > tol, {"defect": d}


def _homogeneity_clause(h, inp, tol, scaled=True):
    a, r = as_vector(inp["a"], h.dom_dim), float(inp["r"])
    hra, ha = h(r * a), h(a)
    d = float(np.max(np.abs(hra - r * ha)))
    bound = tol * max(1.0, abs(r)) if scaled else tol
    values = {"h(ra)": hra, "r*h(a)": r * ha, "defect": d}
    hh = float(ha @ ha)
    if hh > 0:
        r_fit = float(hra @ ha) / hh
        # the image pair is parallel when the best multiple reproduces h(ra)
        values["r_prime"] = r_fit if np.max(np.abs(hra - r_fit * ha)) <= bound else None
    return d > bound, values


def check_real_homogeneity(h: MapSpec, plan: SamplePlan | None = None, tol: float | None = None) -> CheckReport:
    """``h(r a) = r h(a)`` for irrational probes ``sqrt 2, pi, 1/e`` (and negatives) plus sampled ``r``.

    A pair passes when the max-norm defect is at most ``tol * max(1, |r|)``.
    Witnesses carry ``r_prime``, the multiple with ``h(r a) = r' h(a)`` when the
    two images are parallel.
    """
    plan = plan or SamplePlan()
    tol = plan.equality_tol if tol is None else tol
    _require_origin_fixed(h, tol)
    rng = plan.rng(9)
    n = plan.n_points
    A = plan.ball(rng, n, h.dom_dim)
    fixed = np.array([1.0, *IRRATIONAL_PROBES, *(-r for r in IRRATIONAL_PROBES)])
    rs = np.concatenate([np.tile(fixed, (n, 1)), rng.uniform(-4.0, 4.0, (n, 2))], axis=1)
    m = rs.shape[1]
    HA = h.map_points(A)
    RA = (rs[:, :, None] * A[:, None, :]).reshape(-1, h.dom_dim)
    D = h.map_points(RA) - (rs[:, :, None] * HA[:, None, :]).reshape(-1, h.cod_dim)
    bound = tol * np.maximum(1.0, np.abs(rs.reshape(-1)))
    found = []
    for idx in np.flatnonzero(_sup(D) > bound):
        i, j = divmod(int(idx), m)
        inp = {"a": A[i], "r": float(rs[i, j])}
        violated, values = _homogeneity_clause(h, inp, tol)
        if violated:
            found.append(Witness("real_homogeneity", inp, values))
            if len(found) >= plan.max_witnesses:
                break
    return CheckReport.build({"real_homogeneity": found}, {"real_homogeneity": rs.size}, plan.max_witnesses, meta={"tol": tol})


@dataclass
class AffineFit:
    """Least-squares affine model ``x -> L x + b`` of a map on a sample."""

    linear_part: np.ndarray
    offset: np.ndarray
    residual: float
    sample_points: np.ndarray
    sample_values: np.ndarray
    norm: CrispNormKind = field(default_factory=CrispNormKind.euclidean)

    def predict(self, X) -> np.ndarray:
        return as_points(X, self.linear_part.shape[1]) @ self.linear_part.T + self.offset

    def residuals(self) -> np.ndarray:
        return crisp_norms(self.sample_values - self.predict(self.sample_points), self.norm)

    def recompute_residual(self) -> float:
        return float(self.residuals().max())

    def to_dict(self) -> dict:
        return plain({
            "linear_part": self.linear_part,
            "offset": self.offset,
            "residual": self.residual,
            "norm": self.norm.to_dict(),
            "n_samples": int(self.sample_points.shape[0]),
        })


def fit_affine(f: MapSpec, plan: SamplePlan | None = None, norm: CrispNormKind | None = None, points=None) -> AffineFit:
    """Fit ``f(x) ~ L x + b`` over ``points`` (default: ``max(n_points, dom_dim + 1)`` seeded samples).

    The residual is the largest ``norm`` distance between ``f`` and the fit on
    the sample.  Raises :class:`StructuralError` if the sample is not
    affinely spanning.
    """
    plan = plan or SamplePlan()
    norm = norm or CrispNormKind.euclidean()
    d = f.dom_dim
    if points is None:
        X = plan.ball(plan.rng(10), max(plan.n_points, d + 1), d)
    else:
        X = as_points(points, d)
    rank = np.linalg.matrix_rank(X - X.mean(axis=0)) if X.shape[0] > 1 else 0
    if rank < d:
        raise StructuralError(
            f"fit sample spans an affine subspace of dimension {rank} < {d}; need {d + 1} affinely independent points"
        )
    Y = f.map_points(X)
    design = np.hstack([X, np.ones((X.shape[0], 1))])
    coef, *_ = np.linalg.lstsq(design, Y, rcond=None)
    fit = AffineFit(coef[:d].T.copy(), coef[d].copy(), 0.0, X, Y, norm)
    fit.residual = fit.recompute_residual()
    return fit


_CONCLUSION_CLAUSES = {
    "additivity": _additivity_clause,
    "rational_homogeneity": lambda h, inp, tol: _homogeneity_clause(h, inp, tol, scaled=False),
    "real_homogeneity": _homogeneity_clause,
}


def replay_conclusion_witness(
    h: MapSpec, witness: Witness, tol: float, codN: FuzzyNormSpec | None = None
) -> tuple[bool, dict]:
    """Re-run a midpoint / additivity / homogeneity witness against ``h``."""
    if witness.clause == "midpoint":
        inp = witness.inputs
        d = midpoint_defect(h, inp["a"], inp["b"], codN, inp.get("thresholds", (1.0,)))
        return d > tol, {"defect": d}
    return _CONCLUSION_CLAUSES[witness.clause](h, witness.inputs, tol)


def _fit_clause(fit: AffineFit, f: MapSpec, inp: dict, cert_tol: float):
    x = as_vector(inp["x"], f.dom_dim)
    fx = f(x)
    r = float(crisp_norms((fx - fit.predict(x[None, :])[0])[None, :], fit.norm)[0])
    return r > cert_tol, {"f(x)": fx, "residual": r}


def replay_fit_witness(f: MapSpec, fit: AffineFit, witness: Witness, cert_tol: float) -> tuple[bool, dict]:
    """Re-evaluate an ``affine_fit`` witness against a (re-computed) fit."""
    return _fit_clause(fit, f, witness.inputs, cert_tol)


@dataclass
class AffinityCertificate:
    isometry_report: CheckReport
    collinearity_report: CheckReport
    normalized_isometry_report: CheckReport
    midpoint_report: CheckReport
    q_linearity_report: CheckReport
    homogeneity_report: CheckReport
    fit: AffineFit
    verdict: str
    cert_tol: float = CERT_TOL
    fit_witnesses: list[Witness] = field(default_factory=list)

    @property
    def hypothesis_reports(self) -> dict[str, CheckReport]:
        return {
            "isometry": self.isometry_report,
            "collinearity": self.collinearity_report,
            "normalized_isometry": self.normalized_isometry_report,
        }

    @property
    def conclusion_reports(self) -> dict[str, CheckReport]:
        return {
            "midpoint": self.midpoint_report,
            "q_linearity": self.q_linearity_report,
            "homogeneity": self.homogeneity_report,
        }

    @property
    def witnesses(self) -> list[Witness]:
        out = []
        for rep in (*self.hypothesis_reports.values(), *self.conclusion_reports.values()):
            out.extend(rep.witnesses)
        return out + list(self.fit_witnesses)

    def to_dict(self) -> dict:
        reports = {**self.hypothesis_reports, **self.conclusion_reports}
        return {
            "verdict": self.verdict,
            "cert_tol": self.cert_tol,
            "reports": {k: v.to_dict() for k, v in reports.items()},
            "fit": self.fit.to_dict(),
            "fit_witnesses": [w.to_dict() for w in self.fit_witnesses],
        }


def certify_affine(
    f: MapSpec,
    domN: FuzzyNormSpec,
    codN: FuzzyNormSpec,
    plan: SamplePlan | None = None,
    cert_tol: float = CERT_TOL,
    tol: float | None = None,
    dyadic_depth: int = 6,
) -> AffinityCertificate:
    """Run the full pipeline and return a certificate.

    Verdicts:

    * ``certified_affine`` -- every check passes and the affine fit residual
      is at most ``cert_tol`` (codomain crisp norm, Euclidean for custom norms);
    * ``refuted`` -- some midpoint, additivity or homogeneity identity fails,
      or the fit residual exceeds ``cert_tol``;
    * ``inconclusive`` -- a hypothesis fails but nothing in the conclusion does.

    All checks run even after a failure so the certificate is complete.
    """
    plan = plan or SamplePlan()
    tol = plan.equality_tol if tol is None else tol
    iso = check_isometry(domN, codN, f, plan)
    col = check_collinearity_preservation(f, plan, tol)
    h = normalize(f)
    iso_h = check_isometry(domN, codN, h, plan)
    mid = check_midpoint_preservation(h, codN, plan, tol)
    ql = check_q_linearity(h, plan, dyadic_depth, tol)
    hom = check_real_homogeneity(h, plan, tol)
    fit = fit_affine(f, plan, codN.kind)

    fit_witnesses = []
    if fit.residual > cert_tol:
        inp = {"x": fit.sample_points[int(np.argmax(fit.residuals()))]}
        _, values = _fit_clause(fit, f, inp, cert_tol)
        fit_witnesses.append(Witness("affine_fit", inp, values))

    hypotheses_hold = iso.passed and col.passed and iso_h.passed
    conclusion_fails = not (mid.passed and ql.passed and hom.passed) or bool(fit_witnesses)
    if conclusion_fails:
        verdict = "refuted"
    elif hypotheses_hold:
        verdict = "certified_affine"
    else:
        verdict = "inconclusive"
    return AffinityCertificate(iso, col, iso_h, mid, ql, hom, fit, verdict, cert_tol, fit_witnesses)
