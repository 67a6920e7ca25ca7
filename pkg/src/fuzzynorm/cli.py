"""Command-line entry point.

    fuzzynorm <command> --config <path> [--out <path>] [--require-unique] [--seed <u64>]
    fuzzynorm verify-witness --report <path>

Exit codes: 0 pass, 1 fail (witnesses in the report), 2 usage or config
error, 3 contract violation by an evaluator.

Without ``--out`` the JSON report goes to stdout and a one-line summary to
stderr; with ``--out`` the report is written atomically and the summary goes
to stdout.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import config as C
from .errors import ContractViolation, DomainError, StructuralError
from .fuzzy_norm import (
    check_axioms,
    check_crisp_strict_convexity,
    check_strict_convexity,
    replay_axiom_witness,
    replay_crisp_convexity_witness,
    replay_strict_convexity_witness,
)
from .geometry import (
    SOLVER_TOL,
    MidpointProblem,
    find_midpoints,
    replay_uniqueness_witness,
    uniqueness_witness,
)
from .isometry import check_isometry, replay_collinearity_witness, replay_isometry_witness
from .mazur_ulam import (
    CERT_TOL,
    certify_affine,
    fit_affine,
    normalize,
    replay_conclusion_witness,
    replay_fit_witness,
)
from .sampling import CheckReport, Witness, plain
from .sequences import check_cauchy, check_convergence, replay_sequence_witness

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2, 3


def _report_body(rep: CheckReport) -> dict:
    d = rep.to_dict()
    return {
        "verdict": d["verdict"],
        "clauses": d["clauses"],
        "witnesses": d["witnesses"],
        "samples_used": d["samples_used"],
        "details": {"meta": d["meta"]},
    }


def _tolerances(plan, **extra) -> dict:
    return {"equality_tol": plan.equality_tol, "limit_tol": plan.limit_tol, **extra}


# -- commands --------------------------------------------------------------------------
# Each run_* returns the command-specific part of the report; each replay_*
# re-evaluates one witness dict from the echoed config.


def run_check_axioms(cfg, args):
    plan = C.parse_plan(cfg)
    body = _report_body(check_axioms(C.parse_space(C.require(cfg, "space")), plan))
    return body, _tolerances(plan)


def replay_check_axioms(cfg, w):
    plan = C.parse_plan(cfg)
    return replay_axiom_witness(C.parse_space(cfg["space"]), w, plan.equality_tol)


def run_check_strict_convexity(cfg, args):
    plan = C.parse_plan(cfg)
    body = _report_body(check_strict_convexity(C.parse_space(C.require(cfg, "space")), plan))
    return body, _tolerances(plan)


def replay_check_strict_convexity(cfg, w):
    return replay_strict_convexity_witness(C.parse_space(cfg["space"]), w, C.parse_plan(cfg).equality_tol)


def run_check_crisp_strict_convexity(cfg, args):
    plan = C.parse_plan(cfg)
    space = C.require(cfg, "space")
    kind = C.parse_norm(space.get("norm", {"kind": "euclidean"}), "space.norm")
    dim = int(C.require(space, "dimension", "space"))
    return _report_body(check_crisp_strict_convexity(kind, plan, dim)), _tolerances(plan)


def replay_check_crisp_strict_convexity(cfg, w):
    kind = C.parse_norm(cfg["space"].get("norm", {"kind": "euclidean"}), "space.norm")
    return replay_crisp_convexity_witness(kind, w, C.parse_plan(cfg).equality_tol)


def _sequence_inputs(cfg):
    space = C.parse_space(C.require(cfg, "space"))
    seq = C.parse_sequence(C.require(cfg, "sequence"))
    eps = float(C.require(cfg, "eps"))
    a_grid = C.require(cfg, "a_grid")
    return space, seq, eps, a_grid


def run_check_convergence(cfg, args):
    space, seq, eps, a_grid = _sequence_inputs(cfg)
    rep = check_convergence(space, seq, C.require(cfg, "limit"), eps, a_grid)
    return _report_body(rep), {"eps": eps}


def run_check_cauchy(cfg, args):
    space, seq, eps, a_grid = _sequence_inputs(cfg)
    rep = check_cauchy(space, seq, eps, a_grid, int(C.require(cfg, "p_max")))
    return _report_body(rep), {"eps": eps}


def replay_sequences(cfg, w):
    space, seq, _, _ = _sequence_inputs(cfg)
    return replay_sequence_witness(space, seq, w)


def _midpoint_problem(cfg):
    space = C.parse_space(C.require(cfg, "space"))
    mp = C.require(cfg, "midpoint")
    return C._guard(
        "midpoint",
        lambda: MidpointProblem(space, C.require(mp, "a", "midpoint"), C.require(mp, "b", "midpoint"), float(mp.get("s", 1.0))),
    )


def run_find_midpoint(cfg, args):
    plan = C.parse_plan(cfg)
    prob = _midpoint_problem(cfg)
    mp = cfg["midpoint"]
    tol = float(mp.get("tol", SOLVER_TOL))
    sol = find_midpoints(prob, plan, int(mp.get("n_starts", 64)), tol)
    witnesses = []
    if args.require_unique:
        w = uniqueness_witness(prob, sol)
        if w is not None:
            witnesses.append(w.to_dict())
    body = {
        "verdict": "fail" if witnesses else "pass",
        "clauses": [{"name": "uniqueness", "verdict": "fail" if witnesses else "pass", "samples": sol.meta.get("n_starts", 0)}],
        "witnesses": witnesses,
        "samples_used": int(sol.meta.get("n_starts", 0)),
        "details": plain({
            "solutions": sol.solutions,
            "residuals": sol.residuals,
            "unique_within_probe": sol.unique_within_probe,
            "meta": sol.meta,
        }),
    }
    return body, {"solver_tol": tol}


def replay_find_midpoint(cfg, w):
    return replay_uniqueness_witness(_midpoint_problem(cfg), w.inputs)


def _map_inputs(cfg):
    domN = C.parse_space(C.require(cfg, "space"))
    codN = C.parse_space(cfg.get("codomain", cfg["space"]), "codomain")
    f = C.parse_map(C.require(cfg, "map"))
    if f.dom_dim != domN.dimension or f.cod_dim != codN.dimension:
        raise C.ConfigError("map", f"map is {f.dom_dim}->{f.cod_dim} but spaces are {domN.dimension}->{codN.dimension}")
    return domN, codN, f


def run_verify_isometry(cfg, args):
    plan = C.parse_plan(cfg)
    domN, codN, f = _map_inputs(cfg)
    return _report_body(check_isometry(domN, codN, f, plan)), _tolerances(plan)


def replay_verify_isometry(cfg, w):
    domN, codN, f = _map_inputs(cfg)
    return replay_isometry_witness(domN, codN, f, w, C.parse_plan(cfg).equality_tol)


def _cert_params(cfg, plan):
    tol = float(cfg.get("tol", plan.equality_tol))
    return float(cfg.get("cert_tol", CERT_TOL)), tol, int(cfg.get("dyadic_depth", 6))


def run_certify_affine(cfg, args):
    plan = C.parse_plan(cfg)
    domN, codN, f = _map_inputs(cfg)
    cert_tol, tol, depth = _cert_params(cfg, plan)
    cert = certify_affine(f, domN, codN, plan, cert_tol=cert_tol, tol=tol, dyadic_depth=depth)
    clauses, witnesses = [], []
    for source, rep in {**cert.hypothesis_reports, **cert.conclusion_reports}.items():
        for c in rep.clauses:
            clauses.append({"name": f"{source}.{c.name}", "verdict": c.verdict, "samples": c.samples})
        witnesses += [{**w.to_dict(), "source": source} for w in rep.witnesses]
    clauses.append({"name": "fit.residual", "verdict": "fail" if cert.fit_witnesses else "pass", "samples": int(cert.fit.sample_points.shape[0])})
    witnesses += [{**w.to_dict(), "source": "fit"} for w in cert.fit_witnesses]
    body = {
        "verdict": cert.verdict,
        "clauses": clauses,
        "witnesses": witnesses,
        "samples_used": sum(c["samples"] for c in clauses),
        "details": {"certificate": cert.to_dict()},
    }
    return body, _tolerances(plan, check_tol=tol, cert_tol=cert_tol)


def replay_certify_affine(cfg, w, source):
    plan = C.parse_plan(cfg)
    domN, codN, f = _map_inputs(cfg)
    cert_tol, tol, _ = _cert_params(cfg, plan)
    if source == "isometry":
        return replay_isometry_witness(domN, codN, f, w, plan.equality_tol)
    if source == "normalized_isometry":
        return replay_isometry_witness(domN, codN, normalize(f), w, plan.equality_tol)
    if source == "collinearity":
        return replay_collinearity_witness(f, w, tol)
    if source == "fit":
        return replay_fit_witness(f, fit_affine(f, plan, codN.kind), w, cert_tol)
    return replay_conclusion_witness(normalize(f), w, tol, codN)


COMMANDS = {
    "check-axioms": (run_check_axioms, replay_check_axioms),
    "check-strict-convexity": (run_check_strict_convexity, replay_check_strict_convexity),
    "check-crisp-strict-convexity": (run_check_crisp_strict_convexity, replay_check_crisp_strict_convexity),
    "check-convergence": (run_check_convergence, replay_sequences),
    "check-cauchy": (run_check_cauchy, replay_sequences),
    "find-midpoint": (run_find_midpoint, replay_find_midpoint),
    "verify-isometry": (run_verify_isometry, replay_verify_isometry),
    "certify-affine": (run_certify_affine, replay_certify_affine),
}

PASSING_VERDICTS = ("pass", "certified_affine")


def run_command(command: str, cfg: dict, require_unique: bool = False) -> dict:
    """Run ``command`` on a parsed config and return the full report dict."""
    run, _ = COMMANDS[command]
    args = argparse.Namespace(require_unique=require_unique)
    t0 = time.perf_counter()
    body, tolerances = run(cfg, args)
    return {
        "command": command,
        "config": cfg,
        "verdict": body["verdict"],
        "clauses": body["clauses"],
        "witnesses": body["witnesses"],
        "samples_used": body["samples_used"],
        "tolerances": tolerances,
        "details": body.get("details", {}),
        "runtime_ms": round((time.perf_counter() - t0) * 1e3, 3),
    }


def replay_report(report: dict) -> list[dict]:
    """Re-evaluate every witness of a report.

    A witness is reproduced when it still violates its clause and every
    recorded value comes back identical.
    """
    command = report["command"]
    _, replay = COMMANDS[command]
    cfg = report["config"]
    out = []
    for wd in report["witnesses"]:
        w = Witness.from_dict(wd)
        if command == "certify-affine":
            violated, values = replay(cfg, w, wd["source"])
        else:
            violated, values = replay(cfg, w)
        values = plain(values)
        out.append({
            "clause": w.clause,
            "source": wd.get("source"),
            "violated": bool(violated),
            "values_match": values == w.values,
            "reproduced": bool(violated) and values == w.values,
        })
    return out


def canonical(report: dict) -> str:
    """Serialised report without the timing field (for determinism checks)."""
    return json.dumps({k: v for k, v in report.items() if k != "runtime_ms"}, sort_keys=True)


def dumps(report: dict) -> str:
    # Python floats serialise with the shortest repr that round-trips exactly
    return json.dumps(report, indent=2) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary(report: dict) -> str:
    failing = [c["name"] for c in report["clauses"] if c["verdict"] != "pass"]
    tail = f"; failing: {', '.join(failing)}" if failing else ""
    return f"{report['command']}: {report['verdict']} ({len(report['witnesses'])} witnesses{tail})"


def _emit(report: dict, out: str | None) -> None:
    if out:
        write_atomic(out, dumps(report))
        print(_summary(report))
    else:
        sys.stdout.write(dumps(report))
        print(_summary(report), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzynorm", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON run configuration")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, help="override plan.seed")
        if name == "find-midpoint":
            p.add_argument("--require-unique", action="store_true", help="fail when more than one midpoint is found")
    p = sub.add_parser("verify-witness", help="re-evaluate every witness stored in a report")
    p.add_argument("--report", required=True)
    p.add_argument("--out")
    return parser


def _verify_witness(args) -> int:
    try:
        report = json.loads(Path(args.report).read_text())
        if report.get("command") not in COMMANDS:
            raise C.ConfigError("command", f"unknown command {report.get('command')!r}")
    except (OSError, json.JSONDecodeError) as exc:
        raise C.ConfigError("<report>", str(exc)) from None
    results = replay_report(report)
    ok = all(r["reproduced"] for r in results)
    for r in results:
        src = f"{r['source']}." if r["source"] else ""
        print(f"{'REPRODUCED' if r['reproduced'] else 'NOT REPRODUCED'}  {src}{r['clause']}")
    if args.out:
        write_atomic(args.out, dumps({"report": args.report, "results": results, "verdict": "pass" if ok else "fail"}))
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.command == "verify-witness":
            return _verify_witness(args)
        cfg = C.load(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise C.ConfigError("--seed", "must be an unsigned integer")
            cfg = copy.deepcopy(cfg)
            cfg.setdefault("plan", {})["seed"] = args.seed
        report = run_command(args.command, cfg, getattr(args, "require_unique", False))
    except (C.ConfigError, StructuralError, DomainError) as exc:
        print(f"fuzzynorm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractViolation as exc:
        print(f"fuzzynorm: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    _emit(report, args.out)
    return EXIT_PASS if report["verdict"] in PASSING_VERDICTS else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
