"""Command-line front end.

Exit codes: 0 when every executed check passes, 1 when a check fails,
2 for an invalid configuration, 3 for an internal inconsistency.
``FKTODA_OUTPUT_DIR`` sets where reports go when ``--output`` is absent.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import lax, rankcheck, tk
from .bracket import UnsupportedTypeError
from .exact import exact_rank
from .points import random_point
from .report import Check, Report, dumps, to_jsonable, validate, write_atomic
from .rootsys import AlgebraType, InvalidAlgebraError, build_root_system

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
OUTPUT_DIR_ENV = "FKTODA_OUTPUT_DIR"
FLOW_SCALE = 2.0
COMMANDS = ("roots", "rank-check", "bracket", "invariants", "involution", "casimirs", "independence", "flow", "tk-check")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    float_invariant: float = 1e-8
    gradient_fd: float = 1e-5


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    rank: int | None = None
    k: int | None = None
    all_k: bool = False
    all: bool = False
    trials: int | None = None
    seed: int = 0
    t_end: float = 10.0
    dt: float = 1e-3
    convergence: bool = False
    point: str | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    format: str = "json"
    output: str | None = None

    @property
    def algebra(self) -> AlgebraType:
        if self.family is None or self.rank is None:
            raise UsageError(f"{self.command} needs --type and --rank")
        return AlgebraType(self.family.upper(), self.rank)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("output")
        return d


# ------------------------------------------------------------------------
# commands


def _trials(cfg: RunConfig, default: int) -> int:
    return default if cfg.trials is None else cfg.trials


def _from(result: dict, drop=("name", "algebra", "pass")) -> dict:
    return {k: v for k, v in result.items() if k not in drop}


def _cmd_roots(cfg: RunConfig, rep: Report) -> None:
    rs = build_root_system(cfg.algebra)
    n_pos = len(rs.positives)
    ok = 2 * n_pos + rs.rank == rs.dim and sum(rs.exponents) == n_pos
    rep.add(Check("roots", ok, {"n_positive": n_pos, "dim": rs.dim, "coxeter_height": rs.coxeter_height}, rs.to_dict()))


def _cmd_rank_check(cfg: RunConfig, rep: Report) -> None:
    names = rankcheck.FULL_MATRIX if cfg.all else [str(cfg.algebra)]
    for name in names:
        res = rankcheck.certify(name)
        res.pop("seconds")
        rep.add(Check(f"rank_check:{name}", res["pass"], {"m_rank": res["m_rank"], "expected": res["expected"]}, res))


def _parse_point(spec: str | None, dim: int, seed: int) -> np.ndarray:
    if spec is None:
        return random_point(dim, random.Random(seed))
    if spec.startswith("random:"):
        try:
            return random_point(dim, random.Random(int(spec.split(":", 1)[1])))
        except ValueError as exc:
            raise UsageError(f"bad random seed in --point {spec!r}") from exc
    try:
        vals = json.loads(spec)
        pt = np.array([Fraction(str(v)) for v in vals], dtype=object)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--point must be a JSON list of numbers or 'random:<seed>', got {spec!r}") from exc
    if pt.shape != (dim,):
        raise UsageError(f"--point has {pt.size} entries, the phase space has dimension {dim}")
    return pt


def _cmd_bracket(cfg: RunConfig, rep: Report) -> None:
    model = lax.lax_model(build_root_system(cfg.algebra), cfg.k)
    z = _parse_point(cfg.point, model.dim, cfg.seed)
    P = model.poisson(z)
    LP = lax.lie_poisson_matrix(model, z)
    diff = max((abs(float(v)) for v in (P - LP).ravel()), default=0.0)
    anti = bool(np.all(P + P.T == 0))
    details = {"labels": model.space.labels(), "point": z, "matrix": P, "rank": exact_rank(P)}
    rep.add(Check("bracket", anti and diff == 0.0, {"max_abs_vs_lie_poisson": diff, "antisymmetric": anti}, details))


def _cmd_invariants(cfg: RunConfig, rep: Report) -> None:
    rs = build_root_system(cfg.algebra)
    fam = lax.invariant_family(rs)
    rep.add(Check("family_count", 2 * fam.size == rs.dim + rs.rank, {"size": fam.size, "expected": (rs.dim + rs.rank) // 2},
                  {"members": [fam.label(j, i) for j, i in fam.members]}))
    res = lax.check_restriction_structure(rs, _trials(cfg, 50), cfg.seed)
    rep.add(Check("restriction_structure", res["pass"], {"bad_support": len(res["bad_support"])}, _from(res)))
    res = lax.check_gradient_fd(rs, _trials(cfg, 3), cfg.seed, rtol=cfg.tolerances.gradient_fd)
    rep.add(Check("gradient_fd", res["pass"], {"max_rel_error": res["max_rel_error"]}, _from(res)))


def _cmd_involution(cfg: RunConfig, rep: Report) -> None:
    res = lax.check_involution(build_root_system(cfg.algebra), _trials(cfg, 20), cfg.seed)
    rep.add(Check("involution", res["pass"], {"max_abs_bracket": res["max_abs_bracket"]}, _from(res)))


def _cmd_casimirs(cfg: RunConfig, rep: Report) -> None:
    res = lax.check_casimirs(build_root_system(cfg.algebra), _trials(cfg, 20), cfg.seed)
    rep.add(Check("casimirs", res["pass"], {"max_abs_bracket": res["max_abs_bracket"], "min_jacobian_rank": res["min_jacobian_rank"]},
                  _from(res)))


def _cmd_independence(cfg: RunConfig, rep: Report) -> None:
    rs = build_root_system(cfg.algebra)
    res = lax.check_independence(rs, _trials(cfg, 10), cfg.seed)
    rep.add(Check("independence", res["pass"], {"rank_at_L1": res["rank_at_L1"], "min_rank": min(res["ranks_random"])}, _from(res)))
    res = lax.check_liouville(rs, _trials(cfg, 5), cfg.seed)
    rep.add(Check("liouville", res["pass"], {"poisson_ranks": res["poisson_ranks"]}, _from(res)))


def _flow_point(cfg: RunConfig, model) -> np.ndarray:
    if cfg.point is None:
        return lax.toda_initial_point(model, FLOW_SCALE, cfg.seed)
    return np.array([float(x) for x in _parse_point(cfg.point, model.dim, cfg.seed)])


def _cmd_flow(cfg: RunConfig, rep: Report) -> lax.FlowResult:
    if cfg.dt <= 0 or cfg.t_end <= 0:
        raise UsageError("--dt and --t-end must be positive")
    model = lax.lax_model(build_root_system(cfg.algebra))
    z0 = _flow_point(cfg, model)
    res = lax.integrate_flow(model, z0, cfg.t_end, cfg.dt)
    ok = not res.aborted and res.max_drift < cfg.tolerances.float_invariant
    rep.add(Check("flow_conservation", ok, {"max_rel_drift": res.max_drift},
                  {"t_end": cfg.t_end, "dt": cfg.dt, "aborted": res.aborted, "message": res.message, "initial_point": z0}))
    if cfg.convergence:
        half = lax.integrate_flow(model, z0, cfg.t_end, cfg.dt / 2)
        ratio = res.max_drift / half.max_drift if half.max_drift > 0 else None
        rep.add(Check("flow_convergence", bool(ratio is not None and ratio >= 12.0 and not half.aborted),
                      {"drift_dt": res.max_drift, "drift_half_dt": half.max_drift, "ratio": ratio}))
    return res


def _cmd_tk_check(cfg: RunConfig, rep: Report) -> None:
    rs = build_root_system(cfg.algebra)
    if not cfg.all_k and cfg.k is None:
        raise UsageError("tk-check needs --k or --all-k")
    ks = range(1, rs.coxeter_height + 1) if cfg.all_k else [cfg.k]
    for k in ks:
        if not 1 <= k <= rs.coxeter_height:
            raise UsageError(f"k must lie in [1, {rs.coxeter_height}] for {rs.algebra}")
        sub = tk.submanifold_check(rs, k)
        rep.add(Check(f"tk_submanifold:k={k}", sub["pass"], {"offending_pairs": len(sub["offending"])}, sub))
        res = tk.tk_check(rs, k, _trials(cfg, 3), cfg.seed)
        res.pop("seconds")
        main = res["conventions"]["j>=0"]
        rep.add(Check(f"tk_conjecture:k={k}", None,
                      {"independence_rank": main["independence_rank"], "reduced_size": main["reduced_size"],
                       "poisson_rank": res["poisson_rank"], "liouville_target": res["liouville_target"]},
                      res, verdict=main["verdict"]))


_DISPATCH = {
    "roots": _cmd_roots,
    "rank-check": _cmd_rank_check,
    "bracket": _cmd_bracket,
    "invariants": _cmd_invariants,
    "involution": _cmd_involution,
    "casimirs": _cmd_casimirs,
    "independence": _cmd_independence,
    "flow": _cmd_flow,
    "tk-check": _cmd_tk_check,
}


# ------------------------------------------------------------------------
# rendering


def _render_text(cfg: RunConfig, rep: Report) -> str:
    out = io.StringIO()
    if cfg.command == "rank-check":
        for c in rep.checks:
            d = c.details
            if not cfg.all:
                print(f"{d['algebra']}" + (f"  ({d['note']})" if d["note"] else ""), file=out)
                print(f"  {'k':>3} {'d_k':>5} {'d_k+1':>6} {'rank':>5}", file=out)
                for b in d["blocks"]:
                    print(f"  {b['k']:>3} {b['d_k']:>5} {b['d_k1']:>6} {b['rank']:>5}  {'ok' if b['pass'] else 'FAIL'}", file=out)
                print(f"  Poisson rank at L_0: {d['m_rank']} (expected {d['expected']})", file=out)
            else:
                print(f"{d['algebra']:<4} {d['m_rank']:>5} / {d['expected']:<5} {'OK' if c.passed else 'FAIL'}", file=out)
        print("OK" if rep.passed else "FAIL", file=out)
        return out.getvalue()
    for c in rep.checks:
        flag = c.verdict if c.passed is None else ("PASS" if c.passed else "FAIL")
        res = ", ".join(f"{k}={v}" for k, v in to_jsonable(c.residuals).items())
        print(f"{c.name:<28} {flag:<13} {res}", file=out)
    print(f"wall time {rep.wall_time:.2f} s", file=out)
    return out.getvalue()


def _render_csv(cfg: RunConfig, rep: Report, flow: lax.FlowResult | None, labels) -> str:
    buf = io.StringIO()
    if flow is not None:
        w = csv.writer(buf)
        w.writerow(["t", *labels, "max_rel_drift"])
        for t, s, d in zip(flow.times, flow.states, flow.drift):
            w.writerow([f"{t:.10g}", *(f"{x:.17g}" for x in s), f"{d:.6e}"])
        return buf.getvalue()
    w = csv.writer(buf)
    w.writerow(["name", "pass", "verdict", "residuals"])
    for c in rep.checks:
        w.writerow([c.name, c.passed, c.verdict or "", json.dumps(to_jsonable(c.residuals))])
    return buf.getvalue()


def _default_path(cfg: RunConfig) -> Path | None:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if not base:
        return None
    tag = "all" if cfg.all else (f"{cfg.family.upper()}{cfg.rank}" if cfg.family and cfg.rank else "none")
    ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg.format]
    return Path(base) / f"{cfg.command}_{tag}.{ext}"


# ------------------------------------------------------------------------
# entry points


def run(cfg: RunConfig) -> tuple[int, dict | None]:
    """Execute one configuration; returns the exit code and the report (``None`` on usage errors)."""
    t0 = time.perf_counter()
    rep = Report(cfg.to_dict())
    flow = None
    try:
        if cfg.command not in _DISPATCH:
            raise UsageError(f"unknown command {cfg.command!r}")
        if cfg.trials is not None and cfg.trials < 1:
            raise UsageError("--trials must be positive")
        if cfg.command != "rank-check" or not cfg.all:
            cfg.algebra  # validates family/rank
        if cfg.command not in ("roots", "rank-check") and not cfg.algebra.is_classical:
            raise UsageError(f"{cfg.command} needs a classical type; {cfg.algebra} is certified by rank-check only")
        flow = _DISPATCH[cfg.command](cfg, rep)
    except (UsageError, InvalidAlgebraError, UnsupportedTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except (lax.LaxConsistencyError, AssertionError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL, None
    rep.wall_time = time.perf_counter() - t0
    doc = rep.to_dict()
    validate(doc)
    if cfg.format == "json":
        text = dumps(doc)
    elif cfg.format == "csv":
        labels = lax.lax_model(build_root_system(cfg.algebra)).space.labels() if flow is not None else None
        text = _render_csv(cfg, rep, flow, labels)
    else:
        text = _render_text(cfg, rep)
    path = Path(cfg.output) if cfg.output else _default_path(cfg)
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text)
        print(f"wrote {path}", file=sys.stderr)
    return (EXIT_OK if rep.passed else EXIT_FAIL), doc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fktoda", description="Exact checks for periodic Full Kostant-Toda systems.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="family", help="family letter A..G")
    common.add_argument("--rank", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--output", help=f"report path (default: stdout, or ${OUTPUT_DIR_ENV})")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "rank-check":
            sp.add_argument("--all", action="store_true", help="run the full type matrix")
        if name in ("invariants", "involution", "casimirs", "independence", "tk-check"):
            sp.add_argument("--trials", type=int)
        if name in ("bracket", "flow"):
            sp.add_argument("--point", help="JSON list of coordinates or random:<seed>")
        if name == "bracket":
            sp.add_argument("--k", type=int, help="level of the intermediate phase space")
        if name == "flow":
            sp.add_argument("--t-end", type=float, default=10.0)
            sp.add_argument("--dt", type=float, default=1e-3)
            sp.add_argument("--convergence", action="store_true", help="also run dt/2 and report the drift ratio")
            sp.add_argument("--float-tol", type=float, default=Tolerances.float_invariant)
        if name == "invariants":
            sp.add_argument("--fd-tol", type=float, default=Tolerances.gradient_fd)
        if name == "tk-check":
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--k", type=int)
            g.add_argument("--all-k", action="store_true")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    tol = Tolerances(getattr(ns, "float_tol", Tolerances.float_invariant), getattr(ns, "fd_tol", Tolerances.gradient_fd))
    default_format = "text" if ns.command == "rank-check" else "json"
    return RunConfig(
        command=ns.command,
        family=ns.family,
        rank=ns.rank,
        k=getattr(ns, "k", None),
        all_k=getattr(ns, "all_k", False),
        all=getattr(ns, "all", False),
        trials=getattr(ns, "trials", None),
        seed=ns.seed,
        t_end=getattr(ns, "t_end", 10.0),
        dt=getattr(ns, "dt", 1e-3),
        convergence=getattr(ns, "convergence", False),
        point=getattr(ns, "point", None),
        tolerances=tol,
        format=ns.format or default_format,
        output=ns.output,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    code, _ = run(config_from_args(ns))
    return code


if __name__ == "__main__":
    sys.exit(main())
