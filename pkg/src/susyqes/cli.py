"""Command-line front end.

    susyqes construct   --family hermite-odd --k 1 --epsilon 3
    susyqes validate    --family hermite-odd --k 2 --epsilon 1.7
    susyqes spectrum    --family hermite-ratio --k 2 --m 1
    susyqes ces         --base rosen-morse --alpha 2.5 --k 3
    susyqes export-grid --family sinh --k 3 --alpha 2.5 --out grid.csv

Every run prints (or writes) a JSON result document whose ``config`` block
can be fed back with ``--config`` to reproduce it.  Exit codes: 0 success,
1 validation failure, 2 usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import ces as ces_mod
from .errors import (
    CapacityError,
    ConstructionError,
    DomainError,
    EvaluationRangeError,
    InputError,
    NumericalError,
    ParameterError,
)
from .genfunc import HermiteOdd, HermiteRatio, Monomial, SinhFamily, check_admissible
from .oracle import Grid, overlap, solve
from .susy import (
    eigenpair_from_phi,
    node_count,
    partner_potentials,
    riccati_residual,
    superpotentials_from_phi,
    unbroken_susy_check,
)

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
COMMANDS = ("construct", "validate", "spectrum", "ces", "export-grid")
FAMILIES = ("monomial", "hermite-odd", "hermite-ratio", "sinh")
BASES = ("harmonic", "rosen-morse")

RICCATI_SAMPLES = np.linspace(-8.0, 8.0, 1001)
SUSY_PROBE = 8.0
OVERLAP_TOL = 0.999
NORM_TOL = 1e-8
SHIFT_TOL = 1e-10
PHI_ODE_TOL = 1e-10
TWO_ROUTE_TOL = 1e-9
DUALITY_TOL = 1e-12
SHAPE_TOL = 1e-10


@dataclass
class JobConfig:
    command: str
    family: str | None = None
    base: str | None = None
    k: int | None = None
    m: int | None = None
    alpha: float | None = None
    epsilon: float | None = None
    L: float = 12.0
    N: int = 4001
    levels: int = 6
    tol_riccati: float = 1e-9
    tol_spectrum: float = 1e-3
    out: str | None = None
    format: str = "json"
    perturb_w1: float = 0.0

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        d = d.get("config", d)
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


class UsageError(Exception):
    pass


def _check(value, tol, passed=None):
    value = float(value)
    ok = bool(value < tol) if passed is None else bool(passed)
    return {"value": value, "tol": tol, "pass": ok}


def _require(cond, msg):
    if not cond:
        raise ParameterError(msg)


def validate_config(cfg: JobConfig):
    """Family and base preconditions, checked before any computation."""
    _require(cfg.command in COMMANDS, f"unknown command {cfg.command!r}")
    _require(cfg.N % 2 == 1 and cfg.N >= 101, f"--N must be odd and >= 101, got {cfg.N}")
    _require(cfg.L > 0, f"--L must be positive, got {cfg.L}")
    _require(1 <= cfg.levels <= 12, f"--levels must be in 1..12, got {cfg.levels}")
    _require(cfg.format in ("json", "csv"), f"--format must be json or csv, got {cfg.format!r}")
    if cfg.command == "ces" or (cfg.base is not None and cfg.family is None):
        _require(cfg.base in BASES, f"--base must be one of {BASES}, got {cfg.base!r}")
        _require(cfg.k is not None, "--k is required")
        if cfg.base == "rosen-morse":
            _require(cfg.alpha is not None and cfg.alpha > 1, f"rosen-morse needs --alpha > 1, got {cfg.alpha}")
        return
    _require(cfg.family in FAMILIES, f"--family must be one of {FAMILIES}, got {cfg.family!r}")
    if cfg.family in ("hermite-odd", "hermite-ratio", "sinh"):
        _require(cfg.k is not None and cfg.k >= 0, "--k is required and must be >= 0")
    if cfg.family == "hermite-ratio":
        _require(cfg.m is not None and cfg.m >= 0, "--m is required for hermite-ratio")
        _require(cfg.k >= cfg.m, f"hermite-ratio needs k >= m, got k={cfg.k}, m={cfg.m}")
    if cfg.family == "sinh":
        _require(cfg.k in ces_mod.ROSEN_MORSE_INDICES, f"sinh family index must be 1, 3 or 5, got {cfg.k}")
        _require(cfg.alpha is not None and cfg.alpha > 0, "sinh family needs --alpha > 0")
    if cfg.epsilon is not None:
        _require(cfg.epsilon > 0, f"--epsilon must be > 0, got {cfg.epsilon}")


def build_generator(cfg: JobConfig):
    """(generator, eps) for a family config; eps defaults to the family's CES value."""
    if cfg.family == "monomial":
        return Monomial(), cfg.epsilon if cfg.epsilon is not None else 1.0
    if cfg.family == "hermite-odd":
        return HermiteOdd(cfg.k), cfg.epsilon if cfg.epsilon is not None else 2.0 * cfg.k + 1
    if cfg.family == "hermite-ratio":
        default = 2.0 * (cfg.k - cfg.m) + 1
        return HermiteRatio(cfg.k, cfg.m), cfg.epsilon if cfg.epsilon is not None else default
    g = SinhFamily(cfg.k, cfg.alpha)
    default = 0.5 * ((cfg.alpha + cfg.k) ** 2 - cfg.alpha**2)
    return g, cfg.epsilon if cfg.epsilon is not None else default


def _construction_summary(g, eps):
    out = dict(g.describe())
    out["eps"] = float(eps)
    ces_flag = False
    if isinstance(g, HermiteOdd):
        out["gamma"] = float(eps / (2 * g.k + 1))
        ces_flag = math.isclose(eps, 2 * g.k + 1)
    elif isinstance(g, HermiteRatio):
        ces_flag = math.isclose(eps, 2 * g.k - 2 * g.m + 1)
    elif isinstance(g, SinhFamily):
        ces_flag = math.isclose(eps, 0.5 * ((g.alpha + g.index) ** 2 - g.alpha**2))
    out["ces"] = ces_flag
    out["known_levels"] = "all" if ces_flag else [0.0, float(eps)]
    return out


def _generator_job(cfg):
    if cfg.family is None:
        base = ces_mod.SolvableBase(cfg.base, cfg.alpha)
        g = ces_mod.phi_from_dual(base, cfg.k)
        return g, ces_mod.epsilon_k(base, cfg.k)
    return build_generator(cfg)


def _grid_columns(g, eps, grid: Grid):
    W, W1 = superpotentials_from_phi(g, eps, check=False)
    pp = partner_potentials(W, W1, eps)
    pair = eigenpair_from_phi(g, eps, check=False)
    x = grid.x
    c0, c1 = pair.norms(grid.half_width)
    return {
        "x": x,
        "V_minus": pp.V_minus(x),
        "V_plus": pp.V_plus(x),
        "W": W(x),
        "W1": W1(x),
        "psi0": c0 * pair.psi0(x),
        "psi1": c1 * pair.psi1(x),
    }


def _write_grid(cols, path):
    names = list(cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*(cols[n] for n in names)):
        w.writerow([repr(float(v)) for v in row])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def _maybe_export(cfg, g, eps, doc):
    if cfg.format == "csv" and cfg.out:
        _write_grid(_grid_columns(g, eps, Grid(cfg.L, cfg.N)), cfg.out)
        doc["grid_export"] = {"path": cfg.out, "columns": ["x", "V_minus", "V_plus", "W", "W1", "psi0", "psi1"]}
    else:
        doc["grid_export"] = None


def _admissibility_block(g):
    rep = check_admissible(g)
    d = rep.as_dict()
    d["violations"] = rep.violations()
    d["pass"] = rep.passed
    return rep, d


def cmd_construct(cfg: JobConfig):
    g, eps = build_generator(cfg)
    rep, adm = _admissibility_block(g)
    doc = {"construction": _construction_summary(g, eps), "validation": {"admissibility": adm}}
    if not rep.passed:
        doc["grid_export"] = None
        return doc, EXIT_VALIDATION
    W, W1 = superpotentials_from_phi(g, eps, check=False)
    pp = partner_potentials(W, W1, eps)
    xs = np.linspace(-2.0, 2.0, 5)
    doc["samples"] = {
        "x": xs.tolist(),
        "W": W(xs).tolist(),
        "W1": W1(xs).tolist(),
        "V_minus": pp.V_minus(xs).tolist(),
        "V_plus": pp.V_plus(xs).tolist(),
    }
    _maybe_export(cfg, g, eps, doc)
    return doc, EXIT_OK


def _phi_ode_check(g, eps):
    """phi-ODE residual when W1 is one of the solvable bases, else None."""
    if isinstance(g, HermiteOdd) and math.isclose(eps, 2 * g.k + 1):
        base, k = ces_mod.SolvableBase("harmonic"), g.k
    elif isinstance(g, SinhFamily) and g.alpha > 1 and math.isclose(
        eps, 0.5 * ((g.alpha + g.index) ** 2 - g.alpha**2)
    ):
        base, k = ces_mod.SolvableBase("rosen-morse", g.alpha), g.index
    else:
        return None
    return _check(ces_mod.phi_ode_residual(base, k, RICCATI_SAMPLES), PHI_ODE_TOL)


def cmd_validate(cfg: JobConfig):
    g, eps = build_generator(cfg)
    rep, adm = _admissibility_block(g)
    val = {"admissibility": adm}
    doc = {"construction": _construction_summary(g, eps), "validation": val}
    if not rep.passed:
        return doc, EXIT_VALIDATION
    W, W1 = superpotentials_from_phi(g, eps, check=False)
    if cfg.perturb_w1:
        W1 = W1.perturbed(cfg.perturb_w1)
    pp = partner_potentials(W, W1, eps)
    val["riccati"] = _check(riccati_residual(W, W1, eps, RICCATI_SAMPLES), cfg.tol_riccati)
    val["partner_shift"] = _check(pp.shift_residual(RICCATI_SAMPLES), SHIFT_TOL)
    for name, w in (("unbroken_susy_W", W), ("unbroken_susy_W1", W1)):
        s = unbroken_susy_check(w, SUSY_PROBE)
        val[name] = {"signs": [s.sign_minus, s.sign_plus], "probe": SUSY_PROBE, "pass": s.passed}
    pair = eigenpair_from_phi(g, eps, check=False)
    x = Grid(cfg.L, cfg.N).x
    n0, n1 = node_count(pair.psi0(x)), node_count(pair.psi1(x))
    val["nodes"] = {"psi0": n0, "psi1": n1, "expected": [0, 1], "pass": n0 == 0 and n1 == 1}
    val["norm_convergence"] = _check(pair.norm_convergence(cfg.L), NORM_TOL)
    ode = _phi_ode_check(g, eps)
    if ode is not None:
        val["phi_ode"] = ode
    ok = all(v.get("pass", True) for v in val.values())
    return doc, EXIT_OK if ok else EXIT_VALIDATION


def _oracle_block(V, expected, grid, levels, tol, states=()):
    res = solve(V, grid, m=levels)
    rows = []
    ok = True
    for n, e in enumerate(res.eigenvalues):
        exp = expected[n] if n < len(expected) else None
        row = {"level": n, "oracle": float(e), "expected": exp}
        if exp is not None:
            dev = abs(float(e) - exp)
            row.update(deviation=dev, tol=tol, pass_=dev <= tol)
            ok &= dev <= tol
        if n < len(states):
            ov = overlap(states[n], res.eigenvectors[n], grid)
            row.update(overlap=ov, overlap_tol=OVERLAP_TOL)
            ok &= ov >= OVERLAP_TOL
        rows.append({("pass" if k == "pass_" else k): v for k, v in row.items()})
    return {"grid": {"L": grid.half_width, "N": grid.n_points, "h": grid.h}, "levels": rows, "pass": bool(ok)}, ok


def cmd_spectrum(cfg: JobConfig):
    g, eps = build_generator(cfg)
    rep, adm = _admissibility_block(g)
    doc = {"construction": _construction_summary(g, eps), "validation": {"admissibility": adm}}
    if not rep.passed:
        return doc, EXIT_VALIDATION
    W, W1 = superpotentials_from_phi(g, eps, check=False)
    pp = partner_potentials(W, W1, eps)
    pair = eigenpair_from_phi(g, eps, check=False)
    expected, model = ces_mod.known_levels(g, eps, cfg.levels - 1)
    block, ok = _oracle_block(
        pp.V_minus, expected, Grid(cfg.L, cfg.N), cfg.levels, cfg.tol_spectrum, (pair.psi0, pair.psi1)
    )
    if model is not None:
        exact = ces_mod.exact_spectrum(model, cfg.levels - 1)
        block["derived_by_chain"] = exact.derived_by_chain
        block["continuum"] = exact.continuum
    doc["oracle"] = block
    return doc, EXIT_OK if ok else EXIT_VALIDATION


def _base_ces_checks(base, k, model):
    x = RICCATI_SAMPLES
    V = ces_mod.ces_potential(base, k)
    out = {}
    if base.name == "rosen-morse":
        ref = ces_mod.rosen_morse_tabulated_potential(base.alpha, k)(x)
        route = "tabulated Phi_k form"
    else:
        ref = ces_mod.example1_potential(k, 1.0)(x)
        route = "example-1 potential at gamma = 1"
    out["two_route_V"] = {**_check(np.max(np.abs(V(x) - ref)) / np.max(np.abs(ref)), TWO_ROUTE_TOL), "route": route}
    out["W1_consistency"] = _check(np.max(np.abs(model.W1(x) - base.w1_param(x))), SHAPE_TOL)
    xi = np.linspace(-1.2, 1.2, 101)
    dual = ces_mod.dual_superpotential(base)
    generic = ces_mod.dualize(base.W1)
    out["duality_catalog"] = _check(np.max(np.abs(generic(xi) - dual(xi))), DUALITY_TOL)
    out["double_dual"] = _check(np.max(np.abs(_double_dual(base, xi) - base.w1_param(xi))), DUALITY_TOL)
    (a, a1, R), (da, da1, dR) = base.shape_data()
    out["shape_invariance"] = _check(
        ces_mod.shape_invariance_residual(base.w1_param, base.dw1_param, a, a1, R, x), SHAPE_TOL
    )
    out["shape_invariance_dual"] = _check(
        ces_mod.shape_invariance_residual(base.dual_param, base.d_dual_param, da, da1, dR, xi), SHAPE_TOL
    )
    out["phi_ode"] = _check(ces_mod.phi_ode_residual(base, k, x), PHI_ODE_TOL)
    return out


def _double_dual(base, xi):
    """Apply W -> i W(-i .) twice through complex evaluation of the base W1."""
    return ces_mod.dualize(ces_mod.dualize(base.W1))(xi)


def cmd_ces(cfg: JobConfig):
    base = ces_mod.SolvableBase(cfg.base, cfg.alpha)
    g = ces_mod.phi_from_dual(base, cfg.k)
    rep, adm = _admissibility_block(g)
    eps = ces_mod.epsilon_k(base, cfg.k)
    doc = {
        "construction": {**base.describe(), "k": cfg.k, "eps_k": eps, "phi": g.describe()},
        "validation": {"admissibility": adm},
    }
    if not rep.passed:
        doc["grid_export"] = None
        return doc, EXIT_VALIDATION
    model = ces_mod.ces_model(base, cfg.k)
    doc["validation"].update(_base_ces_checks(base, cfg.k, model))
    exact = ces_mod.exact_spectrum(model, cfg.levels - 1)
    expected = list(exact.levels) + [None] * (cfg.levels - len(exact.levels))
    pair = eigenpair_from_phi(g, eps, check=False)
    block, ok = _oracle_block(
        model.V_minus, expected, Grid(cfg.L, cfg.N), cfg.levels, cfg.tol_spectrum, (pair.psi0, pair.psi1)
    )
    block.update(derived_by_chain=exact.derived_by_chain, continuum=exact.continuum, truncated=exact.truncated)
    doc["oracle"] = block
    _maybe_export(cfg, g, eps, doc)
    ok = ok and all(v.get("pass", True) for v in doc["validation"].values())
    return doc, EXIT_OK if ok else EXIT_VALIDATION


def cmd_export_grid(cfg: JobConfig):
    g, eps = _generator_job(cfg)
    cols = _grid_columns(g, eps, Grid(cfg.L, cfg.N))
    doc = {"construction": {**g.describe(), "eps": float(eps)}}
    if cfg.format == "csv":
        if not cfg.out:
            raise UsageError("export-grid --format csv needs --out")
        _write_grid(cols, cfg.out)
        doc["grid_export"] = {"path": cfg.out, "columns": list(cols)}
    else:
        doc["grid"] = {k: v.tolist() for k, v in cols.items()}
    return doc, EXIT_OK


HANDLERS = {
    "construct": cmd_construct,
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "ces": cmd_ces,
    "export-grid": cmd_export_grid,
}


def run(cfg: JobConfig):
    """Execute one job; returns (result document, exit code)."""
    try:
        validate_config(cfg)
        doc, code = HANDLERS[cfg.command](cfg)
    except (ParameterError, CapacityError, DomainError, UsageError) as exc:
        return _error_doc(cfg, exc, EXIT_USAGE), EXIT_USAGE
    except ConstructionError as exc:
        return _error_doc(cfg, exc, EXIT_VALIDATION), EXIT_VALIDATION
    except (NumericalError, EvaluationRangeError, InputError, FloatingPointError) as exc:
        return _error_doc(cfg, exc, EXIT_NUMERICAL), EXIT_NUMERICAL
    doc = {"command": cfg.command, "config": cfg.to_dict(), **doc, "status": "ok" if code == 0 else "fail", "exit_code": code}
    return doc, code


def _error_doc(cfg, exc, code):
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, EvaluationRangeError) and exc.threshold is not None:
        err["threshold"] = exc.threshold
    return {"command": cfg.command, "config": cfg.to_dict(), "status": "error", "error": err, "exit_code": code}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def document_diff(a, b, path="$"):
    """Largest relative difference between the numbers of two result documents.

    Returns (max_rel, mismatches) where ``mismatches`` lists paths whose
    structure or non-numeric values differ.
    """
    if isinstance(a, bool) or isinstance(b, bool) or a is None or b is None or isinstance(a, str):
        return 0.0, ([] if a == b else [path])
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if a == b:
            return 0.0, []
        return abs(a - b) / max(1.0, abs(a), abs(b)), []
    if isinstance(a, dict) and isinstance(b, dict):
        if a.keys() != b.keys():
            return 0.0, [path]
        parts = [document_diff(a[k], b[k], f"{path}.{k}") for k in a]
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return 0.0, [path]
        parts = [document_diff(u, v, f"{path}[{i}]") for i, (u, v) in enumerate(zip(a, b))]
    else:
        return 0.0, [path]
    return max((p[0] for p in parts), default=0.0), [m for p in parts for m in p[1]]


def build_parser():
    p = argparse.ArgumentParser(prog="susyqes", description="SUSY construction of QES/CES potentials")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="re-run from a JobConfig or result-document JSON file")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--base", choices=BASES)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--L", type=float, default=12.0)
    p.add_argument("--N", type=int, default=4001)
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--tol-riccati", type=float, default=1e-9)
    p.add_argument("--tol-spectrum", type=float, default=1e-3)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--perturb-w1", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


def config_from_args(ns) -> JobConfig:
    if ns.config:
        with open(ns.config, encoding="utf-8") as fh:
            cfg = JobConfig.from_dict(json.load(fh))
        cfg.command = ns.command
        return cfg
    return JobConfig(
        command=ns.command,
        family=ns.family,
        base=ns.base,
        k=ns.k,
        m=ns.m,
        alpha=ns.alpha,
        epsilon=ns.epsilon,
        L=ns.L,
        N=ns.N,
        levels=ns.levels,
        tol_riccati=ns.tol_riccati,
        tol_spectrum=ns.tol_spectrum,
        out=ns.out,
        format=ns.format,
        perturb_w1=ns.perturb_w1,
    )


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    cfg = config_from_args(ns)
    doc, code = run(cfg)
    text = json.dumps(_jsonable(doc), indent=2, ensure_ascii=False)
    if cfg.out and cfg.format == "json":
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
