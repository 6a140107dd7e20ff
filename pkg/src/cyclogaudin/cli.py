"""Command-line entry point: ``cyclogaudin validate|spectrum|bethe|verify|repro-sl3|selftest``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .automorphism import AutomorphismError
from .bethe import BetheError, BetheProblem, SolveOptions, solve
from .hamiltonians import ModelSpec, ModelValidationError, SpectrumError, double_pole_identity, validate_model
from .hamiltonians import spectrum as compute_spectrum
from .weight_function import WeightFunctionError, build_psi, verify_eigenpair

__all__ = ["main", "ConfigError", "load_config", "parse_config", "config_hash", "EXIT"]

EXIT = {"ok": 0, "validation": 2, "parse": 3, "no_solution": 4, "verification": 5}
RESIDUAL_TOL = 1e-8


class ConfigError(ValueError):
    """Malformed configuration document (exit 3)."""


# ---------------------------------------------------------------------------
# config parsing

def _rational(x, what):
    if isinstance(x, bool):
        raise ConfigError(f"{what}: expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ConfigError(f"{what}: cannot parse {x!r} as a rational") from exc
    if isinstance(x, float):
        return x
    raise ConfigError(f"{what}: expected a number or 'p/q' string, got {x!r}")


def _site_value(x, what):
    if isinstance(x, list):
        if len(x) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
            raise ConfigError(f"{what}: complex sites are [re, im]")
        re, im = x
        if im == 0 and isinstance(re, int):
            return Fraction(re)
        return complex(re, im)
    return _rational(x, what)


def _get(d, key, what, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise ConfigError(f"missing {what}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ConfigError(f"{what} has the wrong type")
    return v


def parse_config(doc):
    """(ModelSpec, bethe settings, SolveOptions) from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    alg = _get(doc, "algebra", "algebra", dict)
    series = _get(alg, "series", "algebra.series", str)
    rank = _get(alg, "rank", "algebra.rank", int)
    T = doc.get("T", 1)
    if not isinstance(T, int) or isinstance(T, bool):
        raise ConfigError("T must be an integer")
    auto = doc.get("automorphism", {})
    if not isinstance(auto, dict):
        raise ConfigError("automorphism must be an object")
    perm = auto.get("permutation", list(range(1, rank + 1)))
    phases = auto.get("phases", [0] * rank)
    if not (isinstance(perm, list) and all(isinstance(p, int) for p in perm)):
        raise ConfigError("automorphism.permutation must be a list of node labels")
    if not (isinstance(phases, list) and all(isinstance(p, int) for p in phases)):
        raise ConfigError("automorphism.phases must be a list of integers")
    sites = _get(doc, "sites", "sites", list)
    z, weights, modules = [], [], []
    for i, site in enumerate(sites):
        where = f"sites[{i + 1}]"
        z.append(_site_value(_get(site, "z", f"{where}.z"), f"{where}.z"))
        lam = _get(site, "weight", f"{where}.weight", list)
        weights.append(tuple(Fraction(_rational(c, f"{where}.weight")) for c in lam))
        module = site.get("module", "irrep")
        if not isinstance(module, str):
            raise ConfigError(f"{where}.module must be a string")
        modules.append(module)
    spec = ModelSpec(series, rank, T, tuple(p - 1 for p in perm), tuple(phases), tuple(z), tuple(weights),
                     tuple(modules))
    bethe = doc.get("bethe", {"m": 0})
    if not isinstance(bethe, dict):
        raise ConfigError("bethe must be an object")
    m = bethe.get("m", 0)
    colors = bethe.get("colors", [1] * m if isinstance(m, int) else None)
    if not isinstance(m, int) or m < 0:
        raise ConfigError("bethe.m must be a non-negative integer")
    if not (isinstance(colors, list) and len(colors) == m and all(isinstance(c, int) for c in colors)):
        raise ConfigError("bethe.colors must be a list of m node labels")
    solver = doc.get("solver", {})
    if not isinstance(solver, dict):
        raise ConfigError("solver must be an object")
    try:
        opts = SolveOptions(starts=int(solver.get("starts", 64)), tol=float(solver.get("tol", 1e-12)),
                            seed=int(solver.get("seed", 0)), max_iter=int(solver.get("max_iter", 200)),
                            threads=_threads())
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"solver: {exc}") from exc
    return spec, tuple(c - 1 for c in colors), opts


def _threads():
    raw = os.environ.get("CYCLOGAUDIN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def load_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return doc


def config_hash(doc):
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# result store

class RunStore:
    """runs/<hash>/ with the produced files and an append-only record.json."""

    def __init__(self, root, doc):
        self.hash = config_hash(doc)
        self.dir = Path(root) / self.hash
        self.dir.mkdir(parents=True, exist_ok=True)
        cfg = self.dir / "config.json"
        if not cfg.exists():
            cfg.write_text(_dumps(doc), encoding="utf-8")

    def path(self, name):
        return self.dir / name

    def record(self, command, outputs, certificates, cached):
        rec_path = self.dir / "record.json"
        records = json.loads(rec_path.read_text(encoding="utf-8")) if rec_path.exists() else []
        records.append({
            "config_hash": self.hash,
            "command": command,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "outputs": [str(p) for p in outputs],
            "certificates": certificates,
            "cached": cached,
        })
        rec_path.write_text(_dumps(records), encoding="utf-8")


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _copy_out(src, dest):
    if dest:
        Path(dest).write_bytes(Path(src).read_bytes())


def _complex_json(x):
    x = complex(x)
    return [x.real, x.imag]


# ---------------------------------------------------------------------------
# commands

def _model_from(args):
    doc = load_config(args.config)
    spec, colors, opts = parse_config(doc)
    model = validate_model(spec)
    return doc, model, colors, opts


def cmd_validate(args):
    doc, model, colors, _ = _model_from(args)
    alg, auto = model.alg, model.auto
    if colors:
        BetheProblem(model, colors)
    print(f"algebra      {alg.series}{alg.rank}  dim {alg.dim}  dual Coxeter {model.h_dual}")
    print(f"automorphism T={auto.T}  permutation {[p + 1 for p in auto.perm]}  phases {list(auto.phases)}"
          f"  order {auto.order()}")
    print(f"lambda0      {[str(c) for c in model.lam0]}")
    dp = double_pole_identity(model)
    print(f"double pole  {dp['lhs']} == {dp['rhs']}  {'ok' if dp['ok'] else 'FAILED'}")
    for i, (z, lam, kind) in enumerate(zip(model.z, model.weights, model.kinds)):
        extra = f"  dim {alg.weyl_dimension(lam)}" if kind == "irrep" else ""
        print(f"site {i + 1}       z={z}  weight {[str(c) for c in lam]}  {kind}{extra}")
    print(f"bethe        m={len(colors)}  colours {[c + 1 for c in colors]}")
    print(f"config hash  {config_hash(doc)}")
    return EXIT["ok"]


def _spectrum_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "multiplicity"])
    for val, mult in rows:
        writer.writerow([repr(float(val.real)), repr(float(val.imag)), mult])
    return buf.getvalue()


def cmd_spectrum(args):
    doc, model, _, _ = _model_from(args)
    store = RunStore(args.runs, doc)
    name = "spectrum.csv" if args.site == 1 else f"spectrum-site{args.site}.csv"
    target = store.path(name)
    cached = target.exists() and not args.force
    if not cached:
        rows = compute_spectrum(model, args.site - 1, cap=args.cap)
        target.write_text(_spectrum_csv(rows), encoding="utf-8")
    _copy_out(target, args.out)
    sys.stdout.write(target.read_text(encoding="utf-8"))
    store.record(f"spectrum --site {args.site}", [target], {}, cached)
    return EXIT["ok"]


def cmd_bethe(args):
    doc, model, colors, opts = _model_from(args)
    problem = BetheProblem(model, colors)
    store = RunStore(args.runs, doc)
    target = store.path("solutions.json")
    cached = target.exists() and not args.force
    if not cached:
        t0 = time.perf_counter()
        sols = solve(problem, opts)
        out = sols.to_json()
        out["m"] = problem.m
        out["config_hash"] = store.hash
        target.write_text(_dumps(out), encoding="utf-8")
        elapsed = time.perf_counter() - t0
        print(f"solved in {elapsed:.2f}s")
    out = json.loads(target.read_text(encoding="utf-8"))
    _copy_out(target, args.out)
    n = len(out["solutions"])
    print(f"m={out['m']} colours {out['colors']}: {n} canonical solution(s)")
    for k, s in enumerate(out["solutions"]):
        roots = ", ".join(f"{re:.12g}{im:+.12g}i" for re, im in s["canonical"]["roots"])
        print(f"  [{k + 1}] colours {s['canonical']['colors']}  roots {roots}  residual {s['residual_norm']:.2e}")
    store.record("bethe", [target], {"solutions": n}, cached)
    if n == 0 and out["m"] > 0:
        return EXIT["no_solution"]
    return EXIT["ok"]


def _read_solutions(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read solutions file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    out = []
    try:
        for s in doc["solutions"]:
            out.append((tuple(c - 1 for c in s["colors"]), tuple(complex(re, im) for re, im in s["roots"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed solutions document") from exc
    return out


def _certificate(model, colors, roots):
    cert = {"colors": [c + 1 for c in colors], "roots": [_complex_json(w) for w in roots], "sites": []}
    ok = True
    try:
        psi = build_psi(model, colors, roots)
    except WeightFunctionError as exc:
        cert.update(ok=False, error=str(exc))
        return cert, False
    for i in range(model.N):
        try:
            rep = verify_eigenpair(model, colors, roots, i, psi=psi)
        except WeightFunctionError as exc:
            cert["sites"].append({"site": i + 1, "ok": False, "error": str(exc)})
            ok = False
            continue
        res = [rep["H_residual"]]
        if rep.get("projected_norm"):
            res.append(rep["H_projected_residual"])
        good = all(r < RESIDUAL_TOL for r in res)
        ok = ok and good
        entry = {k: (_complex_json(v) if isinstance(v, complex) else v) for k, v in rep.items()}
        entry["ok"] = good
        cert["sites"].append(entry)
    cert["ok"] = ok
    return cert, ok


def cmd_verify(args):
    doc, model, colors, _ = _model_from(args)
    store = RunStore(args.runs, doc)
    sol_path = args.solutions or store.path("solutions.json")
    solutions = _read_solutions(sol_path)
    target = store.path("certificates.json")
    certs, all_ok = [], True
    for cols, roots in solutions:
        cert, ok = _certificate(model, cols, roots)
        certs.append(cert)
        all_ok = all_ok and ok
    out = {"config_hash": store.hash, "solutions_file": str(sol_path), "tolerance": RESIDUAL_TOL,
           "certificates": certs, "ok": all_ok}
    target.write_text(_dumps(out), encoding="utf-8")
    for k, cert in enumerate(certs):
        worst = max((s.get("H_residual", float("inf")) for s in cert["sites"]), default=float("nan"))
        print(f"  [{k + 1}] colours {cert['colors']}  max H residual {worst:.2e}  {'ok' if cert['ok'] else 'FAIL'}")
    print(f"{len(certs)} solution(s) verified: {'all pass' if all_ok else 'FAILED'}")
    store.record("verify", [target], {"ok": all_ok, "count": len(certs)}, False)
    if not solutions or not all_ok:
        return EXIT["verification"]
    return EXIT["ok"]


def cmd_repro_sl3(args):
    from .repro import repro_sl3

    try:
        z1, z2 = Fraction(args.z1), Fraction(args.z2)
    except ValueError as exc:
        raise ConfigError(f"cannot parse sites: {exc}") from exc
    rows = repro_sl3(z1, z2)
    width = max(len(r["check"]) for r in rows)
    print(f"{'check':<{width}}  {'computed':<40}  {'closed form':<40}  result")
    for r in rows:
        print(f"{r['check']:<{width}}  {str(r['computed']):<40}  {str(r['expected']):<40}  "
              f"{'PASS' if r['ok'] else 'FAIL'}")
    ok = all(r["ok"] for r in rows)
    print(f"{sum(r['ok'] for r in rows)}/{len(rows)} lines match")
    return EXIT["ok"] if ok else EXIT["verification"]


def cmd_selftest(args):
    from .selftest import run_selftest

    t0 = time.perf_counter()
    rows = run_selftest(corrupt_sign=args.corrupt_sign, subset=args.subset)
    for name, ok, detail in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    ok = all(r[1] for r in rows)
    print(f"{sum(r[1] for r in rows)}/{len(rows)} checks pass in {time.perf_counter() - t0:.1f}s")
    return EXIT["ok"] if ok else EXIT["verification"]


def build_parser():
    parser = argparse.ArgumentParser(prog="cyclogaudin", description="Cyclotomic Gaudin models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("config", help="model configuration JSON")
        p.add_argument("--runs", default="runs", help="results directory (default: runs)")
        return p

    p = with_config(sub.add_parser("validate", help="check a model configuration"))
    p.set_defaults(func=cmd_validate)
    p = with_config(sub.add_parser("spectrum", help="eigenvalues of one Hamiltonian"))
    p.add_argument("--site", type=int, default=1)
    p.add_argument("--out", help="also write the CSV here")
    p.add_argument("--cap", type=int, default=4096, help="maximal total dimension")
    p.add_argument("--force", action="store_true", help="recompute even if cached")
    p.set_defaults(func=cmd_spectrum)
    p = with_config(sub.add_parser("bethe", help="solve the Bethe equations"))
    p.add_argument("--out", help="also write the solutions JSON here")
    p.add_argument("--force", action="store_true", help="recompute even if cached")
    p.set_defaults(func=cmd_bethe)
    p = with_config(sub.add_parser("verify", help="check Bethe vectors against the eigenvalue formula"))
    p.add_argument("--solutions", help="solutions JSON (default: the cached run)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("repro-sl3", help="sl3 diagram-flip example against its closed forms")
    p.add_argument("--z1", default="1")
    p.add_argument("--z2", default="2")
    p.set_defaults(func=cmd_repro_sl3)
    p = sub.add_parser("selftest", help="exact identity suite")
    p.add_argument("--corrupt-sign", action="store_true", help="flip one structure constant (mutation check)")
    p.add_argument("--subset", choices=("all", "t1"), default="all")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT["parse"]
    except (ModelValidationError, AutomorphismError, BetheError) as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
        return EXIT["validation"]
    except SpectrumError as exc:
        print(f"spectrum: {exc}", file=sys.stderr)
        return EXIT["validation"]


if __name__ == "__main__":
    sys.exit(main())
