"""End-to-end check of the sl3 diagram-flip model with two defining-representation sites."""
from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np

from .bethe import BetheProblem, SolveOptions, canonicalize, solve
from .hamiltonians import ModelSpec, double_pole_identity, eigenvalue_E_i, spectrum, validate_model
from .repn import project_to_irrep, tensor_act
from .weight_function import build_psi, verify_eigenpair

__all__ = ["sl3_flip_model", "closed_form_eigenvalues", "closed_form_roots", "repro_sl3"]

TOL = 1e-9
RESIDUAL_TOL = 1e-8
ROOT_TOL = 1e-10


def sl3_flip_model(z1, z2):
    spec = ModelSpec("A", 2, 2, (1, 0), (0, 0), (Fraction(z1), Fraction(z2)), ((1, 0), (1, 0)), ("irrep", "irrep"))
    return validate_model(spec)


def closed_form_eigenvalues(z1, z2):
    """The three eigenvalues of H_1 with multiplicities 5, 3, 1."""
    den = 3 * z1 ** 3 - 3 * z1 * z2 ** 2
    return [
        ((z2 ** 2 + z1 * z2 + 2 * z1 ** 2) / den, 5),
        ((z2 ** 2 - 5 * z1 * z2 - 4 * z1 ** 2) / den, 3),
        ((z2 ** 2 + 10 * z1 * z2 - 7 * z1 ** 2) / den, 1),
    ]


def closed_form_roots(z1, z2):
    """The m=2 roots (colours 1, 2) for both branches of the square root."""
    s = cmath.sqrt(complex((z2 - 5 * z1) * (5 * z2 - z1)))
    out = []
    for b in (s, -s):
        out.append(((complex(z1 + z2) - b) / 6, -(complex(z1 + z2) + b) / 6))
    return out


def _row(rows, name, computed, expected, ok):
    rows.append({"check": name, "computed": computed, "expected": expected, "ok": bool(ok)})


def _fmt(x):
    if isinstance(x, (int, Fraction)):
        return str(x)
    x = complex(x)
    if abs(x.imag) < 1e-12:
        return f"{x.real:.12g}"
    return f"{x.real:.12g}{x.imag:+.12g}i"


def _proj(model, state):
    return project_to_irrep(state, model.irreps).astype(complex).ravel()


def _rel(a, b):
    return float(np.linalg.norm(a - b)) / max(1e-300, float(np.linalg.norm(b)))


def repro_sl3(z1=1, z2=2, starts=64, seed=0):
    """Rows comparing every computed quantity with its closed form; raises on invalid sites."""
    z1, z2 = Fraction(z1), Fraction(z2)
    model = sl3_flip_model(z1, z2)
    alg = model.alg
    rows = []

    lam0 = model.lam0
    theta = alg.root_to_weight(alg.highest_root)
    expected_lam0 = theta * Fraction(-1, 2)
    _row(rows, "lambda0", str(list(map(str, lam0))), str(list(map(str, expected_lam0))), lam0 == expected_lam0)
    dp = double_pole_identity(model)
    _row(rows, "double pole identity", dp["lhs"], dp["rhs"], dp["ok"])

    evals = closed_form_eigenvalues(z1, z2)
    found = spectrum(model, 0)
    matched = []
    for val, mult in evals:
        hit = [c for c in found if abs(c[0] - complex(val)) < TOL * max(1.0, abs(val))]
        got = sum(c[1] for c in hit)
        matched.extend(hit)
        _row(rows, f"spectrum H1 eigenvalue (mult {mult})", f"{_fmt(hit[0][0]) if hit else '-'} x{got}",
             f"{_fmt(val)} x{mult}", got == mult)
    _row(rows, "spectrum H1 no extra eigenvalues", len(found), len(evals), len(matched) == len(found) == len(evals))

    v_hw = model.highest_state()
    F1, F2 = alg.simple_F(0), alg.simple_F(1)
    opts = SolveOptions(starts=starts, seed=seed)

    # m = 0
    E0 = eigenvalue_E_i(model, (), (), 0)
    _row(rows, "m=0 E1", _fmt(E0), _fmt(evals[0][0]), E0 == evals[0][0])
    rep = verify_eigenpair(model, (), (), 0)
    _row(rows, "m=0 eigenpair residual H1", f"{rep['H_residual']:.2e}", f"< {RESIDUAL_TOL}", rep["H_residual"] < RESIDUAL_TOL)

    # m = 1
    sols = solve(BetheProblem(model, (0,)), opts)
    w1 = (z1 + z2) / 2
    got = [s.roots[0] for s in sols.solutions]
    _row(rows, "m=1 Bethe root", ", ".join(_fmt(g) for g in got), _fmt(w1),
         len(got) == 1 and abs(got[0] - complex(w1)) < ROOT_TOL * max(1.0, abs(w1)))
    mirror = solve(BetheProblem(model, (1,)), opts)
    canon = [canonicalize(mirror.problem, s.roots) for s in mirror.solutions]
    same = len(canon) == 1 and canon[0][1] == (0,) and abs(canon[0][0][0] - complex(w1)) < ROOT_TOL * max(1, abs(w1))
    _row(rows, "m=1 colour 2 root is a twist image", ", ".join(_fmt(s.roots[0]) for s in mirror.solutions),
         _fmt(-w1), same)
    E1 = eigenvalue_E_i(model, (0,), (w1,), 0)
    _row(rows, "m=1 E1", _fmt(E1), _fmt(evals[1][0]), E1 == evals[1][0])
    psi = build_psi(model, (0,), (w1,)) * (-1)
    display = (tensor_act(F1, 0, v_hw) - tensor_act(F1, 1, v_hw)) * (2 / (z2 - z1))
    err = _rel(_proj(model, psi), _proj(model, display))
    _row(rows, "m=1 weight function (times (-1)^m)", f"rel err {err:.2e}", "2/(z2-z1)(F1v*v - v*F1v)", err < TOL)
    rep = verify_eigenpair(model, (0,), (w1,), 0, psi=psi)
    _row(rows, "m=1 eigenpair residual H1", f"{rep['H_residual']:.2e}", f"< {RESIDUAL_TOL}", rep["H_residual"] < RESIDUAL_TOL)

    # m = 2
    problem = BetheProblem(model, (0, 1))
    sols = solve(problem, opts)
    branches = closed_form_roots(z1, z2)
    branch_canon = [canonicalize(problem, b) for b in branches]
    for k, (b, bc) in enumerate(zip(branches, branch_canon)):
        hit = any(s.canonical_colors == bc[1] and all(abs(x - y) < ROOT_TOL * max(1.0, abs(y))
                                                      for x, y in zip(s.canonical_roots, bc[0]))
                  for s in sols.solutions)
        _row(rows, f"m=2 Bethe roots, branch {'+-'[k]}sqrt", "; ".join(
            ", ".join(_fmt(x) for x in s.canonical_roots) for s in sols.solutions),
            ", ".join(_fmt(x) for x in bc[0]), hit and len(sols.solutions) == 1)
    for colors in ((0, 0), (1, 1)):
        other = solve(problem.with_colors(colors), opts)
        merged = [(s.canonical_roots, s.canonical_colors) for s in other.solutions]
        ok = len(merged) == 1 and merged[0][1] == branch_canon[0][1] and all(
            abs(x - y) < 1e-8 * max(1.0, abs(y)) for x, y in zip(merged[0][0], branch_canon[0][0]))
        _row(rows, f"m=2 colours {colors[0] + 1}{colors[1] + 1} merge to the same canonical solution",
             len(merged), 1, ok)
    roots = branches[0]
    E2 = eigenvalue_E_i(model, (0, 1), roots, 0)
    _row(rows, "m=2 E1", _fmt(E2), _fmt(evals[2][0]), abs(E2 - complex(evals[2][0])) < TOL * max(1, abs(evals[2][0])))
    psi = build_psi(model, (0, 1), roots)
    f21_site0 = tensor_act(F2, 0, tensor_act(F1, 0, v_hw))
    f21_site1 = tensor_act(F2, 1, tensor_act(F1, 1, v_hw))
    mixed = tensor_act(F1, 0, tensor_act(F1, 1, v_hw))
    display = (f21_site0 + f21_site1 - mixed) * (Fraction(9) / (z1 + z2) ** 2)
    err = _rel(_proj(model, psi), _proj(model, display))
    _row(rows, "m=2 weight function", f"rel err {err:.2e}", "9/(z1+z2)^2(F2F1v*v + v*F2F1v - F1v*F1v)", err < TOL)
    rep = verify_eigenpair(model, (0, 1), roots, 0, psi=psi)
    _row(rows, "m=2 eigenpair residual H1 (projected)", f"{rep['H_projected_residual']:.2e}", f"< {RESIDUAL_TOL}",
         rep["H_projected_residual"] < RESIDUAL_TOL)
    for i in range(model.N):
        for m_roots, cols in (((w1,), (0,)), (roots, (0, 1))):
            rep = verify_eigenpair(model, cols, m_roots, i)
            _row(rows, f"m={len(cols)} eigenpair residual H{i + 1} (Verma)", f"{rep['H_residual']:.2e}",
                 f"< {RESIDUAL_TOL}", rep["H_residual"] < RESIDUAL_TOL)
    return rows
