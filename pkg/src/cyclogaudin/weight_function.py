"""The cyclotomic weight function, its swapping-recursion oracle, and eigenpair checks."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .automorphism import AutoSpec, AutoTable, projector_pi
from .exact_num import CycloNum
from .hamiltonians import ModelSpec, build_H, eigenvalue_E_i, validate_model
from .lie_core import LieElement
from .repn import TensorState, build_irrep, project_to_irrep, tensor_act

__all__ = [
    "enumerate_partitions",
    "build_psi",
    "swapping_oracle",
    "circle_lemma_check",
    "verify_eigenpair",
    "singular_diagnostic",
    "classical_sv_check",
    "psi_inner_resummed",
    "psi_to_json",
    "WeightFunctionError",
]

MAX_PHASE_TERMS = 10 ** 6


class WeightFunctionError(ValueError):
    pass


def _exact(x):
    return isinstance(x, (Rational, CycloNum))


def enumerate_partitions(m, N):
    """Ordered partitions of {0..m-1} into N ordered (possibly empty) blocks."""
    if m < 0 or N < 1:
        raise ValueError("need m >= 0 and N >= 1")
    out = []
    for perm in itertools.permutations(range(m)):
        for cuts in itertools.combinations_with_replacement(range(m + 1), N - 1):
            bounds = (0,) + cuts + (m,)
            out.append(tuple(perm[bounds[i]:bounds[i + 1]] for i in range(N)))
    return out


def _arith(model, roots):
    exact = model.exact and all(_exact(w) for w in roots)
    conv = (lambda x: x) if exact else complex
    return exact, [conv(w) for w in roots], [conv(z) for z in model.z]


def _check_size(model, m):
    if model.T ** m > MAX_PHASE_TERMS:
        raise WeightFunctionError(f"T^m = {model.T ** m} phase terms exceeds the limit {MAX_PHASE_TERMS}")


def build_psi(model, colors, roots):
    """(-1)^m sum over ordered partitions and phases of the site products, as a Verma tensor state."""
    m = len(colors)
    if len(roots) != m:
        raise WeightFunctionError("number of roots does not match number of colours")
    _check_size(model, m)
    exact, w, z = _arith(model, roots)
    T, auto, alg = model.T, model.auto, model.alg
    mods = model.vermas
    # sigma-check^k(F_c) = w^k sigma^k(F_c)
    twisted = {}
    for c in set(colors):
        for k in range(T):
            twisted[(c, k)] = auto.apply(alg.simple_F(c), k, exact) * model.w(k, exact)

    site_cache = {}

    def site_vector(i, block):
        key = (i, block)
        if key in site_cache:
            return site_cache[key]
        total = {}
        for ks in itertools.product(range(T), repeat=len(block)):
            pts = [model.w(k, exact) * w[n] for k, n in zip(ks, block)] + [z[i]]
            den = Fraction(1)
            for a in range(len(block)):
                d = pts[a] - pts[a + 1]
                if (d == 0) if exact else abs(d) < 1e-14:
                    raise WeightFunctionError("denominator collision in the weight function")
                den = den * d
            vec = {(): 1 / den}
            for k, n in reversed(list(zip(ks, block))):
                vec = mods[i].act(twisted[(colors[n], k)], vec)
            for mono, c in vec.items():
                total[mono] = total[mono] + c if mono in total else c
        site_cache[key] = total
        return total

    psi = TensorState(mods, {})
    for part in enumerate_partitions(m, model.N):
        factors = [site_vector(i, block) for i, block in enumerate(part)]
        if all(factors):
            psi = psi + TensorState.product(mods, factors)
    return psi * (-1) ** m


def swapping_oracle(model, colors, roots):
    """The same vector from the swapping recursion: remove the last y_s until only site factors remain."""
    m = len(colors)
    exact, w, z = _arith(model, roots)
    T, auto, alg = model.T, model.auto, model.alg
    ys = [alg.simple_F(c) for c in colors]

    def tau(state, ys):
        s = len(ys)
        if s == 0:
            return state
        y = ys[-1]
        rest = ys[:-1]
        out = TensorState(state.modules, {})
        for j in range(T):
            sy = auto.apply(y, j, exact)
            wj = model.w(-j, exact)
            for i in range(model.N):
                out = out + tau(tensor_act(sy, i, state), rest) * (1 / (w[s - 1] - wj * z[i]))
            for i in range(s - 1):
                new = list(rest)
                new[i] = alg.bracket(sy, rest[i])
                if new[i].is_zero():
                    continue
                out = out + tau(state, new) * (1 / (w[s - 1] - wj * w[i]))
        return out

    return tau(model.highest_state(), ys) * (-1) ** m


def circle_lemma_check(points):
    """sum_i prod_{j != i} 1/(x_j - x_{j+1}) over a cycle of n >= 2 distinct points."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    if len(set(points)) != n:
        raise ValueError("points must be pairwise distinct")
    total = 0
    for i in range(n):
        prod = 1
        for j in range(n):
            if j != i:
                prod = prod / (points[j] - points[(j + 1) % n])
        total = total + prod
    return total


def _rel_norm(state, ref_norm):
    return state.norm() / ref_norm if ref_norm else float("inf")


def verify_eigenpair(model, colors, roots, i, psi=None, project=True):
    """Residuals of H_i and iota(H_i) on psi against E_i psi, on Vermas and projected to irreps."""
    if psi is None:
        psi = build_psi(model, colors, roots)
    n = psi.norm()
    if n == 0:
        raise WeightFunctionError("the weight function vanishes at this configuration")
    exact = model.exact and all(_exact(w) for w in roots)
    E = eigenvalue_E_i(model, colors, roots, i)
    H = build_H(i, model, exact)
    report = {"site": i + 1, "eigenvalue": complex(E), "psi_norm": n}
    for name, op in (("H", H), ("iota_H", H.iota())):
        diff = op.apply(psi) - psi * E
        report[f"{name}_residual"] = _rel_norm(diff, n)
    if project and all(model.alg.is_dominant_integral(lam) for lam in model.weights):
        irreps = model.irreps
        v = project_to_irrep(psi, irreps).astype(complex).ravel()
        pn = float(np.linalg.norm(v))
        report["projected_norm"] = pn
        if pn > 0:
            for name, op in (("H", H), ("iota_H", H.iota())):
                M = op.matrix(irreps, exact=False)
                report[f"{name}_projected_residual"] = float(np.linalg.norm(M @ v - complex(E) * v)) / pn
    return report


def singular_diagnostic(model, psi):
    """Norms of sum_j (Pi_0 E_a)^(j) psi over positive roots a with nonzero projection."""
    alg = model.alg
    out = {}
    n = psi.norm()
    for k in range(alg.n_pos):
        x = projector_pi(model.auto, 0, alg.E(k))
        if x.is_zero():
            continue
        total = TensorState(psi.modules, {})
        for j in range(model.N):
            total = total + tensor_act(x, j, psi)
        out[str(tuple(alg.positive_roots[k]))] = total.norm() / n if n else float("nan")
    return {"raising_norms": out, "singular": all(v < 1e-9 for v in out.values())}


def _to_rational(c):
    if isinstance(c, CycloNum):
        if not c.is_rational():
            raise WeightFunctionError("expected a rational coefficient")
        return c.to_fraction()
    return c


def classical_sv_check(model, colors, roots, tol=1e-10):
    """For sigma = id: psi equals T^m (w_1...w_m)^(T-1) times the untwisted weight function at w^T, z^T."""
    auto = model.auto
    if any(p != i for i, p in enumerate(auto.perm)) or any(auto.phases):
        raise WeightFunctionError("requires sigma = id")
    T, m = model.T, len(colors)
    exact, w, z = _arith(model, roots)
    spec = ModelSpec(model.alg.series, model.alg.rank, 1, tuple(range(model.alg.rank)), (0,) * model.alg.rank,
                     tuple(x ** T for x in z), model.weights, model.spec.modules)
    flat = validate_model(spec)
    lhs = build_psi(model, colors, w)
    factor = T ** m
    for x in w:
        factor = factor * x ** (T - 1)
    rhs = build_psi(flat, colors, [x ** T for x in w]) * factor
    if exact:
        lhs, rhs = lhs.map_coeffs(_to_rational), rhs.map_coeffs(_to_rational)
    diff = lhs - rhs
    if exact:
        return {"ok": not diff.vec, "exact": True}
    err = diff.norm() / max(lhs.norm(), 1e-300)
    return {"ok": err < tol, "exact": False, "rel_error": err}


def psi_inner_resummed(model, colors, roots):
    """Resummed weight function for an inner automorphism, in the variables w^T, z^T."""
    auto = model.auto
    if not auto.is_inner:
        raise WeightFunctionError("resummed form requires an inner automorphism")
    T, m, alg = model.T, len(colors), model.alg
    exact, w, z = _arith(model, roots)
    chi = [auto.chi[alg.simple_root_indices[c]] for c in colors]
    mods = model.vermas

    def f(ws, zz, chis):
        out = ws[0] ** ((chis[0] - 1) % T)
        acc = chis[0]
        for s in range(1, len(ws)):
            out = out * ws[s] ** (T - 1 - (acc - 1) % T + (acc + chis[s] - 1) % T)
            acc += chis[s]
        return out * zz ** (T - 1 - (acc - 1) % T)

    psi = TensorState(mods, {})
    for part in enumerate_partitions(m, model.N):
        factors = []
        for i, block in enumerate(part):
            if not block:
                factors.append({(): 1})
                continue
            pts = [w[n] ** T for n in block] + [z[i] ** T]
            den = Fraction(1)
            for a in range(len(block)):
                den = den * (pts[a] - pts[a + 1])
            coeff = f([w[n] for n in block], z[i], [chi[n] for n in block]) / den
            vec = {(): coeff}
            for n in reversed(block):
                vec = mods[i].act(alg.simple_F(colors[n]), vec)
            factors.append(vec)
        if all(factors):
            psi = psi + TensorState.product(mods, factors)
    return psi * ((-1) ** m * T ** m)


def _coeff_json(c):
    if isinstance(c, (CycloNum, Fraction, int)):
        return {"exact": str(c), "re": complex(c).real, "im": complex(c).imag}
    c = complex(c)
    return {"re": c.real, "im": c.imag}


def psi_to_json(model, psi):
    """List of per-site PBW monomials and coefficients."""
    alg = model.alg
    out = []
    for key, c in sorted(psi.vec.items(), key=lambda kv: repr(kv[0])):
        sites = []
        for mono in key:
            sites.append([str(tuple(alg.positive_roots[k])) for k in mono])
        out.append({"monomials": sites, "coefficient": _coeff_json(c)})
    return out
