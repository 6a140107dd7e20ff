"""Cyclotomic Gaudin models: Hamiltonians, the generating operator S(u), eigenvalues.

Quadratic operators are stored as lists of terms ``(c, a, A, b, B)`` meaning
c * A^(a) B^(b); when a == b this is the product A B acting on one factor
(B first).  They can act on tensor products of Verma modules or be assembled
into dense matrices on tensor products of irreducible modules.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational

import numpy as np

from .automorphism import AutoSpec, AutoTable, l_sigma, lambda0, projector_pi
from .exact_num import CycloNum, omega_pow
from .lie_core import LieElement, WeightVec, build_simple_lie_algebra, casimir_delta, dual_coxeter, dual_pairs
from .repn import TensorState, build_irrep, iota_element, tensor_act, verma_module

__all__ = [
    "ModelSpec",
    "ModelValidationError",
    "GaudinModel",
    "QuadraticOperator",
    "validate_model",
    "build_H",
    "build_iota_H",
    "commutator_check",
    "gsigma_commutation_check",
    "orbit_collision",
    "casimir_operator",
    "assemble_S_u",
    "MasterWeight",
    "master_weight",
    "eigenvalue_S",
    "eigenvalue_S_laurent",
    "eigenvalue_E_i",
    "double_pole_identity",
    "swap_pole_cancellation_check",
    "resummed_H_check",
    "r_gamma_eval",
    "spectrum",
    "SpectrumError",
]


class ModelValidationError(ValueError):
    pass


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    series: str
    rank: int
    T: int
    permutation: tuple
    phases: tuple
    z: tuple
    weights: tuple
    modules: tuple = None

    def with_sites(self, z):
        return replace(self, z=tuple(z))


def _is_exact(x):
    return isinstance(x, (Rational, CycloNum))


class GaudinModel:
    """A validated model: algebra, automorphism, sites, weights."""

    def __init__(self, spec, alg, auto):
        self.spec = spec
        self.alg = alg
        self.auto = auto
        self.T = auto.T
        self.z = tuple(spec.z)
        self.N = len(self.z)
        self.weights = tuple(WeightVec(w) for w in spec.weights)
        self.kinds = tuple(spec.modules or ("verma",) * self.N)
        self.exact = all(_is_exact(z) for z in self.z)
        self.lam0 = lambda0(auto)
        self.pairs = dual_pairs(alg)
        self.h_dual = dual_coxeter(alg)

    def w(self, k, exact=None):
        """w^k in the arithmetic of the model (exact or complex)."""
        exact = self.exact if exact is None else exact
        return omega_pow(self.auto.ctx, k) if exact else self.auto.ctx.omega_c ** (k % self.T)

    def with_sites(self, z):
        return GaudinModel(self.spec.with_sites(z), self.alg, self.auto)

    @property
    def vermas(self):
        return tuple(verma_module(self.alg, lam) for lam in self.weights)

    @property
    def irreps(self):
        return tuple(build_irrep(self.alg, lam) for lam in self.weights)

    def highest_state(self):
        return TensorState.highest(self.vermas)

    def pairing(self, lam, mu):
        return self.alg.inner(lam, mu)

    def __repr__(self):
        return f"GaudinModel({self.alg!r}, T={self.T}, perm={self.auto.perm}, phases={self.auto.phases}, z={self.z})"


def validate_model(spec):
    """Build algebra and automorphism and check the site conditions."""
    try:
        alg = build_simple_lie_algebra(spec.series, int(spec.rank))
    except ValueError as exc:
        raise ModelValidationError(str(exc)) from exc
    try:
        auto = AutoTable(alg, AutoSpec(int(spec.T), tuple(spec.permutation), tuple(spec.phases)))
    except ValueError as exc:
        raise ModelValidationError(str(exc)) from exc
    z = tuple(spec.z)
    if len(spec.weights) != len(z):
        raise ModelValidationError("number of weights does not match number of sites")
    for i, lam in enumerate(spec.weights):
        if len(lam) != alg.rank:
            raise ModelValidationError(f"weight of site {i + 1} has {len(lam)} coordinates, expected {alg.rank}")
    for i, zi in enumerate(z):
        if zi == 0:
            raise ModelValidationError(f"site {i + 1} is at the origin")
    collision = orbit_collision(auto, z)
    if collision:
        i, j, p = collision
        raise ModelValidationError(f"sites {i + 1} and {j + 1} lie on one orbit: z{j + 1} = w^{p} z{i + 1}")
    kinds = tuple(spec.modules or ("verma",) * len(z))
    for i, (k, lam) in enumerate(zip(kinds, spec.weights)):
        if k not in ("verma", "irrep"):
            raise ModelValidationError(f"site {i + 1}: unknown module kind {k!r}")
        if k == "irrep" and not alg.is_dominant_integral(WeightVec(lam)):
            raise ModelValidationError(f"site {i + 1}: irrep weight must be dominant integral")
    return GaudinModel(spec, alg, auto)


def orbit_collision(auto, points, tol=1e-10):
    """First (i, j, p) with points[j] = w^p points[i], or None."""
    exact = all(_is_exact(x) for x in points)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            for p in range(auto.T):
                if exact:
                    if omega_pow(auto.ctx, p) * points[i] == points[j]:
                        return i, j, p
                elif abs(auto.ctx.omega_c ** p * complex(points[i]) - complex(points[j])) < tol:
                    return i, j, p
    return None


# ---------------------------------------------------------------------------
# quadratic operators

def _kron(a, b):
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def _identity(n, exact):
    if exact:
        M = np.zeros((n, n), dtype=object)
        M[:, :] = Fraction(0)
        for k in range(n):
            M[k, k] = Fraction(1)
        return M
    return np.eye(n, dtype=complex)


class QuadraticOperator:
    """Sum of terms c * A^(a) B^(b) plus a scalar multiple of the identity."""

    def __init__(self, N, terms=(), const=0):
        self.N = N
        self.terms = list(terms)
        self.const = const

    def __add__(self, other):
        return QuadraticOperator(self.N, self.terms + other.terms, self.const + other.const)

    def __mul__(self, c):
        return QuadraticOperator(self.N, [(t[0] * c,) + t[1:] for t in self.terms], self.const * c)

    __rmul__ = __mul__

    def map_elements(self, f):
        """Apply a linear map of g to every Lie element (e.g. sigma^p)."""
        return QuadraticOperator(self.N, [(c, a, f(A), b, f(B)) for c, a, A, b, B in self.terms], self.const)

    def iota(self):
        """iota applied factorwise, reversing products within one factor."""
        out = []
        for c, a, A, b, B in self.terms:
            if a == b:
                out.append((c, a, iota_element(B), a, iota_element(A)))
            else:
                out.append((c, a, iota_element(A), b, iota_element(B)))
        return QuadraticOperator(self.N, out, self.const)

    def apply(self, state):
        out = state * self.const if self.const != 0 else TensorState(state.modules, {})
        for c, a, A, b, B in self.terms:
            out = out + tensor_act(A, a, tensor_act(B, b, state)) * c
        return out

    def matrix(self, irreps, exact=True):
        """Dense matrix on the tensor product of the given irreducible modules."""
        dims = [L.dim for L in irreps]
        dtype = object if exact else complex
        cache = {}

        def mat(site, X):
            key = (site, id(X))
            if key not in cache:
                cache[key] = (irreps[site].matrix(X, dtype=dtype), X)
            return cache[key][0]

        # group terms by pair of sites to limit Kronecker products
        total = None
        for c, a, A, b, B in self.terms:
            if not exact:
                c = complex(c)
            if a == b:
                local = {a: mat(a, A).dot(mat(a, B)) * c}
            else:
                local = {a: mat(a, A) * c, b: mat(b, B)}
            M = None
            for s in range(self.N):
                f = local.get(s)
                if f is None:
                    f = _identity(dims[s], exact)
                M = f if M is None else _kron(M, f)
            total = M if total is None else total + M
        if total is None:
            n = int(np.prod(dims))
            total = _identity(n, exact) * 0
        if self.const != 0:
            total = total + _identity(total.shape[0], exact) * (self.const if exact else complex(self.const))
        return total


def _sigma(model, p, exact):
    return lambda X: model.auto.apply(X, p, exact)


def build_H(i, model, exact=None):
    """The quadratic Hamiltonian at site i (0-based), with the self-interaction correction."""
    exact = model.exact if exact is None else exact
    T, z = model.T, model.z
    zi = z[i] if exact else complex(z[i])
    terms = []
    for p in range(T):
        for j in range(model.N):
            if j == i:
                continue
            zj = z[j] if exact else complex(z[j])
            c = 1 / (zi - model.w(-p, exact) * zj)
            for I_low, I_up in model.pairs:
                terms.append((c, i, I_up, j, model.auto.apply(I_low, p, exact)))
    for p in range(1, T):
        c = 1 / ((1 - model.w(-p, exact)) * zi)
        for I_low, I_up in model.pairs:
            terms.append((c, i, model.auto.apply(I_up, p, exact), i, I_low))
    return QuadraticOperator(model.N, terms)


def build_iota_H(i, model, exact=None):
    return build_H(i, model, exact).iota()


def casimir_operator(model, i):
    """C^(i) = (1/2) sum_a I^a I_a at site i."""
    return QuadraticOperator(model.N, [(Fraction(1, 2), i, I_up, i, I_low) for I_low, I_up in model.pairs])


def _first_nonzero(M):
    for idx, v in np.ndenumerate(M):
        if v != 0:
            return idx, v
    return None


def random_rational_sites(auto, N, rng, max_num=9):
    while True:
        z = []
        for _ in range(N):
            num = rng.randint(1, max_num) * rng.choice((-1, 1))
            z.append(Fraction(num, rng.randint(1, max_num)))
        if len(set(z)) == N and orbit_collision(auto, z) is None:
            return tuple(z)


def commutator_check(model, i, j, trials=3, seed=0, sites=None):
    """Exact [H_i, H_j] on tensor products of irreps at random rational configurations."""
    rng = random.Random(seed)
    certs = []
    ok = True
    for t in range(trials):
        z = sites[t] if sites is not None else random_rational_sites(model.auto, model.N, rng)
        m = model.with_sites(z)
        irreps = m.irreps
        Hi = build_H(i, m, exact=True).matrix(irreps, exact=True)
        Hj = build_H(j, m, exact=True).matrix(irreps, exact=True)
        comm = Hi.dot(Hj) - Hj.dot(Hi)
        nz = _first_nonzero(comm)
        certs.append({"z": [str(x) for x in z], "zero": nz is None,
                      "first_nonzero": None if nz is None else {"index": list(nz[0]), "value": str(nz[1])}})
        ok = ok and nz is None
    # entries are rational in z with denominators of degree at most T(N-1)+1 per Hamiltonian
    degree_bound = 2 * (model.T * (model.N - 1) + 1)
    return {"ok": ok, "pair": [i + 1, j + 1], "trials": certs, "degree_bound": degree_bound}


def gsigma_commutation_check(model, i, exact=True):
    """[H_i, sum_j (Pi_0 x)^(j)] = 0 for x over the basis of g."""
    irreps = model.irreps
    H = build_H(i, model, exact).matrix(irreps, exact)
    for label in model.alg.basis:
        x = projector_pi(model.auto, 0, LieElement.basis(label))
        if x.is_zero():
            continue
        D = _diagonal_matrix(model, x, irreps, exact)
        comm = H.dot(D) - D.dot(H)
        bad = _first_nonzero(comm) is not None if exact else float(np.abs(comm).max()) > 1e-10
        if bad:
            return False
    return True


def _diagonal_matrix(model, x, irreps, exact):
    dims = [L.dim for L in irreps]
    total = None
    for j in range(model.N):
        M = None
        for s in range(model.N):
            f = irreps[s].matrix(x, dtype=object if exact else complex) if s == j else _identity(dims[s], exact)
            M = f if M is None else _kron(M, f)
        total = M if total is None else total + M
    return total


# ---------------------------------------------------------------------------
# S(u)

def s_u_constant(model, exact=True):
    """Coefficient K of 1/u^2: (1/2) sum_{p>=1} w^p <sigma^p I^a, I_a> k/(w^p-1)^2, k = -h^v."""
    k = -model.h_dual
    total = 0
    for p in range(1, model.T):
        tr = sum((model.alg.form(model.auto.apply(I_up, p, exact), I_low) for I_low, I_up in model.pairs), 0)
        wp = model.w(p, exact)
        total = total + wp * tr * k / (wp - 1) ** 2
    return total / 2


def assemble_S_u(model, u=None, exact=None):
    """Laurent data of S(u) and, if u is given, its value as an operator."""
    exact = model.exact if exact is None else exact
    poles = []
    for i in range(model.N):
        C = casimir_operator(model, i)
        H = build_H(i, model, exact)
        zi = model.z[i] if exact else complex(model.z[i])
        for p in range(model.T):
            point = model.w(-p, exact) * zi
            poles.append({"point": point, "order": 2, "site": i, "p": p, "operator": C})
            poles.append({"point": point, "order": 1, "site": i, "p": p,
                          "operator": H.map_elements(_sigma(model, p, exact)) * model.w(p, exact)})
    K = s_u_constant(model, exact)
    if model.T > 1:
        poles.append({"point": 0, "order": 2, "site": None, "p": None, "operator": QuadraticOperator(model.N, const=K)})
    out = {"poles": poles, "constant": K}
    if u is not None:
        if u == 0:
            raise ValueError("u = 0 is a pole of S(u)")
        if any(orbit_collision(model.auto, (zz, u)) for zz in model.z):
            raise ValueError("u lies on the orbit of a site")
        total = QuadraticOperator(model.N)
        for pole in poles:
            total = total + pole["operator"] * (1 / (u - pole["point"]) ** pole["order"])
        out["value"] = total
    return out


# ---------------------------------------------------------------------------
# master weight and eigenvalues

class MasterWeight:
    """lam(t) = sum_r (sum_i L^r lam_i/(t-w^r z_i) - sum_j L^r a_c(j)/(t-w^r w_j)) + lam0/t."""

    def __init__(self, model, colors, roots, exact=None):
        self.model = model
        self.colors = tuple(colors)
        self.roots = tuple(roots)
        if exact is None:
            exact = model.exact and all(_is_exact(w) for w in self.roots)
        self.exact = exact
        alg, auto = model.alg, model.auto
        conv = (lambda x: x) if exact else complex
        terms = []
        for r in range(model.T):
            wr = model.w(r, exact)
            for zi, lam in zip(model.z, model.weights):
                terms.append((wr * conv(zi), l_sigma(auto, lam, r)))
            for c, wj in zip(self.colors, self.roots):
                terms.append((wr * conv(wj), -l_sigma(auto, alg.simple_root_weight(c), r)))
        if any(v != 0 for v in model.lam0):
            terms.append((0 if exact else 0j, model.lam0))
        self.terms = terms
        pts = [p for p, _ in terms]
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if (pts[a] == pts[b]) if exact else abs(complex(pts[a]) - complex(pts[b])) < 1e-9:
                    raise ValueError("coincident points in the master weight")

    def __call__(self, t, n=0):
        """n-th derivative of lam(t), as a weight."""
        out = WeightVec([0] * self.model.alg.rank)
        sign_fact = (-1) ** n * math.factorial(n)
        for p, c in self.terms:
            out = out + c * (sign_fact / (t - p) ** (n + 1))
        return out

    def residue(self, point):
        total = WeightVec([0] * self.model.alg.rank)
        for p, c in self.terms:
            if (p == point) if self.exact else abs(complex(p) - complex(point)) < 1e-12:
                total = total + c
        return total


def master_weight(model, colors, roots, exact=None):
    return MasterWeight(model, colors, roots, exact)


def eigenvalue_S(model, colors, roots, u):
    lam = MasterWeight(model, colors, roots)
    val = lam(u)
    return model.alg.inner(val, val) / 2 - model.alg.inner(lam(u, 1), model.alg.rho)


def eigenvalue_S_laurent(model, colors, roots, point):
    """(coefficient of (u-point)^-2, residue) of the eigenvalue of S(u), from partial fractions."""
    lam = MasterWeight(model, colors, roots)
    alg = model.alg
    exact = lam.exact
    here = lam.residue(point)
    double = alg.inner(here, here) / 2 + alg.inner(here, alg.rho)
    res = 0
    for p, c in lam.terms:
        same = (p == point) if exact else abs(complex(p) - complex(point)) < 1e-12
        if not same:
            res = res + alg.inner(here, c) / (point - p)
    return double, res


def eigenvalue_E_i(model, colors, roots, i):
    """Eigenvalue of H_i on the Bethe vector, closed form."""
    alg, auto, T = model.alg, model.auto, model.T
    exact = model.exact and all(_is_exact(w) for w in roots)
    conv = (lambda x: x) if exact else complex
    zi = conv(model.z[i])
    lam_i = model.weights[i]
    total = 0
    for s in range(T):
        ws = model.w(s, exact)
        for j in range(model.N):
            if j != i:
                total = total + alg.inner(lam_i, l_sigma(auto, model.weights[j], s)) / (zi - ws * conv(model.z[j]))
        for c, wj in zip(colors, roots):
            total = total - alg.inner(lam_i, l_sigma(auto, alg.simple_root_weight(c), s)) / (zi - ws * conv(wj))
    self_term = alg.inner(lam_i, model.lam0)
    self_term += sum((alg.inner(lam_i, l_sigma(auto, lam_i, s)) for s in range(1, T)), Fraction(0)) / 2
    return total + self_term / zi


def double_pole_identity(model_or_auto):
    """-(h^v/2) sum_r w^r <sigma^r I^a, I_a>/(w^r - 1)^2 == Delta(lam0), exactly."""
    auto = getattr(model_or_auto, "auto", model_or_auto)
    alg = auto.alg
    hv = dual_coxeter(alg)
    pairs = dual_pairs(alg)
    lhs = auto.ctx.zero
    for r in range(1, auto.T):
        tr = sum((alg.form(auto.apply(I_up, r, True), I_low) for I_low, I_up in pairs), 0)
        wr = omega_pow(auto.ctx, r)
        lhs = lhs + wr * tr / (wr - 1) ** 2
    lhs = lhs * Fraction(-hv, 2)
    lam0 = lambda0(auto)
    rhs = casimir_delta(alg, lam0)
    ok = lhs == rhs
    return {"ok": bool(ok), "lhs": str(lhs), "rhs": str(rhs), "lambda0": [str(c) for c in lam0]}


def resummed_H_check(model, exact=True):
    """For sigma = id: H_i = T z_i^(T-1) sum_j I^a I_a/(z~_i - z~_j) + ((T-1)/z_i) (1/2) I^a I_a."""
    if any(p != i for i, p in enumerate(model.auto.perm)) or any(model.auto.phases):
        raise ValueError("resummation identity requires sigma = id")
    T = model.T
    irreps = model.irreps
    results = []
    ok = True
    for i in range(model.N):
        zi = model.z[i]
        terms = []
        for j in range(model.N):
            if j != i:
                c = T * zi ** (T - 1) / (zi ** T - model.z[j] ** T)
                terms += [(c, i, I_up, j, I_low) for I_low, I_up in model.pairs]
        terms += [(Fraction(T - 1, 2) / zi, i, I_up, i, I_low) for I_low, I_up in model.pairs]
        lhs = build_H(i, model, exact).matrix(irreps, exact)
        rhs = QuadraticOperator(model.N, terms).matrix(irreps, exact)
        diff = lhs - rhs
        good = _first_nonzero(diff) is None if exact else float(np.abs(diff).max()) < 1e-10
        results.append({"site": i + 1, "ok": bool(good)})
        ok = ok and good
    return {"ok": ok, "sites": results}


def r_gamma_eval(model, monomial, colors, roots, u):
    """prod_k (1/(n_k-1)!) d^(n_k-1)/du^(n_k-1) lam(u)(H_{s_k})."""
    lam = MasterWeight(model, colors, roots)
    out = 1
    for s, n in monomial:
        if n < 1:
            raise ValueError("mode numbers must be >= 1")
        out = out * lam(u, n - 1)[s] / math.factorial(n - 1)
    return out


def swap_pole_cancellation_check(model_or_auto):
    """sigma^k [sigma^p I^a, I_a] == [sigma^p I^a, I_a] for all k, p, exactly."""
    auto = getattr(model_or_auto, "auto", model_or_auto)
    alg = auto.alg
    pairs = dual_pairs(alg)
    bad = []
    for p in range(auto.T):
        x = LieElement()
        for I_low, I_up in pairs:
            x = x + alg.bracket(auto.apply(I_up, p, True), I_low)
        for k in range(1, auto.T):
            if auto.apply(x, k, True) != x:
                bad.append((p, k))
    return {"ok": not bad, "failures": bad}


def spectrum(model, i, cap=4096, cluster_tol=1e-8):
    """Eigenvalues of H_i on the tensor product of irreps as [(value, multiplicity)].

    Eigenvalues closer than cluster_tol (relative to max(1, |value|)) to the
    running cluster mean are merged.
    """
    if any(k != "irrep" for k in model.kinds):
        raise SpectrumError("spectrum requires irreducible modules at every site")
    if not 0 <= i < model.N:
        raise SpectrumError(f"site {i + 1} out of range 1..{model.N}")
    dim = 1
    for lam in model.weights:
        dim *= model.alg.weyl_dimension(lam)
    if dim > cap:
        raise SpectrumError(f"total dimension {dim} exceeds the cap {cap}")
    M = build_H(i, model, exact=False).matrix(model.irreps, exact=False)
    vals = np.linalg.eigvals(np.asarray(M, dtype=complex))
    vals = sorted(vals, key=lambda v: (round(v.real, 6), round(v.imag, 6)))
    clusters = []
    for v in vals:
        for c in clusters:
            if abs(v - c[0] / c[1]) < cluster_tol * max(1.0, abs(v)):
                c[0] += v
                c[1] += 1
                break
        else:
            clusters.append([v, 1])
    return [(c[0] / c[1], c[1]) for c in clusters]
