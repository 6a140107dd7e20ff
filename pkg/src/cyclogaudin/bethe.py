"""Cyclotomic Bethe equations: residuals, Jacobian, multistart Newton, canonical forms."""
from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .automorphism import l_sigma

__all__ = [
    "BetheProblem",
    "SolveOptions",
    "Solution",
    "SolutionSet",
    "residual",
    "residuals",
    "jacobian",
    "solve",
    "canonicalize",
    "twist_image",
    "untwisted_reduction_check",
    "BetheError",
]


class BetheError(ValueError):
    pass


class BetheProblem:
    """Bethe equations for a model and a colour tuple (0-based nodes)."""

    def __init__(self, model, colors, coincidence_tol=1e-9):
        self.model = model
        self.colors = tuple(int(c) for c in colors)
        self.m = len(self.colors)
        self.tol = coincidence_tol
        alg, auto, T = model.alg, model.auto, model.T
        for c in self.colors:
            if not 0 <= c < alg.rank:
                raise BetheError(f"colour {c + 1} is not a node of the Dynkin diagram")
        self.T = T
        self.omega = auto.ctx.omega_c
        self.wr = np.array([self.omega ** r for r in range(T)])
        alpha = [alg.simple_root_weight(c) for c in range(alg.rank)]
        # pairings with site orbits: site_pair[c][i][r] = <a_c, L^r lam_i>
        self.site_points = np.array([[self.omega ** r * complex(z) for r in range(T)] for z in model.z])
        self.site_pair = [[[alg.inner(alpha[c], l_sigma(auto, lam, r)) for r in range(T)] for lam in model.weights]
                          for c in range(alg.rank)]
        self.root_pair = [[[alg.inner(alpha[c], l_sigma(auto, alpha[d], r)) for r in range(T)] for d in range(alg.rank)]
                          for c in range(alg.rank)]
        self.origin_coeff = [
            -sum((self.root_pair[c][c][r] for r in range(1, T)), Fraction(0)) / 2 + alg.inner(alpha[c], model.lam0)
            for c in range(alg.rank)
        ]
        # numeric tables, indexed by problem slot
        cols = self.colors
        self._S = np.array([[[complex(x) for x in row] for row in self.site_pair[c]] for c in cols]).reshape(
            self.m, model.N, T)
        self._K = np.array([[[complex(x) for x in self.root_pair[c][d]] for d in cols] for c in cols]).reshape(
            self.m, self.m, T)
        self._O = np.array([complex(self.origin_coeff[c]) for c in cols])
        # root-root couplings with the self-interaction removed; _diag marks the removed slots
        self._diag = np.broadcast_to(np.eye(self.m, dtype=bool)[:, :, None], (self.m, self.m, T))
        self._Koff = np.where(self._diag, 0, self._K)

    def with_colors(self, colors):
        return BetheProblem(self.model, colors, self.tol)

    def check_roots(self, w):
        """Reason string if the roots are not admissible, else None."""
        w = [complex(x) for x in w]
        for j, x in enumerate(w):
            if abs(x) < self.tol:
                return f"root {j + 1} is at the origin"
            for i, z in enumerate(self.model.z):
                for r in range(self.T):
                    if abs(x - self.omega ** r * complex(z)) < self.tol:
                        return f"root {j + 1} lies on the orbit of site {i + 1}"
            for k in range(j + 1, len(w)):
                for r in range(self.T):
                    if abs(w[k] - self.omega ** r * x) < self.tol:
                        return f"roots {j + 1} and {k + 1} lie on one orbit"
        return None


def residual(problem, w, j):
    """Bethe residual of root j, in exact or complex arithmetic according to w."""
    model, T = problem.model, problem.T
    exact = model.exact and all(not isinstance(x, (complex, float)) for x in w)
    c = problem.colors[j]
    wj = w[j] if exact else complex(w[j])
    total = 0
    for r in range(T):
        wr = model.w(r, exact)
        for i, z in enumerate(model.z):
            a = problem.site_pair[c][i][r]
            if a:
                total = total + a / (wj - wr * (z if exact else complex(z)))
        for k in range(problem.m):
            if k == j:
                continue
            a = problem.root_pair[c][problem.colors[k]][r]
            if a:
                total = total - a / (wj - wr * (w[k] if exact else complex(w[k])))
    return total + problem.origin_coeff[c] / wj


def _evaluate(problem, w, with_jacobian):
    """Residuals and optionally the Jacobian, sharing the difference tables."""
    m = problem.m
    ds = w[:, None, None] - problem.site_points[None, :, :]
    inv_s = problem._S / ds
    R = inv_s.sum(axis=(1, 2)) + problem._O / w
    dr = w[:, None, None] - problem.wr[None, None, :] * w[None, :, None]
    dr[problem._diag] = 1.0
    q = problem._Koff / dr
    R -= q.sum(axis=(1, 2))
    if not with_jacobian:
        return R, None
    q2 = q / dr
    J = -(q2 * problem.wr[None, None, :]).sum(axis=2)
    J[np.diag_indices(m)] = -(inv_s / ds).sum(axis=(1, 2)) - problem._O / w ** 2 + q2.sum(axis=(1, 2))
    return R, J


def residuals(problem, w):
    """Vectorised complex residuals."""
    w = np.asarray(w, dtype=complex)
    if problem.m == 0:
        return np.zeros(0, dtype=complex)
    return _evaluate(problem, w, False)[0]


def jacobian(problem, w):
    """Analytic Jacobian d residual_j / d w_k."""
    w = np.asarray(w, dtype=complex)
    if problem.m == 0:
        return np.zeros((0, 0), dtype=complex)
    return _evaluate(problem, w, True)[1]


# ---------------------------------------------------------------------------
# symmetry

def twist_image(problem, w, shifts):
    """Apply w_j -> w^(a_j) w_j, c(j) -> perm^(a_j) c(j)."""
    perm = problem.model.auto.perm
    roots, colors = [], []
    for x, c, a in zip(w, problem.colors, shifts):
        for _ in range(a % problem.T):
            c = perm[c]
        roots.append(problem.omega ** (a % problem.T) * complex(x))
        colors.append(c)
    return roots, colors


def canonicalize(problem, w, colors=None):
    """Move each root into the sector arg in [0, 2 pi / T) and sort by (colour, re, im)."""
    colors = problem.colors if colors is None else colors
    perm = problem.model.auto.perm
    T = problem.T
    sector = 2 * math.pi / T
    out = []
    for x, c in zip(w, colors):
        x = complex(x)
        arg = cmath.phase(x) % (2 * math.pi)
        a = (-int(math.floor(arg / sector + 1e-9))) % T
        y = problem.omega ** a * x
        for _ in range(a):
            c = perm[c]
        out.append((c, y))
    out.sort(key=lambda t: (t[0], round(t[1].real, 8), round(t[1].imag, 8)))
    return tuple(t[1] for t in out), tuple(t[0] for t in out)


def _same_canonical(a, b, tol=1e-8):
    (wa, ca), (wb, cb) = a, b
    return ca == cb and all(abs(x - y) < tol * max(1.0, abs(x)) for x, y in zip(wa, wb))


def _images(problem, w):
    """All root tuples related to w by per-root twists and relabelling that keep the colour tuple."""
    cols = problem.colors
    T = problem.T
    out = []
    for shifts in itertools.product(range(T), repeat=problem.m):
        roots, colors = twist_image(problem, w, shifts)
        slots = {}
        for idx, c in enumerate(colors):
            slots.setdefault(c, []).append(idx)
        need = {}
        for idx, c in enumerate(cols):
            need.setdefault(c, []).append(idx)
        if {c: len(v) for c, v in slots.items()} != {c: len(v) for c, v in need.items()}:
            continue
        groups = [(need[c], slots[c]) for c in need]
        for choice in itertools.product(*(itertools.permutations(src) for _, src in groups)):
            new = [0j] * problem.m
            for (dst, _), src in zip(groups, choice):
                for d, s in zip(dst, src):
                    new[d] = roots[s]
            out.append(np.array(new))
    return out


# ---------------------------------------------------------------------------
# solver

@dataclass
class SolveOptions:
    starts: int = 64
    seed: int = 0
    max_iter: int = 200
    tol: float = 1e-12
    deflate: bool = True
    threads: int = 1
    max_solutions: int = None
    # admissible roots satisfy min_modulus < |w| / scale < max_modulus, scale = max(1, |z_i|)
    min_modulus: float = 1e-5
    max_modulus: float = 1e4


@dataclass
class Solution:
    roots: tuple
    colors: tuple
    residual_norm: float
    iterations: int
    canonical_roots: tuple = ()
    canonical_colors: tuple = ()

    def to_json(self):
        return {
            "colors": [c + 1 for c in self.colors],
            "roots": [[r.real, r.imag] for r in self.roots],
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "canonical": {
                "colors": [c + 1 for c in self.canonical_colors],
                "roots": [[r.real, r.imag] for r in self.canonical_roots],
            },
        }


@dataclass
class SolutionSet:
    problem: BetheProblem
    solutions: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def __len__(self):
        return len(self.solutions)

    def to_json(self):
        return {
            "colors": [c + 1 for c in self.problem.colors],
            "solutions": [s.to_json() for s in self.solutions],
            "failed_starts": len(self.failures),
        }


def _deflation(w, found, power=2):
    """Factor prod (1/|w - r|^p + 1) and its gradient in w (Wirtinger, holomorphic part dropped)."""
    M = 1.0
    grad = np.zeros(len(w), dtype=complex)
    for r in found:
        d = w - r
        n2 = float(np.vdot(d, d).real)
        f = n2 ** (-power / 2) + 1.0
        # d/dw of |d|^-p treating conj(d) fixed: -(p/2) |d|^(-p-2) conj(d)
        g = -(power / 2) * n2 ** (-power / 2 - 1) * np.conj(d)
        grad = grad * f + M * g
        M *= f
    return M, grad


def _scaled(problem, w, with_jacobian=True):
    """F_j = w_j R_j, which has the same admissible zeros but no zero at infinity."""
    R, J = _evaluate(problem, w, with_jacobian)
    if not with_jacobian:
        return w * R, None
    return w * R, w[:, None] * J + np.diag(R)


STALL_ITERATIONS = 25


def _newton(problem, w0, found, opts, bound):
    w = np.array(w0, dtype=complex)
    it = 0
    best, since_best = np.inf, 0
    with np.errstate(all="ignore"):
        for it in range(1, opts.max_iter + 1):
            F, JF = _scaled(problem, w)
            if not (np.all(np.isfinite(F)) and np.all(np.isfinite(JF))):
                return None, it
            if found:
                M, g = _deflation(w, found)
                G, JG = M * F, M * JF + np.outer(F, g)
            else:
                G, JG = F, JF
            try:
                step = np.linalg.solve(JG, -G)
            except np.linalg.LinAlgError:
                return None, it
            if not np.all(np.isfinite(step)):
                return None, it
            norm0 = np.abs(G).max()
            # give up on starts that stop making progress
            if norm0 < 0.5 * best:
                best, since_best = norm0, 0
            else:
                since_best += 1
                if since_best > STALL_ITERATIONS:
                    return None, it
            lam = 1.0
            while lam > 1e-6:
                trial = w + lam * step
                Ft = _scaled(problem, trial, False)[0]
                Gt = Ft * (_deflation(trial, found)[0] if found else 1.0)
                if np.all(np.isfinite(Gt)) and np.abs(Gt).max() < norm0 * (1 - 1e-4 * lam):
                    break
                lam /= 2
            w = w + lam * step
            if np.abs(w).max() > bound:
                return None, it
            if np.abs(step).max() * lam < 1e-14 * max(1.0, np.abs(w).max()):
                break
            if np.abs(residuals(problem, w)).max() < opts.tol * 1e-2:
                break
        # polish on the undeflated system
        for _ in range(20):
            R = residuals(problem, w)
            if not np.all(np.isfinite(R)):
                return None, it
            if np.abs(R).max() < opts.tol * 1e-3:
                break
            try:
                w = w + np.linalg.solve(jacobian(problem, w), -R)
            except np.linalg.LinAlgError:
                return None, it
    if not np.all(np.isfinite(w)) or np.abs(w).max() > bound:
        return None, it
    return w, it


def _starts(problem, rng, n):
    z = np.array([complex(x) for x in problem.model.z])
    center = z.mean() if len(z) else 0j
    spread = max(float(np.abs(z - center).max()) if len(z) else 1.0, 0.5)
    scale = max(float(np.abs(z).max()) if len(z) else 1.0, 1.0)
    for _ in range(n):
        w = []
        for _ in range(problem.m):
            r = int(rng.integers(problem.T))
            base = problem.omega ** r * (center + spread * (rng.normal() + 1j * rng.normal()))
            if rng.random() < 0.3:
                base = scale * (rng.normal() + 1j * rng.normal())
            w.append(base)
        yield np.array(w)


def solve(problem, options=None):
    """Multistart damped Newton with deflation; solutions deduplicated up to symmetry."""
    opts = options or SolveOptions()
    out = SolutionSet(problem)
    if problem.m == 0:
        out.solutions.append(Solution((), (), 0.0, 0, (), ()))
        return out
    rng = np.random.default_rng(opts.seed)
    found_images = []
    canon_seen = []
    starts = list(_starts(problem, rng, opts.starts))
    scale = max([1.0] + [abs(complex(z)) for z in problem.model.z])
    bound = opts.max_modulus * scale
    batch = max(1, opts.threads)
    pool = ThreadPoolExecutor(max_workers=batch) if batch > 1 else None
    try:
        for b in range(0, len(starts), batch):
            chunk = starts[b:b + batch]
            defl = list(found_images) if opts.deflate else []
            if pool is None:
                results = [_newton(problem, s, defl, opts, bound) for s in chunk]
            else:
                results = list(pool.map(lambda s: _newton(problem, s, defl, opts, bound), chunk))
            for (w, its), s in zip(results, chunk):
                if w is None:
                    out.failures.append({"start": [complex(x) for x in s], "reason": "no convergence"})
                    continue
                R = residuals(problem, w)
                norm = float(np.abs(R).max())
                scaled = float(np.abs(w * R).max())
                if not (norm < opts.tol and scaled < opts.tol):
                    out.failures.append({"start": [complex(x) for x in s], "reason": f"residual {max(norm, scaled):.3g}"})
                    continue
                mods = np.abs(w) / scale
                if mods.min() < opts.min_modulus or mods.max() > opts.max_modulus:
                    out.failures.append({"start": [complex(x) for x in s], "reason": "root escaped to 0 or infinity"})
                    continue
                bad = problem.check_roots(w)
                if bad:
                    out.failures.append({"start": [complex(x) for x in s], "reason": bad})
                    continue
                canon = canonicalize(problem, w)
                if any(_same_canonical(canon, c) for c in canon_seen):
                    continue
                canon_seen.append(canon)
                out.solutions.append(Solution(tuple(complex(x) for x in w), problem.colors, norm, its, *canon))
                found_images.extend(_images(problem, w))
            if opts.max_solutions and len(out.solutions) >= opts.max_solutions:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return out


# ---------------------------------------------------------------------------
# reduction to the classical system

def untwisted_reduction_check(problem, points=5, seed=0, tol=1e-10):
    """For sigma with trivial diagram part, residual(w) = T w^(T-1) * classical residual(w^T).

    The classical system has sites z^T, roots w^T and an extra origin weight
    nu = (lam0 - (T-1) rho)/T; nu = 0 exactly when sigma = id.
    """
    model, T = problem.model, problem.T
    auto, alg = model.auto, model.alg
    if any(p != i for i, p in enumerate(auto.perm)):
        raise BetheError("reduction requires a trivial diagram permutation")
    nu = (model.lam0 - alg.rho * (T - 1)) * Fraction(1, T)
    alpha = [alg.simple_root_weight(c) for c in range(alg.rank)]
    origin_terms = {c + 1: str(alg.inner(alpha[c], nu)) for c in set(problem.colors)}
    is_identity = not any(auto.phases)
    origin_zero = all(alg.inner(alpha[c], nu) == 0 for c in problem.colors)
    # the origin coefficient of the twisted system, (T-1)<a,rho> identity
    rng = np.random.default_rng(seed)
    zt = [complex(z) ** T for z in model.z]
    worst = 0.0
    for _ in range(points):
        w = rng.normal(size=problem.m) + 1j * rng.normal(size=problem.m)
        wt = w ** T
        for j in range(problem.m):
            c = problem.colors[j]
            cl = sum(complex(alg.inner(alpha[c], lam)) / (wt[j] - z) for lam, z in zip(model.weights, zt))
            cl -= sum(complex(alg.inner(alpha[c], alpha[problem.colors[k]])) / (wt[j] - wt[k])
                      for k in range(problem.m) if k != j)
            cl += complex(alg.inner(alpha[c], nu)) / wt[j]
            lhs = residual(problem, list(w), j)
            rhs = T * w[j] ** (T - 1) * cl
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    ok = worst < tol and (origin_zero or not is_identity)
    return {"ok": bool(ok), "max_rel_error": worst, "origin_coefficients": origin_terms,
            "origin_vanishes": bool(origin_zero), "sigma_is_identity": is_identity}
