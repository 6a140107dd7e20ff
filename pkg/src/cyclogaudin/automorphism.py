"""Finite-order automorphisms preserving the Cartan decomposition.

An automorphism is specified on Chevalley generators by a diagram symmetry
``perm`` and phases w^(k_i):

    sigma(E_i) = w^(k_i) E_perm(i),   sigma(F_i) = w^(-k_i) F_perm(i).

Phases of non-simple root vectors follow by pushing sigma through the
brackets that define them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_num import CycloNum, cyclo_context, omega_pow
from .lie_core import LieElement, WeightVec

__all__ = [
    "AutoSpec",
    "AutoTable",
    "AutomorphismError",
    "build_automorphism",
    "l_sigma",
    "projector_pi",
    "lambda0",
    "lambda0_projection_check",
]


class AutomorphismError(ValueError):
    pass


@dataclass(frozen=True)
class AutoSpec:
    T: int
    permutation: tuple  # 0-based node images
    phases: tuple  # exponents k_i

    @classmethod
    def identity(cls, rank, T=1):
        return cls(T, tuple(range(rank)), (0,) * rank)


class AutoTable:
    """The automorphism sigma together with derived data."""

    def __init__(self, alg, spec, verify=True):
        self.alg = alg
        self.spec = spec
        self.T = T = int(spec.T)
        if T < 1:
            raise AutomorphismError("T must be positive")
        n = alg.rank
        perm = tuple(int(p) for p in spec.permutation)
        phases = tuple(int(k) % T for k in spec.phases)
        if sorted(perm) != list(range(n)) or len(phases) != n:
            raise AutomorphismError(f"permutation {perm} / phases {phases} do not match rank {n}")
        C = alg.cartan
        if any(C[perm[i]][perm[j]] != C[i][j] for i in range(n) for j in range(n)):
            raise AutomorphismError(f"permutation {perm} is not a Dynkin diagram symmetry")
        self.perm = perm
        self.inv_perm = tuple(perm.index(i) for i in range(n))
        self.phases = phases
        self.ctx = ctx = cyclo_context(T)
        self.omega = ctx.omega

        roots = alg.positive_roots
        self.root_perm = [alg.root_index[tuple(r[self.inv_perm[j]] for j in range(n))] for r in roots]
        tau = [None] * alg.n_pos
        tau_f = [None] * alg.n_pos
        for i, k in enumerate(alg.simple_root_indices):
            tau[k] = omega_pow(ctx, phases[i])
            tau_f[k] = omega_pow(ctx, -phases[i])
        for k in range(alg.n_pos):
            if tau[k] is not None:
                continue
            i, b, scale = alg.root_decomp[k]
            si = alg.simple_root_indices[perm[i]]
            sb = self.root_perm[b]
            target = self.root_perm[k]
            ne = alg.table[(("E", si), ("E", sb))].get(("E", target), 0)
            nf = alg.table[(("F", sb), ("F", si))].get(("F", target), 0)
            tau[k] = tau[alg.simple_root_indices[i]] * tau[b] * Fraction(ne, 1) / scale
            tau_f[k] = tau_f[alg.simple_root_indices[i]] * tau_f[b] * Fraction(nf, 1) / scale
        self.tau = tau
        self.tau_f = tau_f
        self.tau_c = [complex(t) for t in tau]
        self.tau_f_c = [complex(t) for t in tau_f]
        if verify:
            self._check()
        self.is_inner = all(p == i for i, p in enumerate(perm))
        self.chi = None
        if self.is_inner:
            self.chi = [sum(a * k for a, k in zip(r, phases)) % T for r in roots]
            for r, c, t in zip(roots, self.chi, tau):
                assert omega_pow(ctx, c) == t

    # -- action on g ------------------------------------------------------
    def _apply_once(self, x, exact):
        out = {}
        for (kind, idx), c in x:
            if kind == "H":
                lab, f = ("H", self.perm[idx]), 1
            elif kind == "E":
                lab, f = ("E", self.root_perm[idx]), (self.tau[idx] if exact else self.tau_c[idx])
            else:
                lab, f = ("F", self.root_perm[idx]), (self.tau_f[idx] if exact else self.tau_f_c[idx])
            v = c * f
            out[lab] = out[lab] + v if lab in out else v
        return LieElement(out)

    def apply(self, x, power=1, exact=None):
        """sigma^power(x); numeric phases are used when x has complex coefficients."""
        if exact is None:
            exact = not any(isinstance(c, (complex, float)) for _, c in x)
        power %= self.T
        for _ in range(power):
            x = self._apply_once(x, exact)
        return x

    def _check(self):
        alg = self.alg
        for k in range(alg.n_pos):
            if self.tau[k] * self.tau_f[k] != 1:
                raise AutomorphismError("phases of E and F root vectors are not inverse")
        for a in alg.basis:
            for b in alg.basis:
                lhs = self.apply(LieElement(alg.table[(a, b)]))
                rhs = alg.bracket(self.apply(LieElement.basis(a)), self.apply(LieElement.basis(b)))
                if lhs != rhs:
                    raise AutomorphismError(f"sigma does not preserve the bracket on {a}, {b}")
        for a in alg.basis:
            x = LieElement.basis(a)
            y = x
            for _ in range(self.T):
                y = self._apply_once(y, True)
            if y != x:
                raise AutomorphismError(f"the order of sigma does not divide T={self.T}")

    def order(self):
        """True order of sigma (divides T)."""
        for d in range(1, self.T + 1):
            if self.T % d:
                continue
            if all(self.apply(LieElement.basis(a), d) == LieElement.basis(a) for a in self.alg.basis):
                return d
        return self.T

    def omega_pow(self, k, exact=True):
        return omega_pow(self.ctx, k) if exact else self.ctx.omega_c ** (k % self.T)

    def __repr__(self):
        return f"AutoTable({self.alg!r}, T={self.T}, perm={self.perm}, phases={self.phases})"


def build_automorphism(alg, spec):
    return AutoTable(alg, spec)


def l_sigma(table, lam, power=1):
    """(L_sigma^power lam)_i = lam_{perm^-power(i)}."""
    lam = WeightVec(lam)
    for _ in range(power % table.T):
        lam = WeightVec(lam[table.inv_perm[i]] for i in range(len(lam)))
    return lam


def projector_pi(table, k, x):
    """(1/T) sum_m w^(-mk) sigma^m x."""
    exact = not any(isinstance(c, (complex, float)) for _, c in x)
    out = LieElement()
    y = x
    for m in range(table.T):
        out = out + y * table.omega_pow(-m * k, exact)
        y = table.apply(y, 1, exact)
    return out * Fraction(1, table.T)


def lambda0(table):
    """The weight lam0(h) = sum_r 1/(1-w^r) sum_{a: sigma^r a = a} prod_p tau_{sigma^p a}^-1 a(h)."""
    alg, T = table.alg, table.T
    total = [table.ctx.zero] * alg.rank
    for r in range(1, T):
        c = 1 / (1 - table.omega_pow(r))
        for k in range(alg.n_pos):
            orbit = [k]
            for _ in range(r - 1):
                orbit.append(table.root_perm[orbit[-1]])
            if table.root_perm[orbit[-1]] != k:
                continue
            phase = table.ctx.one
            for q in orbit:
                phase = phase * table.tau_f[q]
            a = alg.root_to_weight(alg.positive_roots[k])
            for i in range(alg.rank):
                if a[i]:
                    total[i] = total[i] + c * phase * a[i]
    for v in total:
        if not v.is_rational():
            raise AutomorphismError(f"lambda0 has a non-rational coordinate {v!r}")
    return WeightVec(v.to_fraction() for v in total)


def lambda0_projection_check(table):
    """lam0(Pi_0 h) == lam0(h) for every Cartan generator h, exactly."""
    alg = table.alg
    lam = lambda0(table)
    rows = []
    for i in range(alg.rank):
        h = LieElement.basis(("H", i))
        lhs = alg.weight_eval(lam, projector_pi(table, 0, h))
        rows.append((i, lhs, lam[i]))
    return {"ok": all(a == b for _, a, b in rows), "values": [[str(a), str(b)] for _, a, b in rows]}
