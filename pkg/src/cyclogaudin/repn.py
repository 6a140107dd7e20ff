"""Verma modules in a PBW basis, irreducible quotients and tensor products.

A PBW monomial is a tuple of positive-root indices in non-increasing order,
standing for F_{b1} F_{b2} ... v with b1 >= b2 >= ...; root indices follow the
height-then-lex order of ``SimpleLieAlgebra.positive_roots``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _linalg
from .lie_core import LieElement, WeightVec

__all__ = [
    "VermaModule",
    "VermaState",
    "TensorState",
    "IrrepModule",
    "verma_act",
    "cartan_antiinvolution",
    "build_irrep",
    "tensor_act",
    "project_to_irrep",
]


def _accumulate(out, key, value):
    if key in out:
        v = out[key] + value
        if v == 0:
            del out[key]
        else:
            out[key] = v
    elif value != 0:
        out[key] = value


class VermaModule:
    """M_lam with a memoized action of basis elements on PBW monomials."""

    def __init__(self, alg, lam):
        self.alg = alg
        self.lam = WeightVec(lam)
        self._cache = {}
        self._root_weights = [alg.root_to_weight(r) for r in alg.positive_roots]

    def __repr__(self):
        return f"VermaModule({self.alg!r}, {tuple(str(c) for c in self.lam)})"

    def weight(self, mono):
        w = self.lam
        for r in mono:
            w = w - self._root_weights[r]
        return w

    def depth(self, mono):
        """lam - weight, in simple-root coordinates."""
        d = [0] * self.alg.rank
        for r in mono:
            for i, a in enumerate(self.alg.positive_roots[r]):
                d[i] += a
        return tuple(d)

    def act_basis(self, label, mono):
        """label . (PBW monomial) as a dict monomial -> coefficient."""
        key = (label, mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        kind, idx = label
        alg = self.alg
        out = {}
        if kind == "H":
            c = self.weight(mono)[idx]
            if c != 0:
                out[mono] = c
        elif kind == "F":
            if not mono or idx >= mono[0]:
                out[(idx,) + mono] = 1
            else:
                # F_s F_r1 rest = F_r1 (F_s rest) + [F_s, F_r1] rest
                head, rest = mono[0], mono[1:]
                for m, c in self.act_basis(label, rest).items():
                    for m2, c2 in self.act_basis(("F", head), m).items():
                        _accumulate(out, m2, c * c2)
                for lab, c in alg.table[(label, ("F", head))].items():
                    for m2, c2 in self.act_basis(lab, rest).items():
                        _accumulate(out, m2, c * c2)
        else:  # E
            if mono:
                head, rest = mono[0], mono[1:]
                for m, c in self.act_basis(label, rest).items():
                    for m2, c2 in self.act_basis(("F", head), m).items():
                        _accumulate(out, m2, c * c2)
                for lab, c in alg.table[(label, ("F", head))].items():
                    for m2, c2 in self.act_basis(lab, rest).items():
                        _accumulate(out, m2, c * c2)
        self._cache[key] = out
        return out

    def act(self, x, vec):
        """x . vec for a LieElement x and a dict vector."""
        out = {}
        for label, cx in x:
            for mono, cv in vec.items():
                k = cx * cv
                for m2, c in self.act_basis(label, mono).items():
                    _accumulate(out, m2, k * c if c != 1 else k)
        return out

    def highest(self):
        return VermaState(self, {(): 1})

    def shapovalov_mono(self, mono, vec):
        """Coefficient of v in iota(F_b1 ... F_bk) vec = E_bk ... E_b1 vec."""
        cur = vec
        for r in mono:
            cur = self.act(LieElement.basis(("E", r)), cur)
            if not cur:
                return 0
        return cur.get((), 0)

    def shapovalov(self, u, v):
        """Bilinear contravariant pairing <u, v> of dict vectors."""
        total = 0
        for mono, c in u.items():
            s = self.shapovalov_mono(mono, v)
            if s != 0:
                total = total + c * s
        return total


@lru_cache(maxsize=None)
def verma_module(alg, lam):
    return VermaModule(alg, WeightVec(lam))


class VermaState:
    """Vector in a Verma module (sparse dict over PBW monomials)."""

    __slots__ = ("module", "vec")

    def __init__(self, module, vec):
        self.module = module
        self.vec = {m: c for m, c in vec.items() if c != 0}

    def __add__(self, other):
        out = dict(self.vec)
        for m, c in other.vec.items():
            _accumulate(out, m, c)
        return VermaState(self.module, out)

    def __mul__(self, c):
        return VermaState(self.module, {m: v * c for m, v in self.vec.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * -1

    def __eq__(self, other):
        return isinstance(other, VermaState) and not (self - other).vec

    def __repr__(self):
        return f"VermaState({self.vec})"


def verma_act(x, s):
    return VermaState(s.module, s.module.act(x, s.vec))


def iota_element(x):
    """E_a <-> F_a, H fixed, linearly."""
    out = {}
    for (kind, idx), c in x:
        lab = ("F", idx) if kind == "E" else ("E", idx) if kind == "F" else ("H", idx)
        out[lab] = c
    return LieElement(out)


def cartan_antiinvolution(word):
    """iota on a word of Lie elements: reverse and swap E and F."""
    return [iota_element(x) for x in reversed(list(word))]


# ---------------------------------------------------------------------------
# irreducible quotients

class IrrepModule:
    """L_lam = M_lam / radical of the contravariant form, with generator matrices."""

    def __init__(self, alg, lam, cap=200):
        lam = WeightVec(lam)
        if not alg.is_dominant_integral(lam):
            raise ValueError(f"highest weight {tuple(map(str, lam))} is not dominant integral")
        expected = alg.weyl_dimension(lam)
        if expected > cap:
            raise ValueError(f"irrep dimension {expected} exceeds cap {cap}")
        self.alg = alg
        self.lam = lam
        self.verma = verma_module(alg, lam)
        V = self.verma
        # breadth-first over depth; each weight space spanned by F_i applied to the previous layer.
        # basis vector k is F_{i_k} applied to basis vector b_k, so the contravariant pairing with a
        # monomial obeys <F_i u, m> = <u, E_i m> and is memoized per (k, m).
        basis = [{(): 1}]
        self._parent = [None]
        self._phi = {}
        depths = [(0,) * alg.rank]
        index_by_depth = {depths[0]: [0]}
        gram_inv = {depths[0]: [[Fraction(1)]]}
        frontier = [depths[0]]
        while frontier:
            candidates = {}
            for d in frontier:
                for i in range(alg.rank):
                    nd = tuple(x + int(j == i) for j, x in enumerate(d))
                    for b in index_by_depth[d]:
                        vec = V.act(alg.simple_F(i), basis[b])
                        if vec:
                            candidates.setdefault(nd, []).append(((b, i), vec))
            frontier = []
            for nd in sorted(candidates):
                cands = candidates[nd]
                gram = [[self._pair_parent(pu, v) for _, v in cands] for pu, _ in cands]
                _, piv = _linalg.rref(gram)
                if not piv:
                    continue
                sub = [[gram[a][b] for b in piv] for a in piv]
                gram_inv[nd] = _linalg.inverse(sub)
                index_by_depth[nd] = list(range(len(basis), len(basis) + len(piv)))
                for p in piv:
                    self._parent.append(cands[p][0])
                    basis.append(cands[p][1])
                depths.extend([nd] * len(piv))
                frontier.append(nd)
        self.basis = basis
        self.depths = depths
        self.index_by_depth = index_by_depth
        self._gram_inv = gram_inv
        self.dim = len(basis)
        if self.dim != expected:
            raise AssertionError(f"irrep dimension {self.dim} != Weyl formula {expected}")
        self.weights = [self._weight(d) for d in depths]
        self.matrices = {}
        for label in alg.basis:
            M = np.zeros((self.dim, self.dim), dtype=object)
            M[:, :] = Fraction(0)
            for j, b in enumerate(basis):
                img = V.act(LieElement.basis(label), b)
                if img:
                    for i, c in self.coordinates(img).items():
                        M[i, j] = c
            self.matrices[label] = M

    def _phi_mono(self, k, mono):
        """<basis_k, mono> for the contravariant form."""
        key = (k, mono)
        hit = self._phi.get(key)
        if hit is not None:
            return hit
        if k == 0:
            val = 1 if mono == () else 0
        else:
            val = self._pair_parent(self._parent[k], {mono: 1})
        self._phi[key] = val
        return val

    def _pair_parent(self, parent, vec):
        """<F_i basis_b, vec> = <basis_b, E_i vec>."""
        b, i = parent
        total = 0
        label = ("E", self.alg.simple_root_indices[i])
        for mono, c in vec.items():
            for m2, c2 in self.verma.act_basis(label, mono).items():
                v = self._phi_mono(b, m2)
                if v:
                    total = total + c * c2 * v
        return total

    def _pair(self, k, vec):
        """<basis_k, vec>."""
        total = 0
        for mono, c in vec.items():
            v = self._phi_mono(k, mono)
            if v:
                total = total + c * v
        return total

    def _weight(self, depth):
        w = self.lam
        for i, k in enumerate(depth):
            if k:
                w = w - self.alg.simple_root_weight(i) * k
        return w

    def coordinates(self, vec):
        """Quotient-map coordinates of a Verma dict vector (any weights)."""
        by_depth = {}
        for mono, c in vec.items():
            by_depth.setdefault(self.verma.depth(mono), {})[mono] = c
        out = {}
        for d, part in by_depth.items():
            idx = self.index_by_depth.get(d)
            if idx is None:
                continue
            rhs = [self._pair(k, part) for k in idx]
            ginv = self._gram_inv[d]
            for row, k in zip(ginv, idx):
                c = 0
                for g, r in zip(row, rhs):
                    if g and r != 0:
                        c = c + g * r
                if c != 0:
                    out[k] = c
        return out

    def matrix(self, x, dtype=object):
        """Matrix of a LieElement (exact object array or complex array)."""
        if dtype is object:
            M = np.zeros((self.dim, self.dim), dtype=object)
            M[:, :] = Fraction(0)
            for label, c in x:
                M = M + self.matrices[label] * c
            return M
        M = np.zeros((self.dim, self.dim), dtype=complex)
        for label, c in x:
            M += self.matrices_c[label] * complex(c)
        return M

    @property
    def matrices_c(self):
        if not hasattr(self, "_mc"):
            self._mc = {k: v.astype(complex) for k, v in self.matrices.items()}
        return self._mc

    def __repr__(self):
        return f"IrrepModule({self.alg!r}, {tuple(str(c) for c in self.lam)}, dim={self.dim})"


@lru_cache(maxsize=None)
def _irrep_cached(alg, lam, cap):
    return IrrepModule(alg, lam, cap)


def build_irrep(alg, lam, cap=200):
    return _irrep_cached(alg, WeightVec(lam), cap)


# ---------------------------------------------------------------------------
# tensor products of Verma modules

class TensorState:
    """Sparse vector in M_lam1 (x) ... (x) M_lamN keyed by tuples of monomials."""

    __slots__ = ("modules", "vec")

    def __init__(self, modules, vec):
        self.modules = tuple(modules)
        self.vec = {k: c for k, c in vec.items() if c != 0}

    @classmethod
    def highest(cls, modules):
        return cls(modules, {((),) * len(modules): 1})

    @classmethod
    def product(cls, modules, factors, coeff=1):
        """coeff * (x)_i factors[i] for dict vectors."""
        out = {(): coeff}
        for f in factors:
            nxt = {}
            for k, c in out.items():
                for m, v in f.items():
                    nxt[k + (m,)] = c * v
            out = nxt
        return cls(modules, out)

    def __add__(self, other):
        out = dict(self.vec)
        for k, c in other.vec.items():
            _accumulate(out, k, c)
        return TensorState(self.modules, out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        return TensorState(self.modules, {k: v * c for k, v in self.vec.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TensorState) and not (self - other).vec

    def norm(self):
        return float(np.sqrt(sum(abs(complex(c)) ** 2 for c in self.vec.values())))

    def map_coeffs(self, f):
        return TensorState(self.modules, {k: f(v) for k, v in self.vec.items()})

    def __repr__(self):
        return f"TensorState({self.vec})"


def tensor_act(x, site, s):
    """x acting on tensor factor ``site`` (0-based)."""
    if not 0 <= site < len(s.modules):
        raise IndexError(f"site {site} out of range for {len(s.modules)} factors")
    mod = s.modules[site]
    out = {}
    for key, c in s.vec.items():
        img = mod.act(x, {key[site]: 1})
        for m, v in img.items():
            _accumulate(out, key[:site] + (m,) + key[site + 1:], c * v)
    return TensorState(s.modules, out)


def project_to_irrep(s, irreps):
    """Image under the quotient maps M_lam_i -> L_lam_i, as a dense vector (object or complex)."""
    dims = [L.dim for L in irreps]
    exact = all(not isinstance(c, (complex, float)) for c in s.vec.values())
    out = np.zeros(dims, dtype=object if exact else complex)
    if exact:
        out[...] = Fraction(0)
    coord_cache = [{} for _ in irreps]
    for key, c in s.vec.items():
        factors = []
        for site, mono in enumerate(key):
            cc = coord_cache[site].get(mono)
            if cc is None:
                cc = irreps[site].coordinates({mono: Fraction(1)})
                coord_cache[site][mono] = cc
            if not cc:
                break
            factors.append(cc)
        else:
            idx_lists = [[()]]
            for f in factors:
                idx_lists = [[p + (k,) for p in idx_lists[0] for k in f]]
            for idx in idx_lists[0]:
                v = c
                for site, k in enumerate(idx):
                    v = v * factors[site][k]
                out[idx] = out[idx] + v
    return out.reshape(-1)
