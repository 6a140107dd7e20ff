"""Classical simple Lie algebras in a Chevalley basis.

Each algebra is generated inside its defining matrix representation from
Chevalley generators.  Non-simple root vectors are fixed by

    E_a = [E_i, E_b] / (p + 1),   F_a = [F_b, F_i] / (p + 1),   a = b + a_i,

with i the smallest index such that a - a_i is a root and p the length of the
a_i-string below b.  This makes ``iota`` (E <-> F, H fixed, words reversed) an
anti-automorphism and gives [E_a, F_a] = H_a with a(H_a) = 2.  Afterwards the
matrices are discarded and only the integer structure constants are kept.

The invariant form is normalized so that long roots have squared length 2.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from numbers import Rational

from . import _linalg

__all__ = [
    "LieElement",
    "WeightVec",
    "SimpleLieAlgebra",
    "build_simple_lie_algebra",
    "bracket",
    "dual_pairs",
    "casimir_delta",
    "dual_coxeter",
]


class WeightVec(tuple):
    """Weight in fundamental-weight coordinates (rational, or cyclotomic/complex when evaluated)."""

    def __new__(cls, coords):
        return super().__new__(cls, (Fraction(c) if isinstance(c, (Rational, str)) else c for c in coords))

    def __add__(self, other):
        return WeightVec(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return WeightVec(a - b for a, b in zip(self, other))

    def __neg__(self):
        return WeightVec(-a for a in self)

    def __mul__(self, c):
        return WeightVec(a * c for a in self)

    __rmul__ = __mul__

    def __repr__(self):
        return "WeightVec(" + ", ".join(str(c) for c in self) + ")"


class LieElement:
    """Sparse linear combination of basis labels ('E', r), ('F', r), ('H', i)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def basis(cls, label, coeff=1):
        return cls({label: coeff})

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, label):
        return self.terms.get(label, 0)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return LieElement(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LieElement({k: -v for k, v in self.terms.items()})

    def __mul__(self, c):
        return LieElement({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def map_coeffs(self, f):
        return LieElement({k: f(v) for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (kind, idx), v in sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            parts.append(f"({v})*{kind}{idx}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# matrix realizations

def _unit(n, i, j, c=1):
    return {(i, j): Fraction(c)}


def _madd(a, b, c=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _mscale(a, c):
    return {k: v * c for k, v in a.items()}


def _mmul(a, b):
    rows = {}
    for (i, j), v in b.items():
        rows.setdefault(i, []).append((j, v))
    out = {}
    for (i, k), x in a.items():
        for j, y in rows.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + x * y
    return {k: v for k, v in out.items() if v}


def _mcomm(a, b):
    return _madd(_mmul(a, b), _mmul(b, a), -1)


def _mtrans(a):
    return {(j, i): v for (i, j), v in a.items()}


def _is_zero(a):
    return not a


def _raising_generators(series, n):
    """Chevalley raising generators E_1..E_n in the defining representation."""
    if series == "A":
        size = n + 1
        return size, [_unit(size, i, i + 1) for i in range(n)]
    if series == "B":
        size = 2 * n + 1
        mir = lambda k: size - 1 - k
        gens = [_madd(_unit(size, i, i + 1), _unit(size, mir(i + 1), mir(i)), -1) for i in range(n - 1)]
        gens.append(_madd(_unit(size, n - 1, n), _unit(size, n, n + 1), -1))
        return size, gens
    if series == "C":
        size = 2 * n
        mir = lambda k: size - 1 - k
        gens = [_madd(_unit(size, i, i + 1), _unit(size, mir(i + 1), mir(i)), -1) for i in range(n - 1)]
        gens.append(_unit(size, n - 1, n))
        return size, gens
    if series == "D":
        size = 2 * n
        mir = lambda k: size - 1 - k
        gens = [_madd(_unit(size, i, i + 1), _unit(size, mir(i + 1), mir(i)), -1) for i in range(n - 1)]
        gens.append(_madd(_unit(size, n - 2, n), _unit(size, mir(n), mir(n - 2)), -1))
        return size, gens
    raise ValueError(f"unsupported series {series!r}")


_EXPECTED_DIM = {
    "A": lambda n: n * (n + 2),
    "B": lambda n: n * (2 * n + 1),
    "C": lambda n: n * (2 * n + 1),
    "D": lambda n: n * (2 * n - 1),
}
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}


class SimpleLieAlgebra:
    """Root system, structure table and invariant form of a classical algebra."""

    def __init__(self, series, rank):
        series = str(series).upper()
        if series not in _MIN_RANK:
            raise ValueError(f"unsupported series {series!r}; expected one of A, B, C, D")
        if not isinstance(rank, int) or rank < _MIN_RANK[series]:
            raise ValueError(f"unsupported rank {rank!r} for series {series}")
        self.series = series
        self.rank = n = rank
        size, E = _raising_generators(series, n)
        # F_i = s E_i^T with s fixed by a_i(H_i) = 2
        F, H = [], []
        for e in E:
            h_raw = _mcomm(e, _mtrans(e))
            a = self._eigen(h_raw, e)
            F.append(_mscale(_mtrans(e), Fraction(2) / a))
            H.append(_mscale(h_raw, Fraction(2) / a))
        self.cartan = [[self._eigen(H[i], E[j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                assert _is_zero(_mcomm(E[i], F[j])) == (i != j)

        # positive roots by height, with recursive Chevalley normalization
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        root_mats = {r: (E[i], F[i]) for i, r in enumerate(simple)}
        decomp = {}
        layer = list(simple)
        while layer:
            nxt = {}
            for beta in layer:
                for i in range(n):
                    alpha = tuple(b + int(i == j) for j, b in enumerate(beta))
                    if alpha in root_mats or alpha in nxt:
                        continue
                    comm = _mcomm(E[i], root_mats[beta][0])
                    if _is_zero(comm):
                        continue
                    nxt[alpha] = (i, beta, comm)
            for alpha in sorted(nxt):
                i, beta, comm = nxt[alpha]
                # choose smallest i with alpha - a_i a root
                for i2 in range(n):
                    b2 = tuple(a - int(i2 == j) for j, a in enumerate(alpha))
                    if b2 in root_mats:
                        i, beta = i2, b2
                        break
                p = 0
                while tuple(b - (p + 1) * int(i == j) for j, b in enumerate(beta)) in root_mats:
                    p += 1
                e_a = _mscale(_mcomm(E[i], root_mats[beta][0]), Fraction(1, p + 1))
                f_a = _mscale(_mcomm(root_mats[beta][1], F[i]), Fraction(1, p + 1))
                root_mats[alpha] = (e_a, f_a)
                decomp[alpha] = (i, beta, p + 1)
            layer = sorted(nxt)
        roots = sorted(root_mats, key=lambda r: (sum(r), r))
        self.positive_roots = roots
        self.root_index = {r: k for k, r in enumerate(roots)}
        self.heights = [sum(r) for r in roots]
        self.simple_root_indices = [self.root_index[r] for r in simple]
        self.root_decomp = {self.root_index[a]: (i, self.root_index[b], s) for a, (i, b, s) in decomp.items()}

        # basis and matrices
        self.basis = [("H", i) for i in range(n)]
        self.basis += [("E", k) for k in range(len(roots))]
        self.basis += [("F", k) for k in range(len(roots))]
        if len(self.basis) != _EXPECTED_DIM[series](n):
            raise AssertionError("dimension mismatch in matrix realization")
        mats = {("H", i): H[i] for i in range(n)}
        for k, r in enumerate(roots):
            mats[("E", k)], mats[("F", k)] = root_mats[r]
        self._structure(mats, size)

        # symmetrized form on simple roots: long roots squared length 2
        self._setup_form()
        self._check_coroots(mats)

    @staticmethod
    def _eigen(h, e):
        c = _mcomm(h, e)
        key, x = min(e.items())
        return int(c.get(key, 0) / x)

    def weight_of_label(self, label):
        kind, idx = label
        if kind == "H":
            return (0,) * self.rank
        r = self.positive_roots[idx]
        return r if kind == "E" else tuple(-a for a in r)

    def _structure(self, mats, size):
        # pivot entry per root vector, diagonal solve for Cartan part
        pivots = {}
        for label, m in mats.items():
            if label[0] != "H":
                pivots[label] = min(m)
        diag_rows = [[mats[("H", i)].get((k, k), 0) for k in range(size)] for i in range(self.rank)]
        _, piv_cols = _linalg.rref(diag_rows)
        sub = [[diag_rows[i][c] for i in range(self.rank)] for c in piv_cols]
        sub_inv = _linalg.inverse(sub)
        by_weight = {}
        for label in self.basis:
            if label[0] != "H":
                by_weight[self.weight_of_label(label)] = label

        def decompose(m, weight):
            if all(w == 0 for w in weight):
                rhs = [m.get((c, c), 0) for c in piv_cols]
                coeffs = [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) for row in sub_inv]
                out = {("H", i): c for i, c in enumerate(coeffs) if c}
            else:
                label = by_weight.get(weight)
                if label is None:
                    out = {}
                else:
                    piv = pivots[label]
                    c = m.get(piv, 0) / mats[label][piv]
                    out = {label: c} if c else {}
            recon = {}
            for lab, c in out.items():
                recon = _madd(recon, mats[lab], c)
            assert recon == m, "bracket does not decompose in the basis"
            return out

        table = {}
        for a, b in product(self.basis, repeat=2):
            wa, wb = self.weight_of_label(a), self.weight_of_label(b)
            weight = tuple(x + y for x, y in zip(wa, wb))
            res = decompose(_mcomm(mats[a], mats[b]), weight)
            table[(a, b)] = {k: (int(v) if v.denominator == 1 else v) for k, v in res.items()}
        self.table = table

    def _setup_form(self):
        n = self.rank
        # d_i = <a_i, a_i> up to scale; C[i][j] = 2<a_i,a_j>/<a_i,a_i>
        d = [None] * n
        d[0] = Fraction(1)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                for j in range(n):
                    if d[i] is not None and d[j] is None and self.cartan[i][j] != 0:
                        # <a_i,a_j> = C[i][j] d_i/2 = C[j][i] d_j/2
                        d[j] = d[i] * self.cartan[i][j] / self.cartan[j][i]
                        changed = True
        scale = Fraction(2) / max(d)
        self.root_lengths_simple = [x * scale for x in d]  # <a_i, a_i>
        self.simple_form = [[self.cartan[i][j] * self.root_lengths_simple[i] / 2 for j in range(n)] for i in range(n)]
        # coroot Gram matrix <a_i^v, a_j^v> and its inverse <w_i, w_j>
        dl = self.root_lengths_simple
        self.coroot_form = [[4 * self.simple_form[i][j] / (dl[i] * dl[j]) for j in range(n)] for i in range(n)]
        self.fundamental_form = _linalg.inverse(self.coroot_form)
        self.root_lengths = [self.root_inner(r, r) for r in self.positive_roots]

    def _check_coroots(self, mats):
        for k, r in enumerate(self.positive_roots):
            h = self.table[(("E", k), ("F", k))]
            if LieElement(h) != self.coroot(k):
                raise AssertionError(f"[E,F] is not the coroot for root {r}")

    # -- roots and weights ----------------------------------------------
    @property
    def dim(self):
        return len(self.basis)

    @property
    def n_pos(self):
        return len(self.positive_roots)

    def root_inner(self, a, b):
        """<a, b> for roots given in simple-root coordinates."""
        n = self.rank
        return sum((a[i] * b[j] * self.simple_form[i][j] for i in range(n) for j in range(n)), Fraction(0))

    def root_to_weight(self, a):
        """Fundamental coordinates of a root: a(H_i) = sum_j a_j C[i][j]."""
        return WeightVec(sum(a[j] * self.cartan[i][j] for j in range(self.rank)) for i in range(self.rank))

    def simple_root_weight(self, i):
        return WeightVec(self.cartan[k][i] for k in range(self.rank))

    def inner(self, lam, mu):
        """<lam, mu> for weights in fundamental coordinates."""
        G = self.fundamental_form
        n = self.rank
        return sum((lam[i] * G[i][j] * mu[j] for i in range(n) for j in range(n) if lam[i] and mu[j]), 0)

    @property
    def rho(self):
        return WeightVec([1] * self.rank)

    @property
    def highest_root(self):
        return self.positive_roots[-1]

    def coroot(self, k):
        """H_a as a LieElement: a^v = sum_i a_i (<a_i,a_i>/<a,a>) a_i^v."""
        r = self.positive_roots[k]
        L = self.root_inner(r, r)
        return LieElement({("H", i): Fraction(r[i]) * self.root_lengths_simple[i] / L for i in range(self.rank) if r[i]})

    def weight_eval(self, lam, h):
        """lam(h) for h in the Cartan subalgebra (non-Cartan components ignored)."""
        return sum((lam[i] * h[("H", i)] for i in range(self.rank) if h[("H", i)] != 0), 0)

    def is_dominant_integral(self, lam):
        return all(isinstance(c, Fraction) and c.denominator == 1 and c >= 0 for c in map(_as_fraction, lam))

    def weyl_dimension(self, lam):
        lam = WeightVec(lam)
        num, den = Fraction(1), Fraction(1)
        lr = lam + self.rho
        for r in self.positive_roots:
            a = self.root_to_weight(r)
            num *= self.inner(lr, a)
            den *= self.inner(self.rho, a)
        return num / den

    # -- bracket and form -----------------------------------------------
    def bracket(self, x, y):
        out = {}
        for a, ca in x:
            for b, cb in y:
                for lab, c in self.table[(a, b)].items():
                    v = ca * cb * c
                    out[lab] = out[lab] + v if lab in out else v
        return LieElement(out)

    def form_basis(self, a, b):
        if a[0] == "H" and b[0] == "H":
            return self.coroot_form[a[1]][b[1]]
        if {a[0], b[0]} == {"E", "F"} and a[1] == b[1]:
            return 2 / self.root_lengths[a[1]]
        return Fraction(0)

    def form(self, x, y):
        total = 0
        for a, ca in x:
            for b, cb in y:
                f = self.form_basis(a, b)
                if f:
                    total = total + ca * cb * f
        return total

    def killing(self, x, y):
        """Trace of ad x ad y."""
        total = 0
        for lab in self.basis:
            z = self.bracket(x, self.bracket(y, LieElement.basis(lab)))
            c = z[lab]
            if c != 0:
                total = total + c
        return total

    def element(self, label, coeff=1):
        return LieElement.basis(label, coeff)

    def E(self, k):
        return LieElement.basis(("E", k))

    def F(self, k):
        return LieElement.basis(("F", k))

    def H(self, i):
        return LieElement.basis(("H", i))

    def simple_E(self, i):
        return self.E(self.simple_root_indices[i])

    def simple_F(self, i):
        return self.F(self.simple_root_indices[i])

    def __repr__(self):
        return f"SimpleLieAlgebra({self.series}{self.rank})"

    def __reduce__(self):
        return (build_simple_lie_algebra, (self.series, self.rank))


def _as_fraction(c):
    try:
        return Fraction(c)
    except TypeError:
        return c


@lru_cache(maxsize=None)
def build_simple_lie_algebra(series, rank):
    return SimpleLieAlgebra(series, rank)


def bracket(alg, x, y):
    return alg.bracket(x, y)


def dual_pairs(alg):
    """Pairs (I_a, I^a) with <I^a, I_b> = delta_ab."""
    pairs = []
    G = alg.fundamental_form
    for i in range(alg.rank):
        pairs.append((alg.H(i), LieElement({("H", j): G[i][j] for j in range(alg.rank)})))
    for k in range(alg.n_pos):
        half = alg.root_lengths[k] / 2
        pairs.append((alg.E(k), alg.F(k) * half))
        pairs.append((alg.F(k), alg.E(k) * half))
    return pairs


def casimir_delta(alg, lam):
    """Eigenvalue of sum_a I^a I_a / 2 on the irrep of highest weight lam."""
    lam = WeightVec(lam)
    return alg.inner(lam, lam) / 2 + alg.inner(lam, alg.rho)


def dual_coxeter(alg):
    """1 + sum of the coroot coefficients of the highest root."""
    theta = alg.highest_root
    L = alg.root_inner(theta, theta)
    return 1 + int(sum(Fraction(a) * alg.root_lengths_simple[i] / L for i, a in enumerate(theta)))
