"""Gamma-equivariant rational functions in partial-fraction form.

A function is a finite sum of terms c / (t - p)^n with coefficients in a
coefficient space (scalars, Lie elements or weights) on which Gamma acts.
Equivariance with index k means f(w t) = w^k (w . f)(t).
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Rational

from .automorphism import l_sigma
from .exact_num import CycloNum, omega_pow
from .lie_core import LieElement, WeightVec

__all__ = [
    "CoeffSpace",
    "EquivRatFunc",
    "gamma_orbit_sum",
    "expand_at",
    "residue_at",
    "pair_laurent",
    "residue_theorem_check",
    "globalize",
    "split_local_data",
    "find_witness",
    "scalar_residue_relation",
]

_TOL = 1e-10


def _exact(x):
    return isinstance(x, (Rational, CycloNum))


def _same(p, q):
    if _exact(p) and _exact(q):
        return p == q
    return abs(complex(p) - complex(q)) < _TOL


class CoeffSpace:
    """Coefficient space with its Gamma action and invariant pairing.

    kind is 'scalar', 'lie' (action sigma, pairing the invariant form) or
    'weight' (action L_sigma, pairing the form on weights).
    """

    def __init__(self, kind, auto):
        if kind not in ("scalar", "lie", "weight"):
            raise ValueError(f"unknown coefficient space {kind!r}")
        self.kind = kind
        self.auto = auto
        self.T = auto.T

    @property
    def zero(self):
        if self.kind == "lie":
            return LieElement()
        if self.kind == "weight":
            return WeightVec([0] * self.auto.alg.rank)
        return 0

    def act(self, c, power=1):
        if self.kind == "lie":
            return self.auto.apply(c, power)
        if self.kind == "weight":
            return l_sigma(self.auto, c, power)
        return c

    def pair(self, a, b):
        if self.kind == "lie":
            return self.auto.alg.form(a, b)
        if self.kind == "weight":
            return self.auto.alg.inner(a, b)
        return a * b

    def is_zero(self, c):
        if self.kind == "lie":
            return all((v == 0) if _exact(v) else abs(complex(v)) < _TOL for _, v in c)
        if self.kind == "weight":
            return all((v == 0) if _exact(v) else abs(complex(v)) < _TOL for v in c)
        return (c == 0) if _exact(c) else abs(complex(c)) < _TOL

    def basis(self):
        if self.kind == "lie":
            return [LieElement.basis(lab) for lab in self.auto.alg.basis]
        if self.kind == "weight":
            n = self.auto.alg.rank
            return [WeightVec([1 if j == i else 0 for j in range(n)]) for i in range(n)]
        return [1]

    def w(self, k, exact):
        return omega_pow(self.auto.ctx, k) if exact else self.auto.ctx.omega_c ** (k % self.T)


class EquivRatFunc:
    """sum over poles of coeff / (t - point)^order, vanishing at infinity."""

    def __init__(self, space, k, poles=None, allow_origin=False):
        self.space = space
        self.k = k % space.T
        self.allow_origin = allow_origin
        self._poles = []  # [point, {order: coeff}]
        for (p, n), c in (poles or {}).items() if isinstance(poles, dict) else (poles or ()):
            self._add(p, n, c)

    def _add(self, p, n, c):
        if n < 1:
            raise ValueError("pole orders must be positive")
        if _same(p, 0) and not self.allow_origin:
            raise ValueError("pole at 0 requires allow_origin")
        for entry in self._poles:
            if _same(entry[0], p):
                d = entry[1]
                d[n] = d[n] + c if n in d else c
                return
        self._poles.append([p, {n: c}])

    @property
    def poles(self):
        return [(p, dict(d)) for p, d in self._poles]

    def __add__(self, other):
        if other.k != self.k:
            raise ValueError("equivariance indices differ")
        out = EquivRatFunc(self.space, self.k, allow_origin=self.allow_origin or other.allow_origin)
        for f in (self, other):
            for p, d in f._poles:
                for n, c in d.items():
                    out._add(p, n, c)
        return out

    def __call__(self, t):
        total = self.space.zero
        for p, d in self._poles:
            for n, c in d.items():
                total = total + c * (1 / (t - p) ** n)
        return total

    def equivariance_defect(self, t):
        """f(w t) - w^k (w . f)(t); zero for an equivariant function."""
        exact = _exact(t) and all(_exact(p) for p, _ in self._poles)
        w = self.space.w(1, exact)
        lhs = self(w * t)
        rhs = self.space.act(self(t)) * self.space.w(self.k, exact)
        return lhs - rhs

    def __repr__(self):
        return f"EquivRatFunc(k={self.k}, poles={self.poles})"


def gamma_orbit_sum(A, x, n, k, auto=None, space=None, allow_origin=False):
    """sum_j w^(jk) (w^j . A) / (w^(-j) t - x)^n, equivariant of index k."""
    if space is None:
        if auto is None:
            raise ValueError("need an automorphism or a coefficient space")
        kind = "lie" if isinstance(A, LieElement) else "weight" if isinstance(A, WeightVec) else "scalar"
        space = CoeffSpace(kind, auto)
    if _same(x, 0) and not allow_origin:
        raise ValueError("x = 0 requires allow_origin")
    T = space.T
    exact = _exact(x)
    f = EquivRatFunc(space, k, allow_origin=allow_origin)
    Aj = A
    for j in range(T):
        # 1/(w^-j t - x)^n = w^(jn) / (t - w^j x)^n
        f._add(space.w(j, exact) * x, n, Aj * space.w(j * (k + n), exact))
        Aj = space.act(Aj)
    return f


def expand_at(f, x, order):
    """Laurent coefficients {j: c} of f at x for j up to ``order``."""
    out = {}
    for p, d in f._poles:
        if _same(p, x):
            for n, c in d.items():
                if -n <= order:
                    out[-n] = out[-n] + c if -n in out else c
            continue
        delta = x - p
        for n, c in d.items():
            for m in range(0, order + 1):
                coef = (-1) ** m * comb(n + m - 1, m) / delta ** (n + m)
                v = c * coef
                out[m] = out[m] + v if m in out else v
    return dict(sorted(out.items()))


def residue_at(f, x):
    return expand_at(f, x, -1).get(-1, f.space.zero)


def pair_laurent(space, a, b):
    """Residue of <a, b> for Laurent dicts a, b at one point."""
    total = 0
    for j, c in a.items():
        other = b.get(-1 - j)
        if other is not None:
            total = total + space.pair(c, other)
    return total


def residue_theorem_check(local_data, g, origin_data=None):
    """sum_i res <f_i, iota g> (+ (1/T) res_t <f_0, iota_t g>).

    local_data is a sequence of (x_i, {j: coeff}); origin_data a dict {j: coeff}.
    """
    space = g.space
    total = 0
    for x, fi in local_data:
        if not fi:
            continue
        need = -1 - min(fi)
        total = total + pair_laurent(space, fi, expand_at(g, x, need))
    if origin_data:
        need = -1 - min(origin_data)
        total = total + pair_laurent(space, origin_data, expand_at(g, 0, need)) / space.T
    return total


def globalize(space, local_data, k, origin_data=None):
    """The equivariant function whose pole parts at the x_i are those of the data."""
    f = EquivRatFunc(space, k, allow_origin=origin_data is not None)
    for x, fi in local_data:
        for j, c in fi.items():
            if j < 0:
                f = f + gamma_orbit_sum(c, x, -j, k, space=space)
    if origin_data:
        # an equivariant pole part at 0 is reproduced T times by the orbit sum
        for j, c in origin_data.items():
            if j < 0:
                f = f + gamma_orbit_sum(c * Fraction(1, space.T), 0, -j, k, space=space, allow_origin=True)
    return f


def split_local_data(space, local_data, k, order):
    """(global part, Taylor remainders) of a tuple of local Laurent data."""
    f = globalize(space, local_data, k)
    rest = []
    for x, fi in local_data:
        loc = expand_at(f, x, order)
        diff = {}
        for j in set(fi) | set(loc):
            if j > order:
                continue
            v = fi.get(j, space.zero) - loc.get(j, space.zero)
            if not space.is_zero(v):
                diff[j] = v
        rest.append((x, diff))
    return f, rest


def orbit_test_function(space, b, x, n, k):
    """sum_a a^(-k-1) (a . b)/(a^-1 t - x)^(n+1), the witness of index -k-1."""
    return gamma_orbit_sum(b, x, n + 1, -k - 1, space=space)


def find_witness(space, local_data, k, order):
    """A test function g with nonzero pairing if the data does not globalize, else None."""
    _, rest = split_local_data(space, local_data, k, order)
    for (x, diff) in rest:
        if any(j < 0 for j in diff):
            raise AssertionError("pole parts should cancel after globalizing")
        if not diff:
            continue
        n = min(diff)
        for b in space.basis():
            g = orbit_test_function(space, b, x, n, k)
            val = residue_theorem_check(local_data, g)
            if not ((val == 0) if _exact(val) else abs(complex(val)) < _TOL):
                return g, val
    return None


def scalar_residue_relation(h, x):
    """(res_{t-x} h, w^(-1-k) res_{t-w x} h) for a scalar equivariant h of index k."""
    exact = _exact(x) and all(_exact(p) for p, _ in h._poles)
    w = h.space.w(1, exact)
    return residue_at(h, x), h.space.w(-1 - h.k, exact) * residue_at(h, w * x)
