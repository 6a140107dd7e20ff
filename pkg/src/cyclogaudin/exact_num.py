"""Exact arithmetic in the cyclotomic field Q(w), w a primitive T-th root of unity.

Elements are stored in the power basis 1, w, ..., w^(d-1), d = phi(T), with
``fractions.Fraction`` coordinates.  The complex embedding fixes
w -> exp(2 pi i / T).
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "CycloContext",
    "CycloNum",
    "cyclo_context",
    "omega_pow",
    "cyclo_arith",
    "mod_T_bracket",
    "to_complex",
    "is_exact",
    "scalar_to_complex",
    "cyclotomic_polynomial",
    "cyclotomic_sum_identities",
]


def _poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    """Quotient and remainder of coefficient lists (low degree first)."""
    a = [Fraction(x) for x in a]
    b = _poly_trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = Fraction(b[-1])
    while len(_poly_trim(a)) >= len(b):
        a = _poly_trim(a)
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for k, bk in enumerate(b):
            a[shift + k] -= c * bk
    return _poly_trim(q), _poly_trim(a)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _poly_trim([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(T):
    """Integer coefficients of Phi_T, low degree first."""
    if T < 1:
        raise ValueError("T must be a positive integer")
    num = [-1] + [0] * (T - 1) + [1]
    for d in range(1, T):
        if T % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


class CycloContext:
    """The field Q(w) for a fixed T."""

    def __init__(self, T):
        self.T = int(T)
        self.phi_T = cyclotomic_polynomial(self.T)
        self.degree = len(self.phi_T) - 1
        d = self.degree
        # reduced coordinates of w^k for 0 <= k < 2d - 1
        table = []
        for k in range(max(2 * d - 1, self.T)):
            vec = [0] * (k + 1)
            vec[k] = 1
            _, r = _poly_divmod(vec, self.phi_T)
            table.append(tuple(Fraction(r[j]) if j < len(r) else Fraction(0) for j in range(d)))
        self._powers = table
        self.zero = CycloNum(self, (Fraction(0),) * d)
        self.one = CycloNum(self, (Fraction(1),) + (Fraction(0),) * (d - 1))
        self.omega = CycloNum(self, self._powers[1 % self.T] if self.T > 1 else self.one.coeffs)
        self.omega_c = cmath.exp(2j * cmath.pi / self.T)

    def __repr__(self):
        return f"CycloContext(T={self.T})"

    def __reduce__(self):
        return (cyclo_context, (self.T,))

    def __call__(self, value):
        """Coerce an int, Fraction or CycloNum into this field."""
        if isinstance(value, CycloNum):
            if value.ctx is not self:
                raise ValueError("context mismatch")
            return value
        if isinstance(value, Rational):
            return CycloNum(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        raise TypeError(f"cannot coerce {type(value).__name__} into Q(w_{self.T})")


@lru_cache(maxsize=None)
def cyclo_context(T):
    return CycloContext(T)


class CycloNum:
    """Immutable element of Q(w)."""

    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)
        self._hash = None

    # coercion helpers
    def _coerce(self, other):
        if isinstance(other, CycloNum):
            if other.ctx is not self.ctx:
                if other.ctx.T == self.ctx.T:
                    return CycloNum(self.ctx, other.coeffs)
                raise ValueError("context mismatch")
            return other
        if isinstance(other, Rational):
            return self.ctx(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) + other
            return NotImplemented
        return CycloNum(self.ctx, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.ctx, tuple(-a for a in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) - other
            return NotImplemented
        return CycloNum(self.ctx, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            if other == 0:
                return self.ctx.zero
            return CycloNum(self.ctx, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) * other
            return NotImplemented
        d = self.ctx.degree
        if d == 1:
            return CycloNum(self.ctx, (self.coeffs[0] * o.coeffs[0],))
        out = [Fraction(0)] * d
        powers = self.ctx._powers
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(powers[i + j]):
                    if c:
                        out[k] += ab * c
        return CycloNum(self.ctx, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(w)")
        if self.ctx.degree == 1:
            return CycloNum(self.ctx, (1 / self.coeffs[0],))
        # extended Euclid: find s with s*a = 1 mod Phi_T
        r0, r1 = list(self.ctx.phi_T), _poly_trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        _, s = _poly_divmod([x / c for x in s1], self.ctx.phi_T)
        d = self.ctx.degree
        return CycloNum(self.ctx, tuple(Fraction(s[k]) if k < len(s) else Fraction(0) for k in range(d)))

    def __truediv__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) / other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(w)")
            return CycloNum(self.ctx, tuple(a / other for a in self.coeffs))
        return self * o.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (complex, float)):
            return other / complex(self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ctx.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) == other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash((self.ctx.T, self.coeffs))
        return self._hash

    def __complex__(self):
        w = self.ctx.omega_c
        z, p = 0j, 1 + 0j
        for c in self.coeffs:
            if c:
                z += float(c) * p
            p *= w
        return z

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*w^{k}")
        return "(" + (" + ".join(terms) or "0") + f")[T={self.ctx.T}]"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"({c})*w^{k}")
        return " + ".join(terms) or "0"


def omega_pow(ctx, k):
    """w^(k mod T) as an exact element."""
    k %= ctx.T
    if k < len(ctx._powers):
        return CycloNum(ctx, ctx._powers[k]) if ctx.T > 1 else ctx.one
    return ctx.omega ** k


def cyclo_arith(a, b, op):
    if a.ctx.T != b.ctx.T:
        raise ValueError("context mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero in Q(w)")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def mod_T_bracket(k, T):
    """Representative of k mod T in {0, ..., T-1}."""
    return k % T


def to_complex(a):
    """Embedding w -> exp(2 pi i/T)."""
    return complex(a)


def is_exact(x):
    return isinstance(x, (Rational, CycloNum))


def scalar_to_complex(x):
    return complex(x)


def cyclotomic_sum_identities(T, samples):
    """Exact checks of the root-of-unity sums used to untwist the Bethe equations.

    samples is a sequence of nonzero rational pairs (u, v) with u^T != v^T.
    Returns a list of (name, ok).
    """
    ctx = cyclo_context(T)
    w = [omega_pow(ctx, r) for r in range(T)]
    out = []
    lhs = sum((1 / (1 - w[r]) for r in range(1, T)), ctx.zero)
    out.append(("sum 1/(1-w^r) = (T-1)/2", lhs == Fraction(T - 1, 2)))
    for k in range(-T, 2 * T):
        lhs = sum(((omega_pow(ctx, -k * r) - 1) / (w[r] - 1) for r in range(1, T)), ctx.zero)
        out.append((f"sum (w^-kr - 1)/(w^r - 1) = [k], k={k}", lhs == k % T))
    for u, v in samples:
        u, v = Fraction(u), Fraction(v)
        lhs = sum((1 / (u - w[r] * v) for r in range(T)), ctx.zero)
        out.append((f"sum 1/(u - w^r v) at {u},{v}", lhs == T * u ** (T - 1) / (u ** T - v ** T)))
        for r in range(T):
            lhs = sum((omega_pow(ctx, -r * k) / (w[k] * u - v) for k in range(T)), ctx.zero)
            rhs = T * v ** (T - 1 - r % T) * u ** (r % T) / (u ** T - v ** T)
            out.append((f"sum w^-rk/(w^k u - v), r={r} at {u},{v}", lhs == rhs))
    return out
