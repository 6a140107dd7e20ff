"""Small exact linear-algebra helpers over Q, backed by sympy's DomainMatrix."""
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_dm(rows):
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    data = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in rows]
    return DomainMatrix(data, (nrows, ncols), QQ)


def _from_qq(x):
    return Fraction(int(x.numerator), int(x.denominator))


def rref(rows):
    """Reduced row echelon form and pivot columns."""
    if not rows:
        return [], ()
    m, pivots = _to_dm(rows).rref()
    return [[_from_qq(x) for x in row] for row in m.to_list()], tuple(pivots)


def rank(rows):
    return len(rref(rows)[1])


def inverse(rows):
    inv = _to_dm(rows).inv()
    return [[_from_qq(x) for x in row] for row in inv.to_list()]


def solve(rows, rhs):
    """Solve A x = b for square invertible A over Q."""
    inv = inverse(rows)
    return [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) for row in inv]
