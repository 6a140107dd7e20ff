from fractions import Fraction

import pytest

from cyclogaudin.hamiltonians import ModelSpec, validate_model

# (label, series, rank, T, permutation, phases)
AUTOMORPHISMS = [
    ("sl2-id-T1", "A", 1, 1, (0,), (0,)),
    ("sl3-flip-T2", "A", 2, 2, (1, 0), (0, 0)),
    ("sl3-inner10-T3", "A", 2, 3, (0, 1), (1, 0)),
    ("sl4-flip-T2", "A", 3, 2, (2, 1, 0), (0, 0, 0)),
]


def make_model(series, rank, T, perm, phases, z, weights=None, modules="irrep"):
    z = tuple(Fraction(x) if isinstance(x, int) else x for x in z)
    if weights is None:
        weights = tuple(tuple(int(j == 0) for j in range(rank)) for _ in z)
    return validate_model(ModelSpec(series, rank, T, tuple(perm), tuple(phases), z, tuple(weights),
                                    (modules,) * len(z)))


def sl3_flip(z1=1, z2=2, modules="irrep"):
    return make_model("A", 2, 2, (1, 0), (0, 0), (Fraction(z1), Fraction(z2)), modules=modules)


@pytest.fixture
def sl3_model():
    return sl3_flip()
