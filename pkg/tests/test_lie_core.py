import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from cyclogaudin.lie_core import LieElement, WeightVec, build_simple_lie_algebra, casimir_delta, dual_coxeter, dual_pairs

ALGEBRAS = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4), ("D", 5)]
SMALL = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 2), ("C", 3), ("B", 3)]


def euclidean_simple_roots(series, n):
    """Simple roots in an orthonormal basis (independent of the matrix realizations)."""
    e = np.eye(n + 1 if series == "A" else n)
    roots = [e[i] - e[i + 1] for i in range(n - 1)]
    if series == "A":
        roots.append(e[n - 1] - e[n])
    elif series == "B":
        roots.append(e[n - 1])
    elif series == "C":
        roots.append(2 * e[n - 1])
    else:
        roots.append(e[n - 2] + e[n - 1])
    return roots


def euclidean_positive_roots(series, n):
    m = n + 1 if series == "A" else n
    e = np.eye(m)
    out = [e[i] - e[j] for i in range(m) for j in range(i + 1, m)]
    if series != "A":
        out += [e[i] + e[j] for i in range(m) for j in range(i + 1, m)]
    if series == "B":
        out += [e[i] for i in range(m)]
    if series == "C":
        out += [2 * e[i] for i in range(m)]
    return out


def in_simple_coordinates(series, n, vecs):
    S = np.array(euclidean_simple_roots(series, n)).T
    out = set()
    for v in vecs:
        c, *_ = np.linalg.lstsq(S, v, rcond=None)
        out.add(tuple(int(round(x)) for x in c))
    return out


@pytest.mark.parametrize("series,n", ALGEBRAS)
def test_dimensions_and_dual_coxeter(series, n):
    alg = build_simple_lie_algebra(series, n)
    dim = {"A": n * (n + 2), "B": n * (2 * n + 1), "C": n * (2 * n + 1), "D": n * (2 * n - 1)}[series]
    hv = {"A": n + 1, "B": 2 * n - 1, "C": n + 1, "D": 2 * n - 2}[series]
    assert alg.dim == dim
    assert dual_coxeter(alg) == hv


@pytest.mark.parametrize("series,n", ALGEBRAS)
def test_cartan_matrix_and_roots_match_euclidean_model(series, n):
    alg = build_simple_lie_algebra(series, n)
    simple = euclidean_simple_roots(series, n)
    for i in range(n):
        for j in range(n):
            expected = 2 * simple[i] @ simple[j] / (simple[i] @ simple[i])
            assert alg.cartan[i][j] == int(round(expected))
    assert set(alg.positive_roots) == in_simple_coordinates(series, n, euclidean_positive_roots(series, n))
    # long roots have squared length 2
    scale = 2 / max(v @ v for v in euclidean_positive_roots(series, n))
    for k, r in enumerate(alg.positive_roots):
        v = sum(c * s for c, s in zip(r, simple))
        assert alg.root_lengths[k] == Fraction(round(scale * (v @ v) * 2), 2)
    heights = [sum(r) for r in alg.positive_roots]
    assert heights == sorted(heights)


@pytest.mark.parametrize("series,n", SMALL)
def test_jacobi_identity_exact(series, n):
    alg = build_simple_lie_algebra(series, n)
    basis = [LieElement.basis(lab) for lab in alg.basis]
    for x, y, z in itertools.combinations(basis, 3):
        total = alg.bracket(x, alg.bracket(y, z)) + alg.bracket(y, alg.bracket(z, x)) + alg.bracket(z, alg.bracket(x, y))
        assert total.is_zero()


@pytest.mark.parametrize("series,n", [("D", 4), ("A", 4), ("B", 3)])
def test_jacobi_identity_sampled(series, n):
    alg = build_simple_lie_algebra(series, n)
    basis = [LieElement.basis(lab) for lab in alg.basis]
    rng = random.Random(1)
    for _ in range(400):
        x, y, z = rng.sample(basis, 3)
        total = alg.bracket(x, alg.bracket(y, z)) + alg.bracket(y, alg.bracket(z, x)) + alg.bracket(z, alg.bracket(x, y))
        assert total.is_zero()


@pytest.mark.parametrize("series,n", SMALL)
def test_antisymmetry_and_form_invariance(series, n):
    alg = build_simple_lie_algebra(series, n)
    basis = [LieElement.basis(lab) for lab in alg.basis]
    for x, y in itertools.product(basis, repeat=2):
        assert (alg.bracket(x, y) + alg.bracket(y, x)).is_zero()
        assert alg.form(x, y) == alg.form(y, x)
    for x, y, z in itertools.product(basis, repeat=3):
        assert alg.form(alg.bracket(x, y), z) == alg.form(x, alg.bracket(y, z))


@pytest.mark.parametrize("series,n", SMALL + [("D", 4)])
def test_killing_form_normalization(series, n):
    alg = build_simple_lie_algebra(series, n)
    hv = dual_coxeter(alg)
    labels = alg.basis[: n + 2] + [("F", 0), ("F", alg.n_pos - 1), ("E", alg.n_pos - 1)]
    for a, b in itertools.product(labels, repeat=2):
        x, y = LieElement.basis(a), LieElement.basis(b)
        assert alg.killing(x, y) == 2 * hv * alg.form(x, y)


@pytest.mark.parametrize("series,n", ALGEBRAS)
def test_dual_bases(series, n):
    alg = build_simple_lie_algebra(series, n)
    pairs = dual_pairs(alg)
    assert len(pairs) == alg.dim
    for i, (low_i, _) in enumerate(pairs):
        for j, (_, up_j) in enumerate(pairs):
            assert alg.form(up_j, low_i) == (1 if i == j else 0)


@pytest.mark.parametrize("series,n", SMALL)
def test_casimir_is_central(series, n):
    # sum_a [x, I^a] I_a + I^a [x, I_a] = 0 in U(g), checked via ad-invariance of the tensor
    alg = build_simple_lie_algebra(series, n)
    pairs = dual_pairs(alg)
    for lab in alg.basis:
        x = LieElement.basis(lab)
        tensor = {}
        for low, up in pairs:
            for (a, ca) in alg.bracket(x, up):
                for (b, cb) in low:
                    tensor[(a, b)] = tensor.get((a, b), 0) + ca * cb
            for (a, ca) in up:
                for (b, cb) in alg.bracket(x, low):
                    tensor[(a, b)] = tensor.get((a, b), 0) + ca * cb
        assert all(v == 0 for v in tensor.values())


def test_casimir_delta_values():
    alg = build_simple_lie_algebra("A", 1)
    # spin j: j(j+1) for half the Casimir with long roots of length 2
    for twice_j in range(5):
        j = Fraction(twice_j, 2)
        assert casimir_delta(alg, (twice_j,)) == j * (j + 1)
    alg = build_simple_lie_algebra("A", 2)
    assert casimir_delta(alg, alg.root_to_weight(alg.highest_root)) == dual_coxeter(alg)


@pytest.mark.parametrize("series,n", [("A", 0), ("B", 1), ("C", 1), ("D", 3), ("E", 6), ("G", 2)])
def test_unsupported_algebras_rejected(series, n):
    with pytest.raises(ValueError):
        build_simple_lie_algebra(series, n)


def test_weight_vectors():
    a = WeightVec([1, 2])
    assert a + a == WeightVec([2, 4]) and a - a == WeightVec([0, 0]) and -a == WeightVec([-1, -2])
    assert a * Fraction(1, 2) == WeightVec([Fraction(1, 2), 1])
