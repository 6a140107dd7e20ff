import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclogaudin.lie_core import LieElement, build_simple_lie_algebra
from cyclogaudin.repn import (
    TensorState,
    VermaState,
    build_irrep,
    cartan_antiinvolution,
    project_to_irrep,
    tensor_act,
    verma_act,
    verma_module,
)

VERMA_ALGEBRAS = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 2), ("B", 3), ("D", 4)]


def type_a_dimension(lam):
    """Weyl product formula for sl_(n+1) written over pairs i < j."""
    n = len(lam)
    num = den = 1
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            num *= sum(lam[i:j]) + (j - i)
            den *= j - i
    return num // den


KNOWN_DIMS = {
    ("B", 2): {(1, 0): 5, (0, 1): 4, (0, 2): 10, (2, 0): 14},
    ("C", 2): {(1, 0): 4, (0, 1): 5, (2, 0): 10, (0, 2): 14},
    ("B", 3): {(1, 0, 0): 7, (0, 0, 1): 8, (0, 1, 0): 21},
    ("C", 3): {(1, 0, 0): 6, (0, 1, 0): 14, (0, 0, 1): 14},
    ("D", 4): {(1, 0, 0, 0): 8, (0, 0, 1, 0): 8, (0, 0, 0, 1): 8, (0, 1, 0, 0): 28},
}


def random_weight(alg, rng):
    return tuple(Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(alg.rank))


@pytest.mark.parametrize("series,n", VERMA_ALGEBRAS)
def test_verma_action_is_a_representation(series, n):
    alg = build_simple_lie_algebra(series, n)
    rng = random.Random(7)
    lam = random_weight(alg, rng)
    M = verma_module(alg, lam)
    basis = [LieElement.basis(lab) for lab in alg.basis]
    pairs = list(itertools.product(basis, repeat=2))
    if len(pairs) > 300:
        pairs = rng.sample(pairs, 300)
    for _ in range(3):
        vec = {}
        for _ in range(3):
            mono = tuple(sorted((rng.randrange(alg.n_pos) for _ in range(rng.randint(0, 3))), reverse=True))
            vec[mono] = vec.get(mono, 0) + Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        s = VermaState(M, vec)
        for x, y in pairs:
            lhs = verma_act(x, verma_act(y, s)) - verma_act(y, verma_act(x, s))
            assert lhs == verma_act(alg.bracket(x, y), s)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=0, max_size=4), st.integers(-4, 4), st.integers(-4, 4))
def test_cartan_acts_by_weight(word, l1, l2):
    alg = build_simple_lie_algebra("A", 2)
    M = verma_module(alg, (l1, l2))
    mono = tuple(sorted(word, reverse=True))
    for i in range(alg.rank):
        out = M.act(alg.H(i), {mono: 1})
        assert out.get(mono, 0) == M.weight(mono)[i] and len(out) <= 1


def test_verma_highest_vector_is_singular():
    alg = build_simple_lie_algebra("A", 3)
    M = verma_module(alg, (2, -1, Fraction(1, 2)))
    for k in range(alg.n_pos):
        assert M.act(alg.E(k), {(): 1}) == {}


@pytest.mark.parametrize("series,n", [("A", 1), ("A", 2), ("A", 3), ("A", 4)])
def test_irrep_dimensions_type_a(series, n):
    alg = build_simple_lie_algebra(series, n)
    for lam in itertools.product(range(4), repeat=n):
        d = type_a_dimension(lam)
        assert alg.weyl_dimension(lam) == d
        if d <= 50:
            assert build_irrep(alg, lam, cap=50).dim == d


@pytest.mark.parametrize("key", list(KNOWN_DIMS))
def test_irrep_dimensions_known_values(key):
    alg = build_simple_lie_algebra(*key)
    for lam, d in KNOWN_DIMS[key].items():
        assert alg.weyl_dimension(lam) == d
        assert build_irrep(alg, lam).dim == d


@pytest.mark.parametrize("series,n,lam", [("A", 2, (1, 1)), ("B", 2, (0, 1)), ("C", 2, (1, 0)), ("A", 3, (0, 1, 0))])
def test_irrep_matrices_represent_the_bracket(series, n, lam):
    alg = build_simple_lie_algebra(series, n)
    L = build_irrep(alg, lam)
    for a, b in itertools.product(alg.basis, repeat=2):
        x, y = LieElement.basis(a), LieElement.basis(b)
        Mx, My = L.matrix(x), L.matrix(y)
        assert (Mx.dot(My) - My.dot(Mx) == L.matrix(alg.bracket(x, y))).all()


def test_irrep_quotient_kills_singular_vector():
    alg = build_simple_lie_algebra("A", 2)
    L = build_irrep(alg, (2, 1))
    f1 = alg.simple_F(0)
    vec = {(): 1}
    # F1 v and F1^2 v survive, F1^3 v is singular since lam_1 = 2
    for k in range(2):
        vec = L.verma.act(f1, vec)
        assert L.coordinates(vec), k
    vec = L.verma.act(f1, vec)
    assert vec and not L.coordinates(vec)


@pytest.mark.parametrize("series,n,lam", [("A", 2, (1, 1)), ("B", 2, (1, 1)), ("D", 4, (0, 1, 0, 0))])
def test_irrep_basis_coordinates_and_contravariance(series, n, lam):
    alg = build_simple_lie_algebra(series, n)
    L = build_irrep(alg, lam)
    for k, b in enumerate(L.basis):
        assert L.coordinates(b) == {k: 1}
    # the memoized pairing agrees with the direct contravariant form
    rng = random.Random(3)
    for _ in range(20):
        k = rng.randrange(L.dim)
        j = rng.randrange(L.dim)
        if L.depths[k] == L.depths[j]:
            assert L._pair(k, L.basis[j]) == L.verma.shapovalov(L.basis[k], L.basis[j])
    for i in range(n):
        E, F = alg.simple_E(i), alg.simple_F(i)
        for u, w in rng.sample(list(itertools.product(L.basis, repeat=2)), 30):
            assert L.verma.shapovalov(L.verma.act(F, u), w) == L.verma.shapovalov(u, L.verma.act(E, w))


def test_irrep_rejects_bad_weights():
    alg = build_simple_lie_algebra("A", 2)
    with pytest.raises(ValueError):
        build_irrep(alg, (-1, 0))
    with pytest.raises(ValueError):
        build_irrep(alg, (Fraction(1, 2), 0))
    with pytest.raises(ValueError):
        build_irrep(alg, (9, 9), cap=50)


def test_cartan_antiinvolution_reverses_and_swaps():
    alg = build_simple_lie_algebra("A", 2)
    word = [alg.E(0), alg.F(2), alg.H(1)]
    assert cartan_antiinvolution(word) == [alg.H(1), alg.E(2), alg.F(0)]


def test_tensor_states_and_projection():
    alg = build_simple_lie_algebra("A", 1)
    mods = (verma_module(alg, (1,)), verma_module(alg, (2,)))
    hw = TensorState.highest(mods)
    f = alg.simple_F(0)
    s = tensor_act(f, 0, hw) + tensor_act(f, 1, hw) * 2
    assert s.vec == {((0,), ()): 1, ((), (0,)): 2}
    irreps = [build_irrep(alg, (1,)), build_irrep(alg, (2,))]
    v = project_to_irrep(s, irreps)
    assert v.shape == (6,)
    assert v[1 * 3 + 0] == 1 and v[0 * 3 + 1] == 2
    # F^2 on the spin-1/2 factor dies in the quotient
    assert not np.any(project_to_irrep(tensor_act(f, 0, tensor_act(f, 0, hw)), irreps))
    with pytest.raises(IndexError):
        tensor_act(f, 2, hw)
    prod = TensorState.product(mods, [{(): 2}, {(0,): 3}])
    assert prod.vec == {((), (0,)): 6} and math.isclose(prod.norm(), 6)
