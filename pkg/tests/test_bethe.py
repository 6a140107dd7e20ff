import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import AUTOMORPHISMS, make_model, sl3_flip
from cyclogaudin.bethe import (
    BetheError,
    BetheProblem,
    SolveOptions,
    canonicalize,
    jacobian,
    residual,
    residuals,
    solve,
    twist_image,
    untwisted_reduction_check,
)
from cyclogaudin.repro import closed_form_roots

FAST = SolveOptions(starts=24, seed=1)


def random_roots(rng, m):
    return rng.normal(size=m) + 1j * rng.normal(size=m) + 0.3


@pytest.mark.parametrize("label,series,rank,T,perm,phases", AUTOMORPHISMS)
def test_vectorised_residuals_match_termwise(label, series, rank, T, perm, phases):
    model = make_model(series, rank, T, perm, phases, (Fraction(1), Fraction(5, 2)))
    rng = np.random.default_rng(2)
    colors = tuple(rng.integers(0, rank, size=3))
    problem = BetheProblem(model, colors)
    w = random_roots(rng, 3)
    vec = residuals(problem, w)
    for j in range(3):
        assert abs(vec[j] - residual(problem, list(w), j)) < 1e-12 * max(1, abs(vec[j]))


def test_exact_residual_agrees_with_complex():
    problem = BetheProblem(sl3_flip(1, 2), (0, 1))
    w = [Fraction(1, 3), Fraction(-7, 5)]
    for j in range(2):
        ex = residual(problem, w, j)
        assert abs(complex(ex) - complex(residuals(problem, [complex(x) for x in w])[j])) < 1e-12


@pytest.mark.parametrize("label,series,rank,T,perm,phases", AUTOMORPHISMS)
def test_jacobian_matches_finite_differences(label, series, rank, T, perm, phases):
    model = make_model(series, rank, T, perm, phases, (Fraction(1), Fraction(-3, 2)))
    rng = np.random.default_rng(7)
    problem = BetheProblem(model, tuple(rng.integers(0, rank, size=3)))
    w = random_roots(rng, 3)
    J = jacobian(problem, w)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3, dtype=complex)
        e[k] = h
        fd = (residuals(problem, w + e) - residuals(problem, w - e)) / (2 * h)
        assert np.allclose(J[:, k], fd, atol=1e-6, rtol=1e-6)


def test_m1_root_sl3_flip():
    for z1, z2 in [(1, 2), (Fraction(3, 2), Fraction(-5, 2)), (2, 7)]:
        problem = BetheProblem(sl3_flip(z1, z2), (0,))
        w1 = (Fraction(z1) + Fraction(z2)) / 2
        assert residual(problem, [w1], 0) == 0
        sols = solve(problem, FAST)
        assert len(sols) == 1
        assert abs(sols.solutions[0].roots[0] - complex(w1)) < 1e-10 * max(1, abs(w1))


def test_m2_closed_form_branches_solve_and_merge():
    z1, z2 = Fraction(1), Fraction(2)
    problem = BetheProblem(sl3_flip(z1, z2), (0, 1))
    canon = set()
    for roots in closed_form_roots(z1, z2):
        assert np.abs(residuals(problem, roots)).max() < 1e-12
        c = canonicalize(problem, roots)
        canon.add((tuple(round(x.real, 9) + 1j * round(x.imag, 9) for x in c[0]), c[1]))
    assert len(canon) == 1
    sols = solve(problem, SolveOptions(starts=64))
    assert len(sols) == 1
    s = sols.solutions[0]
    got = (tuple(round(x.real, 9) + 1j * round(x.imag, 9) for x in s.canonical_roots), s.canonical_colors)
    assert got in canon


@settings(max_examples=20, deadline=None)
@given(shifts=st.tuples(st.integers(0, 5), st.integers(0, 5)), seed=st.integers(0, 1000))
def test_twist_images_of_solutions_are_solutions(shifts, seed):
    model = make_model("A", 2, 3, (0, 1), (1, 0), (Fraction(1), Fraction(2)))
    problem = BetheProblem(model, (0, 1))
    roots = closed_form_roots(Fraction(1), Fraction(2))[0]
    problem2 = BetheProblem(sl3_flip(), (0, 1))
    new, cols = twist_image(problem2, roots, shifts)
    assert np.abs(residuals(problem2.with_colors(cols), new)).max() < 1e-11
    # canonical form is invariant under twisting
    a = canonicalize(problem2, roots)
    b = canonicalize(problem2, new, cols)
    assert a[1] == b[1] and np.allclose(a[0], b[0], atol=1e-12)
    # roots generic for the inner model: residual twisting is still covariant
    rng = np.random.default_rng(seed)
    w = random_roots(rng, 2)
    img, icols = twist_image(problem, w, shifts)
    R = residuals(problem, w)
    Rimg = residuals(problem.with_colors(icols), img)
    scale = np.array([cmath.exp(-2j * cmath.pi * (s % 3) / 3) for s in shifts])
    assert np.allclose(Rimg, R * scale, atol=1e-10)


def test_canonical_sector():
    problem = BetheProblem(make_model("A", 2, 3, (0, 1), (1, 0), (Fraction(1), Fraction(2))), (0, 1, 1))
    rng = np.random.default_rng(0)
    for _ in range(20):
        roots, _ = canonicalize(problem, random_roots(rng, 3) - 0.3)
        for x in roots:
            assert -1e-9 <= cmath.phase(x) % (2 * cmath.pi) < 2 * cmath.pi / 3 + 1e-9


def test_check_roots_reasons():
    problem = BetheProblem(sl3_flip(1, 2), (0, 1))
    assert problem.check_roots([0.5, 0.7j]) is None
    assert "origin" in problem.check_roots([0, 1.5])
    assert "site 2" in problem.check_roots([-2, 1.5])
    assert "one orbit" in problem.check_roots([1.5, -1.5])


def test_errors_and_trivial_cases():
    with pytest.raises(BetheError):
        BetheProblem(sl3_flip(), (2,))
    sols = solve(BetheProblem(sl3_flip(), ()))
    assert len(sols) == 1 and sols.solutions[0].roots == ()
    js = sols.to_json()
    assert js["solutions"][0]["roots"] == []


def test_solution_json_uses_one_based_colours():
    sols = solve(BetheProblem(sl3_flip(), (1,)), FAST)
    js = sols.to_json()
    assert js["colors"] == [2]
    assert js["solutions"][0]["canonical"]["colors"] == [1]


@pytest.mark.parametrize("T", [1, 2, 3, 4])
def test_identity_reduction(T):
    model = make_model("A", 2, T, (0, 1), (0, 0), (Fraction(1), Fraction(2), Fraction(-7, 3)))
    res = untwisted_reduction_check(BetheProblem(model, (0, 1, 1)))
    assert res["ok"] and res["sigma_is_identity"] and res["origin_vanishes"]
    assert res["max_rel_error"] < 1e-10


def test_inner_reduction_has_origin_weight():
    model = make_model("A", 2, 3, (0, 1), (1, 0), (Fraction(1), Fraction(2)))
    res = untwisted_reduction_check(BetheProblem(model, (0, 1)))
    assert res["max_rel_error"] < 1e-10
    assert not res["sigma_is_identity"] and not res["origin_vanishes"]
    with pytest.raises(BetheError):
        untwisted_reduction_check(BetheProblem(sl3_flip(), (0,)))


def test_identity_origin_coefficient_is_zero():
    for T in (1, 2, 3, 5):
        model = make_model("A", 3, T, (0, 1, 2), (0, 0, 0), (Fraction(1),))
        problem = BetheProblem(model, (0, 1, 2))
        assert all(c == 0 for c in problem.origin_coeff)
