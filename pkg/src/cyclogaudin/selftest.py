"""Exact identity suite behind ``cyclogaudin selftest``."""
from __future__ import annotations

import random
import time
from fractions import Fraction

from .automorphism import AutoSpec, AutoTable, lambda0_projection_check
from .exact_num import cyclotomic_sum_identities
from .hamiltonians import (
    ModelSpec,
    commutator_check,
    double_pole_identity,
    resummed_H_check,
    swap_pole_cancellation_check,
    validate_model,
)
from .lie_core import SimpleLieAlgebra, build_simple_lie_algebra
from .ratfun import CoeffSpace, expand_at, find_witness, gamma_orbit_sum, residue_theorem_check, split_local_data
from .ratfun import orbit_test_function
from .weight_function import circle_lemma_check

__all__ = ["AUTOMORPHISM_MATRIX", "SUBSETS", "corrupted_algebra", "run_selftest"]

# (label, series, rank, T, permutation, phases, number of sites for the commutator check)
AUTOMORPHISM_MATRIX = [
    ("sl2 id T=1", "A", 1, 1, (0,), (0,), 3),
    ("sl3 flip T=2", "A", 2, 2, (1, 0), (0, 0), 2),
    ("sl3 inner (1,0) T=3", "A", 2, 3, (0, 1), (1, 0), 2),
    ("sl4 flip T=2", "A", 3, 2, (2, 1, 0), (0, 0, 0), 2),
]

SUBSETS = ("all", "t1")


def _table(series, rank, T, perm, phases):
    return AutoTable(build_simple_lie_algebra(series, rank), AutoSpec(T, perm, phases))


def corrupted_algebra(series, rank):
    """A copy of the algebra with the sign of one structure constant pair flipped.

    The flipped constants are those producing the highest root vector from a
    simple one, so the Jacobi identity and everything downstream break.
    """
    # a private instance: the cached algebra is shared and must stay intact
    alg = bad = SimpleLieAlgebra(series, rank)
    top = alg.n_pos - 1
    i, b, _ = alg.root_decomp[top]
    si = alg.simple_root_indices[i]
    for key in ((("E", si), ("E", b)), (("E", b), ("E", si))):
        bad.table[key] = {lab: -c for lab, c in bad.table[key].items()}
    return bad


def _residue_rows(table, rng):
    rows = []
    exact_pts = [Fraction(2, 3), Fraction(-5, 4)]
    for kind in ("scalar", "lie"):
        space = CoeffSpace(kind, table)
        basis = space.basis()
        for k in range(table.T):
            f = None
            for x in exact_pts:
                for n in (1, 2):
                    c = basis[rng.randrange(len(basis))] * Fraction(rng.randint(1, 5), rng.randint(1, 5))
                    g = gamma_orbit_sum(c, x, n, k, space=space)
                    f = g if f is None else f + g
            order = 2
            local = [(x, expand_at(f, x, order)) for x in exact_pts]
            pair_ok = True
            for x in exact_pts:
                for n in range(order + 1):
                    for b in basis:
                        val = residue_theorem_check(local, orbit_test_function(space, b, x, n, k))
                        pair_ok = pair_ok and val == 0
            _, rest = split_local_data(space, local, k, order)
            round_trip = all(not d for _, d in rest)
            no_witness = find_witness(space, local, k, order) is None
            bumped = [(x, dict(d)) for x, d in local]
            d0 = bumped[0][1]
            d0[0] = d0.get(0, space.zero) + basis[0]
            witness = find_witness(space, bumped, k, order)
            caught = witness is not None and witness[1] != 0
            ok = pair_ok and round_trip and no_witness and caught
            rows.append((f"residue theorem {kind} k={k}", ok,
                         f"pairings zero={pair_ok} round trip={round_trip} perturbed caught={caught}"))
    return rows


def run_selftest(corrupt_sign=False, subset="all", seed=0):
    """Rows (name, ok, detail) of the exact identity suite."""
    if subset not in SUBSETS:
        raise ValueError(f"unknown subset {subset!r}; expected one of {SUBSETS}")
    rng = random.Random(seed)
    rows = []
    matrix = [m for m in AUTOMORPHISM_MATRIX if subset == "all" or m[3] == 1]

    if corrupt_sign:
        bad = corrupted_algebra("A", 2)
        table = AutoTable(bad, AutoSpec(2, (1, 0), (0, 0)), verify=False)
        res = double_pole_identity(table)
        rows.append(("double pole identity (corrupted sl3 flip)", res["ok"], f"lhs={res['lhs']} rhs={res['rhs']}"))
        return rows

    Ts = (1,) if subset == "t1" else (1, 2, 3, 4, 5, 6)
    for T in Ts:
        u = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        v = u
        while v == u:
            # u and -v must not share an orbit
            v = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        samples = [(u, -v)]
        res = cyclotomic_sum_identities(T, samples)
        bad = [name for name, ok in res if not ok]
        rows.append((f"cyclotomic sums T={T}", not bad, f"{len(res)} identities" + (f"; failed: {bad}" if bad else "")))

    for n in range(2, 9):
        pts = set()
        while len(pts) < n:
            pts.add(Fraction(rng.randint(-20, 20), rng.randint(1, 7)))
        val = circle_lemma_check(sorted(pts))
        rows.append((f"circle lemma n={n}", val == 0, f"sum={val}"))

    for label, series, rank, T, perm, phases, N in matrix:
        table = _table(series, rank, T, perm, phases)
        res = double_pole_identity(table)
        rows.append((f"double pole identity {label}", res["ok"], f"lhs={res['lhs']} rhs={res['rhs']}"))
        res = lambda0_projection_check(table)
        rows.append((f"lambda0 projection {label}", res["ok"], f"values={res['values']}"))
        res = swap_pole_cancellation_check(table)
        rows.append((f"swap pole cancellation {label}", res["ok"], f"failures={res['failures']}"))
        for name, ok, detail in _residue_rows(table, rng):
            rows.append((f"{name} {label}", ok, detail))

    for label, series, rank, T, perm, phases, N in matrix:
        weights = tuple(tuple(int(j == 0) for j in range(rank)) for _ in range(N))
        spec = ModelSpec(series, rank, T, perm, phases, tuple(Fraction(j + 2) for j in range(N)), weights,
                         ("irrep",) * N)
        model = validate_model(spec)
        t0 = time.perf_counter()
        ok, details = True, []
        for i in range(N):
            for j in range(i + 1, N):
                res = commutator_check(model, i, j, trials=3, seed=seed)
                ok = ok and res["ok"]
                details.append(f"[H{i + 1},H{j + 1}]")
        rows.append((f"commutativity {label}", ok, f"{' '.join(details)} exact zero at 3 configurations "
                                                  f"({time.perf_counter() - t0:.1f}s)"))

    resum = [("A", 1, 1, 3), ("A", 1, 2, 2), ("A", 2, 3, 2)] if subset == "all" else [("A", 1, 1, 3)]
    for series, rank, T, N in resum:
        weights = tuple(tuple(int(j == 0) for j in range(rank)) for _ in range(N))
        spec = ModelSpec(series, rank, T, tuple(range(rank)), (0,) * rank,
                         tuple(Fraction(j + 2, j + 1) for j in range(N)), weights, ("irrep",) * N)
        res = resummed_H_check(validate_model(spec))
        rows.append((f"resummation {series}{rank} id T={T} N={N}", res["ok"], f"sites={res['sites']}"))
    return rows
