"""Reference-oracle behavior: equivalence, censuses, the naive solver."""

import random

import pytest

from pqeverify.formulas import CnfFormula, PqeProblem, Solution
from pqeverify.oracle import (
    OracleCapError,
    brute_equiv,
    enumerate_boundary_points,
    naive_pqe_solve,
)


def test_equiv_example_accepts_y1(ex1, ex1_h_y1):
    assert brute_equiv(ex1, ex1_h_y1).equivalent


def test_equiv_example_rejects_true_with_divergence(ex1, ex1_h_true):
    report = brute_equiv(ex1, ex1_h_true)
    assert not report.equivalent
    assert report.first_divergence == {1: 0, 2: 1}
    assert report.side_values == (False, True)


def test_equiv_example_accepts_alternate_solution(ex1):
    assert brute_equiv(ex1, Solution([(1, -2)], ex1)).equivalent


def test_equiv_is_reflexive_ish_under_reordering(ex1, ex1_h_y1):
    # clause order inside F must not matter
    perm = [(1, 3), (2, 4), (-3, 4), (1, -4)]
    shuffled = PqeProblem(CnfFormula(perm), x_vars={3, 4}, target_indices=[2])
    assert brute_equiv(shuffled, Solution([(1,)], shuffled)).equivalent


def test_census_example_f_alone(ex1):
    census = enumerate_boundary_points(ex1)
    assert census.total_g_boundary_points == 2
    assert census.removable == 1
    assert census.unremovable == 1
    pts = census.sample_points
    assert {3: 1, 4: 0, 1: 0, 2: 1} in pts
    assert {3: 1, 4: 0, 1: 1, 2: 1} in pts
    # exactly the points with x3=1, x4=0, y2=1
    for p in pts:
        assert (p[3], p[4], p[2]) == (1, 0, 1)


def test_census_example_with_solution(ex1, ex1_h_y1):
    census = enumerate_boundary_points(ex1, ex1_h_y1)
    assert census.total_g_boundary_points == 1
    assert census.removable == 0
    assert census.unremovable == 1
    assert census.sample_points == [{1: 1, 2: 1, 3: 1, 4: 0}]


def test_census_duplicate_target_clause_has_no_points():
    f = CnfFormula([(-3, 4), (-3, 4), (1, 3)])
    problem = PqeProblem(f, x_vars={3, 4}, target_indices=[0])
    census = enumerate_boundary_points(problem)
    assert census.total_g_boundary_points == 0


def test_census_counts_add_up_on_random_instances():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(3, 8)
        clauses = []
        for _ in range(rng.randint(3, 3 * n)):
            vs = rng.sample(range(1, n + 1), min(n, rng.randint(2, 3)))
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        f = CnfFormula(clauses, var_span=n)
        xs = set(rng.sample(range(1, n + 1), max(1, n // 2)))
        quantified = [i for i, c in enumerate(clauses) if any(abs(l) in xs for l in c)]
        if not quantified:
            continue
        problem = PqeProblem(f, x_vars=xs, target_indices=[rng.choice(quantified)])
        census = enumerate_boundary_points(problem)
        assert census.total_g_boundary_points == census.removable + census.unremovable


def test_naive_solver_example(ex1):
    h = naive_pqe_solve(ex1)
    assert h.clauses.clauses == ((1, -2),)
    assert brute_equiv(ex1, h).equivalent


def test_naive_solver_trivial_when_target_duplicated():
    f = CnfFormula([(-3, 4), (-3, 4), (1, 3)])
    problem = PqeProblem(f, x_vars={3, 4}, target_indices=[0])
    h = naive_pqe_solve(problem)
    assert len(h.clauses) == 0
    assert brute_equiv(problem, h).equivalent


def test_naive_solver_blocks_every_y_when_f_unsat():
    # F unsatisfiable everywhere, remainder satisfiable everywhere (x3=0):
    # one clause per y assignment
    f = CnfFormula([(3,), (-3, 4), (-3, -4), (1, 2, -3)], var_span=4)
    problem = PqeProblem(f, x_vars={3, 4}, target_indices=[0])
    h = naive_pqe_solve(problem)
    assert len(h.clauses) == 4
    assert brute_equiv(problem, h).equivalent


def test_prop3_redundancy_iff_no_removable_points():
    rng = random.Random(31)
    seen_both = set()
    for _ in range(60):
        n = rng.randint(3, 8)
        clauses = []
        for _ in range(rng.randint(3, 3 * n)):
            vs = rng.sample(range(1, n + 1), min(n, rng.randint(2, 3)))
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        f = CnfFormula(clauses, var_span=n)
        xs = set(rng.sample(range(1, n + 1), max(1, n // 2)))
        quantified = [i for i, c in enumerate(clauses) if any(abs(l) in xs for l in c)]
        if not quantified:
            continue
        problem = PqeProblem(f, x_vars=xs, target_indices=[rng.choice(quantified)])
        census = enumerate_boundary_points(problem)
        redundant = brute_equiv(problem, None).equivalent
        assert redundant == (census.removable == 0)
        seen_both.add(redundant)
    assert seen_both == {True, False}


def test_naive_solver_output_always_verifies():
    rng = random.Random(77)
    done = 0
    while done < 60:
        n = rng.randint(4, 10)
        clauses = []
        for _ in range(rng.randint(4, 3 * n)):
            vs = rng.sample(range(1, n + 1), min(n, rng.randint(2, 3)))
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        f = CnfFormula(clauses, var_span=n)
        xs = set(rng.sample(range(1, n + 1), max(1, n // 2)))
        quantified = [i for i, c in enumerate(clauses) if any(abs(l) in xs for l in c)]
        if not quantified:
            continue
        problem = PqeProblem(f, x_vars=xs, target_indices=[rng.choice(quantified)])
        h = naive_pqe_solve(problem)
        assert brute_equiv(problem, h).equivalent
        done += 1


def test_caps_are_hard_errors():
    clauses = [(v, -(v + 1)) for v in range(1, 30)]
    f = CnfFormula(clauses)
    problem = PqeProblem(f, x_vars={30}, target_indices=[28])
    with pytest.raises(OracleCapError):
        brute_equiv(problem, None)
    with pytest.raises(OracleCapError):
        enumerate_boundary_points(problem)
    with pytest.raises(OracleCapError):
        naive_pqe_solve(problem)


def test_sat_assisted_path_matches_exhaustive(ex1, ex1_h_true):
    exhaustive = brute_equiv(ex1, ex1_h_true)
    assisted = brute_equiv(ex1, ex1_h_true, total_cap=0)
    assert exhaustive == assisted
