"""SAT-engine behavior: soundness, assumptions, limits, determinism."""

import itertools
import random

import pytest

from pqeverify.formulas import CnfFormula
from pqeverify.sat import RESOURCE_OUT, SAT, UNSAT, SatOracle, solve_formula

EX1_CLAUSES = [(-3, 4), (1, 3), (1, -4), (2, 4)]


def brute_force_sat(clauses, num_vars):
    for bits in itertools.product((0, 1), repeat=num_vars):
        q = dict(zip(range(1, num_vars + 1), bits))
        if all(any((q[abs(l)] == 1) == (l > 0) for l in c) for c in clauses):
            return q
    return None


def random_cnf(rng, num_vars, num_clauses, max_width=3):
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, max_width)
        vs = rng.sample(range(1, num_vars + 1), min(width, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return clauses


def test_unit_conflict_under_assumption():
    o = SatOracle([(1,)])
    assert o.solve({1: 0}).status == UNSAT


def test_sat_with_model():
    o = SatOracle([(1, 2)])
    out = o.solve()
    assert out.status == SAT
    assert out.model is not None and (out.model[1] == 1 or out.model[2] == 1)


def test_example_subspace_unsat():
    o = SatOracle(EX1_CLAUSES)
    assert o.solve({1: 0, 2: 1}).status == UNSAT


def test_add_clause_then_assume():
    o = SatOracle()
    o.add_clause((-1,))
    assert o.solve({1: 1}).status == UNSAT


def test_add_empty_clause_kills_database():
    o = SatOracle([(1, 2)])
    o.add_clause(())
    assert o.solve().status == UNSAT
    assert o.solve({1: 1}).status == UNSAT


def test_added_clause_falsified_by_assumptions():
    o = SatOracle(EX1_CLAUSES)
    o.add_clause((1, -2))
    assert o.solve({1: 0, 2: 1}).status == UNSAT


def test_solve_formula_one_shot():
    out = solve_formula(CnfFormula(EX1_CLAUSES))
    assert out.status == SAT


def test_total_calls_counts_every_solve():
    o = SatOracle([(1, 2)])
    for _ in range(5):
        o.solve()
    assert o.total_calls == 5


def test_random_cnfs_match_enumeration():
    rng = random.Random(20240901)
    for _ in range(300):
        n = rng.randint(1, 9)
        clauses = random_cnf(rng, n, rng.randint(1, 4 * n))
        expected = brute_force_sat(clauses, n)
        out = solve_formula(clauses)
        if expected is None:
            assert out.status == UNSAT
        else:
            assert out.status == SAT
            model = out.model
            assert all(
                any((model[abs(l)] == 1) == (l > 0) for l in c) for c in clauses
            )


def test_assumption_monotonicity():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(2, 8)
        clauses = random_cnf(rng, n, rng.randint(2, 3 * n))
        o = SatOracle(clauses, num_vars=n)
        base_vars = rng.sample(range(1, n + 1), rng.randint(1, n))
        base = {v: rng.randint(0, 1) for v in base_vars}
        if o.solve(base).status != UNSAT:
            continue
        extra_vars = [v for v in range(1, n + 1) if v not in base]
        ext = dict(base)
        for v in extra_vars:
            ext[v] = rng.randint(0, 1)
        assert o.solve(ext).status == UNSAT


def test_determinism_identical_call_sequences():
    def run():
        rng = random.Random(55)
        o = SatOracle(num_vars=10)
        transcript = []
        for _ in range(40):
            if rng.random() < 0.5:
                o.add_clause(tuple(random_cnf(rng, 10, 1)[0]))
            assum = {v: rng.randint(0, 1) for v in rng.sample(range(1, 11), rng.randint(0, 3))}
            out = o.solve(assum)
            transcript.append((out.status, None if out.model is None else tuple(sorted(out.model.items()))))
        return transcript

    assert run() == run()


def test_unsat_core_is_contradictory_subset():
    rng = random.Random(99)
    checked = 0
    for _ in range(200):
        n = rng.randint(2, 8)
        clauses = random_cnf(rng, n, rng.randint(2, 3 * n))
        o = SatOracle(clauses, num_vars=n)
        assum = {v: rng.randint(0, 1) for v in rng.sample(range(1, n + 1), rng.randint(1, n))}
        out = o.solve(assum)
        if out.status != UNSAT or out.core is None or not out.core:
            continue
        given = {v if b else -v for v, b in assum.items()}
        assert set(out.core) <= given
        # the core alone must already be unsatisfiable with the database
        assert SatOracle(clauses, num_vars=n).solve(list(out.core)).status == UNSAT
        checked += 1
    assert checked >= 20


def random_3cnf(rng, num_vars, num_clauses):
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return clauses


def _conflicting_instance(seed=17, num_vars=40):
    # near the 3-SAT phase transition so the search actually conflicts
    rng = random.Random(seed)
    while True:
        clauses = random_3cnf(rng, num_vars, int(4.2 * num_vars))
        o = SatOracle(clauses, num_vars=num_vars)
        o.solve()
        if o.conflicts > 5:
            return clauses


def test_conflict_budget_trips_and_names_limit():
    clauses = _conflicting_instance()
    o = SatOracle(clauses, num_vars=40, max_conflicts=1)
    out = o.solve()
    assert out.status == RESOURCE_OUT
    assert out.limit == "conflicts"
    # raising the limit afterwards lets the same oracle finish
    o.max_conflicts = None
    assert o.solve().status in (SAT, UNSAT)


def test_time_budget_trips_and_names_limit():
    clauses = _conflicting_instance(seed=23)
    o = SatOracle(clauses, num_vars=40, time_budget=0.0)
    out = o.solve()
    assert out.status == RESOURCE_OUT
    assert out.limit == "time"


def test_models_are_total():
    o = SatOracle([(2,)], num_vars=5)
    out = o.solve()
    assert out.status == SAT
    assert set(out.model) == {1, 2, 3, 4, 5}


def test_dimacs_dump_round_trips_clauses():
    o = SatOracle(EX1_CLAUSES)
    text = o.dump_dimacs()
    lines = text.strip().splitlines()
    assert lines[0] == "p cnf 4 4"
    assert lines[1] == "-3 4 0"
