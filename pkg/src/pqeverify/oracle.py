"""Brute-force ground truth at desk scale.

Semantic equivalence of the two sides of a clause-taking problem,
exhaustive boundary-point censuses, and a naive reference solver.  All
subspace enumeration is vectorized over numpy truth tables; indices are
laid out with the unquantified variables in the high bits (smallest id
most significant), so ascending index order is ascending lexicographic
order of assignments.  Caps are hard errors, never silent truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from pqeverify.formulas import (
    Assignment,
    Clause,
    CnfFormula,
    PqeProblem,
    Solution,
)
from pqeverify.sat import SAT, UNSAT, SatOracle

DEFAULT_Y_CAP = 20
DEFAULT_TOTAL_CAP = 24
_CHUNK_BITS = 20


class OracleCapError(RuntimeError):
    """Requested enumeration exceeds the configured size cap."""


@dataclass
class EquivalenceReport:
    equivalent: bool
    first_divergence: Assignment | None = None
    side_values: tuple[bool, bool] | None = None


@dataclass
class BoundaryCensus:
    total_g_boundary_points: int
    removable: int
    unremovable: int
    sample_points: list[Assignment] = field(default_factory=list)


def _bit_shifts(y_sorted: list[int], x_sorted: list[int]) -> dict[int, int]:
    n = len(y_sorted) + len(x_sorted)
    n_x = len(x_sorted)
    shifts = {}
    for j, v in enumerate(y_sorted):
        shifts[v] = n - 1 - j
    for k, v in enumerate(x_sorted):
        shifts[v] = n_x - 1 - k
    return shifts


def _clause_block(clause: Clause, shifts: dict[int, int], idx: np.ndarray) -> np.ndarray:
    """Boolean satisfaction mask of one clause over the given index block."""
    sat = np.zeros(idx.shape, dtype=bool)
    for lit in clause:
        v = lit if lit > 0 else -lit
        bits = (idx >> np.uint32(shifts[v])) & np.uint32(1)
        sat |= bits == (1 if lit > 0 else 0)
    return sat


def _decode(value: int, vars_sorted: list[int]) -> Assignment:
    w = len(vars_sorted)
    return {v: (value >> (w - 1 - j)) & 1 for j, v in enumerate(vars_sorted)}


def _decode_point(g_index: int, y_sorted: list[int], x_sorted: list[int]) -> Assignment:
    n_x = len(x_sorted)
    point = _decode(g_index >> n_x, y_sorted)
    point.update(_decode(g_index & ((1 << n_x) - 1), x_sorted))
    return point


def _row_chunks(n_y: int, n_x: int):
    """Yield (row_lo, row_hi) spans whose flat size stays near 2**_CHUNK_BITS."""
    rows = 1 << n_y
    per = max(1, (1 << _CHUNK_BITS) >> n_x)
    lo = 0
    while lo < rows:
        hi = min(rows, lo + per)
        yield lo, hi
        lo = hi


def _split_vars(problem: PqeProblem) -> tuple[list[int], list[int]]:
    fvars = problem.formula.vars()
    y_sorted = sorted(problem.y_vars)
    x_sorted = sorted(v for v in fvars if v in problem.x_vars)
    return y_sorted, x_sorted


def _exists_x_scan(clauses, target_set, y_sorted, x_sorted):
    """Exists-x projections: (sat_F, sat_F_minus_G) over all y rows."""
    n_y, n_x = len(y_sorted), len(x_sorted)
    n = n_y + n_x
    shifts = _bit_shifts(y_sorted, x_sorted)
    sat_f = np.zeros(1 << n_y, dtype=bool)
    sat_fg = np.zeros(1 << n_y, dtype=bool)
    for lo, hi in _row_chunks(n_y, n_x):
        idx = np.arange(lo << n_x, hi << n_x, dtype=np.uint32 if n <= 31 else np.uint64)
        acc_f = np.ones(idx.shape, dtype=bool)
        acc_fg = np.ones(idx.shape, dtype=bool)
        for i, clause in enumerate(clauses):
            block = _clause_block(clause, shifts, idx)
            acc_f &= block
            if i not in target_set:
                acc_fg &= block
        width = 1 << n_x
        sat_f[lo:hi] = acc_f.reshape(hi - lo, width).any(axis=1)
        sat_fg[lo:hi] = acc_fg.reshape(hi - lo, width).any(axis=1)
    return sat_f, sat_fg


def _solution_table(h: Solution | None, y_sorted: list[int]) -> np.ndarray:
    n_y = len(y_sorted)
    shifts = {v: n_y - 1 - j for j, v in enumerate(y_sorted)}
    idx = np.arange(1 << n_y, dtype=np.uint32 if n_y <= 31 else np.uint64)
    acc = np.ones(idx.shape, dtype=bool)
    if h is not None:
        for clause in h.clauses.clauses:
            acc &= _clause_block(clause, shifts, idx)
    return acc


def _exists_x_by_sat(clauses, target_set, y_sorted, x_sorted):
    rest = [c for i, c in enumerate(clauses) if i not in target_set]
    span = max((abs(l) for c in clauses for l in c), default=0)
    oracle_f = SatOracle(clauses, num_vars=span)
    oracle_fg = SatOracle(rest, num_vars=span)
    n_y = len(y_sorted)
    sat_f = np.zeros(1 << n_y, dtype=bool)
    sat_fg = np.zeros(1 << n_y, dtype=bool)
    for row in range(1 << n_y):
        y = _decode(row, y_sorted)
        sat_f[row] = oracle_f.solve(y).status == SAT
        sat_fg[row] = oracle_fg.solve(y).status == SAT
    return sat_f, sat_fg


def brute_equiv(problem: PqeProblem, h: Solution | None, *,
                y_cap: int = DEFAULT_Y_CAP,
                total_cap: int = DEFAULT_TOTAL_CAP) -> EquivalenceReport:
    """Compare both sides of the problem on every full y assignment.

    The left side is satisfiability of F in the y-subspace; the right is
    h(y) together with satisfiability of F minus the target there.  With
    more than total_cap variables overall the x side is decided by the
    SAT engine instead of the truth table; the y side is always
    enumerated and capped at y_cap.
    """
    y_sorted, x_sorted = _split_vars(problem)
    if len(y_sorted) > y_cap:
        raise OracleCapError(f"|Y| = {len(y_sorted)} exceeds the cap of {y_cap}")
    clauses = problem.formula.clauses
    targets = set(problem.target_indices)
    if len(y_sorted) + len(x_sorted) <= total_cap:
        sat_f, sat_fg = _exists_x_scan(clauses, targets, y_sorted, x_sorted)
    else:
        sat_f, sat_fg = _exists_x_by_sat(clauses, targets, y_sorted, x_sorted)
    rhs = _solution_table(h, y_sorted) & sat_fg
    diverging = sat_f != rhs
    if not diverging.any():
        return EquivalenceReport(True)
    row = int(np.argmax(diverging))
    return EquivalenceReport(
        False,
        first_divergence=_decode(row, y_sorted),
        side_values=(bool(sat_f[row]), bool(rhs[row])),
    )


def enumerate_boundary_points(problem: PqeProblem, extra: Solution | None = None, *,
                              total_cap: int = DEFAULT_TOTAL_CAP,
                              sample_cap: int = 8) -> BoundaryCensus:
    """Exhaustive census of target-falsifying points of F (or F with the
    extra solution conjoined), classified by y-subspace satisfiability."""
    y_sorted, x_sorted = _split_vars(problem)
    n_y, n_x = len(y_sorted), len(x_sorted)
    if n_y + n_x > total_cap:
        raise OracleCapError(
            f"{n_y + n_x} variables exceed the census cap of {total_cap}"
        )
    clauses = list(problem.formula.clauses)
    if extra is not None:
        clauses.extend(extra.clauses.clauses)
    targets = set(problem.target_indices)
    shifts = _bit_shifts(y_sorted, x_sorted)
    n = n_y + n_x
    removable = 0
    unremovable = 0
    samples: list[Assignment] = []
    for lo, hi in _row_chunks(n_y, n_x):
        idx = np.arange(lo << n_x, hi << n_x, dtype=np.uint32 if n <= 31 else np.uint64)
        bp = np.ones(idx.shape, dtype=bool)
        sat_all = np.ones(idx.shape, dtype=bool)
        for i, clause in enumerate(clauses):
            block = _clause_block(clause, shifts, idx)
            sat_all &= block
            if i in targets:
                bp &= ~block
            else:
                bp &= block
        width = 1 << n_x
        bp2 = bp.reshape(hi - lo, width)
        sat_rows = sat_all.reshape(hi - lo, width).any(axis=1)
        removable += int(bp2[~sat_rows].sum())
        unremovable += int(bp2[sat_rows].sum())
        if len(samples) < sample_cap and bp.any():
            base = lo << n_x
            for flat in np.flatnonzero(bp)[: sample_cap - len(samples)]:
                samples.append(_decode_point(base + int(flat), y_sorted, x_sorted))
    return BoundaryCensus(removable + unremovable, removable, unremovable, samples)


def naive_pqe_solve(problem: PqeProblem, *,
                    y_cap: int = DEFAULT_Y_CAP,
                    total_cap: int = DEFAULT_TOTAL_CAP) -> Solution:
    """Reference solver: one full-length clause per y-subspace where F is
    unsatisfiable but the remainder is satisfiable.  No minimization."""
    y_sorted, x_sorted = _split_vars(problem)
    if len(y_sorted) > y_cap:
        raise OracleCapError(f"|Y| = {len(y_sorted)} exceeds the cap of {y_cap}")
    clauses = problem.formula.clauses
    targets = set(problem.target_indices)
    if len(y_sorted) + len(x_sorted) <= total_cap:
        sat_f, sat_fg = _exists_x_scan(clauses, targets, y_sorted, x_sorted)
    else:
        sat_f, sat_fg = _exists_x_by_sat(clauses, targets, y_sorted, x_sorted)
    out: list[Clause] = []
    for row in np.flatnonzero(~sat_f & sat_fg):
        y = _decode(int(row), y_sorted)
        out.append(tuple(-v if y[v] else v for v in y_sorted))
    return Solution(CnfFormula(out), problem)
