"""Solution verification for clause-taking problems.

A candidate H is correct iff (a) every clause of H is implied by F and
(b) every target clause is redundant once H is conjoined.  Part (a) is
one satisfiability query per clause of H.  Part (b) enumerates
target-falsifying points of the current formula: a point whose
y-subspace kills the formula witnesses failure; a point whose y-subspace
still has models is excluded by a plugging clause over the unquantified
variables and the search continues.

All queries run on one incremental oracle.  Target clauses carry
selector literals so proven-redundant clauses can be switched off, and
each redundancy check guards its plugging clauses with a fresh selector
so clauses learned from them stay conditional and the rest of the
database remains equivalence-preserving across checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from time import monotonic

from pqeverify.formulas import (
    FALSIFIED,
    Assignment,
    Clause,
    CnfFormula,
    FormulaError,
    PqeProblem,
    Solution,
    cofactor,
    eval_clause,
    is_boundary_point,
    satisfies_formula,
)
from pqeverify.sat import RESOURCE_OUT, SAT, UNSAT, SatOracle, solve_formula

CORRECT = "correct"
NOT_IMPLIED = "not_implied"
NOT_REDUNDANT = "not_redundant"
RESOURCE_EXCEEDED = "resource_out"

REDUNDANT = "redundant"

DEFAULT_ITERATION_CAP = 10**7


class VerificationInternalError(RuntimeError):
    """A witness failed its own validity re-check; the verifier is broken."""


class _ResourceOut(Exception):
    def __init__(self, limit: str):
        super().__init__(limit)
        self.limit = limit


@dataclass
class VerifyStats:
    sat_calls_implication: int = 0
    sat_calls_redundancy: int = 0
    boundary_points_examined: int = 0
    plugging_clauses_added: int = 0
    shortened_literal_drops: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "sat_calls_implication": self.sat_calls_implication,
            "sat_calls_redundancy": self.sat_calls_redundancy,
            "boundary_points_examined": self.boundary_points_examined,
            "plugging_clauses_added": self.plugging_clauses_added,
            "shortened_literal_drops": self.shortened_literal_drops,
        }


@dataclass
class Witness:
    """A concrete refutation: the offending clause and a full point.

    For a failed implication, clause_index indexes the solution and the
    point is a model of F that falsifies the clause.  For a failed
    redundancy, clause_index indexes the problem formula and the point is
    a target-falsifying point of the current formula whose y-subspace has
    no models.
    """

    clause_index: int
    clause: Clause
    point: Assignment


@dataclass
class Verdict:
    status: str
    witness: Witness | None
    stats: VerifyStats
    limit: str | None = None


@dataclass
class CheckRedResult:
    status: str
    point: Assignment | None
    stats: VerifyStats
    limit: str | None = None


def plug_clause(y_part: Assignment, x_model: Assignment,
                f_and_h, shorten: bool = True) -> Clause:
    """Clause over the unquantified variables falsified by y_part.

    Requires x_model together with y_part to satisfy every clause of
    f_and_h.  With shorten=True, variables are dropped greedily in
    ascending id order whenever x_model still satisfies every clause in
    the widened subspace, which the support counts below decide exactly:
    a variable may go iff no clause relies on it as its only true literal.
    """
    ys = sorted(y_part)
    if not shorten or len(ys) <= 1:
        return tuple(-v if y_part[v] else v for v in ys)
    clauses = f_and_h.clauses if isinstance(f_and_h, CnfFormula) else list(f_and_h)
    combined = dict(x_model)
    combined.update(y_part)
    support = []
    supported_by: dict[int, list[int]] = {v: [] for v in ys}
    for ci, clause in enumerate(clauses):
        cnt = 0
        for lit in clause:
            v = lit if lit > 0 else -lit
            b = combined.get(v)
            if b is not None and (b == 1) == (lit > 0):
                cnt += 1
                lst = supported_by.get(v)
                if lst is not None:
                    lst.append(ci)
        if cnt == 0:
            raise FormulaError(
                "plug_clause precondition violated: the model does not satisfy "
                "the formula in the given y-subspace"
            )
        support.append(cnt)
    kept: list[int] = []
    for v in ys:
        cells = supported_by[v]
        if all(support[ci] >= 2 for ci in cells):
            for ci in cells:
                support[ci] -= 1
        else:
            kept.append(v)
    return tuple(-v if y_part[v] else v for v in kept)


class _Session:
    """Incremental state shared by every query of one verification run."""

    def __init__(self, formula: CnfFormula, x_vars, target_indices, *,
                 shorten: bool, max_conflicts: int | None,
                 time_budget: float | None, iteration_cap: int,
                 kernel_name: str | None):
        self.formula = formula
        self.f_vars = formula.vars()
        self.x_set = frozenset(x_vars) & self.f_vars
        self.y_sorted = sorted(self.f_vars - self.x_set)
        self.shorten = shorten
        self.iteration_cap = iteration_cap
        self.stats = VerifyStats()
        self.oracle = SatOracle(num_vars=formula.var_span,
                                max_conflicts=max_conflicts,
                                time_budget=time_budget,
                                kernel_name=kernel_name)
        self.targets = list(target_indices)
        self.present = dict.fromkeys(self.targets, True)
        self.selector: dict[int, int] = {}
        for i, clause in enumerate(formula.clauses):
            if i in self.present:
                t = self.oracle.new_var()
                self.selector[i] = t
                self.oracle.add_clause(clause + (-t,))
            else:
                self.oracle.add_clause(clause)
        self.extra_clauses: list[Clause] = []

    # -- helpers -------------------------------------------------------
    def _solve(self, assumptions: list[int], phase: str):
        outcome = self.oracle.solve(assumptions)
        if phase == "implication":
            self.stats.sat_calls_implication += 1
        else:
            self.stats.sat_calls_redundancy += 1
        if outcome.status == RESOURCE_OUT:
            raise _ResourceOut(outcome.limit or "limit")
        return outcome

    def _present_selectors(self, skip: int | None = None) -> list[int]:
        return [self.selector[i] for i in self.targets
                if self.present[i] and i != skip]

    def _project(self, model: dict[int, int]) -> Assignment:
        return {v: model[v] for v in self.f_vars}

    def _split(self, point: Assignment) -> tuple[Assignment, Assignment]:
        x_part = {v: point[v] for v in point if v in self.x_set}
        y_part = {v: point[v] for v in point if v not in self.x_set}
        return x_part, y_part

    def add_extra_clauses(self, clauses) -> None:
        for clause in clauses:
            self.extra_clauses.append(clause)
            self.oracle.add_clause(clause)

    def active_clauses(self) -> tuple[list[Clause], dict[int, int]]:
        """Live formula clauses plus extras; also original index -> position."""
        out: list[Clause] = []
        positions: dict[int, int] = {}
        for i, clause in enumerate(self.formula.clauses):
            if self.present.get(i, True):
                positions[i] = len(out)
                out.append(clause)
        out.extend(self.extra_clauses)
        return out, positions

    def remaining_time(self) -> float | None:
        if self.oracle.deadline is None:
            return None
        return max(0.0, self.oracle.deadline - monotonic())

    # -- part one ------------------------------------------------------
    def implication_witness(self, h: Solution) -> Witness | None:
        selectors = self._present_selectors()
        for hi, clause in enumerate(h.clauses.clauses):
            assumptions = selectors + [-lit for lit in clause]
            outcome = self._solve(assumptions, "implication")
            if outcome.status == SAT:
                point = self._project(outcome.model)
                if not satisfies_formula(self.formula, point):
                    raise VerificationInternalError(
                        "implication witness does not satisfy the formula")
                if eval_clause(clause, point) != FALSIFIED:
                    raise VerificationInternalError(
                        "implication witness does not falsify the clause")
                return Witness(hi, clause, point)
        return None

    # -- part two ------------------------------------------------------
    def check_red(self, i: int) -> tuple[str, Assignment | None]:
        clause = self.formula.clauses[i]
        guard = self.oracle.new_var()
        neg_c = [-lit for lit in clause]
        active, positions = self.active_clauses()
        iterations = 0
        while True:
            iterations += 1
            if iterations > self.iteration_cap:
                raise _ResourceOut("iterations")
            out1 = self._solve(self._present_selectors(skip=i) + neg_c + [guard],
                               "redundancy")
            if out1.status == UNSAT:
                self.present[i] = False
                self.oracle.add_clause((-self.selector[i],))
                self.oracle.add_clause((-guard,))
                return REDUNDANT, None
            self.stats.boundary_points_examined += 1
            point = self._project(out1.model)
            _, y_part = self._split(point)
            y_lits = [v if y_part[v] else -v for v in y_part]
            out2 = self._solve(self._present_selectors() + y_lits, "redundancy")
            if out2.status == UNSAT:
                self._recheck_removable(i, positions[i], active, point, y_part)
                return NOT_REDUNDANT, point
            x_model = {v: out2.model[v] for v in self.x_set}
            d = plug_clause(y_part, x_model, active, self.shorten)
            self.stats.shortened_literal_drops += len(y_part) - len(d)
            self.stats.plugging_clauses_added += 1
            self.oracle.add_clause(d + (-guard,))

    def _recheck_removable(self, i: int, pos: int, active: list[Clause],
                           point: Assignment, y_part: Assignment) -> None:
        current = CnfFormula(active, var_span=self.formula.var_span)
        if not is_boundary_point(current, [pos], point):
            raise VerificationInternalError(
                "redundancy witness is not a target-falsifying point")
        outcome = solve_formula(cofactor(current, y_part),
                                time_budget=self.remaining_time())
        if outcome.status == RESOURCE_OUT:
            raise _ResourceOut(outcome.limit or "limit")
        if outcome.status != UNSAT:
            raise VerificationInternalError(
                "redundancy witness has models in its y-subspace")


def ver_pqe(problem: PqeProblem, h: Solution, *, shorten: bool = True,
            max_conflicts: int | None = None, time_budget: float | None = None,
            iteration_cap: int = DEFAULT_ITERATION_CAP,
            kernel_name: str | None = None) -> Verdict:
    """Decide whether h solves the problem; refutations carry a witness.

    Every clause of h is first checked to be implied by the formula, in
    clause order, reporting the first failure.  Then each target clause
    is checked for redundancy in declared order and removed once proven
    redundant.  Witnesses are re-validated before they are returned.
    """
    session = _Session(problem.formula, problem.x_vars, problem.target_indices,
                       shorten=shorten, max_conflicts=max_conflicts,
                       time_budget=time_budget, iteration_cap=iteration_cap,
                       kernel_name=kernel_name)
    try:
        witness = session.implication_witness(h)
        if witness is not None:
            return Verdict(NOT_IMPLIED, witness, session.stats)
        session.add_extra_clauses(h.clauses.clauses)
        for i in problem.target_indices:
            status, point = session.check_red(i)
            if status == NOT_REDUNDANT:
                return Verdict(NOT_REDUNDANT,
                               Witness(i, problem.formula.clauses[i], point),
                               session.stats)
        return Verdict(CORRECT, None, session.stats)
    except _ResourceOut as ex:
        return Verdict(RESOURCE_EXCEEDED, None, session.stats, limit=ex.limit)


def check_implication(f: CnfFormula, h: Solution,
                      oracle: SatOracle | None = None) -> Witness | None:
    """First clause of h not implied by f, with its countermodel, else None.

    A supplied oracle must hold exactly f as its database.
    """
    if oracle is None:
        oracle = SatOracle(f.clauses, num_vars=f.var_span)
    span_vars = f.vars() | h.clauses.vars()
    for hi, clause in enumerate(h.clauses.clauses):
        outcome = oracle.solve([-lit for lit in clause])
        if outcome.status == RESOURCE_OUT:
            raise _ResourceOut(outcome.limit or "limit")
        if outcome.status == SAT:
            point = {v: outcome.model[v] for v in span_vars}
            return Witness(hi, clause, point)
    return None


def check_red(f_and_h: CnfFormula, x_vars, c_index: int, *,
              shorten: bool = True, max_conflicts: int | None = None,
              time_budget: float | None = None,
              iteration_cap: int = DEFAULT_ITERATION_CAP,
              kernel_name: str | None = None) -> CheckRedResult:
    """Redundancy of one quantified clause inside a combined formula.

    Plugging clauses live only for this call.  On failure the result
    carries the witnessing point.
    """
    clause = f_and_h.clauses[c_index]
    x_eff = frozenset(x_vars) & f_and_h.vars()
    if not any(abs(l) in x_eff for l in clause):
        raise FormulaError("the checked clause must share a variable with X")
    session = _Session(f_and_h, x_vars, [c_index], shorten=shorten,
                       max_conflicts=max_conflicts, time_budget=time_budget,
                       iteration_cap=iteration_cap, kernel_name=kernel_name)
    try:
        status, point = session.check_red(c_index)
        return CheckRedResult(status, point, session.stats)
    except _ResourceOut as ex:
        return CheckRedResult(RESOURCE_EXCEEDED, None, session.stats, limit=ex.limit)
