"""CNF formulas, assignments, cofactors, and the clause-taking problem structure.

Literals follow the DIMACS convention: variables are positive integers,
a negative integer is the negated variable, and 0 never names a variable.
An assignment maps variable ids to 0 or 1.  All objects here are immutable
after construction and every operation is a pure function.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

Clause = tuple[int, ...]
Assignment = dict[int, int]

SATISFIED = "satisfied"
FALSIFIED = "falsified"
UNDECIDED = "undecided"

Y_REMOVABLE = "y_removable"
Y_UNREMOVABLE = "y_unremovable"


class FormulaError(ValueError):
    """Structural violation in a clause, formula, assignment, or problem."""


class TautologyError(FormulaError):
    """Clause contains a variable in both polarities."""


def make_clause(literals: Iterable[int]) -> Clause:
    """Normalize a literal sequence into a clause.

    Duplicate literals are dropped (keeping first-occurrence order);
    a clause containing both v and -v is rejected.  The empty clause is
    legal and denotes constant false.
    """
    seen: set[int] = set()
    out: list[int] = []
    for raw in literals:
        lit = int(raw)
        if lit == 0:
            raise FormulaError("0 is a terminator, not a literal")
        if -lit in seen:
            raise TautologyError(f"clause contains both {lit} and {-lit}")
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


class CnfFormula:
    """An indexed set of clauses.  Clause positions are stable identifiers."""

    __slots__ = ("clauses", "var_span", "_vars")

    def __init__(self, clauses: Iterable[Iterable[int]] = (), var_span: int | None = None):
        self.clauses: tuple[Clause, ...] = tuple(
            c if isinstance(c, tuple) else make_clause(c) for c in clauses
        )
        mentioned = 0
        for clause in self.clauses:
            for lit in clause:
                v = lit if lit > 0 else -lit
                if v > mentioned:
                    mentioned = v
        if var_span is None:
            var_span = mentioned
        elif var_span < mentioned:
            raise FormulaError(
                f"var_span {var_span} is below the largest mentioned variable {mentioned}"
            )
        self.var_span = var_span
        self._vars: frozenset[int] | None = None

    def vars(self) -> frozenset[int]:
        """Set of variable ids that actually occur in some clause."""
        if self._vars is None:
            self._vars = frozenset(abs(l) for c in self.clauses for l in c)
        return self._vars

    def has_empty_clause(self) -> bool:
        return any(not c for c in self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.clauses == other.clauses and self.var_span == other.var_span

    def __hash__(self) -> int:
        return hash((self.clauses, self.var_span))

    def __repr__(self) -> str:
        return f"CnfFormula({len(self.clauses)} clauses, var_span={self.var_span})"


def eval_clause(clause: Clause, q: Mapping[int, int]) -> str:
    """Clause status under a (possibly partial) assignment."""
    undecided = False
    for lit in clause:
        v = lit if lit > 0 else -lit
        b = q.get(v)
        if b is None:
            undecided = True
        elif (b == 1) == (lit > 0):
            return SATISFIED
    return UNDECIDED if undecided else FALSIFIED


def satisfies_formula(f: CnfFormula | Iterable[Clause], q: Mapping[int, int]) -> bool:
    """True iff every clause is satisfied by q."""
    clauses = f.clauses if isinstance(f, CnfFormula) else f
    return all(eval_clause(c, q) == SATISFIED for c in clauses)


def cofactor(f: CnfFormula, q: Mapping[int, int]) -> CnfFormula:
    """The formula f simplified under q.

    Clauses satisfied by q are dropped; falsified literals are removed
    from the remaining clauses.  The result may contain the empty clause.
    """
    out: list[Clause] = []
    for clause in f.clauses:
        keep: list[int] = []
        satisfied = False
        for lit in clause:
            v = lit if lit > 0 else -lit
            b = q.get(v)
            if b is None:
                keep.append(lit)
            elif (b == 1) == (lit > 0):
                satisfied = True
                break
        if not satisfied:
            out.append(tuple(keep))
    return CnfFormula(out, var_span=f.var_span)


def extends(r: Mapping[int, int], q: Mapping[int, int]) -> bool:
    """True iff q is contained in r (same value on every variable of q)."""
    return all(r.get(v) == b for v, b in q.items())


def is_full_over(q: Mapping[int, int], variables: Iterable[int]) -> bool:
    return all(v in q for v in variables)


def is_boundary_point(f: CnfFormula, g: Iterable[int], p: Mapping[int, int]) -> bool:
    """True iff p falsifies every clause indexed by g and satisfies the rest of f.

    p must cover vars(f); g must be a nonempty set of valid clause indices.
    """
    g_set = set(g)
    if not g_set:
        raise FormulaError("boundary points are defined for a nonempty target subset")
    n = len(f.clauses)
    for i in g_set:
        if not 0 <= i < n:
            raise FormulaError(f"clause index {i} out of range 0..{n - 1}")
    if not is_full_over(p, f.vars()):
        raise FormulaError("boundary-point test requires a full assignment to vars(f)")
    for i, clause in enumerate(f.clauses):
        status = eval_clause(clause, p)
        if i in g_set:
            if status != FALSIFIED:
                return False
        elif status != SATISFIED:
            return False
    return True


class PqeProblem:
    """A formula F, the quantified variable set X, and the target subset G.

    The target is tracked by clause index so duplicate clauses stay
    distinguishable.  The unquantified set Y is vars(F) \\ X.  X may list
    ids up to var_span that never occur in F; such ids are inert and the
    algorithms use X intersected with vars(F).
    """

    __slots__ = ("formula", "x_vars", "target_indices", "_y_vars")

    def __init__(self, formula: CnfFormula, x_vars: Iterable[int],
                 target_indices: Iterable[int]):
        self.formula = formula
        xs = frozenset(int(v) for v in x_vars)
        for v in xs:
            if not 1 <= v <= formula.var_span:
                raise FormulaError(f"quantified variable {v} outside 1..{formula.var_span}")
        self.x_vars = xs

        targets: list[int] = []
        seen: set[int] = set()
        for raw in target_indices:
            i = int(raw)
            if not 0 <= i < len(formula.clauses):
                raise FormulaError(
                    f"target clause index {i} out of range 0..{len(formula.clauses) - 1}"
                )
            if i not in seen:
                seen.add(i)
                targets.append(i)
        if not targets:
            raise FormulaError("the target subset must be nonempty")
        effective_x = xs & formula.vars()
        for i in targets:
            if not any(abs(l) in effective_x for l in formula.clauses[i]):
                raise FormulaError(
                    f"target clause {i} shares no variable with the quantified set"
                )
        self.target_indices: tuple[int, ...] = tuple(targets)
        self._y_vars: frozenset[int] | None = None

    @property
    def y_vars(self) -> frozenset[int]:
        if self._y_vars is None:
            self._y_vars = self.formula.vars() - self.x_vars
        return self._y_vars

    def split_xy(self, p: Mapping[int, int]) -> tuple[Assignment, Assignment]:
        """Split a point over vars(F) into its x-part and y-part."""
        x_part: Assignment = {}
        y_part: Assignment = {}
        for v in self.formula.vars():
            b = p.get(v)
            if b is None:
                raise FormulaError(f"point does not assign variable {v}")
            if v in self.x_vars:
                x_part[v] = b
            else:
                y_part[v] = b
        return x_part, y_part

    def target_clauses(self) -> list[Clause]:
        return [self.formula.clauses[i] for i in self.target_indices]

    def remainder_indices(self) -> list[int]:
        g = set(self.target_indices)
        return [i for i in range(len(self.formula.clauses)) if i not in g]

    def __repr__(self) -> str:
        return (f"PqeProblem({len(self.formula)} clauses, |X|={len(self.x_vars)}, "
                f"|G|={len(self.target_indices)})")


class Solution:
    """A candidate answer: clauses over the unquantified variables only."""

    __slots__ = ("clauses",)

    def __init__(self, clauses: CnfFormula | Iterable[Iterable[int]],
                 problem: PqeProblem):
        f = clauses if isinstance(clauses, CnfFormula) else CnfFormula(clauses)
        for v in sorted(f.vars()):
            if v in problem.x_vars:
                raise FormulaError(f"quantified variable {v} may not appear in a solution")
            if v not in problem.y_vars:
                raise FormulaError(
                    f"variable {v} does not occur unquantified in the problem formula"
                )
        self.clauses = f

    def __len__(self) -> int:
        return len(self.clauses)

    def __repr__(self) -> str:
        return f"Solution({len(self.clauses)} clauses)"


def classify_boundary_point(problem: PqeProblem, p: Mapping[int, int],
                            oracle=None) -> str:
    """Y_REMOVABLE iff the problem formula is unsatisfiable in p's y-subspace.

    p must be a boundary point of the problem's formula with respect to
    its target subset.  When an oracle is supplied its database must hold
    exactly the problem formula; the y-part is then passed as assumptions,
    which is equivalent to solving the cofactor.
    """
    if not is_boundary_point(problem.formula, problem.target_indices, p):
        raise FormulaError("classify_boundary_point requires a boundary point")
    _, y_part = problem.split_xy(p)
    from pqeverify.sat import ResourceExhausted, solve_formula

    if oracle is not None:
        outcome = oracle.solve(y_part)
    else:
        outcome = solve_formula(cofactor(problem.formula, y_part))
    if outcome.status == "resource_out":
        raise ResourceExhausted(outcome.limit or "limit")
    return Y_REMOVABLE if outcome.status == "unsat" else Y_UNREMOVABLE
