"""Incremental SAT oracle with assumptions, statistics, and resource limits.

The decision procedure lives in a kernel module: the compiled extension
pqeverify._ckernel when it built, else the pure-Python twin
pqeverify._pykernel.  Both implement the identical algorithm, so the
choice affects speed only.  Set PQEVERIFY_KERNEL=py or =c to force one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from time import monotonic
from typing import Iterable, Mapping

from pqeverify.formulas import Clause, CnfFormula, make_clause

SAT = "sat"
UNSAT = "unsat"
RESOURCE_OUT = "resource_out"


class ResourceExhausted(RuntimeError):
    """Raised where an operation cannot report resource exhaustion in-band."""

    def __init__(self, limit: str):
        super().__init__(f"oracle resource limit exhausted: {limit}")
        self.limit = limit


def _load_kernel():
    forced = os.environ.get("PQEVERIFY_KERNEL", "").strip().lower()
    if forced not in ("", "c", "py"):
        raise ValueError(f"PQEVERIFY_KERNEL must be 'c' or 'py', not {forced!r}")
    if forced != "py":
        try:
            from pqeverify import _ckernel

            return _ckernel.Kernel, "c"
        except ImportError:
            if forced == "c":
                raise
    from pqeverify import _pykernel

    return _pykernel.Kernel, "py"


_KERNEL_CLASS, KERNEL_NAME = _load_kernel()


def kernel_class(name: str | None = None):
    """Kernel implementation by name ('c' or 'py'); default is the loaded one."""
    if name is None:
        return _KERNEL_CLASS
    if name == "py":
        from pqeverify import _pykernel

        return _pykernel.Kernel
    if name == "c":
        from pqeverify import _ckernel

        return _ckernel.Kernel
    raise ValueError(f"unknown kernel {name!r}")


@dataclass
class SatOutcome:
    """Result of one solve call."""

    status: str
    model: dict[int, int] | None = None
    core: tuple[int, ...] | None = None
    limit: str | None = None

    def __post_init__(self):
        if self.status == SAT and self.model is None:
            raise ValueError("sat outcome requires a model")
        if self.status != SAT and self.model is not None:
            raise ValueError("only sat outcomes carry a model")


class SatOracle:
    """A growable clause database plus a complete decision procedure.

    max_conflicts caps the conflicts of each individual solve call;
    time_budget (seconds) covers the oracle's whole lifetime.  Both are
    checked at conflict boundaries, so a trivial call never times out.
    Instances are single-threaded; create one per worker.
    """

    def __init__(self, clauses: Iterable[Iterable[int]] = (), num_vars: int = 0,
                 max_conflicts: int | None = None,
                 time_budget: float | None = None,
                 kernel_name: str | None = None):
        self._kernel = kernel_class(kernel_name)()
        self.num_vars = 0
        self.clauses: list[Clause] = []
        self.max_conflicts = max_conflicts
        self.deadline = monotonic() + time_budget if time_budget is not None else None
        self.total_calls = 0
        if num_vars:
            self.ensure_vars(num_vars)
        for c in clauses:
            self.add_clause(c)

    @property
    def conflicts(self) -> int:
        return self._kernel.n_conflicts

    @property
    def decisions(self) -> int:
        return self._kernel.n_decisions

    @property
    def propagations(self) -> int:
        return self._kernel.n_propagations

    def ensure_vars(self, n: int) -> None:
        if n > self.num_vars:
            self.num_vars = n
            self._kernel.new_vars(n)

    def new_var(self) -> int:
        self.ensure_vars(self.num_vars + 1)
        return self.num_vars

    def add_clause(self, clause: Iterable[int]) -> None:
        c = clause if isinstance(clause, tuple) else make_clause(clause)
        if c:
            self.ensure_vars(max(l if l > 0 else -l for l in c))
        self.clauses.append(c)
        self._kernel.add_clause(list(c))

    def solve(self, assumptions: Mapping[int, int] | Iterable[int] = ()) -> SatOutcome:
        """Decide the database under the assumptions.

        Assumptions may be an assignment mapping or signed literals; they
        are canonicalized to ascending variable order so identical sets
        always search identically.
        """
        lits = self._assumption_lits(assumptions)
        self.total_calls += 1
        budget = -1 if self.max_conflicts is None else self.max_conflicts
        deadline = -1.0 if self.deadline is None else self.deadline
        status, model, core, limit = self._kernel.solve(lits, budget, deadline)
        if status == 1:
            return SatOutcome(SAT, model={v: model[v - 1] for v in range(1, self.num_vars + 1)})
        if status == 0:
            return SatOutcome(UNSAT, core=tuple(core or ()))
        return SatOutcome(RESOURCE_OUT, limit=limit)

    def _assumption_lits(self, assumptions) -> list[int]:
        if isinstance(assumptions, Mapping):
            lits = [v if b else -v for v, b in assumptions.items()]
        else:
            lits = [int(l) for l in assumptions]
        lits.sort(key=abs)
        for lit in lits:
            v = lit if lit > 0 else -lit
            if v > self.num_vars:
                self.ensure_vars(v)
        return lits

    def dump_dimacs(self) -> str:
        """The logical clause database (client clauses only) as DIMACS CNF."""
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for c in self.clauses:
            lines.append(" ".join(str(l) for l in c) + " 0")
        return "\n".join(lines) + "\n"


def solve_formula(f: CnfFormula | Iterable[Iterable[int]],
                  max_conflicts: int | None = None,
                  time_budget: float | None = None,
                  kernel_name: str | None = None) -> SatOutcome:
    """One-shot satisfiability of a formula with a fresh oracle."""
    clauses = f.clauses if isinstance(f, CnfFormula) else f
    num_vars = f.var_span if isinstance(f, CnfFormula) else 0
    oracle = SatOracle(clauses, num_vars=num_vars, max_conflicts=max_conflicts,
                       time_budget=time_budget, kernel_name=kernel_name)
    return oracle.solve()
