"""Pure-Python CDCL kernel: two watched literals, first-UIP learning,
activity-based branching, incremental solving under assumptions.

This module and the compiled twin (pqeverify._ckernel) implement the
same algorithm step for step: same propagation order, same conflict
analysis, same branching tie-breaks.  Given identical call sequences the
two kernels return identical outcomes and models, so either can back the
public SatOracle.  Keep them in sync when changing anything here.

Conventions: variables are 1..nvars; a literal is a signed int; the
truth value array uses 0=false, 1=true, 2=unassigned.  Clauses live in a
flat int arena: [size, flags, lit0, lit1, ...] with the two watched
literals at positions 0 and 1.  flags bit0 = learnt, bit1 = dead.
"""

from __future__ import annotations

from time import monotonic

SAT = 1
UNSAT = 0
RESOURCE = 2

_RESCALE = 1e100
_INV_DECAY = 1.0 / 0.95


class Kernel:
    def __init__(self, wipe_threshold: int = 8000):
        self.nvars = 0
        self.arena: list[int] = []
        self.watches: list[list[int]] = [[], []]  # slots 0,1 unused
        self.assigns: list[int] = [2]
        self.level: list[int] = [0]
        self.reason: list[int] = [-1]
        self.seen: list[bool] = [False]
        self.activity: list[float] = [0.0]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.learnt_offsets: list[int] = []
        self.wipe_threshold = wipe_threshold
        self.n_conflicts = 0
        self.n_decisions = 0
        self.n_propagations = 0

    # ------------------------------------------------------------------
    def new_vars(self, n: int) -> None:
        """Make variables 1..n known."""
        while self.nvars < n:
            self.nvars += 1
            self.assigns.append(2)
            self.level.append(0)
            self.reason.append(-1)
            self.seen.append(False)
            self.activity.append(0.0)
            self.watches.append([])
            self.watches.append([])

    def _value(self, lit: int) -> int:
        a = self.assigns[lit if lit > 0 else -lit]
        if a == 2:
            return 2
        return a if lit > 0 else 1 - a

    def _enqueue(self, lit: int, reason_ofs: int) -> None:
        v = lit if lit > 0 else -lit
        self.assigns[v] = 1 if lit > 0 else 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason_ofs
        self.trail.append(lit)

    def _alloc(self, lits: list[int], learnt: bool) -> int:
        arena = self.arena
        ofs = len(arena)
        arena.append(len(lits))
        arena.append(1 if learnt else 0)
        arena.extend(lits)
        a, b = lits[0], lits[1]
        wa = self.watches[2 * a if a > 0 else -2 * a + 1]
        wa.append(ofs)
        wa.append(b)
        wb = self.watches[2 * b if b > 0 else -2 * b + 1]
        wb.append(ofs)
        wb.append(a)
        return ofs

    def add_clause(self, lits) -> bool:
        """Add a clause (normalized by the caller: deduped, no tautology).

        Must be called at decision level 0.  Returns False once the
        database is known unsatisfiable.
        """
        if not self.ok:
            return False
        out: list[int] = []
        for lit in lits:
            val = self._value(lit)
            if val == 1:
                return True  # satisfied at root, nothing to store
            if val == 2:
                out.append(lit)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._alloc(out, False)
        return True

    # ------------------------------------------------------------------
    def _propagate(self) -> int:
        arena = self.arena
        watches = self.watches
        assigns = self.assigns
        trail = self.trail
        confl = -1
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.n_propagations += 1
            fl = -p
            wl = watches[2 * fl if fl > 0 else -2 * fl + 1]
            i = 0
            j = 0
            n = len(wl)
            while i < n:
                ofs = wl[i]
                blocker = wl[i + 1]
                i += 2
                flags = arena[ofs + 1]
                if flags & 2:
                    continue  # dead clause, drop the entry
                a = assigns[blocker if blocker > 0 else -blocker]
                if a != 2 and (a == 1) == (blocker > 0):
                    wl[j] = ofs
                    wl[j + 1] = blocker
                    j += 2
                    continue
                size = arena[ofs]
                base = ofs + 2
                if arena[base] == fl:
                    arena[base] = arena[base + 1]
                    arena[base + 1] = fl
                first = arena[base]
                a = assigns[first if first > 0 else -first]
                if a != 2 and (a == 1) == (first > 0):
                    wl[j] = ofs
                    wl[j + 1] = first
                    j += 2
                    continue
                found = False
                for k in range(base + 2, base + size):
                    q = arena[k]
                    qa = assigns[q if q > 0 else -q]
                    if qa == 2 or (qa == 1) == (q > 0):
                        arena[base + 1] = q
                        arena[k] = fl
                        wq = watches[2 * q if q > 0 else -2 * q + 1]
                        wq.append(ofs)
                        wq.append(first)
                        found = True
                        break
                if found:
                    continue
                wl[j] = ofs
                wl[j + 1] = first
                j += 2
                if a == 2:
                    v = first if first > 0 else -first
                    assigns[v] = 1 if first > 0 else 0
                    self.level[v] = len(self.trail_lim)
                    self.reason[v] = ofs
                    trail.append(first)
                else:
                    while i < n:  # conflict: keep the unvisited tail
                        wl[j] = wl[i]
                        wl[j + 1] = wl[i + 1]
                        i += 2
                        j += 2
                    confl = ofs
                    self.qhead = len(trail)
                    break
            del wl[j:]
            if confl != -1:
                break
        return confl

    # ------------------------------------------------------------------
    def _bump(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > _RESCALE:
            activity = self.activity
            for i in range(1, self.nvars + 1):
                activity[i] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        arena = self.arena
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        to_clear: list[int] = []
        counter = 0
        p = 0
        index = len(trail) - 1
        c = confl
        while True:
            base = c + 2
            start = base + 1 if p != 0 else base
            for k in range(start, base + arena[c]):
                q = arena[k]
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    to_clear.append(v)
                    self._bump(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                pl = trail[index]
                v = pl if pl > 0 else -pl
                index -= 1
                if seen[v]:
                    break
            p = pl
            c = reason[v]
            seen[v] = False
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p

        # basic self-subsumption: drop a literal whose reason clause is
        # entirely contained in the learnt clause
        out = [learnt[0]]
        for idx in range(1, len(learnt)):
            q = learnt[idx]
            v = q if q > 0 else -q
            r = reason[v]
            redundant = r != -1
            if redundant:
                rbase = r + 2
                for k in range(rbase + 1, rbase + arena[r]):
                    w = arena[k]
                    wv = w if w > 0 else -w
                    if not seen[wv] and level[wv] > 0:
                        redundant = False
                        break
            if not redundant:
                out.append(q)
        for v in to_clear:
            seen[v] = False

        if len(out) == 1:
            return out, 0
        max_i = 1
        max_lv = level[out[1] if out[1] > 0 else -out[1]]
        for i in range(2, len(out)):
            lv = level[out[i] if out[i] > 0 else -out[i]]
            if lv > max_lv:
                max_lv = lv
                max_i = i
        out[1], out[max_i] = out[max_i], out[1]
        return out, max_lv

    def _analyze_final(self, p: int) -> list[int]:
        """Assumption literals whose conjunction contradicts the database."""
        out = {p}
        if not self.trail_lim:
            return [p]
        arena = self.arena
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        v0 = p if p > 0 else -p
        seen[v0] = True
        bottom = self.trail_lim[0]
        for i in range(len(trail) - 1, bottom - 1, -1):
            lit = trail[i]
            v = lit if lit > 0 else -lit
            if not seen[v]:
                continue
            r = reason[v]
            if r == -1:
                out.add(lit)  # decisions below here are assumption literals
            else:
                base = r + 2
                for k in range(base + 1, base + arena[r]):
                    w = arena[k]
                    wv = w if w > 0 else -w
                    if level[wv] > 0:
                        seen[wv] = True
            seen[v] = False
        seen[v0] = False
        return sorted(out, key=abs)

    # ------------------------------------------------------------------
    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        trail = self.trail
        assigns = self.assigns
        reason = self.reason
        bottom = self.trail_lim[lvl]
        for i in range(len(trail) - 1, bottom - 1, -1):
            lit = trail[i]
            v = lit if lit > 0 else -lit
            assigns[v] = 2
            reason[v] = -1
        del trail[bottom:]
        del self.trail_lim[lvl:]
        self.qhead = bottom

    def _pick_branch(self) -> int:
        assigns = self.assigns
        activity = self.activity
        best = 0
        best_act = -1.0
        for v in range(1, self.nvars + 1):
            if assigns[v] == 2 and activity[v] > best_act:
                best_act = activity[v]
                best = v
        return best

    def _wipe_learnts(self) -> None:
        # only level-0 assignments exist here; their reasons are never
        # read again, so learnt reason clauses can be dropped safely
        for lit in self.trail:
            self.reason[lit if lit > 0 else -lit] = -1
        arena = self.arena
        for ofs in self.learnt_offsets:
            arena[ofs + 1] |= 2
        self.learnt_offsets.clear()

    def _check_model(self, assumptions) -> None:
        arena = self.arena
        assigns = self.assigns
        ofs = 0
        end = len(arena)
        while ofs < end:
            size = arena[ofs]
            flags = arena[ofs + 1]
            if flags == 0:  # original, live
                ok = False
                for k in range(ofs + 2, ofs + 2 + size):
                    lit = arena[k]
                    if (assigns[lit if lit > 0 else -lit] == 1) == (lit > 0):
                        ok = True
                        break
                if not ok:
                    raise RuntimeError("internal error: model does not satisfy the database")
            ofs += size + 2
        for lit in assumptions:
            if (assigns[lit if lit > 0 else -lit] == 1) != (lit > 0):
                raise RuntimeError("internal error: model does not extend the assumptions")

    # ------------------------------------------------------------------
    def solve(self, assumptions, conflict_budget: int = -1,
              deadline: float = -1.0):
        """Decide the database under the given assumption literals.

        Returns (status, model, core, limit): model is a 0/1 list for
        vars 1..nvars on SAT; core is a subset of the assumptions that is
        already contradictory on assumption-driven UNSAT; limit names the
        exhausted budget on RESOURCE.
        """
        if not self.ok:
            return UNSAT, None, [], None
        self._cancel_until(0)
        if len(self.learnt_offsets) > self.wipe_threshold:
            self._wipe_learnts()
        if self._propagate() != -1:
            self.ok = False
            return UNSAT, None, [], None
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl != -1:
                self.n_conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    self.ok = False
                    return UNSAT, None, [], None
                if conflict_budget >= 0 and conflicts_here >= conflict_budget:
                    self._cancel_until(0)
                    return RESOURCE, None, None, "conflicts"
                if deadline >= 0.0 and monotonic() >= deadline:
                    self._cancel_until(0)
                    return RESOURCE, None, None, "time"
                learnt, btl = self._analyze(confl)
                self._cancel_until(btl)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ofs = self._alloc(learnt, True)
                    self.learnt_offsets.append(ofs)
                    self._enqueue(learnt[0], ofs)
                self.var_inc *= _INV_DECAY
            else:
                dl = len(self.trail_lim)
                if dl < len(assumptions):
                    p = assumptions[dl]
                    a = self._value(p)
                    if a == 1:
                        self.trail_lim.append(len(self.trail))
                    elif a == 0:
                        core = self._analyze_final(p)
                        self._cancel_until(0)
                        return UNSAT, None, core, None
                    else:
                        self.trail_lim.append(len(self.trail))
                        self._enqueue(p, -1)
                else:
                    v = self._pick_branch()
                    if v == 0:
                        model = self.assigns[1:self.nvars + 1]
                        self._check_model(assumptions)
                        self._cancel_until(0)
                        return SAT, model, None, None
                    self.n_decisions += 1
                    self.trail_lim.append(len(self.trail))
                    self._enqueue(-v, -1)
