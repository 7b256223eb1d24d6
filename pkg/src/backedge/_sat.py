"""Minimal conflict-driven clause-learning SAT solver.

Backs the lazy-cut search for acyclic vertex partitions.  Deterministic:
no randomness anywhere, ties broken by variable index, so repeated runs
produce identical models and identical refutations.

Literal convention: variable v >= 0 yields literals 2*v (positive) and
2*v + 1 (negative).
"""

from __future__ import annotations

from typing import Optional, Sequence


def lit(var: int, positive: bool) -> int:
    return 2 * var + (0 if positive else 1)


def _neg(l: int) -> int:
    return l ^ 1


class Solver:
    def __init__(self, n_vars: int = 0):
        self.n_vars = 0
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = []  # literal -> clause indices watching it
        self.assign: list[int] = []  # var -> 0 unassigned, 1 true, -1 false
        self.level: list[int] = []
        self.reason: list[int] = []  # var -> clause index or -1 for decisions
        self.activity: list[float] = []
        self.phase: list[bool] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.ok = True
        self.conflicts = 0
        if n_vars:
            self._grow(n_vars)

    def _grow(self, n_vars: int) -> None:
        while self.n_vars < n_vars:
            self.n_vars += 1
            self.watches.append([])
            self.watches.append([])
            self.assign.append(0)
            self.level.append(0)
            self.reason.append(-1)
            self.activity.append(0.0)
            self.phase.append(False)

    def add_clause(self, lits: Sequence[int]) -> None:
        """Add a clause (list of literals).  May be called between solve() runs."""
        if not self.ok:
            return
        seen = set()
        clause = []
        for l in lits:
            if l ^ 1 in seen:
                return  # tautology
            if l in seen:
                continue
            seen.add(l)
            clause.append(l)
            self._grow(l // 2 + 1)
        # at the root level, drop already-false literals and detect units
        if self.trail_lim:
            raise RuntimeError("clauses may only be added at decision level 0")
        clause = [l for l in clause if self._value(l) != -1]
        if any(self._value(l) == 1 for l in clause):
            return
        if not clause:
            self.ok = False
            return
        if len(clause) == 1:
            self._enqueue(clause[0], -1)
            if self._propagate() is not None:
                self.ok = False
            return
        idx = len(self.clauses)
        self.clauses.append(clause)
        self.watches[_neg(clause[0])].append(idx)
        self.watches[_neg(clause[1])].append(idx)

    def _value(self, l: int) -> int:
        a = self.assign[l // 2]
        if a == 0:
            return 0
        return a if l % 2 == 0 else -a

    def _enqueue(self, l: int, reason: int) -> bool:
        if self._value(l) == -1:
            return False
        if self._value(l) == 1:
            return True
        v = l // 2
        self.assign[v] = 1 if l % 2 == 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(l)
        return True

    def _propagate(self) -> Optional[int]:
        """Unit propagation; returns a conflicting clause index or None."""
        while self.qhead < len(self.trail):
            l = self.trail[self.qhead]
            self.qhead += 1
            watch = self.watches[l]
            i = 0
            while i < len(watch):
                ci = watch[i]
                clause = self.clauses[ci]
                # ensure the falsified literal sits at position 1
                if clause[0] == _neg(l):
                    clause[0], clause[1] = clause[1], clause[0]
                if self._value(clause[0]) == 1:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(clause)):
                    if self._value(clause[j]) != -1:
                        clause[1], clause[j] = clause[j], clause[1]
                        self.watches[_neg(clause[1])].append(ci)
                        watch[i] = watch[-1]
                        watch.pop()
                        moved = True
                        break
                if moved:
                    continue
                # unit or conflict
                if not self._enqueue(clause[0], ci):
                    return ci
                i += 1
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(self.n_vars):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        """First-UIP conflict analysis; returns learnt clause and backjump level."""
        learnt = [0]
        seen = [False] * self.n_vars
        counter = 0
        l = -1
        idx = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        reason = confl
        while True:
            clause = self.clauses[reason]
            for q in clause if l == -1 else clause[1:]:
                v = q // 2
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                l = self.trail[idx]
                idx -= 1
                if seen[l // 2]:
                    break
            counter -= 1
            seen[l // 2] = False
            if counter == 0:
                break
            reason = self.reason[l // 2]
            # put the implied literal first so the start=1 slice skips it
            clause = self.clauses[reason]
            if clause[0] != l:
                k = clause.index(l)
                clause[0], clause[k] = clause[k], clause[0]
        learnt[0] = _neg(l)
        if len(learnt) == 1:
            return learnt, 0
        bj = max(self.level[q // 2] for q in learnt[1:])
        # move a max-level literal to position 1 for watching
        for k in range(1, len(learnt)):
            if self.level[learnt[k] // 2] == bj:
                learnt[1], learnt[k] = learnt[k], learnt[1]
                break
        return learnt, bj

    def _backjump(self, target: int) -> None:
        while len(self.trail_lim) > target:
            limit = self.trail_lim.pop()
            while len(self.trail) > limit:
                l = self.trail.pop()
                v = l // 2
                self.phase[v] = l % 2 == 0
                self.assign[v] = 0
                self.reason[v] = -1
        self.qhead = len(self.trail)

    def reset(self) -> None:
        """Undo all decisions so further clauses may be added."""
        self._backjump(0)

    def _decide(self) -> int:
        best = -1
        best_act = -1.0
        for v in range(self.n_vars):
            if self.assign[v] == 0 and self.activity[v] > best_act:
                best = v
                best_act = self.activity[v]
        if best < 0:
            return -1
        return lit(best, self.phase[best])

    def solve(self, deadline=None) -> Optional[list[bool]]:
        """Return a model as a list of booleans, or None when unsatisfiable."""
        if not self.ok:
            return None
        if self._propagate() is not None:
            self.ok = False
            return None
        restart_limit = 100
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                conflicts_here += 1
                if deadline is not None and self.conflicts % 256 == 0:
                    deadline.check()
                if not self.trail_lim:
                    self.ok = False
                    return None
                learnt, bj = self._analyze(confl)
                self._backjump(bj)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    idx = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[_neg(learnt[0])].append(idx)
                    self.watches[_neg(learnt[1])].append(idx)
                    self._enqueue(learnt[0], idx)
                self.var_inc /= 0.95
                continue
            if conflicts_here >= restart_limit:
                conflicts_here = 0
                restart_limit = int(restart_limit * 1.5)
                self._backjump(0)
                continue
            l = self._decide()
            if l == -1:
                return [self.assign[v] == 1 for v in range(self.n_vars)]
            self.trail_lim.append(len(self.trail))
            self._enqueue(l, -1)
