# distutils: language = c++
"""Compiled CDCL core; mirrors ``_pycdcl`` operation for operation."""

from libcpp.vector cimport vector
from libc.math cimport pow

import time

cdef int _SAT = 1
cdef int _UNSAT = 0
cdef int _RESTART = -1
cdef int _INTERRUPT = -2


cdef long _luby(double y, long x):
    cdef long size = 1
    cdef long seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return <long>pow(y, seq)


cdef class CdclSolver:
    cdef public int nvars
    cdef public bint ok
    cdef vector[vector[int]] clauses
    cdef vector[char] learnt
    cdef vector[double] cl_act
    cdef vector[int] cl_lbd
    cdef long n_learnts
    cdef vector[vector[int]] watches
    cdef vector[signed char] val
    cdef vector[int] level
    cdef vector[int] reason
    cdef vector[int] trail
    cdef vector[int] trail_lim
    cdef int qhead
    cdef vector[double] activity
    cdef vector[char] polarity
    cdef vector[char] seen
    cdef vector[int] heap
    cdef vector[int] heap_idx
    cdef double var_inc, var_decay, cla_inc, cla_decay, max_learnts
    cdef object _model
    cdef object _core_internal
    cdef public long conflicts, decisions, propagations

    def __init__(self):
        self.nvars = 0
        self.ok = True
        self.n_learnts = 0
        self.qhead = 0
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.cla_inc = 1.0
        self.cla_decay = 0.999
        self.max_learnts = 4000.0
        self._model = None
        self._core_internal = None
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # -- variables ----------------------------------------------------------

    cdef void _grow(self, int n):
        cdef int v
        while self.nvars < n:
            v = self.nvars
            self.nvars += 1
            self.watches.push_back(vector[int]())
            self.watches.push_back(vector[int]())
            self.val.push_back(0)
            self.val.push_back(0)
            self.level.push_back(0)
            self.reason.push_back(-1)
            self.activity.push_back(0.0)
            self.polarity.push_back(1)
            self.seen.push_back(0)
            self.heap_idx.push_back(-1)
            self._heap_insert(v)

    def new_var(self):
        self._grow(self.nvars + 1)
        return self.nvars

    # -- heap -----------------------------------------------------------------

    cdef void _heap_up(self, int i):
        cdef int v = self.heap[i]
        cdef double a = self.activity[v]
        cdef int parent, pv
        while i > 0:
            parent = (i - 1) >> 1
            pv = self.heap[parent]
            if self.activity[pv] >= a:
                break
            self.heap[i] = pv
            self.heap_idx[pv] = i
            i = parent
        self.heap[i] = v
        self.heap_idx[v] = i

    cdef void _heap_down(self, int i):
        cdef int n = self.heap.size()
        cdef int v = self.heap[i]
        cdef double a = self.activity[v]
        cdef int child, cv
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and self.activity[self.heap[child + 1]] > self.activity[self.heap[child]]:
                child += 1
            cv = self.heap[child]
            if self.activity[cv] <= a:
                break
            self.heap[i] = cv
            self.heap_idx[cv] = i
            i = child
        self.heap[i] = v
        self.heap_idx[v] = i

    cdef void _heap_insert(self, int v):
        if self.heap_idx[v] >= 0:
            return
        self.heap.push_back(v)
        self.heap_idx[v] = self.heap.size() - 1
        self._heap_up(self.heap.size() - 1)

    cdef int _heap_pop(self):
        cdef int v = self.heap[0]
        cdef int last = self.heap.back()
        self.heap.pop_back()
        self.heap_idx[v] = -1
        if self.heap.size() > 0:
            self.heap[0] = last
            self.heap_idx[last] = 0
            self._heap_down(0)
        return v

    cdef void _bump_var(self, int v):
        cdef int i
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(self.nvars):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_idx[v] >= 0:
            self._heap_up(self.heap_idx[v])

    cdef void _bump_clause(self, int cr):
        cdef size_t i
        self.cl_act[cr] += self.cla_inc
        if self.cl_act[cr] > 1e20:
            for i in range(self.cl_act.size()):
                self.cl_act[i] *= 1e-20
            self.cla_inc *= 1e-20

    # -- assignment -------------------------------------------------------------

    cdef inline void _enqueue(self, int lit, int reason):
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        self.level[lit >> 1] = self.trail_lim.size()
        self.reason[lit >> 1] = reason
        self.trail.push_back(lit)

    cdef void _cancel_until(self, int lvl):
        cdef int i, lit, v, stop
        if <int>self.trail_lim.size() <= lvl:
            return
        stop = self.trail_lim[lvl]
        i = self.trail.size() - 1
        while i >= stop:
            lit = self.trail[i]
            v = lit >> 1
            self.val[lit] = 0
            self.val[lit ^ 1] = 0
            self.reason[v] = -1
            self.polarity[v] = lit & 1
            if self.heap_idx[v] < 0:
                self._heap_insert(v)
            i -= 1
        self.trail.resize(stop)
        self.trail_lim.resize(lvl)
        self.qhead = self.trail.size()

    # -- clauses ------------------------------------------------------------------

    cdef int _attach(self, vector[int]& lits, bint learnt, int lbd):
        cdef int cr = self.clauses.size()
        self.clauses.push_back(lits)
        self.learnt.push_back(learnt)
        self.cl_act.push_back(0.0)
        self.cl_lbd.push_back(lbd)
        self.watches[lits[0]].push_back(cr)
        self.watches[lits[1]].push_back(cr)
        if learnt:
            self.n_learnts += 1
        return cr

    def add_clause(self, lits):
        """Add a clause of DIMACS literals; returns False once the database
        is known to be unsatisfiable."""
        cdef int top = 0, lit, il
        cdef vector[int] out
        if not self.ok:
            return False
        self._cancel_until(0)
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            if abs(lit) > top:
                top = abs(lit)
        if top > self.nvars:
            self._grow(top)
        seen = set()
        for lit in lits:
            il = 2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1
            if il in seen:
                continue
            if (il ^ 1) in seen or self.val[il] == 1:
                return True
            if self.val[il] == -1:
                continue
            seen.add(il)
            out.push_back(il)
        if out.size() == 0:
            self.ok = False
            return False
        if out.size() == 1:
            self._enqueue(out[0], -1)
            if self._propagate() >= 0:
                self.ok = False
                return False
            return True
        self._attach(out, False, 0)
        return True

    # -- propagation ------------------------------------------------------------

    cdef int _propagate(self):
        cdef int p, false_lit, cr, first, lk, k, v, csize
        cdef size_t i, j, n
        cdef int* c
        cdef vector[int]* ws
        cdef int lvl = self.trail_lim.size()
        cdef int confl = -1
        cdef bint found
        while self.qhead < <int>self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = &self.watches[false_lit]
            n = ws.size()
            i = 0
            j = 0
            while i < n:
                cr = ws[0][i]
                i += 1
                c = &self.clauses[cr][0]
                csize = self.clauses[cr].size()
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if self.val[first] == 1:
                    ws[0][j] = cr
                    j += 1
                    continue
                found = False
                for k in range(2, csize):
                    lk = c[k]
                    if self.val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        self.watches[lk].push_back(cr)
                        found = True
                        break
                if found:
                    continue
                ws[0][j] = cr
                j += 1
                if self.val[first] == -1:
                    confl = cr
                    while i < n:
                        ws[0][j] = ws[0][i]
                        j += 1
                        i += 1
                    self.qhead = self.trail.size()
                else:
                    v = first >> 1
                    self.val[first] = 1
                    self.val[first ^ 1] = -1
                    self.level[v] = lvl
                    self.reason[v] = cr
                    self.trail.push_back(first)
            ws.resize(j)
            if confl >= 0:
                return confl
        return -1

    # -- conflict analysis --------------------------------------------------------

    cdef int _analyze(self, int confl, vector[int]& out):
        cdef int cur = self.trail_lim.size()
        cdef vector[int] learnt
        cdef int path = 0, p = -1, idx = self.trail.size() - 1
        cdef int q, v, r, k, best, x, xv, start, csize, tmp
        cdef int* c
        cdef size_t t
        cdef bint keep
        learnt.push_back(0)
        while True:
            c = &self.clauses[confl][0]
            csize = self.clauses[confl].size()
            if self.learnt[confl]:
                self._bump_clause(confl)
            start = 0 if p == -1 else 1
            for k in range(start, csize):
                q = c[k]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self._bump_var(v)
                    self.seen[v] = 1
                    if self.level[v] >= cur:
                        path += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[p >> 1]
            self.seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        out.clear()
        out.push_back(learnt[0])
        for t in range(1, learnt.size()):
            q = learnt[t]
            r = self.reason[q >> 1]
            if r < 0:
                out.push_back(q)
                continue
            keep = False
            c = &self.clauses[r][0]
            csize = self.clauses[r].size()
            for k in range(1, csize):
                xv = c[k] >> 1
                if not self.seen[xv] and self.level[xv] > 0:
                    keep = True
                    break
            if keep:
                out.push_back(q)
        for t in range(1, learnt.size()):
            self.seen[learnt[t] >> 1] = 0

        cdef int bt = 0
        if out.size() > 1:
            best = 1
            for k in range(2, out.size()):
                if self.level[out[k] >> 1] > self.level[out[best] >> 1]:
                    best = k
            tmp = out[1]
            out[1] = out[best]
            out[best] = tmp
            bt = self.level[out[1] >> 1]
        return bt

    cdef int _lbd(self, vector[int]& lits):
        levels = set()
        cdef size_t t
        for t in range(lits.size()):
            levels.add(self.level[lits[t] >> 1])
        return len(levels)

    cdef list _analyze_final(self, int failed):
        cdef list core = [failed]
        cdef int v0 = failed >> 1
        cdef int i, x, r, k, csize, start
        cdef int* c
        if self.trail_lim.size() == 0:
            return core
        self.seen[v0] = 1
        start = self.trail_lim[0]
        i = self.trail.size() - 1
        while i >= start:
            x = self.trail[i] >> 1
            if self.seen[x]:
                r = self.reason[x]
                if r < 0:
                    if self.level[x] > 0:
                        core.append(self.trail[i])
                else:
                    c = &self.clauses[r][0]
                    csize = self.clauses[r].size()
                    for k in range(1, csize):
                        if self.level[c[k] >> 1] > 0:
                            self.seen[c[k] >> 1] = 1
                self.seen[x] = 0
            i -= 1
        self.seen[v0] = 0
        return core

    # -- learnt clause reduction ----------------------------------------------------

    cdef void _reduce_db(self):
        cdef size_t t
        cdef int cr
        for t in range(self.trail.size()):
            self.reason[self.trail[t] >> 1] = -1
        cand = [cr for cr in range(self.clauses.size())
                if self.learnt[cr] and self.cl_lbd[cr] > 2]
        cand.sort(key=lambda x: (-self.cl_lbd[x], self.cl_act[x]))
        cdef vector[char] drop
        drop.resize(self.clauses.size(), 0)
        for cr in cand[: len(cand) // 2]:
            drop[cr] = 1
        self._rebuild(drop)

    cdef void _rebuild(self, vector[char]& drop):
        cdef vector[vector[int]] old
        cdef vector[char] old_learnt
        cdef vector[double] old_act
        cdef vector[int] old_lbd
        cdef size_t cr, k
        cdef int ncr, l
        cdef bint sat
        old.swap(self.clauses)
        old_learnt.swap(self.learnt)
        old_act.swap(self.cl_act)
        old_lbd.swap(self.cl_lbd)
        for k in range(self.watches.size()):
            self.watches[k].clear()
        self.n_learnts = 0
        for cr in range(old.size()):
            if drop[cr]:
                continue
            sat = False
            for k in range(old[cr].size()):
                l = old[cr][k]
                if self.val[l] == 1 and self.level[l >> 1] == 0:
                    sat = True
                    break
            if sat:
                continue
            ncr = self._attach(old[cr], old_learnt[cr], old_lbd[cr])
            self.cl_act[ncr] = old_act[cr]

    # -- search ---------------------------------------------------------------------

    cdef int _pick_branch(self):
        cdef int v, lit
        while self.heap.size() > 0:
            v = self._heap_pop()
            lit = 2 * v + self.polarity[v]
            if self.val[lit] == 0:
                return lit
        return -1

    cdef int _search(self, long nof_conflicts, vector[int]& assumps, double deadline):
        cdef long conflicts = 0
        cdef int confl, bt, lbd, cr, nxt, p, v
        cdef vector[int] learnt
        while True:
            confl = self._propagate()
            if confl >= 0:
                conflicts += 1
                self.conflicts += 1
                if self.trail_lim.size() == 0:
                    self.ok = False
                    self._core_internal = []
                    return _UNSAT
                bt = self._analyze(confl, learnt)
                lbd = self._lbd(learnt)
                self._cancel_until(bt)
                if learnt.size() == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    cr = self._attach(learnt, True, lbd)
                    self._bump_clause(cr)
                    self._enqueue(learnt[0], cr)
                self.var_inc /= self.var_decay
                self.cla_inc /= self.cla_decay
                if deadline >= 0 and (self.conflicts & 255) == 0:
                    if time.monotonic() > deadline:
                        return _INTERRUPT
                continue
            if conflicts >= nof_conflicts:
                return _RESTART
            if self.trail_lim.size() == 0 and self.n_learnts >= self.max_learnts + self.trail.size():
                self._reduce_db()
                self.max_learnts *= 1.1
            nxt = -1
            while self.trail_lim.size() < assumps.size():
                p = assumps[self.trail_lim.size()]
                if self.val[p] == 1:
                    self.trail_lim.push_back(self.trail.size())
                elif self.val[p] == -1:
                    self._core_internal = self._analyze_final(p)
                    return _UNSAT
                else:
                    nxt = p
                    break
            if nxt < 0:
                nxt = self._pick_branch()
                if nxt < 0:
                    self._model = [
                        (v + 1) if self.val[2 * v] == 1 else -(v + 1) for v in range(self.nvars)
                    ]
                    return _SAT
            self.decisions += 1
            self.trail_lim.push_back(self.trail.size())
            self._enqueue(nxt, -1)

    def solve(self, assumptions=(), deadline=None):
        """Return 1 (SAT), 0 (UNSAT) or -1 (deadline reached)."""
        cdef vector[int] assumps
        cdef long restarts = 0
        cdef int status, lit, v
        cdef double dl = -1.0 if deadline is None else deadline
        self._model = None
        self._core_internal = None
        if not self.ok:
            self._core_internal = []
            return _UNSAT
        for lit in assumptions:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            v = abs(lit)
            if v > self.nvars:
                self._grow(v)
            assumps.push_back(2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1)
        while True:
            status = self._search(_luby(2, restarts) * 100, assumps, dl)
            if status != _RESTART:
                break
            self._cancel_until(0)
            restarts += 1
            if dl >= 0 and time.monotonic() > dl:
                status = _INTERRUPT
                break
        self._cancel_until(0)
        if status == _INTERRUPT:
            return -1
        return status

    def get_model(self):
        return self._model

    def get_core(self):
        if self._core_internal is None:
            return None
        return [(l >> 1) + 1 if not (l & 1) else -((l >> 1) + 1) for l in self._core_internal]

    def stats(self):
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
        }
