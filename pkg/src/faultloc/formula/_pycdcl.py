"""Pure-Python CDCL solver, used when the compiled core is unavailable.

Same algorithm and interface as the Cython module ``_cdcl``: two watched
literals, first-UIP learning with local minimisation, VSIDS with an indexed
binary heap, phase saving, Luby restarts and LBD-based learnt clause
reduction. Solving under assumptions yields a failed-assumption core.

Internal literals are ``2 * (var - 1) + negated``.
"""

import time

_UNDEF = 0
_TRUE = 1
_FALSE = -1

_SAT = 1
_UNSAT = 0
_RESTART = -1
_INTERRUPT = -2


def _luby(y, x):
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


class CdclSolver:
    """Incremental CDCL SAT solver over DIMACS-style integer literals."""

    def __init__(self):
        self.nvars = 0
        self.ok = True
        # clause database
        self.clauses = []
        self.learnt = []
        self.cl_act = []
        self.cl_lbd = []
        self.n_learnts = 0
        self.watches = []
        # assignment
        self.val = []
        self.level = []
        self.reason = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        # heuristics
        self.activity = []
        self.polarity = []
        self.seen = []
        self.heap = []
        self.heap_idx = []
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.cla_inc = 1.0
        self.cla_decay = 0.999
        self.max_learnts = 4000.0
        # results
        self._model = None
        self._core = None
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # -- variables --------------------------------------------------------

    def _grow(self, n):
        while self.nvars < n:
            v = self.nvars
            self.nvars += 1
            self.watches.append([])
            self.watches.append([])
            self.val.append(_UNDEF)
            self.val.append(_UNDEF)
            self.level.append(0)
            self.reason.append(-1)
            self.activity.append(0.0)
            self.polarity.append(1)
            self.seen.append(0)
            self.heap_idx.append(-1)
            self._heap_insert(v)

    def new_var(self):
        self._grow(self.nvars + 1)
        return self.nvars

    # -- heap ---------------------------------------------------------------

    def _heap_up(self, i):
        heap = self.heap
        idx = self.heap_idx
        act = self.activity
        v = heap[i]
        a = act[v]
        while i > 0:
            parent = (i - 1) >> 1
            pv = heap[parent]
            if act[pv] >= a:
                break
            heap[i] = pv
            idx[pv] = i
            i = parent
        heap[i] = v
        idx[v] = i

    def _heap_down(self, i):
        heap = self.heap
        idx = self.heap_idx
        act = self.activity
        n = len(heap)
        v = heap[i]
        a = act[v]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and act[heap[child + 1]] > act[heap[child]]:
                child += 1
            cv = heap[child]
            if act[cv] <= a:
                break
            heap[i] = cv
            idx[cv] = i
            i = child
        heap[i] = v
        idx[v] = i

    def _heap_insert(self, v):
        if self.heap_idx[v] >= 0:
            return
        self.heap.append(v)
        self.heap_idx[v] = len(self.heap) - 1
        self._heap_up(len(self.heap) - 1)

    def _heap_pop(self):
        heap = self.heap
        v = heap[0]
        last = heap.pop()
        self.heap_idx[v] = -1
        if heap:
            heap[0] = last
            self.heap_idx[last] = 0
            self._heap_down(0)
        return v

    def _bump_var(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(self.nvars):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_idx[v] >= 0:
            self._heap_up(self.heap_idx[v])

    def _bump_clause(self, cr):
        self.cl_act[cr] += self.cla_inc
        if self.cl_act[cr] > 1e20:
            for i in range(len(self.cl_act)):
                self.cl_act[i] *= 1e-20
            self.cla_inc *= 1e-20

    # -- assignment -----------------------------------------------------------

    def _enqueue(self, lit, reason):
        v = lit >> 1
        self.val[lit] = _TRUE
        self.val[lit ^ 1] = _FALSE
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        trail = self.trail
        val = self.val
        polarity = self.polarity
        stop = self.trail_lim[lvl]
        for i in range(len(trail) - 1, stop - 1, -1):
            lit = trail[i]
            v = lit >> 1
            val[lit] = _UNDEF
            val[lit ^ 1] = _UNDEF
            self.reason[v] = -1
            polarity[v] = lit & 1
            if self.heap_idx[v] < 0:
                self._heap_insert(v)
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    # -- clauses ----------------------------------------------------------------

    def _attach(self, lits, learnt, lbd=0):
        cr = len(self.clauses)
        self.clauses.append(lits)
        self.learnt.append(learnt)
        self.cl_act.append(0.0)
        self.cl_lbd.append(lbd)
        self.watches[lits[0]].append(cr)
        self.watches[lits[1]].append(cr)
        if learnt:
            self.n_learnts += 1
        return cr

    def add_clause(self, lits):
        """Add a clause of DIMACS literals; returns False once the database
        is known to be unsatisfiable."""
        if not self.ok:
            return False
        self._cancel_until(0)
        top = 0
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            top = max(top, abs(lit))
        if top > self.nvars:
            self._grow(top)
        val = self.val
        out = []
        seen = set()
        for lit in lits:
            il = 2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1
            if il in seen:
                continue
            if (il ^ 1) in seen or val[il] == _TRUE:
                return True
            if val[il] == _FALSE:
                continue
            seen.add(il)
            out.append(il)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() >= 0:
                self.ok = False
                return False
            return True
        self._attach(out, False)
        return True

    # -- propagation ---------------------------------------------------------

    def _propagate(self):
        val = self.val
        watches = self.watches
        clauses = self.clauses
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        confl = -1
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            n = len(ws)
            i = j = 0
            while i < n:
                cr = ws[i]
                i += 1
                c = clauses[cr]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == _TRUE:
                    ws[j] = cr
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != _FALSE:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(cr)
                        found = True
                        break
                if found:
                    continue
                ws[j] = cr
                j += 1
                if val[first] == _FALSE:
                    confl = cr
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    self.qhead = len(trail)
                else:
                    v = first >> 1
                    val[first] = _TRUE
                    val[first ^ 1] = _FALSE
                    level[v] = lvl
                    reason[v] = cr
                    trail.append(first)
            del ws[j:]
            if confl >= 0:
                return confl
        return -1

    # -- conflict analysis -----------------------------------------------------

    def _analyze(self, confl):
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        clauses = self.clauses
        cur = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = clauses[confl]
            if self.learnt[confl]:
                self._bump_clause(confl)
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump_var(v)
                    seen[v] = 1
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = reason[p >> 1]
            seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # local minimisation: drop literals implied by other learnt literals
        out = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r < 0:
                out.append(q)
                continue
            for x in clauses[r][1:]:
                xv = x >> 1
                if not seen[xv] and level[xv] > 0:
                    out.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = 0

        bt = 0
        if len(out) > 1:
            best = 1
            for k in range(2, len(out)):
                if level[out[k] >> 1] > level[out[best] >> 1]:
                    best = k
            out[1], out[best] = out[best], out[1]
            bt = level[out[1] >> 1]
        levels = {level[q >> 1] for q in out}
        return out, bt, len(levels)

    def _analyze_final(self, failed):
        """Assumption literals responsible for ``failed`` being false."""
        core = [failed]
        seen = self.seen
        v0 = failed >> 1
        if not self.trail_lim:
            return core
        seen[v0] = 1
        trail = self.trail
        start = self.trail_lim[0]
        for i in range(len(trail) - 1, start - 1, -1):
            x = trail[i] >> 1
            if seen[x]:
                r = self.reason[x]
                if r < 0:
                    if self.level[x] > 0:
                        core.append(trail[i])
                else:
                    for q in self.clauses[r][1:]:
                        if self.level[q >> 1] > 0:
                            seen[q >> 1] = 1
                seen[x] = 0
        seen[v0] = 0
        return core

    # -- learnt clause reduction -----------------------------------------------

    def _reduce_db(self):
        """Drop half of the learnt clauses; only called at decision level 0."""
        for lit in self.trail:
            self.reason[lit >> 1] = -1
        cand = [cr for cr in range(len(self.clauses)) if self.learnt[cr] and self.cl_lbd[cr] > 2]
        cand.sort(key=lambda cr: (-self.cl_lbd[cr], self.cl_act[cr]))
        drop = set(cand[: len(cand) // 2])
        self._rebuild(drop)

    def _rebuild(self, drop):
        old = self.clauses
        learnt, act, lbd = self.learnt, self.cl_act, self.cl_lbd
        self.clauses, self.learnt, self.cl_act, self.cl_lbd = [], [], [], []
        self.watches = [[] for _ in range(2 * self.nvars)]
        self.n_learnts = 0
        val = self.val
        for cr, c in enumerate(old):
            if cr in drop:
                continue
            if any(val[l] == _TRUE and self.level[l >> 1] == 0 for l in c):
                continue
            ncr = self._attach(c, learnt[cr], lbd[cr])
            self.cl_act[ncr] = act[cr]

    # -- search -----------------------------------------------------------------

    def _pick_branch(self):
        val = self.val
        while self.heap:
            v = self._heap_pop()
            lit = 2 * v + self.polarity[v]
            if val[lit] == _UNDEF:
                return lit
        return -1

    def _search(self, nof_conflicts, assumps, deadline):
        conflicts = 0
        val = self.val
        while True:
            confl = self._propagate()
            if confl >= 0:
                conflicts += 1
                self.conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    self._core = []
                    return _UNSAT
                learnt, bt, lbd = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    cr = self._attach(learnt, True, lbd)
                    self._bump_clause(cr)
                    self._enqueue(learnt[0], cr)
                self.var_inc /= self.var_decay
                self.cla_inc /= self.cla_decay
                if deadline is not None and (self.conflicts & 255) == 0:
                    if time.monotonic() > deadline:
                        return _INTERRUPT
                continue
            if conflicts >= nof_conflicts:
                return _RESTART
            if not self.trail_lim and self.n_learnts >= self.max_learnts + len(self.trail):
                self._reduce_db()
                self.max_learnts *= 1.1
            nxt = -1
            while len(self.trail_lim) < len(assumps):
                p = assumps[len(self.trail_lim)]
                if val[p] == _TRUE:
                    self.trail_lim.append(len(self.trail))
                elif val[p] == _FALSE:
                    self._core = self._analyze_final(p)
                    return _UNSAT
                else:
                    nxt = p
                    break
            if nxt < 0:
                nxt = self._pick_branch()
                if nxt < 0:
                    self._model = [
                        (v + 1) if val[2 * v] == _TRUE else -(v + 1) for v in range(self.nvars)
                    ]
                    return _SAT
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, -1)

    def solve(self, assumptions=(), deadline=None):
        """Return 1 (SAT), 0 (UNSAT) or -1 (deadline reached)."""
        self._model = None
        self._core = None
        if not self.ok:
            self._core = []
            return _UNSAT
        assumps = []
        for lit in assumptions:
            v = abs(lit)
            if lit == 0 or v > self.nvars:
                self._grow(v)
            assumps.append(2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1)
        restarts = 0
        while True:
            status = self._search(_luby(2, restarts) * 100, assumps, deadline)
            if status != _RESTART:
                break
            self._cancel_until(0)
            restarts += 1
            if deadline is not None and time.monotonic() > deadline:
                status = _INTERRUPT
                break
        self._cancel_until(0)
        if status == _INTERRUPT:
            return -1
        return status

    def get_model(self):
        return self._model

    def get_core(self):
        if self._core is None:
            return None
        return [(l >> 1) + 1 if not (l & 1) else -((l >> 1) + 1) for l in self._core]

    def stats(self):
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
        }
