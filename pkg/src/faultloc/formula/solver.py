"""SAT oracle contract: solve under assumptions, return a model or an
assumption core.

The CDCL kernel comes from the compiled extension when it was built and
falls back to the pure-Python implementation otherwise.  Setting
``FAULTLOC_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from faultloc.errors import FormulaError, TimeoutExceeded
from faultloc.formula import _pycdcl
from faultloc.formula.cnf import CnfFormula, lit_var, to_dimacs

if os.environ.get("FAULTLOC_PURE_PYTHON"):
    _native = None
else:
    try:
        from faultloc.formula import _cdcl as _native
    except ImportError:  # extension not built
        _native = None

BACKEND = "cython" if _native is not None else "python"

SAT = "SAT"
UNSAT = "UNSAT"


def solver_class(backend: str | None = None):
    """Return the CDCL class for ``backend`` ("cython", "python" or None for
    the import-time default)."""
    backend = backend or BACKEND
    if backend == "python":
        return _pycdcl.CdclSolver
    if backend == "cython":
        if _native is None:
            raise RuntimeError("compiled solver extension is not available")
        return _native.CdclSolver
    raise ValueError(f"unknown SAT backend {backend!r}")


@dataclass
class SatOutcome:
    status: str
    model: Optional[list] = None
    core: Optional[list] = None

    @property
    def sat(self) -> bool:
        return self.status == SAT


@dataclass
class Budget:
    """Cooperative resource limits shared by every oracle call of one run.

    ``deadline`` is an absolute ``time.monotonic()`` value.
    """

    deadline: Optional[float] = None
    oracle_calls: int = 0
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_seconds(cls, seconds: float | None) -> "Budget":
        if seconds is None:
            return cls()
        return cls(deadline=time.monotonic() + seconds)

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeoutExceeded("time budget exhausted")

    def tick(self) -> None:
        self.oracle_calls += 1
        self.check()


class Oracle:
    """Incremental solver handle.  Counts calls against an optional budget and
    raises ``TimeoutExceeded`` when the deadline passes."""

    def __init__(self, clauses: Iterable[Sequence[int]] = (), num_vars: int = 0,
                 budget: Budget | None = None, backend: str | None = None):
        self._s = solver_class(backend)()
        self.budget = budget if budget is not None else Budget()
        self.num_vars = 0
        if num_vars:
            self.reserve(num_vars)
        for cl in clauses:
            self.add_clause(cl)

    def reserve(self, n: int) -> None:
        while self._s.nvars < n:
            self._s.new_var()
        self.num_vars = max(self.num_vars, n)

    def new_var(self) -> int:
        v = max(self._s.nvars, self.num_vars) + 1
        self.reserve(v)
        return v

    def add_clause(self, lits: Sequence[int]) -> None:
        for lit in lits:
            if lit_var(lit) > self.num_vars:
                self.num_vars = lit_var(lit)
        self._s.add_clause(list(lits))

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        self.budget.tick()
        res = self._s.solve(list(assumptions), self.budget.deadline)
        if res == -1:
            raise TimeoutExceeded("time budget exhausted inside the SAT oracle")
        return res == 1

    def model(self) -> list:
        m = self._s.get_model() or []
        if len(m) < self.num_vars:
            m = list(m) + [-(v + 1) for v in range(len(m), self.num_vars)]
        return m

    def core(self) -> list:
        return list(self._s.get_core() or [])

    def stats(self) -> dict:
        return self._s.stats()


def _check_assumptions(f: CnfFormula, assumptions: Sequence[int]) -> None:
    for lit in assumptions:
        if lit == 0 or lit_var(lit) > f.num_vars:
            raise FormulaError(f"assumption {lit} is not over a declared variable")


def sat_solve(f: CnfFormula, assumptions: Sequence[int] = (), *,
              budget: Budget | None = None, backend: str | None = None) -> SatOutcome:
    """Decide ``f`` under ``assumptions``.

    The model lists every declared variable with its sign; the core is a
    subset of ``assumptions`` that is inconsistent with ``f``.
    """
    f.validate()
    _check_assumptions(f, assumptions)
    if backend == "external":
        return ExternalSolver().solve(f, assumptions)
    o = Oracle(f.clauses, f.num_vars, budget=budget, backend=backend)
    if o.solve(assumptions):
        return SatOutcome(SAT, model=o.model()[: f.num_vars])
    return SatOutcome(UNSAT, core=o.core())


class ExternalSolver:
    """Runs a DIMACS solver in a subprocess (for debugging the in-process
    kernel).  Assumptions become unit clauses, so the core it reports on
    UNSAT is the full assumption list.

    ``command`` is an argv list; the DIMACS path is appended.  The solver is
    expected to print ``s SATISFIABLE`` / ``s UNSATISFIABLE`` and ``v`` lines.
    """

    def __init__(self, command: Sequence[str] | None = None, timeout: float | None = None):
        if command is None:
            exe = os.environ.get("FAULTLOC_SAT_CMD")
            if not exe:
                raise RuntimeError("set FAULTLOC_SAT_CMD or pass a command")
            command = exe.split()
        self.command = list(command)
        self.timeout = timeout

    def solve(self, f: CnfFormula, assumptions: Sequence[int] = ()) -> SatOutcome:
        g = f.copy()
        for lit in assumptions:
            g.add((lit,))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "in.cnf")
            with open(path, "w") as fh:
                fh.write(to_dimacs(g))
            proc = subprocess.run(self.command + [path], capture_output=True, text=True,
                                  timeout=self.timeout)
        status = None
        model = []
        for line in proc.stdout.splitlines():
            if line.startswith("s "):
                status = SAT if line.split()[1] == "SATISFIABLE" else UNSAT
            elif line.startswith("v "):
                model.extend(int(t) for t in line.split()[1:] if t != "0")
        if status is None:
            raise RuntimeError(f"external solver gave no status line: {proc.stderr.strip()}")
        if status == SAT:
            signs = {lit_var(l): l for l in model}
            return SatOutcome(SAT, model=[signs.get(v, -v) for v in range(1, f.num_vars + 1)])
        return SatOutcome(UNSAT, core=list(assumptions))


def _main(argv=None) -> int:
    """Minimal DIMACS front-end: ``python -m faultloc.formula.solver FILE``."""
    import sys

    from faultloc.formula.cnf import parse_dimacs

    args = argv if argv is not None else sys.argv[1:]
    with open(args[0]) as fh:
        f = parse_dimacs(fh.read())
    out = sat_solve(f)
    if out.sat:
        print("s SATISFIABLE")
        print("v " + " ".join(str(l) for l in out.model) + " 0")
        return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    raise SystemExit(_main())
