"""Complete SAT solving for small CNF formulas, with search statistics.

The solver is a DPLL procedure with unit propagation and chronological
backtracking.  The branching rule is fixed on purpose: always pick the
lowest-index unassigned variable and try False before True.  With the
rule pinned, the reported statistics are a deterministic function of
the formula, which makes them usable as difficulty annotations.

Statistics semantics:

* ``decisions``     branching assignments (the False branch; flipping a
                    decision to True on backtrack is not recounted)
* ``conflicts``     clause falsifications, each triggering a backtrack
* ``propagations``  assignments forced by unit propagation

Once every clause is satisfied the remaining variables are filled in as
False without branching, so formulas decided by propagation alone
report ``decisions == 0``.
"""

from __future__ import annotations

import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple, Optional

from .cnf import Clause, CnfFormula, Literal, to_dimacs

DEFAULT_MAX_DECISIONS = 10_000_000

SAT = "sat"
UNSAT = "unsat"


class BudgetExhaustedError(RuntimeError):
    """Raised when the decision budget runs out before an answer."""


class DegenerateTheoryError(ValueError):
    """Raised when an entailment query is posed against an unsat theory."""


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0

    def as_dict(self) -> dict:
        return {
            "decisions": self.decisions,
            "conflicts": self.conflicts,
            "propagations": self.propagations,
        }


@dataclass
class SolveResult:
    label: str
    model: Optional[dict]
    stats: SolveStats


def solve(f: CnfFormula, max_decisions: int = DEFAULT_MAX_DECISIONS) -> SolveResult:
    """Decide satisfiability of a canonical formula.

    Returns a total model on sat (unconstrained variables default to
    False).  Raises BudgetExhaustedError when more than ``max_decisions``
    branching steps would be needed; never returns a wrong answer.
    """
    if not f.is_canonical():
        raise ValueError("solve requires canonical clauses; normalize first")
    n = f.n_vars
    clauses = f.to_int_clauses()
    m = len(clauses)
    stats = SolveStats()

    if m == 0:
        return SolveResult(SAT, {v: False for v in range(1, n + 1)}, stats)

    occ_true = [[] for _ in range(n + 1)]   # clause indices containing +v
    occ_false = [[] for _ in range(n + 1)]  # clause indices containing -v
    for ci, cl in enumerate(clauses):
        for lit in cl:
            (occ_true if lit > 0 else occ_false)[abs(lit)].append(ci)

    assign = [0] * (n + 1)            # 0 unknown, 1 true, -1 false
    sat_count = [0] * m               # true literals per clause
    unk_count = [len(cl) for cl in clauses]
    satisfied = 0                     # clauses with sat_count > 0
    trail = []                        # (var, value) in assignment order
    qhead = 0                         # next trail position to process
    dstack = []                       # (var, trail_base, flipped)

    def enqueue(var: int, value: int) -> None:
        assign[var] = value
        trail.append((var, value))

    def propagate() -> Optional[int]:
        """Process the trail to fixpoint; return a falsified clause index or None."""
        nonlocal qhead, satisfied
        while qhead < len(trail):
            var, value = trail[qhead]
            qhead += 1
            sat_occ = occ_true[var] if value > 0 else occ_false[var]
            unk_occ = occ_false[var] if value > 0 else occ_true[var]
            for ci in sat_occ:
                if sat_count[ci] == 0:
                    satisfied += 1
                sat_count[ci] += 1
            # A conflict must not abort this loop: once qhead is past an
            # entry, undo_to reverses ALL its counter effects, so every
            # decrement has to happen even after a falsified clause.
            conflict = None
            for ci in unk_occ:
                unk_count[ci] -= 1
                if conflict is not None or sat_count[ci] or unk_count[ci] > 1:
                    continue
                # inspect actual assignments: queued-but-unprocessed
                # entries are visible in assign[] though counters lag
                unit = 0
                is_true = False
                for lit in clauses[ci]:
                    a = assign[abs(lit)]
                    if a == 0:
                        unit = lit
                    elif (a > 0) == (lit > 0):
                        is_true = True
                        break
                if is_true:
                    continue
                if unit:
                    stats.propagations += 1
                    enqueue(abs(unit), 1 if unit > 0 else -1)
                else:
                    conflict = ci
            if conflict is not None:
                return conflict
        return None

    def undo_to(target: int) -> None:
        nonlocal qhead, satisfied
        while len(trail) > target:
            pos = len(trail) - 1
            var, value = trail.pop()
            assign[var] = 0
            if pos >= qhead:
                continue  # never processed, no counter effects
            sat_occ = occ_true[var] if value > 0 else occ_false[var]
            unk_occ = occ_false[var] if value > 0 else occ_true[var]
            for ci in sat_occ:
                sat_count[ci] -= 1
                if sat_count[ci] == 0:
                    satisfied -= 1
            for ci in unk_occ:
                unk_count[ci] += 1
        qhead = min(qhead, target)

    # level-0 units seed the first propagation
    for ci, cl in enumerate(clauses):
        if len(cl) == 1:
            lit = cl[0]
            a = assign[abs(lit)]
            if a == 0:
                stats.propagations += 1
                enqueue(abs(lit), 1 if lit > 0 else -1)

    while True:
        conflict_ci = propagate()
        if conflict_ci is not None:
            stats.conflicts += 1
            while dstack and dstack[-1][2]:
                _, base, _ = dstack.pop()
                undo_to(base)
            if not dstack:
                undo_to(0)
                return SolveResult(UNSAT, None, stats)
            var, base, _ = dstack[-1]
            dstack[-1] = (var, base, True)
            undo_to(base)
            enqueue(var, 1)  # second branch: True
            continue
        if satisfied == m:
            model = {v: assign[v] > 0 for v in range(1, n + 1)}
            if __debug__:
                assert all(any(model[abs(l)] != (l < 0) for l in cl) for cl in clauses)
            return SolveResult(SAT, model, stats)
        var = next((v for v in range(1, n + 1) if assign[v] == 0), None)
        if var is None:
            model = {v: assign[v] > 0 for v in range(1, n + 1)}
            if __debug__:
                assert all(any(model[abs(l)] != (l < 0) for l in cl) for cl in clauses)
            return SolveResult(SAT, model, stats)
        if stats.decisions >= max_decisions:
            raise BudgetExhaustedError(
                f"budget exhausted: more than {max_decisions} decisions needed"
            )
        stats.decisions += 1
        dstack.append((var, len(trail), False))
        enqueue(var, -1)  # first branch: False


class PropagationResult(NamedTuple):
    assignment: Optional[dict]
    conflict: bool
    propagations: int


def unit_propagate(f: CnfFormula, assignment: dict) -> PropagationResult:
    """Run unit propagation from a partial assignment to fixpoint.

    Returns the extended assignment, or conflict=True (with
    assignment=None) when a clause is falsified along the way.
    """
    a = dict(assignment)
    forced = 0
    changed = True
    while changed:
        changed = False
        for cl in f.clauses:
            unassigned = None
            count_unassigned = 0
            satisfied = False
            for lit in cl.literals:
                if lit.var in a:
                    if a[lit.var] != lit.negated:
                        satisfied = True
                        break
                else:
                    unassigned = lit
                    count_unassigned += 1
            if satisfied:
                continue
            if count_unassigned == 0:
                return PropagationResult(None, True, forced)
            if count_unassigned == 1:
                a[unassigned.var] = not unassigned.negated
                forced += 1
                changed = True
    return PropagationResult(a, False, forced)


ENTAILED = "entailed"
CONTRADICTED = "contradicted"
UNKNOWN = "unknown"


def check_entailment(
    theory: CnfFormula, q: Literal, max_decisions: int = DEFAULT_MAX_DECISIONS
) -> str:
    """Classify a literal against a satisfiable theory by refutation.

    entailed      theory AND NOT q is unsat
    contradicted  theory AND q is unsat
    unknown       both augmentations are satisfiable
    """
    if q.var < 1 or q.var > theory.n_vars:
        raise ValueError(f"query variable {q.var} outside 1..{theory.n_vars}")
    with_not_q = CnfFormula(theory.n_vars, theory.clauses + (Clause((q.negate(),)),))
    with_q = CnfFormula(theory.n_vars, theory.clauses + (Clause((q,)),))
    not_q_unsat = solve(with_not_q, max_decisions).label == UNSAT
    q_unsat = solve(with_q, max_decisions).label == UNSAT
    if not_q_unsat and q_unsat:
        raise DegenerateTheoryError("degenerate theory: unsatisfiable on its own")
    if not_q_unsat:
        return ENTAILED
    if q_unsat:
        return CONTRADICTED
    return UNKNOWN


BRUTEFORCE_MAX_VARS = 24


@lru_cache(maxsize=2)
def _var_masks(n: int) -> tuple:
    """Bitmask per variable over the 2^n assignment space.

    Assignment index i encodes variable v in bit (n - v), so index
    order enumerates assignments lexicographically with False first.
    """
    size = 1 << n
    masks = [0] * (n + 1)
    for v in range(1, n + 1):
        run = 1 << (n - v)
        unit = ((1 << run) - 1) << run
        length = run << 1
        while length < size:
            unit |= unit << length
            length <<= 1
        masks[v] = unit
    return tuple(masks), (1 << size) - 1


def solve_bruteforce(f: CnfFormula, max_vars: int = BRUTEFORCE_MAX_VARS) -> SolveResult:
    """Exhaustive truth-table check, usable as an oracle for n <= 24.

    Implemented over big-integer assignment masks rather than the
    search machinery above, so the two paths share no logic.  Returns
    the first satisfying assignment in lexicographic order (False
    before True, variable 1 outermost).
    """
    n = f.n_vars
    if n > max_vars:
        raise ValueError(f"brute force refused: n={n} exceeds cap {max_vars}")
    if n == 0:
        return SolveResult(SAT, {}, SolveStats())
    masks, full = _var_masks(n)
    acc = full
    for cl in f.clauses:
        cm = 0
        for lit in cl.literals:
            cm |= (full ^ masks[lit.var]) if lit.negated else masks[lit.var]
        acc &= cm
        if acc == 0:
            return SolveResult(UNSAT, None, SolveStats())
    idx = (acc & -acc).bit_length() - 1
    model = {v: bool((idx >> (n - v)) & 1) for v in range(1, n + 1)}
    return SolveResult(SAT, model, SolveStats())


class ExternalSolverError(RuntimeError):
    """External solver did not produce a recognizable verdict."""


def solve_external(f: CnfFormula, command) -> str:
    """Run an external SAT solver on the DIMACS rendering of f.

    ``command`` is a program plus arguments (list, or a string split
    shell-style); the DIMACS file path is appended as the last
    argument.  The verdict is read from stdout: the word UNSATISFIABLE
    or SATISFIABLE.  Exit status is ignored because conventional
    solvers signal the verdict through it.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    tmp = tempfile.NamedTemporaryFile(
        mode="w", suffix=".cnf", prefix="nlsatgen_", delete=False
    )
    try:
        tmp.write(to_dimacs(f))
        tmp.close()
        proc = subprocess.run(
            argv + [tmp.name], capture_output=True, text=True, check=False
        )
        out = proc.stdout
        if re.search(r"\bUNSATISFIABLE\b", out):
            return UNSAT
        if re.search(r"\bSATISFIABLE\b", out):
            return SAT
        raise ExternalSolverError(
            f"no SATISFIABLE/UNSATISFIABLE verdict in output of {argv[0]!r}"
        )
    finally:
        Path(tmp.name).unlink(missing_ok=True)
