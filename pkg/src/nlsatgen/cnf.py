"""Propositional CNF primitives: literals, clauses, formulas, DIMACS I/O.

Variables are 1-based integers.  A literal pairs a variable with a
negation flag and has a signed-integer encoding (DIMACS style): +v for
the positive literal, -v for the negated one.  Clauses hold one to
three literals; wider clauses are out of scope for this package.

A clause is *canonical* when its literals are sorted by (variable,
polarity), no variable repeats, and no complementary pair appears.
Clauses sampled with replacement may violate all of that; they carry
``raw=True`` so downstream code can tell them apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence


class Literal(NamedTuple):
    """A possibly negated propositional variable."""

    var: int
    negated: bool = False

    def negate(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        if value == 0:
            raise ValueError("0 does not encode a literal")
        return cls(abs(value), value < 0)


# A (possibly partial) truth assignment, keyed by variable id.
Assignment = dict


def _is_canonical(literals: Sequence[Literal]) -> bool:
    for a, b in zip(literals, literals[1:]):
        if (a.var, a.negated) >= (b.var, b.negated):
            return False
    # strictly increasing (var, polarity) still admits v and -v side by side
    return all(a.var != b.var for a, b in zip(literals, literals[1:]))


@dataclass(frozen=True)
class Clause:
    """A disjunction of 1..3 literals.

    ``raw`` marks clauses drawn with replacement that may repeat a
    variable or contain a complementary pair; everything else must be
    canonical (sorted, duplicate-free, tautology-free).
    """

    literals: tuple
    raw: bool = False

    def __post_init__(self):
        lits = tuple(self.literals)
        object.__setattr__(self, "literals", lits)
        if not 1 <= len(lits) <= 3:
            raise ValueError(f"clause width must be 1..3, got {len(lits)}")
        for lit in lits:
            if not isinstance(lit, Literal):
                raise TypeError(f"expected Literal, got {type(lit).__name__}")
            if lit.var < 1:
                raise ValueError(f"variable ids are 1-based, got {lit.var}")
        if not self.raw and not _is_canonical(lits):
            raise ValueError(f"clause {self.to_ints()} is not canonical; pass raw=True or normalize")

    @classmethod
    def from_ints(cls, *values: int) -> "Clause":
        """Build a canonical clause from signed ints, sorting as needed."""
        lits = sorted((Literal.from_int(v) for v in values), key=lambda l: (l.var, l.negated))
        return cls(tuple(lits))

    @classmethod
    def raw_from_ints(cls, *values: int) -> "Clause":
        lits = tuple(Literal.from_int(v) for v in values)
        return cls(lits, raw=True)

    def to_ints(self) -> tuple:
        return tuple(lit.to_int() for lit in self.literals)

    @property
    def width(self) -> int:
        return len(self.literals)

    def max_var(self) -> int:
        return max(lit.var for lit in self.literals)


def normalize_clause(clause: Clause) -> Optional[Clause]:
    """Deduplicate literals and sort into canonical order.

    Returns None for tautologies (a variable appearing in both
    polarities).  A repeated literal collapses, so a raw three-literal
    clause can normalize to a unit or a two-literal clause.  Idempotent
    on canonical input.
    """
    unique = sorted(set(clause.literals), key=lambda l: (l.var, l.negated))
    seen_vars = set()
    for lit in unique:
        if lit.var in seen_vars:
            return None  # v and -v both present
        seen_vars.add(lit.var)
    return Clause(tuple(unique))


@dataclass(frozen=True)
class CnfFormula:
    """A conjunction of clauses over variables 1..n_vars."""

    n_vars: int
    clauses: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.n_vars < 0:
            raise ValueError("n_vars must be >= 0")
        for cl in self.clauses:
            if not isinstance(cl, Clause):
                raise TypeError(f"expected Clause, got {type(cl).__name__}")
            if cl.max_var() > self.n_vars:
                raise ValueError(f"literal {cl.max_var()} exceeds n={self.n_vars}")

    @classmethod
    def from_ints(cls, n_vars: int, clauses: Iterable) -> "CnfFormula":
        return cls(n_vars, tuple(Clause.from_ints(*ints) for ints in clauses))

    def to_int_clauses(self) -> list:
        return [list(cl.to_ints()) for cl in self.clauses]

    @property
    def m(self) -> int:
        return len(self.clauses)

    def is_canonical(self) -> bool:
        return not any(cl.raw for cl in self.clauses)


def alpha(f: CnfFormula) -> Fraction:
    """Clause-to-variable ratio m/n as an exact rational.

    Kept exact on purpose: band membership checks downstream compare
    ratios against calibrated endpoints and must not wobble with float
    rounding.
    """
    if f.n_vars == 0:
        raise ValueError("alpha undefined for a formula with no variables")
    return Fraction(f.m, f.n_vars)


def evaluate(f: CnfFormula, assignment: Assignment) -> bool:
    """Evaluate f under a total assignment."""
    missing = [v for v in range(1, f.n_vars + 1) if v not in assignment]
    if missing:
        raise ValueError(f"assignment is partial; missing variables {missing}")
    for cl in f.clauses:
        if not any(assignment[lit.var] != lit.negated for lit in cl.literals):
            return False
    return True


def to_dimacs(f: CnfFormula) -> str:
    """Serialize to DIMACS CNF: header line then one 0-terminated clause per line."""
    if not f.is_canonical():
        raise ValueError("refusing to export raw clauses; normalize first")
    lines = [f"p cnf {f.n_vars} {f.m}"]
    for cl in f.clauses:
        lines.append(" ".join(str(v) for v in cl.to_ints()) + " 0")
    return "\n".join(lines) + "\n"


class DimacsError(ValueError):
    """Malformed DIMACS input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def from_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text produced by :func:`to_dimacs` or compatible tools.

    Comment lines starting with 'c' are ignored.  Clauses must fit on
    one line and end with 0.  Literals are canonicalized; duplicate
    variables or complementary pairs within a clause are rejected.
    """
    n_vars = None
    declared_m = None
    clauses = []
    for line_no, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n_vars is not None:
                raise DimacsError(line_no, "duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(line_no, f"malformed header {line!r}")
            try:
                n_vars, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(line_no, f"malformed header {line!r}") from None
            if n_vars < 0 or declared_m < 0:
                raise DimacsError(line_no, "header counts must be non-negative")
            continue
        if n_vars is None:
            raise DimacsError(line_no, "clause before 'p cnf' header")
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsError(line_no, f"non-integer token in {line!r}") from None
        if not values or values[-1] != 0:
            raise DimacsError(line_no, "clause line missing 0 terminator")
        if 0 in values[:-1]:
            raise DimacsError(line_no, "0 terminator before end of line")
        values = values[:-1]
        if not values:
            raise DimacsError(line_no, "empty clause")
        if len(values) > 3:
            raise DimacsError(line_no, f"clause width {len(values)} unsupported (max 3)")
        for v in values:
            if abs(v) > n_vars:
                raise DimacsError(line_no, f"literal {v} exceeds n={n_vars}")
        try:
            cl = normalize_clause(Clause.raw_from_ints(*values))
        except ValueError as exc:
            raise DimacsError(line_no, str(exc)) from None
        if cl is None:
            raise DimacsError(line_no, f"tautological clause {values}")
        if cl.width != len(values):
            raise DimacsError(line_no, f"duplicate literal in clause {values}")
        clauses.append(cl)
    if n_vars is None:
        raise DimacsError(1, "missing 'p cnf' header")
    if declared_m != len(clauses):
        raise DimacsError(1, f"header declares {declared_m} clauses, found {len(clauses)}")
    return CnfFormula(n_vars, tuple(clauses))
