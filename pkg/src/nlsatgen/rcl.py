"""Quantified relative-clause fragment over predicates and constants.

Universal sentences verbalize width-3 clauses over unary predicates,
implicitly quantified over one variable; ground sentences attach a
width-3 clause to a named constant.  A universal clause with at least
one negative literal restricts on the lowest-index negative one:

    (-doctor v philosopher v baker)
        "Every doctor who is not a philosopher is a baker."
    (-baker v -gardener v -philosopher)
        "Every baker who is a gardener is not a philosopher."
        (or, rewritten) "No baker who is a gardener is a philosopher."

An all-positive clause (X v Y v Z) reads (not X and not Y) -> Z:

    "Everyone who is not an architect and not a baker is a chemist."

Ground sentences list their literals verbatim:

    "Quinn is a doctor or a philosopher or not a baker."

Grounding expands each universal clause over every constant.  Ground
variable ids are constant-major: predicate p of constant c maps to
(c - 1) * n_predicates + p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cnf import Clause, CnfFormula, Literal
from .fragments import (
    RCL,
    FragmentError,
    NlTheory,
    ParseError,
    VarBinding,
    appearance_map,
    check_token_budget,
)
from .sampler import SampleSpec, sample_clause

DEFAULT_NO_REWRITE_PROB = 0.25


@dataclass(frozen=True)
class RclProblem:
    """Canonical clauses over predicates, universal or attached to a constant.

    Sampled problems use width-3 clauses throughout (the only width the
    sentence templates can express); the type itself accepts any
    canonical width so grounding arithmetic works on degenerate cases.
    """

    n_predicates: int
    n_constants: int
    universal_clauses: tuple
    ground_clauses: tuple  # (constant id, Clause) pairs

    def __post_init__(self):
        object.__setattr__(self, "universal_clauses", tuple(self.universal_clauses))
        object.__setattr__(self, "ground_clauses", tuple(self.ground_clauses))
        if self.n_predicates < 2:
            raise ValueError("need at least 2 predicates")
        if self.n_constants < 1:
            raise ValueError("need at least one constant")
        for cl in self.universal_clauses:
            self._check_clause(cl)
        for cid, cl in self.ground_clauses:
            if not 1 <= cid <= self.n_constants:
                raise ValueError(f"constant id {cid} outside 1..{self.n_constants}")
            self._check_clause(cl)

    def _check_clause(self, cl: Clause) -> None:
        if cl.raw:
            raise ValueError(f"clauses must be canonical, got raw {cl.to_ints()}")
        if cl.max_var() > self.n_predicates:
            raise ValueError(
                f"predicate {cl.max_var()} exceeds {self.n_predicates} predicates"
            )

    @property
    def n_ground_vars(self) -> int:
        return self.n_predicates * self.n_constants

    @property
    def m_sentences(self) -> int:
        return len(self.universal_clauses) + len(self.ground_clauses)


def ground_var(pred: int, const: int, n_predicates: int) -> int:
    return (const - 1) * n_predicates + pred


def ground_rcl(p: RclProblem) -> CnfFormula:
    """Expand universals over all constants, then append ground clauses.

    Clause order: universal clauses in order, each expanded constant 1
    to C, followed by the ground clauses in order.  Literal order is
    preserved by the constant-major mapping, so clauses stay canonical.
    """
    clauses = []
    for cl in p.universal_clauses:
        for c in range(1, p.n_constants + 1):
            clauses.append(
                Clause(
                    tuple(
                        Literal(ground_var(l.var, c, p.n_predicates), l.negated)
                        for l in cl.literals
                    )
                )
            )
    for cid, cl in p.ground_clauses:
        clauses.append(
            Clause(
                tuple(
                    Literal(ground_var(l.var, cid, p.n_predicates), l.negated)
                    for l in cl.literals
                )
            )
        )
    return CnfFormula(p.n_ground_vars, tuple(clauses))


def feasible_predicate_counts(
    n_ground: int, lo: int = 5, hi: int = 8
) -> list:
    """Predicate counts P in [lo, hi] with P * C = n_ground for some C >= 2."""
    return [p for p in range(lo, hi + 1) if n_ground % p == 0 and n_ground // p >= 2]


def split_clause_budget(total: int, n_constants: int, fact_fraction: float = 0.25) -> tuple:
    """Split a grounded clause budget into (universal, per-constant ground) counts.

    total = m_universal * n_constants + m_ground, with every constant
    guaranteed at least one ground clause.
    """
    c = n_constants
    if total < 2 * c:
        raise ValueError(f"budget {total} too small for {c} constants")
    m_ground = max(c, round(fact_fraction * total))
    m_universal = max(1, round((total - m_ground) / c))
    m_ground = total - m_universal * c
    while m_ground < c:
        m_universal -= 1
        m_ground += c
    if m_universal < 1:
        raise ValueError(f"budget {total} leaves no room for universal clauses")
    return m_universal, m_ground


def sample_rcl_problem(
    n_predicates: int,
    n_constants: int,
    m_universal: int,
    m_ground: int,
    p_neg: float,
    rng,
) -> RclProblem:
    """Draw universal clauses, then ground clauses constant by constant.

    Ground clauses are dealt one per constant first, the remainder to
    random constants, so every constant is mentioned at least once.
    """
    if m_ground < n_constants:
        raise ValueError("need at least one ground clause per constant")
    spec = SampleSpec(n=n_predicates, p_int=1.0, p_neg=p_neg)
    universals = tuple(sample_clause(spec, rng) for _ in range(m_universal))
    counts = [1] * n_constants
    for _ in range(m_ground - n_constants):
        counts[rng.randrange(n_constants)] += 1
    grounds = []
    for cid in range(1, n_constants + 1):
        for _ in range(counts[cid - 1]):
            grounds.append((cid, sample_clause(spec, rng)))
    return RclProblem(n_predicates, n_constants, universals, tuple(grounds))


def _restrictor_index(cl: Clause) -> int:
    """Position of the lowest-index negative literal, or -1 if all positive."""
    for i, lit in enumerate(cl.literals):
        if lit.negated:
            return i
    return -1


def _sentence_walk(cl: Clause) -> list:
    """Predicates in the order the sentence mentions them."""
    r = _restrictor_index(cl)
    if r < 0:
        return [l.var for l in cl.literals]
    rest = [l.var for i, l in enumerate(cl.literals) if i != r]
    return [cl.literals[r].var] + rest


def reindex_problem(p: RclProblem) -> tuple:
    """Renumber predicates and constants by first textual appearance.

    Returns (problem, predicate map, constant map).  The renumbering is
    a fixpoint: rendering the result and parsing it back reproduces it.
    """
    pred_walk = []
    for cl in p.universal_clauses:
        pred_walk.extend(_sentence_walk(cl))
    for _, cl in p.ground_clauses:
        pred_walk.extend(l.var for l in cl.literals)
    pred_map = appearance_map(pred_walk)
    if len(pred_map) != p.n_predicates:
        missing = sorted(set(range(1, p.n_predicates + 1)) - set(pred_map))
        raise FragmentError(f"predicates never mentioned: {missing}")
    const_map = appearance_map(cid for cid, _ in p.ground_clauses)
    if len(const_map) != p.n_constants:
        missing = sorted(set(range(1, p.n_constants + 1)) - set(const_map))
        raise FragmentError(f"constants never mentioned: {missing}")

    def remap(cl: Clause) -> Clause:
        return Clause(
            tuple(
                sorted(
                    (Literal(pred_map[l.var], l.negated) for l in cl.literals),
                    key=lambda lit: (lit.var, lit.negated),
                )
            )
        )

    universals = tuple(remap(cl) for cl in p.universal_clauses)
    grounds = tuple((const_map[cid], remap(cl)) for cid, cl in p.ground_clauses)
    return RclProblem(p.n_predicates, p.n_constants, universals, grounds), pred_map, const_map


def _atom_text(lit: Literal, binding: VarBinding, lexicon) -> str:
    noun = binding.word(lit.var)
    art = lexicon.article(noun)
    return ("not " if lit.negated else "") + f"{art} {noun}"


def render_universal(cl: Clause, binding: VarBinding, lexicon, rng=None,
                     no_rewrite_prob: float = DEFAULT_NO_REWRITE_PROB) -> str:
    if cl.width != 3:
        raise FragmentError(
            f"universal sentences need width-3 clauses, got width {cl.width}"
        )
    r = _restrictor_index(cl)
    if r < 0:
        a1, a2, cons = cl.literals
        return (
        f"Everyone who is not {_atom_text(a1, binding, lexicon)}"
        f" and not {_atom_text(a2, binding, lexicon)}"
        f" is {_atom_text(cons, binding, lexicon)}."
        )
    restrictor = cl.literals[r]
    rest = [l for i, l in enumerate(cl.literals) if i != r]
    who, cons = rest[0].negate(), rest[1]
    x_noun = binding.word(restrictor.var)
    who_txt = _atom_text(who, binding, lexicon)
    if cons.negated and rng is not None and rng.random() < no_rewrite_prob:
        cons_txt = _atom_text(cons.negate(), binding, lexicon)
        return f"No {x_noun} who is {who_txt} is {cons_txt}."
    return f"Every {x_noun} who is {who_txt} is {_atom_text(cons, binding, lexicon)}."


def render_ground(cid: int, cl: Clause, binding: VarBinding, lexicon) -> str:
    if cl.width != 3:
        raise FragmentError(
            f"ground sentences need width-3 clauses, got width {cl.width}"
        )
    name = binding.constant_word(cid)
    atoms = " or ".join(_atom_text(l, binding, lexicon) for l in cl.literals)
    return f"{name} is {atoms}."


def render_rcl(
    p: RclProblem,
    binding: VarBinding,
    lexicon,
    rng=None,
    no_rewrite_prob: float = DEFAULT_NO_REWRITE_PROB,
    token_budget: int = 30,
) -> NlTheory:
    """Render universal sentences, then ground sentences, in clause order.

    ``rng`` drives the optional rewrite of a negative-consequent
    "Every ... is not ..." into the "No ... is ..." surface; omit it to
    always keep the Every form.
    """
    sentences = []
    for cl in p.universal_clauses:
        s = render_universal(cl, binding, lexicon, rng, no_rewrite_prob)
        check_token_budget(s, token_budget)
        sentences.append(s)
    for cid, cl in p.ground_clauses:
        s = render_ground(cid, cl, binding, lexicon)
        check_token_budget(s, token_budget)
        sentences.append(s)
    return NlTheory(RCL, tuple(sentences), binding)


_ATOM = r"(?:not )?(?:a|an) [a-z]+"
_EVERY_RE = re.compile(rf"^Every ([a-z]+) who is ({_ATOM}) is ({_ATOM})$")
_NO_RE = re.compile(rf"^No ([a-z]+) who is ({_ATOM}) is ((?:a|an) [a-z]+)$")
_EVERYONE_STRICT_RE = re.compile(
    rf"^Everyone who is (not (?:a|an) [a-z]+) and (not (?:a|an) [a-z]+) is ((?:a|an) [a-z]+)$"
)
_EVERYONE_LENIENT_RE = re.compile(
    rf"^(?:Everyone who|Everything that) is ({_ATOM}) and ({_ATOM}) is ({_ATOM})$"
)
_GROUND_RE = re.compile(rf"^([A-Z][a-zA-Z]*) is ({_ATOM}) or ({_ATOM}) or ({_ATOM})$")


class _RclParser:
    def __init__(self, lexicon, strict: bool):
        self.lexicon = lexicon
        self.strict = strict
        self.pred_ids: dict = {}
        self.const_ids: dict = {}
        self.universals = []
        self.grounds = []

    def pred(self, noun: str) -> int:
        return self.pred_ids.setdefault(noun, len(self.pred_ids) + 1)

    def noun_of(self, word: str, idx: int, span) -> str:
        if self.strict:
            if word in self.lexicon.count_nouns:
                return word
            raise ParseError(idx, span, f"unknown noun {word!r}")
        noun = self.lexicon.singular_of(word)
        if noun is None:
            raise ParseError(idx, span, f"unknown noun {word!r}")
        return noun

    def atom(self, text: str, idx: int, offset: int) -> Literal:
        negated = text.startswith("not ")
        body = text[4:] if negated else text
        art, _, word = body.partition(" ")
        noun = self.noun_of(word, idx, (offset + len(text) - len(word), offset + len(text)))
        if self.strict and art != self.lexicon.article(noun):
            raise ParseError(
                idx, (offset, offset + len(text)),
                f"article mismatch: expected {self.lexicon.article(noun)!r} before {noun!r}",
            )
        return Literal(self.pred(noun), negated)

    def bare_noun(self, word: str, idx: int, offset: int) -> int:
        noun = self.noun_of(word, idx, (offset, offset + len(word)))
        return self.pred(noun)

    def add_universal(self, literals, idx: int) -> None:
        if len({l.var for l in literals}) != len(literals):
            raise ParseError(idx, None, "a noun repeats within the sentence")
        self.universals.append(
            Clause(tuple(sorted(literals, key=lambda l: (l.var, l.negated))))
        )

    def sentence(self, s: str, idx: int) -> None:
        if not s.endswith(".") or s.count(".") != 1:
            raise ParseError(idx, None, "sentence must end with its only period")
        body = s[:-1]
        m = _EVERY_RE.match(body)
        if m:
            x = self.bare_noun(m.group(1), idx, m.start(1))
            who = self.atom(m.group(2), idx, m.start(2))
            cons = self.atom(m.group(3), idx, m.start(3))
            self.add_universal([Literal(x, True), who.negate(), cons], idx)
            return
        m = _NO_RE.match(body)
        if m:
            x = self.bare_noun(m.group(1), idx, m.start(1))
            who = self.atom(m.group(2), idx, m.start(2))
            z = self.atom(m.group(3), idx, m.start(3))
            self.add_universal([Literal(x, True), who.negate(), z.negate()], idx)
            return
        m = (_EVERYONE_STRICT_RE if self.strict else _EVERYONE_LENIENT_RE).match(body)
        if m:
            a1 = self.atom(m.group(1), idx, m.start(1))
            a2 = self.atom(m.group(2), idx, m.start(2))
            cons = self.atom(m.group(3), idx, m.start(3))
            self.add_universal([a1.negate(), a2.negate(), cons], idx)
            return
        m = _GROUND_RE.match(body)
        if m:
            name = m.group(1)
            if name not in self.lexicon.proper_nouns:
                raise ParseError(idx, m.span(1), f"unknown name {name!r}")
            cid = self.const_ids.setdefault(name, len(self.const_ids) + 1)
            lits = [self.atom(m.group(i), idx, m.start(i)) for i in (2, 3, 4)]
            if len({l.var for l in lits}) != len(lits):
                raise ParseError(idx, None, "a noun repeats within the sentence")
            self.grounds.append(
                (cid, Clause(tuple(sorted(lits, key=lambda l: (l.var, l.negated)))))
            )
            return
        raise ParseError(idx, None, f"sentence does not match the fragment grammar: {s!r}")


def parse_rcl(sentences, lexicon, strict: bool = True):
    """Parse quantified and ground sentences back into an RclProblem.

    Predicate ids follow first appearance across the text; constant ids
    follow first appearance among ground sentences.  Strict mode
    requires the renderer's exact surface (articles included); lenient
    mode also accepts "Everything that is ..." phrasing, plural nouns,
    any atom polarities in Everyone sentences, and wrong articles.
    """
    parser = _RclParser(lexicon, strict)
    for idx, s in enumerate(sentences, start=1):
        parser.sentence(s, idx)
    if not parser.grounds:
        raise ParseError(1, None, "no ground sentences; constants unrecoverable")
    problem = RclProblem(
        len(parser.pred_ids),
        len(parser.const_ids),
        tuple(parser.universals),
        tuple(parser.grounds),
    )
    binding = VarBinding(
        {v: noun for noun, v in parser.pred_ids.items()},
        {c: name for name, c in parser.const_ids.items()},
    )
    return problem, binding
