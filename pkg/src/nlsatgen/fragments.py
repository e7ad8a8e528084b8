"""Shared machinery for rendering CNF into controlled English and back.

Each fragment (propositional rules, quantified relative clauses,
single-entity attribute theories) pairs a renderer with a parser.  The
renderer maps formula variables to words through a binding; the parser
reconstructs the formula, assigning variable ids by order of first
appearance in the text.  Generators therefore reindex formulas into
first-appearance order before rendering, which makes parse(render(x))
reproduce x exactly; the reindexing is a fixpoint after one round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cnf import Clause, CnfFormula, Literal

GRL = "grl"
RCL = "rcl"
RULETAKER = "ruletaker"
FRAGMENTS = (GRL, RCL, RULETAKER)


class FragmentError(ValueError):
    """A formula or configuration the fragment cannot express."""


class ParseError(ValueError):
    """A sentence the fragment grammar does not accept.

    Carries the 1-based sentence number and, when known, the character
    span of the offending tokens within that sentence.
    """

    def __init__(self, sentence_index: int, span, message: str):
        where = f"sentence {sentence_index}"
        if span is not None:
            where += f", chars {span[0]}-{span[1]}"
        super().__init__(f"{where}: {message}")
        self.sentence_index = sentence_index
        self.span = span


@dataclass(frozen=True)
class VarBinding:
    """Injective maps from variable ids (and constant ids) to words."""

    variables: dict
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        for label, mapping in (("variable", self.variables), ("constant", self.constants)):
            words = list(mapping.values())
            if len(set(words)) != len(words):
                raise ValueError(f"{label} binding is not injective: {sorted(words)}")
            for key in mapping:
                if not isinstance(key, int) or key < 1:
                    raise ValueError(f"{label} ids must be positive ints, got {key!r}")

    def word(self, var: int) -> str:
        return self.variables[var]

    def constant_word(self, cid: int) -> str:
        return self.constants[cid]

    def remap(self, var_map: dict, const_map: Optional[dict] = None) -> "VarBinding":
        variables = {var_map[v]: w for v, w in self.variables.items()}
        if const_map is None:
            return VarBinding(variables, dict(self.constants))
        return VarBinding(variables, {const_map[c]: w for c, w in self.constants.items()})


@dataclass(frozen=True)
class NlTheory:
    """Rendered sentences, one per clause, in clause order."""

    fragment: str
    sentences: tuple
    binding: VarBinding

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if self.fragment not in FRAGMENTS:
            raise ValueError(f"unknown fragment {self.fragment!r}")
        for s in self.sentences:
            if not s or s.count(".") != 1 or not s.endswith("."):
                raise ValueError(f"sentence must end with its only period: {s!r}")

    @property
    def text(self) -> str:
        return " ".join(self.sentences)


def check_token_budget(sentence: str, budget: int) -> None:
    n_tokens = len(sentence.split())
    if n_tokens > budget:
        raise FragmentError(
            f"sentence has {n_tokens} tokens, over the budget of {budget}: {sentence!r}"
        )


def split_sentences(text: str) -> list:
    """Split renderer output (sentences joined by single spaces) back apart."""
    if isinstance(text, (list, tuple)):
        return list(text)
    if not text or not text.endswith("."):
        raise ParseError(1, None, "text must be sentences ending with periods")
    parts = text.split(". ")
    return [p if p.endswith(".") else p + "." for p in parts]


def bind_vocabulary(obj, lexicon, rng) -> VarBinding:
    """Draw an injective word binding for a formula or grounded problem.

    Variables take uniformly sampled count nouns; problems with
    constants additionally take proper nouns for them.
    """
    n_constants = getattr(obj, "n_constants", 0)
    n_vars = getattr(obj, "n_predicates", None) or obj.n_vars
    if n_vars > len(lexicon.count_nouns):
        raise FragmentError(
            f"lexicon has {len(lexicon.count_nouns)} count nouns, need {n_vars}"
        )
    variables = dict(enumerate(rng.sample(lexicon.count_nouns, n_vars), start=1))
    constants = {}
    if n_constants:
        if n_constants > len(lexicon.proper_nouns):
            raise FragmentError(
                f"lexicon has {len(lexicon.proper_nouns)} proper nouns, need {n_constants}"
            )
        constants = dict(enumerate(rng.sample(lexicon.proper_nouns, n_constants), start=1))
    return VarBinding(variables, constants)


def appearance_map(var_walk: Iterable) -> dict:
    """Map ids to 1..n by order of first appearance along a walk."""
    mapping = {}
    for v in var_walk:
        if v not in mapping:
            mapping[v] = len(mapping) + 1
    return mapping


def reindex_formula(f: CnfFormula) -> tuple:
    """Renumber variables by first appearance in clause-literal order.

    Returns (formula, old-to-new map).  Requires every variable 1..n
    to occur in some clause, otherwise the renumbering would change n.
    """
    walk = (lit.var for cl in f.clauses for lit in cl.literals)
    mapping = appearance_map(walk)
    if len(mapping) != f.n_vars:
        missing = sorted(set(range(1, f.n_vars + 1)) - set(mapping))
        raise FragmentError(f"variables never mentioned: {missing}")
    clauses = tuple(
        Clause(
            tuple(
                sorted(
                    (Literal(mapping[l.var], l.negated) for l in cl.literals),
                    key=lambda lit: (lit.var, lit.negated),
                )
            )
        )
        for cl in f.clauses
    )
    return CnfFormula(f.n_vars, clauses), mapping


def parse_theory(text, fragment: str, lexicon=None, strict: bool = True):
    """Parse rendered sentences back into logical form.

    Dispatches on fragment; returns what the matching renderer
    consumed: (CnfFormula, VarBinding) for the propositional fragment,
    (RclProblem, VarBinding) for the quantified one, and
    (RetrofitTheory, VarBinding, entity) for single-entity theories.
    When ``lexicon`` is omitted the packaged default for the fragment
    is used.
    """
    from . import grl, lexicon as lex_mod, rcl, ruletaker

    sentences = split_sentences(text)
    if fragment == GRL:
        lex = lexicon if lexicon is not None else lex_mod.default_food_lexicon()
        return grl.parse_grl(sentences, lex, strict)
    if fragment == RCL:
        lex = lexicon if lexicon is not None else lex_mod.default_occupation_lexicon()
        return rcl.parse_rcl(sentences, lex, strict)
    if fragment == RULETAKER:
        if lexicon is None:
            vocab = ruletaker.RetrofitVocab(
                lex_mod.default_attributes(), lex_mod.default_entities()
            )
        else:
            vocab = lexicon
        return ruletaker.parse_ruletaker(sentences, vocab, strict)
    raise ValueError(f"unknown fragment {fragment!r}")
