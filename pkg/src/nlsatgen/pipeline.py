"""Dataset generation: sample, label, verbalize, balance, split, verify.

Every instance is a pure function of (master seed, fragment, size,
candidate index), so generation is reproducible byte for byte at any
worker count: workers evaluate candidates speculatively in index order
and a sequential collector accepts or rejects them.  Rejection happens
for structural reasons (a variable the text never mentions, an
unusable retrofitted theory) and for label balance, which is kept at
exactly half per size.

Records are emitted as JSON Lines: a header object first, then one
object per instance, keys sorted.
"""

from __future__ import annotations

import json
import multiprocessing
import statistics
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import grl, lexicon as lexicon_mod, rcl, ruletaker
from .cnf import CnfFormula, alpha as formula_alpha, from_dimacs, to_dimacs
from .fragments import (
    FRAGMENTS,
    GRL,
    RCL,
    RULETAKER,
    FragmentError,
    ParseError,
    bind_vocabulary,
    parse_theory,
    reindex_formula,
    split_sentences,
)
from .rng import derive_rng
from .sampler import (
    DIVERSITY_FRACTION,
    HARD,
    NAIVE,
    STRATEGIES,
    CalibrationError,
    SampleSpec,
    sample_clause,
    strategy_m_candidates,
)
from .solver import (
    CONTRADICTED,
    DEFAULT_MAX_DECISIONS,
    ENTAILED,
    SAT,
    UNSAT,
    check_entailment,
    solve,
)

SCHEMA_VERSION = 1
SPLIT_NAMES = ("train", "dev", "test")
STALL_WINDOW = 2000
STALL_MIN_ACCEPTS = 20  # under 1% acceptance over the window
_BATCH = 200

SAT_LABELS = (SAT, UNSAT)
RT_LABELS = (ruletaker.LABEL_TRUE, ruletaker.LABEL_FALSE)


class GenerationStallError(RuntimeError):
    """Candidate acceptance collapsed; the configuration is infeasible."""


class DatasetError(ValueError):
    """A dataset file that cannot be used as requested."""


@dataclass(frozen=True)
class DatasetConfig:
    """Everything that determines a dataset's content."""

    fragment: str
    sizes: tuple
    count_per_size: int
    seed: int
    strategy: str = HARD
    p_int: float = 1.0
    p_neg: float = 0.5
    splits: tuple = (Fraction(8, 10), Fraction(1, 10), Fraction(1, 10))
    diversity_fraction: float = DIVERSITY_FRACTION
    balance_labels: bool = True
    token_budget: int = 30
    max_decisions: int = DEFAULT_MAX_DECISIONS
    no_rewrite_prob: float = rcl.DEFAULT_NO_REWRITE_PROB
    nouns_path: str = None
    names_path: str = None
    attributes_path: str = None
    entities_path: str = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(
            self, "splits", tuple(Fraction(str(s)) for s in self.splits)
        )
        if self.fragment not in FRAGMENTS:
            raise ValueError(f"unknown fragment {self.fragment!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not self.sizes:
            raise ValueError("need at least one size")
        if len(set(self.sizes)) != len(self.sizes):
            raise ValueError("sizes repeat")
        if self.count_per_size < 1:
            raise ValueError("count_per_size must be positive")
        if self.balance_labels and self.count_per_size % 2:
            raise ValueError("count_per_size must be even (labels are balanced exactly)")
        if not 0.0 <= self.p_int <= 1.0 or not 0.0 <= self.p_neg <= 1.0:
            raise ValueError("p_int and p_neg must lie in [0, 1]")
        if not 0.0 <= self.diversity_fraction <= 1.0:
            raise ValueError("diversity_fraction must lie in [0, 1]")
        if len(self.splits) != 3 or any(s < 0 for s in self.splits):
            raise ValueError("splits must be three non-negative fractions")
        if sum(self.splits) != 1:
            raise ValueError(f"splits must sum to 1, got {self.splits}")
        for size in self.sizes:
            if size < 3:
                raise ValueError(f"size {size} too small (need at least 3 variables)")
            if self.fragment == RCL and not rcl.feasible_predicate_counts(size):
                raise ValueError(
                    f"size {size} has no predicate count in 5..8 dividing it "
                    "with at least 2 constants"
                )
        if self.fragment == RCL and self.p_int != 1.0:
            raise ValueError("the quantified fragment renders width-3 clauses only")

    @property
    def labels(self) -> tuple:
        return RT_LABELS if self.fragment == RULETAKER else SAT_LABELS


def load_vocabulary(config: DatasetConfig):
    """The lexicon (or attribute vocabulary) the fragment renders with."""
    if config.fragment == GRL:
        if config.nouns_path:
            return lexicon_mod.load_lexicon(config.nouns_path, config.names_path)
        return lexicon_mod.default_food_lexicon()
    if config.fragment == RCL:
        if config.nouns_path:
            if not config.names_path:
                raise ValueError("the quantified fragment needs a names file")
            return lexicon_mod.load_lexicon(config.nouns_path, config.names_path)
        return lexicon_mod.default_occupation_lexicon()
    attributes = (
        lexicon_mod.load_wordlist(config.attributes_path)
        if config.attributes_path
        else lexicon_mod.default_attributes()
    )
    entities = (
        lexicon_mod.load_wordlist(config.entities_path)
        if config.entities_path
        else lexicon_mod.default_entities()
    )
    return ruletaker.RetrofitVocab(attributes, entities)


def _check_vocabulary_capacity(config: DatasetConfig, vocab) -> None:
    biggest = max(config.sizes)
    if config.fragment == GRL:
        have = len(vocab.count_nouns)
        if biggest > have:
            raise DatasetError(f"lexicon has {have} count nouns, need {biggest}")
    elif config.fragment == RCL:
        preds = max(
            p for size in config.sizes for p in rcl.feasible_predicate_counts(size)
        )
        consts = max(
            size // min(rcl.feasible_predicate_counts(size)) for size in config.sizes
        )
        if preds > len(vocab.count_nouns):
            raise DatasetError(
                f"lexicon has {len(vocab.count_nouns)} count nouns, need {preds}"
            )
        if consts > len(vocab.proper_nouns):
            raise DatasetError(
                f"lexicon has {len(vocab.proper_nouns)} proper nouns, need {consts}"
            )
    else:
        if biggest > len(vocab.attributes):
            raise DatasetError(
                f"vocabulary has {len(vocab.attributes)} attributes, need {biggest}"
            )


def required_calibration_keys(config: DatasetConfig) -> list:
    """(n, p_int, p_neg) keys the strategy needs calibrated bands for."""
    if config.strategy == NAIVE:
        return []
    return [(size, config.p_int, config.p_neg) for size in config.sizes]


def bands_for_config(config: DatasetConfig, table) -> dict:
    """Resolve the critical band per size, or raise for missing calibration."""
    bands = {}
    for size in config.sizes:
        band = None
        if config.strategy != NAIVE:
            band = table.band_for(size, config.p_int, config.p_neg) if table else None
            if band is None:
                raise CalibrationError(
                    f"no calibration for (n={size}, p_int={config.p_int}, "
                    f"p_neg={config.p_neg}); run calibrate first"
                )
        bands[size] = band
    return bands


@dataclass
class Candidate:
    """One speculative draw: everything needed to emit a record."""

    size: int
    index: int
    options: dict  # label -> record payload
    diversity: bool
    natural: str = None  # the label this draw would carry unbalanced

    def __post_init__(self):
        if self.natural is None:
            (self.natural,) = self.options


def _record_id(fragment: str, size: int, index: int) -> str:
    return f"{fragment}-n{size}-{index:06d}"


def _base_payload(config, size, index, n_vars, n_clauses, ratio, stats, text, dimacs):
    return {
        "id": _record_id(config.fragment, size, index),
        "fragment": config.fragment,
        "size": size,
        "seed_index": index,
        "strategy": config.strategy,
        "text": text,
        "n_vars": n_vars,
        "n_clauses": n_clauses,
        "alpha": str(ratio),
        "stats": stats.as_dict(),
        "dimacs": dimacs,
    }


def _is_diverse(config, band, ratio: Fraction) -> bool:
    if config.strategy != HARD or band is None:
        return False
    return not Fraction(band[0]) <= ratio <= Fraction(band[1])


def _draw_m(config, band, spec, rng) -> int:
    ms = strategy_m_candidates(spec, band, rng, config.diversity_fraction)
    return ms[rng.randrange(len(ms))]


def _grl_candidate(config, band, vocab, size, index, rng):
    spec = SampleSpec(
        n=size, p_int=config.p_int, p_neg=config.p_neg, strategy=config.strategy
    )
    m = _draw_m(config, band, spec, rng)
    f = CnfFormula(size, tuple(sample_clause(spec, rng) for _ in range(m)))
    try:
        f, _ = reindex_formula(f)
    except FragmentError:
        return None  # some variable never occurs; the text could not mention it
    result = solve(f, config.max_decisions)
    binding = bind_vocabulary(f, vocab, rng)
    rendered = grl.render_grl(f, binding, config.token_budget)
    ratio = formula_alpha(f)
    payload = _base_payload(
        config, size, index, f.n_vars, f.m, ratio, result.stats,
        rendered.text, to_dimacs(f),
    )
    payload["label"] = result.label
    return Candidate(size, index, {result.label: payload}, _is_diverse(config, band, ratio))


def _rcl_candidate(config, band, vocab, size, index, rng):
    feasible = rcl.feasible_predicate_counts(size)
    n_preds = feasible[rng.randrange(len(feasible))]
    n_consts = size // n_preds
    spec = SampleSpec(
        n=size, p_int=1.0, p_neg=config.p_neg, strategy=config.strategy
    )
    total_m = _draw_m(config, band, spec, rng)
    try:
        m_universal, m_ground = rcl.split_clause_budget(total_m, n_consts)
    except ValueError:
        return None  # clause budget cannot cover every constant
    problem = rcl.sample_rcl_problem(
        n_preds, n_consts, m_universal, m_ground, config.p_neg, rng
    )
    try:
        problem, _, _ = rcl.reindex_problem(problem)
    except FragmentError:
        return None  # some predicate never occurs; the text could not mention it
    grounded = rcl.ground_rcl(problem)
    result = solve(grounded, config.max_decisions)
    binding = bind_vocabulary(problem, vocab, rng)
    rendered = rcl.render_rcl(
        problem, binding, vocab, rng, config.no_rewrite_prob, config.token_budget
    )
    ratio = formula_alpha(grounded)
    payload = _base_payload(
        config, size, index, problem.n_predicates, grounded.m, ratio, result.stats,
        rendered.text, to_dimacs(grounded),
    )
    payload["label"] = result.label
    payload["n_ground_vars"] = grounded.n_vars
    payload["n_constants"] = problem.n_constants
    return Candidate(size, index, {result.label: payload}, _is_diverse(config, band, ratio))


def _rt_candidate(config, band, vocab, size, index, rng):
    spec = SampleSpec(
        n=size,
        p_int=config.p_int,
        p_neg=config.p_neg,
        with_replacement=True,
        strategy=config.strategy,
    )
    m = _draw_m(config, band, spec, rng)
    raw = CnfFormula(size, tuple(sample_clause(spec, rng) for _ in range(m)))
    theory = ruletaker.retrofit(raw, rng, spec)
    if theory is None:
        return None  # contradictory facts or unsatisfiable rules
    try:
        theory, _ = ruletaker.reindex_theory(theory)
    except FragmentError:
        return None  # some attribute never occurs; the text could not mention it
    pools = ruletaker.conjecture_pools(theory, config.max_decisions)
    # Draw both label options in a fixed order so the byte stream does
    # not depend on which one the collector ends up needing.
    picks = {}
    for label in RT_LABELS:
        pool = pools[label]
        if pool:
            picks[label] = pool[rng.randrange(len(pool))]
    if not picks:
        return None  # theory neither entails nor refutes any literal
    if len(picks) == 2:
        # Unbalanced natural label: uniform over all decidable conjectures.
        total = sum(len(pools[label]) for label in RT_LABELS)
        first = RT_LABELS[0]
        natural = first if rng.randrange(total) < len(pools[first]) else RT_LABELS[1]
    else:
        (natural,) = picks
    binding = ruletaker.bind_attributes(theory, vocab, rng)
    ratio = Fraction(m, size)
    diversity = _is_diverse(config, band, ratio)
    options = {}
    for label, conjecture in picks.items():
        stats = ruletaker.refutation_stats(theory, conjecture, label, config.max_decisions)
        rendered, conjecture_text = ruletaker.render_ruletaker(
            theory, binding, conjecture, config.token_budget
        )
        formula = theory.formula()
        payload = _base_payload(
            config, size, index, formula.n_vars, formula.m, ratio, stats,
            rendered.text, to_dimacs(formula),
        )
        payload["label"] = label
        payload["conjecture_text"] = conjecture_text
        options[label] = payload
    return Candidate(size, index, options, diversity, natural)


_CANDIDATE_FNS = {GRL: _grl_candidate, RCL: _rcl_candidate, RULETAKER: _rt_candidate}


def generate_candidate(config: DatasetConfig, band, vocab, size: int, index: int):
    """Evaluate candidate (size, index); None when it is rejected."""
    rng = derive_rng(config.seed, config.fragment, size, index)
    return _CANDIDATE_FNS[config.fragment](config, band, vocab, size, index, rng)


_WORKER_STATE = None


def _init_worker(config, bands):
    global _WORKER_STATE
    _WORKER_STATE = (config, bands, load_vocabulary(config))


def _worker(task):
    size, index = task
    config, bands, vocab = _WORKER_STATE
    return generate_candidate(config, bands[size], vocab, size, index)


def _candidate_stream(config, bands, vocab, size, pool):
    """Candidates for one size, lazily, in index order."""
    start = 0
    while True:
        indices = range(start, start + _BATCH)
        if pool is None:
            yield from (
                generate_candidate(config, bands[size], vocab, size, i) for i in indices
            )
        else:
            yield from pool.map(_worker, [(size, i) for i in indices])
        start += _BATCH


def _collect_size(config, stream, size) -> list:
    """Accept candidates in index order until both labels hit their quota.

    With label balancing off, every viable candidate counts toward one
    shared quota under its natural label instead.
    """
    if config.balance_labels:
        half = config.count_per_size // 2
        need = {label: half for label in config.labels}
    else:
        need = {None: config.count_per_size}
    window = deque()
    window_accepts = 0
    accepted = []
    for candidate in stream:
        take = None
        if candidate is not None:
            if not config.balance_labels:
                take = candidate.natural if need[None] > 0 else None
            else:
                open_labels = [
                    lab for lab in config.labels
                    if need[lab] > 0 and lab in candidate.options
                ]
                if open_labels:
                    # Largest remaining need wins; ties go to the first label.
                    take = max(open_labels, key=lambda lab: need[lab])
        window.append(take is not None)
        window_accepts += take is not None
        if len(window) > STALL_WINDOW:
            window_accepts -= window.popleft()
        if take is not None:
            need[take if config.balance_labels else None] -= 1
            accepted.append(candidate.options[take] | {"diversity": candidate.diversity})
            if not any(need.values()):
                return accepted
        elif len(window) == STALL_WINDOW and window_accepts < STALL_MIN_ACCEPTS:
            raise GenerationStallError(
                f"size {size}: {window_accepts}/{STALL_WINDOW} candidates accepted; "
                f"still need {need}; the configuration looks infeasible"
            )
    raise AssertionError("candidate stream is infinite")


def _largest_remainder(total: int, fractions) -> list:
    exact = [Fraction(f) * total for f in fractions]
    counts = [int(e) for e in exact]
    order = sorted(range(len(exact)), key=lambda i: (exact[i] - counts[i], -i), reverse=True)
    for i in order[: total - sum(counts)]:
        counts[i] += 1
    return counts


def assign_splits(config: DatasetConfig, records: list) -> None:
    """Stratified train/dev/test split per (size, label), in place.

    Instances flagged as diversity draws are kept out of evaluation:
    a deterministic pass swaps each one in dev/test with an unflagged
    train record from the same cell.
    """
    cells = {}
    for rec in records:
        cells.setdefault((rec["size"], rec["label"]), []).append(rec)
    for (size, label), cell in sorted(cells.items()):
        counts = _largest_remainder(len(cell), config.splits)
        order = list(range(len(cell)))
        derive_rng(config.seed, "split", size, label).shuffle(order)
        names = [None] * len(cell)
        at = 0
        for split_name, k in zip(SPLIT_NAMES, counts):
            for pos in order[at:at + k]:
                names[pos] = split_name
            at += k
        for rec, name in zip(cell, names):
            rec["split"] = name
        train_pool = [r for r in cell if r["split"] == "train" and not r["diversity"]]
        for rec in cell:
            if rec["diversity"] and rec["split"] != "train" and train_pool:
                swap = train_pool.pop()
                swap["split"], rec["split"] = rec["split"], "train"


def dataset_header(config: DatasetConfig) -> dict:
    return {
        "kind": "header",
        "schema_version": SCHEMA_VERSION,
        "tool": "nlsatgen",
        "fragment": config.fragment,
        "sizes": list(config.sizes),
        "count_per_size": config.count_per_size,
        "seed": config.seed,
        "strategy": config.strategy,
        "p_int": config.p_int,
        "p_neg": config.p_neg,
        "splits": [str(s) for s in config.splits],
        "diversity_fraction": config.diversity_fraction,
        "balance_labels": config.balance_labels,
        "token_budget": config.token_budget,
    }


def generate_records(config: DatasetConfig, table=None, jobs: int = 1) -> list:
    """Generate the full dataset; returns records with splits assigned.

    ``jobs`` only sets how many processes evaluate candidates; the
    output is byte-identical at any value.
    """
    vocab = load_vocabulary(config)
    _check_vocabulary_capacity(config, vocab)
    bands = bands_for_config(config, table)
    records = []
    if jobs <= 1:
        for size in config.sizes:
            stream = _candidate_stream(config, bands, vocab, size, None)
            records.extend(_collect_size(config, stream, size))
    else:
        with multiprocessing.Pool(
            jobs, initializer=_init_worker, initargs=(config, bands)
        ) as pool:
            for size in config.sizes:
                stream = _candidate_stream(config, bands, vocab, size, pool)
                records.extend(_collect_size(config, stream, size))
    assign_splits(config, records)
    return records


def write_dataset(path, config: DatasetConfig, records: list) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(dataset_header(config), sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_dataset(path) -> tuple:
    """Returns (header, records); raises DatasetError on malformed files."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from None
    if not lines:
        raise DatasetError(f"{path}: empty file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: line 1 is not JSON: {exc}") from None
    if not isinstance(header, dict) or header.get("kind") != "header":
        raise DatasetError(f"{path}: first line must be the header object")
    if header.get("schema_version") != SCHEMA_VERSION:
        raise DatasetError(
            f"{path}: schema_version {header.get('schema_version')!r} unsupported"
        )
    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}: line {line_no} is not JSON: {exc}") from None
        records.append(rec)
    if not records:
        raise DatasetError(f"{path}: no instance records")
    return header, records


@dataclass(frozen=True)
class VerifyIssue:
    record_id: str
    kind: str  # parse | dimacs | label | field | balance
    message: str

    def __str__(self):
        return f"{self.record_id}: {self.kind}: {self.message}"


def _verify_record(rec: dict, vocab, max_decisions: int) -> list:
    issues = []
    rid = rec.get("id", "<missing id>")
    fragment = rec.get("fragment")

    def bad(kind, message):
        issues.append(VerifyIssue(rid, kind, message))

    for key in ("text", "label", "dimacs", "n_vars", "n_clauses"):
        if key not in rec:
            bad("field", f"missing {key}")
            return issues
    try:
        parsed = parse_theory(rec["text"], fragment, vocab, strict=True)
    except (ParseError, FragmentError, ValueError) as exc:
        bad("parse", str(exc))
        return issues
    if fragment == GRL:
        formula, _ = parsed
        expected_n_vars = formula.n_vars
    elif fragment == RCL:
        problem, _ = parsed
        formula = rcl.ground_rcl(problem)
        expected_n_vars = problem.n_predicates
        if rec.get("n_ground_vars") != formula.n_vars:
            bad("field", f"n_ground_vars {rec.get('n_ground_vars')} != {formula.n_vars}")
        if rec.get("n_constants") != problem.n_constants:
            bad("field", f"n_constants {rec.get('n_constants')} != {problem.n_constants}")
    else:
        theory, binding, _ = parsed
        formula = theory.formula()
        expected_n_vars = formula.n_vars
    if to_dimacs(formula) != rec["dimacs"]:
        bad("dimacs", "stored formula differs from the parsed text")
    if expected_n_vars != rec["n_vars"]:
        bad("field", f"n_vars {rec['n_vars']} != {expected_n_vars}")
    if formula.m != rec["n_clauses"]:
        bad("field", f"n_clauses {rec['n_clauses']} != {formula.m}")
    if fragment == RULETAKER:
        if "conjecture_text" not in rec:
            bad("field", "missing conjecture_text")
            return issues
        try:
            conjecture = ruletaker.parse_conjecture(
                rec["conjecture_text"], vocab, binding
            )
        except (ParseError, ValueError) as exc:
            bad("parse", f"conjecture: {exc}")
            return issues
        status = check_entailment(formula, conjecture, max_decisions)
        expected = {
            ruletaker.LABEL_TRUE: ENTAILED,
            ruletaker.LABEL_FALSE: CONTRADICTED,
        }.get(rec["label"])
        if expected is None:
            bad("label", f"unknown label {rec['label']!r}")
        elif status != expected:
            bad("label", f"conjecture is {status}, record says {rec['label']!r}")
    else:
        result = solve(formula, max_decisions)
        if result.label != rec["label"]:
            bad("label", f"formula is {result.label}, record says {rec['label']!r}")
        try:
            expected_alpha = str(formula_alpha(formula))
        except ValueError:
            expected_alpha = None
        if expected_alpha is not None and rec.get("alpha") != expected_alpha:
            bad("field", f"alpha {rec.get('alpha')!r} != {expected_alpha!r}")
    return issues


def verify_dataset(path, config_lexicon=None, max_decisions: int = DEFAULT_MAX_DECISIONS) -> list:
    """Re-derive every record from its text; returns all mismatches found.

    Each record's sentences are re-parsed strictly, the parsed logical
    form must serialize to exactly the stored DIMACS, and re-solving
    (or re-checking the conjecture) must reproduce the stored label.
    Per-size label balance is checked dataset-wide.
    """
    header, records = read_dataset(path)
    fragment = header.get("fragment")
    vocab = config_lexicon if config_lexicon is not None else _default_vocab(fragment)
    issues = []
    seen_ids = set()
    by_size = {}
    for rec in records:
        rid = rec.get("id", "<missing id>")
        if rid in seen_ids:
            issues.append(VerifyIssue(rid, "field", "duplicate id"))
        seen_ids.add(rid)
        if rec.get("fragment") != fragment:
            issues.append(VerifyIssue(rid, "field", "fragment differs from header"))
            continue
        if rec.get("split") not in SPLIT_NAMES:
            issues.append(VerifyIssue(rid, "field", f"bad split {rec.get('split')!r}"))
        issues.extend(_verify_record(rec, vocab, max_decisions))
        by_size.setdefault(rec.get("size"), []).append(rec.get("label"))
    if header.get("balance_labels") is False:
        return issues
    labels = RT_LABELS if fragment == RULETAKER else SAT_LABELS
    for size, got in sorted(by_size.items()):
        counts = {lab: got.count(lab) for lab in labels}
        if len(set(counts.values())) != 1:
            issues.append(
                VerifyIssue(
                    f"{fragment}-n{size}", "balance",
                    f"labels are not balanced: {counts}",
                )
            )
    return issues


def _default_vocab(fragment: str):
    if fragment == GRL:
        return lexicon_mod.default_food_lexicon()
    if fragment == RCL:
        return lexicon_mod.default_occupation_lexicon()
    return ruletaker.RetrofitVocab(
        lexicon_mod.default_attributes(), lexicon_mod.default_entities()
    )


def stats_report(path) -> str:
    """Human-readable summary: counts, balance, splits, solver effort."""
    header, records = read_dataset(path)
    labels = RT_LABELS if header.get("fragment") == RULETAKER else SAT_LABELS
    lines = [
        f"fragment: {header.get('fragment')}",
        f"strategy: {header.get('strategy')}",
        f"instances: {len(records)}",
    ]
    label_counts = {lab: 0 for lab in labels}
    split_counts = {name: 0 for name in SPLIT_NAMES}
    for rec in records:
        label_counts[rec["label"]] = label_counts.get(rec["label"], 0) + 1
        split_counts[rec["split"]] = split_counts.get(rec["split"], 0) + 1
    lines.append(
        "labels: " + ", ".join(f"{lab} {label_counts[lab]}" for lab in label_counts)
    )
    lines.append(
        "splits: " + ", ".join(f"{name} {split_counts[name]}" for name in split_counts)
    )
    by_size = {}
    for rec in records:
        by_size.setdefault(rec["size"], []).append(rec)
    for size in sorted(by_size):
        recs = by_size[size]
        decisions = [r["stats"]["decisions"] for r in recs]
        conflicts = [r["stats"]["conflicts"] for r in recs]
        balance = "/".join(
            str(sum(r["label"] == lab for r in recs)) for lab in labels
        )
        lines.append(
            f"size {size}: count {len(recs)}, "
            f"labels {balance}, "
            f"decisions mean {statistics.mean(decisions):.1f} "
            f"median {statistics.median(decisions):.1f}, "
            f"conflicts mean {statistics.mean(conflicts):.1f} "
            f"median {statistics.median(conflicts):.1f}"
        )
    return "\n".join(lines) + "\n"


def export_dimacs_files(path, out_dir) -> int:
    """Write each record's formula as <id>.cnf; returns the file count."""
    _, records = read_dataset(path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for rec in records:
        from_dimacs(rec["dimacs"])  # refuse to export corrupt formulas
        name = rec["id"]
        if "/" in name or "\\" in name or name.startswith("."):
            raise DatasetError(f"unsafe record id {name!r}")
        (out / f"{name}.cnf").write_text(rec["dimacs"], encoding="utf-8")
    return len(records)
