"""Natural-language satisfiability dataset generation.

Random 2/3-CNF formulas are sampled near (or away from) the
satisfiability phase transition, labeled with a complete backtracking
solver, rendered into controlled English fragments, and emitted as
balanced, split, verifiable JSONL datasets.
"""

from .cnf import (
    Assignment,
    Clause,
    CnfFormula,
    DimacsError,
    Literal,
    alpha,
    evaluate,
    from_dimacs,
    normalize_clause,
    to_dimacs,
)
from .fragments import (
    FRAGMENTS,
    GRL,
    RCL,
    RULETAKER,
    FragmentError,
    NlTheory,
    ParseError,
    VarBinding,
    bind_vocabulary,
    parse_theory,
    reindex_formula,
    split_sentences,
)
from .grl import parse_grl, render_grl
from .lexicon import (
    Lexicon,
    default_attributes,
    default_entities,
    default_food_lexicon,
    default_occupation_lexicon,
    load_lexicon,
    load_wordlist,
    pluralize,
)
from .pipeline import (
    DatasetConfig,
    DatasetError,
    GenerationStallError,
    VerifyIssue,
    assign_splits,
    export_dimacs_files,
    generate_candidate,
    generate_records,
    read_dataset,
    stats_report,
    verify_dataset,
    write_dataset,
)
from .rcl import (
    RclProblem,
    ground_rcl,
    parse_rcl,
    reindex_problem,
    render_rcl,
    sample_rcl_problem,
)
from .rng import derive_rng, derive_seed
from .ruletaker import (
    RetrofitInstance,
    RetrofitTheory,
    RetrofitVocab,
    conjecture_pools,
    make_instance,
    parse_ruletaker,
    reindex_theory,
    render_ruletaker,
    retrofit,
    sample_retrofit_theory,
)
from .sampler import (
    BIASED,
    CalibrationError,
    CalibrationResult,
    CalibrationTable,
    HARD,
    NAIVE,
    PhaseCurve,
    PsatEstimate,
    SampleSpec,
    calibrate_critical,
    calibration_cache_path,
    estimate_curve,
    estimate_psat,
    sample_clause,
    sample_formula,
    sample_with_strategy,
    wilson_halfwidth,
)
from .solver import (
    BRUTEFORCE_MAX_VARS,
    BudgetExhaustedError,
    CONTRADICTED,
    DEFAULT_MAX_DECISIONS,
    DegenerateTheoryError,
    ENTAILED,
    ExternalSolverError,
    SAT,
    SolveResult,
    SolveStats,
    UNKNOWN,
    UNSAT,
    check_entailment,
    solve,
    solve_bruteforce,
    solve_external,
    unit_propagate,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BIASED",
    "BRUTEFORCE_MAX_VARS",
    "BudgetExhaustedError",
    "CONTRADICTED",
    "CalibrationError",
    "CalibrationResult",
    "CalibrationTable",
    "Clause",
    "CnfFormula",
    "DEFAULT_MAX_DECISIONS",
    "DatasetConfig",
    "DatasetError",
    "DegenerateTheoryError",
    "DimacsError",
    "ENTAILED",
    "ExternalSolverError",
    "FRAGMENTS",
    "FragmentError",
    "GRL",
    "GenerationStallError",
    "HARD",
    "Lexicon",
    "Literal",
    "NAIVE",
    "NlTheory",
    "ParseError",
    "PhaseCurve",
    "PsatEstimate",
    "RCL",
    "RULETAKER",
    "RclProblem",
    "RetrofitInstance",
    "RetrofitTheory",
    "RetrofitVocab",
    "SAT",
    "SampleSpec",
    "SolveResult",
    "SolveStats",
    "UNKNOWN",
    "UNSAT",
    "VarBinding",
    "VerifyIssue",
    "alpha",
    "assign_splits",
    "bind_vocabulary",
    "calibrate_critical",
    "calibration_cache_path",
    "check_entailment",
    "conjecture_pools",
    "default_attributes",
    "default_entities",
    "default_food_lexicon",
    "default_occupation_lexicon",
    "derive_rng",
    "derive_seed",
    "estimate_curve",
    "estimate_psat",
    "evaluate",
    "export_dimacs_files",
    "from_dimacs",
    "generate_candidate",
    "generate_records",
    "ground_rcl",
    "load_lexicon",
    "load_wordlist",
    "make_instance",
    "normalize_clause",
    "parse_grl",
    "parse_rcl",
    "parse_ruletaker",
    "parse_theory",
    "pluralize",
    "read_dataset",
    "reindex_formula",
    "reindex_problem",
    "reindex_theory",
    "render_grl",
    "render_rcl",
    "render_ruletaker",
    "retrofit",
    "sample_clause",
    "sample_formula",
    "sample_rcl_problem",
    "sample_retrofit_theory",
    "sample_with_strategy",
    "solve",
    "solve_bruteforce",
    "solve_external",
    "split_sentences",
    "stats_report",
    "to_dimacs",
    "unit_propagate",
    "verify_dataset",
    "wilson_halfwidth",
    "write_dataset",
]
