"""Search engine: DPLL with propagation, brute force, entailment, external runner."""

import random
import stat

import pytest

from nlsatgen.cnf import Clause, CnfFormula, Literal, evaluate
from nlsatgen.rng import derive_rng
from nlsatgen.sampler import SampleSpec, admissible_m, sample_formula
from nlsatgen.solver import (
    CONTRADICTED,
    ENTAILED,
    SAT,
    UNKNOWN,
    UNSAT,
    BudgetExhaustedError,
    DegenerateTheoryError,
    ExternalSolverError,
    check_entailment,
    solve,
    solve_bruteforce,
    solve_external,
    unit_propagate,
)


# ---------------------------------------------------------------- basics


def test_empty_formula_is_sat_with_no_work():
    r = solve(CnfFormula(0, ()))
    assert r.label == SAT
    assert r.model == {}
    assert r.stats.as_dict() == {"decisions": 0, "conflicts": 0, "propagations": 0}


def test_clause_free_formula_gets_all_false_model():
    r = solve(CnfFormula(3, ()))
    assert r.label == SAT
    assert r.model == {1: False, 2: False, 3: False}
    assert r.stats.decisions == 0


def test_complementary_units_unsat_without_deciding():
    r = solve(CnfFormula.from_ints(1, [(1,), (-1,)]))
    assert r.label == UNSAT
    assert r.model is None
    assert r.stats.decisions == 0
    assert r.stats.conflicts == 1


def test_hand_traced_three_clause_formula():
    # false-first branching: decide 1=F, decide 2=F, propagate 3=T,
    # clause (2,-3) falsifies -> backtrack, flip 2=T -> everything satisfied
    f = CnfFormula.from_ints(3, [(1, 2, 3), (-1, -2), (2, -3)])
    r = solve(f)
    assert r.label == SAT
    assert r.model == {1: False, 2: True, 3: False}
    assert r.stats.decisions == 2
    assert r.stats.conflicts == 1
    assert r.stats.propagations == 1


def test_unit_chain_needs_no_decisions():
    r = solve(CnfFormula.from_ints(2, [(1,), (-1, 2)]))
    assert r.label == SAT
    assert r.model == {1: True, 2: True}
    assert r.stats.decisions == 0
    assert r.stats.propagations == 2


def test_solve_requires_canonical_clauses():
    raw = CnfFormula(2, (Clause.raw_from_ints(1, 1),))
    with pytest.raises(ValueError):
        solve(raw)


def test_solve_is_deterministic():
    f = CnfFormula.from_ints(4, [(1, 2, 3), (-1, -2, 4), (2, -3, -4), (-1, 3)])
    a, b = solve(f), solve(f)
    assert a.label == b.label
    assert a.model == b.model
    assert a.stats.as_dict() == b.stats.as_dict()


def test_budget_exhaustion_raises():
    f = CnfFormula.from_ints(3, [(1, 2, 3)])
    with pytest.raises(BudgetExhaustedError) as exc:
        solve(f, max_decisions=0)
    assert "budget exhausted" in str(exc.value)
    # two false-first decisions then a forced literal satisfies it
    assert solve(f, max_decisions=2).label == SAT


# ---------------------------------------------------------------- propagation


def test_unit_propagate_runs_to_fixpoint():
    f = CnfFormula.from_ints(2, [(1,), (-1, 2)])
    r = unit_propagate(f, {})
    assert r.assignment == {1: True, 2: True}
    assert r.conflict is False
    assert r.propagations == 2


def test_unit_propagate_with_seed_assignment():
    f = CnfFormula.from_ints(2, [(-1, 2)])
    start = {1: True}
    r = unit_propagate(f, start)
    assert r.assignment == {1: True, 2: True}
    assert start == {1: True}  # caller's dict untouched


def test_unit_propagate_reports_conflict():
    r = unit_propagate(CnfFormula.from_ints(1, [(1,), (-1,)]), {})
    assert r.conflict is True


# a small propositional theory in the style of fact/rule reasoning demos:
# two entities, facts force a cascade through implication rules.
# vars: 1 round_B, 2 blue_A, 3 rough_A, 4 young_A, 5 big_A, 6 big_B,
#       7 green_A, 8 green_B, 9 round_A, 10 rough_B
_FACTS = [(1,), (2,), (3,), (4,)]
_RULES = [(-9, 5), (-1, 6), (-3, 7), (-10, 8), (-5, -7), (-6, -8)]


def _demo_theory():
    return CnfFormula.from_ints(10, _FACTS + _RULES)


def test_fact_rule_theory_solved_by_propagation_alone():
    r = solve(_demo_theory())
    assert r.label == SAT
    assert r.stats.decisions == 0
    # the cascade: facts -> green_A, big_B -> not green_B, not big_A...
    assert r.model[7] is True and r.model[8] is False


def test_fact_rule_theory_entailment_answers():
    theory = _demo_theory()
    assert check_entailment(theory, Literal(7)) == ENTAILED          # green_A
    assert check_entailment(theory, Literal(8)) == CONTRADICTED     # green_B
    assert check_entailment(theory, Literal(8, True)) == ENTAILED   # not green_B


def test_fact_rule_theory_conflict_by_propagation_only():
    denied = CnfFormula.from_ints(10, _FACTS + _RULES + [(-7,)])
    r = unit_propagate(denied, {})
    assert r.conflict is True
    r2 = solve(denied)
    assert r2.label == UNSAT
    assert r2.stats.decisions == 0


# ---------------------------------------------------------------- entailment


def test_entailment_unknown_when_neither_side_refuted():
    assert check_entailment(CnfFormula.from_ints(2, [(1, 2)]), Literal(1)) == UNKNOWN


def test_entailment_rejects_degenerate_theory():
    with pytest.raises(DegenerateTheoryError) as exc:
        check_entailment(CnfFormula.from_ints(1, [(1,), (-1,)]), Literal(1))
    assert "degenerate theory" in str(exc.value)


def test_entailment_rejects_out_of_range_query():
    with pytest.raises(ValueError):
        check_entailment(CnfFormula.from_ints(2, [(1, 2)]), Literal(5))


def test_entailment_matches_bruteforce_semantics():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(2, 8)
        m = rng.randint(1, 3 * n)
        clauses = set()
        while len(clauses) < m:
            width = rng.randint(1, min(3, n))
            variables = sorted(rng.sample(range(1, n + 1), width))
            clauses.add(tuple(v if rng.random() < 0.5 else -v for v in variables))
        f = CnfFormula.from_ints(n, sorted(clauses))
        if solve_bruteforce(f).label == UNSAT:
            continue
        q = Literal(rng.randint(1, n), rng.random() < 0.5)
        # oracle: enumerate all total assignments satisfying f
        holds_all, fails_all = True, True
        for bits in range(2 ** n):
            assignment = {v: bool(bits >> (v - 1) & 1) for v in range(1, n + 1)}
            if evaluate(f, assignment):
                if assignment[q.var] == (not q.negated):
                    fails_all = False
                else:
                    holds_all = False
        expected = ENTAILED if holds_all else CONTRADICTED if fails_all else UNKNOWN
        assert check_entailment(f, q) == expected


# ---------------------------------------------------------------- brute force


def test_bruteforce_first_model_is_lexicographic_false_first():
    r = solve_bruteforce(CnfFormula.from_ints(2, [(1, 2)]))
    assert r.label == SAT
    assert r.model == {1: False, 2: True}
    r2 = solve_bruteforce(CnfFormula.from_ints(2, [(-1, -2)]))
    assert r2.model == {1: False, 2: False}


def test_bruteforce_all_sign_patterns_is_unsat():
    clauses = [
        (s1 * 1, s2 * 2, s3 * 3)
        for s1 in (1, -1)
        for s2 in (1, -1)
        for s3 in (1, -1)
    ]
    f = CnfFormula.from_ints(3, sorted(clauses))
    assert solve_bruteforce(f).label == UNSAT
    assert solve(f).label == UNSAT


def test_bruteforce_refuses_large_formulas():
    with pytest.raises(ValueError) as exc:
        solve_bruteforce(CnfFormula(25, ()))
    assert "brute force refused" in str(exc.value)


def test_bruteforce_empty_and_clause_free():
    assert solve_bruteforce(CnfFormula(0, ())).label == SAT
    r = solve_bruteforce(CnfFormula(2, ()))
    assert r.model == {1: False, 2: False}


# ---------------------------------------------------------------- agreement sweeps


def _sweep_specs():
    specs = []
    for i in range(240):
        p_int = (0.0, 0.5, 1.0)[i % 3]
        n = 3 + (i % 13)  # 3..15
        specs.append(
            SampleSpec(n=n, p_int=p_int, p_neg=0.5, alpha_min=1, alpha_max=6, seed=i)
        )
    return specs


def test_solve_agrees_with_bruteforce_on_random_formulas():
    for spec in _sweep_specs():
        rng = derive_rng("solver-sweep", spec.seed)
        for k in range(3):
            f = sample_formula(spec, rng)
            fast, slow = solve(f), solve_bruteforce(f)
            assert fast.label == slow.label, f"disagree on {f.to_int_clauses()}"
            if fast.label == SAT:
                assert evaluate(f, fast.model) is True


def test_solve_agrees_with_bruteforce_on_retrofit_theories():
    # with-replacement draws that collapse into fact/rule theories —
    # the shape that historically stressed counter bookkeeping across
    # backtracking the hardest
    from nlsatgen.ruletaker import reindex_theory, sample_retrofit_theory

    checked = 0
    for seed in range(500):
        spec = SampleSpec(
            n=7 + seed % 4,
            p_int=1.0,
            p_neg=0.5,
            alpha_min=3,
            alpha_max=7,
            with_replacement=True,
            seed=seed,
        )
        rng = derive_rng("retrofit-sweep", seed)
        theory = sample_retrofit_theory(spec, rng)
        if theory is None:
            continue
        for candidate in (theory.formula(),):
            fast, slow = solve(candidate), solve_bruteforce(candidate)
            assert fast.label == slow.label, candidate.to_int_clauses()
            if fast.model is not None:
                assert evaluate(candidate, fast.model) is True
        try:
            renamed, _ = reindex_theory(theory)
        except ValueError:
            continue  # a variable never mentioned; renaming undefined
        f2 = renamed.formula()
        assert solve(f2).label == solve_bruteforce(f2).label
        checked += 1
    assert checked > 100


def test_unsat_cores_with_deep_backtracking():
    # pigeonhole-flavored 3-SAT: every assignment falsified somewhere,
    # forcing many conflicts and full trail unwinding
    rng = random.Random(99)
    for _ in range(40):
        n = rng.randint(4, 9)
        clauses = set()
        while True:
            width = rng.randint(2, min(3, n))
            variables = sorted(rng.sample(range(1, n + 1), width))
            clauses.add(tuple(v if rng.random() < 0.5 else -v for v in variables))
            if len(clauses) >= 6 * n:
                break
        f = CnfFormula.from_ints(n, sorted(clauses))
        assert solve(f).label == solve_bruteforce(f).label


# ---------------------------------------------------------------- external solver


def _script(tmp_path, name, body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + body + "\n")
    path.chmod(path.stat().st_mode | stat.S_IXUSR)
    return str(path)


def test_external_solver_reads_status_lines(tmp_path):
    f = CnfFormula.from_ints(2, [(1, -2)])
    sat_cmd = _script(tmp_path, "sat.sh", 'test -f "$1" && echo "s SATISFIABLE"')
    assert solve_external(f, [sat_cmd]) == SAT
    unsat_cmd = _script(tmp_path, "unsat.sh", 'echo "s UNSATISFIABLE"')
    assert solve_external(f, [unsat_cmd]) == UNSAT


def test_external_solver_unsat_not_mistaken_for_sat(tmp_path):
    # the unsat keyword contains the sat keyword as a substring
    f = CnfFormula.from_ints(1, [(1,)])
    cmd = _script(tmp_path, "u.sh", 'printf "c preamble\\ns UNSATISFIABLE\\n"')
    assert solve_external(f, [cmd]) == UNSAT


def test_external_solver_garbage_output_is_an_error(tmp_path):
    f = CnfFormula.from_ints(1, [(1,)])
    cmd = _script(tmp_path, "bad.sh", 'echo "hello world"')
    with pytest.raises(ExternalSolverError):
        solve_external(f, [cmd])


def test_external_solver_accepts_command_strings(tmp_path):
    f = CnfFormula.from_ints(1, [(1,)])
    cmd = _script(tmp_path, "sat2.sh", 'echo "s SATISFIABLE"')
    assert solve_external(f, cmd) == SAT
