"""Random k-SAT generation controlled by the clause-to-variable ratio.

Random formulas flip from almost-surely satisfiable to almost-surely
unsatisfiable as alpha = m/n crosses a critical value; problems drawn
near the crossing are empirically the hardest.  This module samples
clauses and formulas, estimates the satisfiable fraction by Monte
Carlo, locates the crossing by bisection, and draws formulas with one
of three band strategies:

* hard    alpha inside the calibrated critical band (where the
          satisfiable fraction is within 0.5 +/- 0.1), with a small
          diversity fraction drawn from the band widened by +/- 1.0
* naive   alpha uniform over a fixed wide band, default [0.5, 8.0]
* biased  alpha far from the band: [0.5, lo/2] union [2*hi, 8.0]

Ratios are kept as exact fractions end to end; only Monte Carlo
estimates are floats.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .cnf import Clause, CnfFormula, Literal
from .rng import derive_rng
from .solver import DEFAULT_MAX_DECISIONS, BudgetExhaustedError, solve

HARD = "hard"
NAIVE = "naive"
BIASED = "biased"
STRATEGIES = (HARD, NAIVE, BIASED)

NAIVE_BAND = (Fraction(1, 2), Fraction(8))
DIVERSITY_FRACTION = 0.1
DIVERSITY_WIDEN = Fraction(1)

_WILSON_Z = 1.959963984540054  # two-sided 95%


class CalibrationError(RuntimeError):
    """Calibration could not locate or trust the critical point."""


@dataclass(frozen=True)
class SampleSpec:
    """Parameters of the random clause distribution.

    p_int is the probability that a clause has three literals (else
    two); p_neg is the per-literal negation probability.  Variables are
    drawn without replacement unless with_replacement is set, in which
    case clauses may repeat a variable and are flagged raw.
    """

    n: int
    p_int: float = 1.0
    p_neg: float = 0.5
    alpha_min: Fraction = Fraction(1)
    alpha_max: Fraction = Fraction(6)
    with_replacement: bool = False
    strategy: str = HARD
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha_min", Fraction(self.alpha_min))
        object.__setattr__(self, "alpha_max", Fraction(self.alpha_max))
        if self.n < 2:
            raise ValueError("need at least 2 variables")
        if self.p_int > 0 and self.n < 3 and not self.with_replacement:
            raise ValueError("three-literal clauses need n >= 3 without replacement")
        for name in ("p_int", "p_neg"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if not 0 <= self.alpha_min <= self.alpha_max:
            raise ValueError(f"bad alpha band [{self.alpha_min}, {self.alpha_max}]")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")


def sample_clause(spec: SampleSpec, rng) -> Clause:
    """Draw one clause: width, then variables, then polarities."""
    width = 3 if rng.random() < spec.p_int else 2
    if spec.with_replacement:
        variables = [rng.randrange(1, spec.n + 1) for _ in range(width)]
        lits = tuple(Literal(v, rng.random() < spec.p_neg) for v in variables)
        return Clause(lits, raw=True)
    variables = sorted(rng.sample(range(1, spec.n + 1), width))
    lits = tuple(Literal(v, rng.random() < spec.p_neg) for v in variables)
    return Clause(lits)


def admissible_m(n: int, alpha_min: Fraction, alpha_max: Fraction) -> range:
    """Integer clause counts m with alpha_min <= m/n <= alpha_max."""
    lo = math.ceil(Fraction(alpha_min) * n)
    hi = math.floor(Fraction(alpha_max) * n)
    return range(max(lo, 0), hi + 1)


def sample_formula(spec: SampleSpec, rng) -> CnfFormula:
    """Draw m uniformly from the admissible band, then m clauses.

    The formula is returned as sampled (clauses drawn with replacement
    stay raw) so retrofitting can inspect repeated variables.
    """
    ms = admissible_m(spec.n, spec.alpha_min, spec.alpha_max)
    if len(ms) == 0:
        raise ValueError(
            f"no integer m with {spec.alpha_min} <= m/{spec.n} <= {spec.alpha_max}"
        )
    m = ms[rng.randrange(len(ms))]
    return CnfFormula(spec.n, tuple(sample_clause(spec, rng) for _ in range(m)))


def wilson_halfwidth(p_hat: float, trials: int, z: float = _WILSON_Z) -> float:
    """Half-width of the Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    z2 = z * z
    return (z / (1.0 + z2 / trials)) * math.sqrt(
        p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials)
    )


@dataclass(frozen=True)
class PsatEstimate:
    alpha: Fraction
    m: int
    p_hat: float
    halfwidth: float
    trials: int


def estimate_psat(
    n: int,
    p_int: float,
    p_neg: float,
    alpha,
    trials: int,
    seed: int = 0,
    max_decisions: int = DEFAULT_MAX_DECISIONS,
) -> PsatEstimate:
    """Monte Carlo estimate of the satisfiable fraction at one ratio.

    alpha is snapped to the nearest integer clause count m = round(alpha
    * n); the estimate reports the exact ratio m/n actually sampled.  A
    trial whose solve exhausts the decision budget is retried with a
    fresh formula, a few times, before giving up.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    alpha = Fraction(alpha)
    m = round(alpha * n)
    exact = Fraction(m, n)
    spec = SampleSpec(
        n=n, p_int=p_int, p_neg=p_neg, alpha_min=exact, alpha_max=exact
    )
    rng = derive_rng("psat", seed, n, float(p_int), float(p_neg), m)
    sat_hits = 0
    for _ in range(trials):
        for attempt in range(5):
            f = CnfFormula(n, tuple(sample_clause(spec, rng) for _ in range(m)))
            try:
                result = solve(f, max_decisions)
            except BudgetExhaustedError:
                if attempt == 4:
                    raise
                continue
            sat_hits += result.label == "sat"
            break
    p_hat = sat_hits / trials
    return PsatEstimate(exact, m, p_hat, wilson_halfwidth(p_hat, trials), trials)


@dataclass(frozen=True)
class PhaseCurve:
    """Satisfiable-fraction estimates along increasing ratios."""

    n: int
    p_int: float
    p_neg: float
    alphas: tuple
    p_hats: tuple
    halfwidths: tuple
    trials: int

    def __post_init__(self):
        if list(self.alphas) != sorted(set(self.alphas)):
            raise ValueError("alphas must be strictly increasing")
        if not (len(self.alphas) == len(self.p_hats) == len(self.halfwidths)):
            raise ValueError("curve arrays must have equal length")


def estimate_curve(
    n: int,
    p_int: float,
    p_neg: float,
    alphas,
    trials: int,
    seed: int = 0,
    max_decisions: int = DEFAULT_MAX_DECISIONS,
) -> PhaseCurve:
    estimates = [
        estimate_psat(n, p_int, p_neg, a, trials, seed, max_decisions) for a in alphas
    ]
    return PhaseCurve(
        n,
        p_int,
        p_neg,
        tuple(e.alpha for e in estimates),
        tuple(e.p_hat for e in estimates),
        tuple(e.halfwidth for e in estimates),
        trials,
    )


def _key(n: int, p_int: float, p_neg: float) -> tuple:
    return (int(n), float(p_int), float(p_neg))


@dataclass
class CalibrationTable:
    """Measured phase-curve points and critical bands, persistable as text."""

    points: dict = field(default_factory=dict)  # key -> {alpha: (p_hat, trials)}
    bands: dict = field(default_factory=dict)   # key -> (alpha_lo, alpha_hi)

    VERSION = "nlsatgen-calibration v1"

    def add_point(self, n, p_int, p_neg, alpha: Fraction, p_hat: float, trials: int):
        self.points.setdefault(_key(n, p_int, p_neg), {})[Fraction(alpha)] = (
            float(p_hat),
            int(trials),
        )

    def set_band(self, n, p_int, p_neg, lo: Fraction, hi: Fraction):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError(f"band lower bound {lo} above upper bound {hi}")
        self.bands[_key(n, p_int, p_neg)] = (lo, hi)

    def band_for(self, n, p_int, p_neg) -> Optional[tuple]:
        return self.bands.get(_key(n, p_int, p_neg))

    def points_for(self, n, p_int, p_neg) -> list:
        entry = self.points.get(_key(n, p_int, p_neg), {})
        return [(a, ph, tr) for a, (ph, tr) in sorted(entry.items())]

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"# {self.VERSION}"]
        for key in sorted(self.points):
            n, p_int, p_neg = key
            for alpha, (p_hat, trials) in sorted(self.points[key].items()):
                lines.append(
                    f"point {n} {p_int!r} {p_neg!r} {alpha} {p_hat!r} {trials}"
                )
        for key in sorted(self.bands):
            n, p_int, p_neg = key
            lo, hi = self.bands[key]
            lines.append(f"band {n} {p_int!r} {p_neg!r} {lo} {hi}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "CalibrationTable":
        path = Path(path)
        table = cls()
        text = path.read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or lines[0] != f"# {cls.VERSION}":
            raise ValueError(f"{path}: not a {cls.VERSION} file")
        for line_no, line in enumerate(lines[1:], start=2):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "point" and len(parts) == 7:
                    table.add_point(
                        int(parts[1]), float(parts[2]), float(parts[3]),
                        Fraction(parts[4]), float(parts[5]), int(parts[6]),
                    )
                elif parts[0] == "band" and len(parts) == 6:
                    table.set_band(
                        int(parts[1]), float(parts[2]), float(parts[3]),
                        Fraction(parts[4]), Fraction(parts[5]),
                    )
                else:
                    raise ValueError(f"unrecognized record {parts[0]!r}")
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path} line {line_no}: {exc}") from None
        return table


def calibration_cache_path() -> Path:
    """Calibration file location; NLSAT_CACHE_DIR overrides the default."""
    root = os.environ.get("NLSAT_CACHE_DIR")
    base = Path(root) if root else Path.home() / ".cache" / "nlsatgen"
    return base / "calibration.txt"


@dataclass(frozen=True)
class CalibrationResult:
    n: int
    p_int: float
    p_neg: float
    alpha_c: Fraction
    band: tuple  # (alpha_lo, alpha_hi)
    points: tuple  # ((alpha, p_hat, trials), ...)
    trials_per_point: int


def calibrate_critical(
    n: int,
    p_int: float,
    p_neg: float,
    tolerance: float = 0.02,
    trials_per_point: int = 500,
    seed: int = 0,
    alpha_max: Fraction = Fraction(12),
    max_decisions: int = DEFAULT_MAX_DECISIONS,
) -> CalibrationResult:
    """Locate the ratio where half the sampled formulas are satisfiable.

    Bisects on the integer clause count (ratios move in steps of 1/n),
    reusing estimates, then finds the critical band as the outermost
    evaluated ratios whose estimate lies in [0.4, 0.6].  The crossing
    estimate must come within tolerance + its own confidence half-width
    of 0.5; estimates that break monotonicity by far more than their
    combined half-widths abort with advice to raise trials_per_point.
    """
    cache: dict = {}

    def est(m: int, trials: int = trials_per_point) -> PsatEstimate:
        got = cache.get(m)
        if got is None or got.trials < trials:
            got = estimate_psat(n, p_int, p_neg, Fraction(m, n), trials, seed, max_decisions)
            cache[m] = got
        return got

    def check_monotone(lo_e: PsatEstimate, hi_e: PsatEstimate) -> None:
        # p_sat should not rise with m; allow generous Monte Carlo slack
        slack = 2.0 * (lo_e.halfwidth + hi_e.halfwidth)
        if hi_e.p_hat > lo_e.p_hat + slack:
            raise CalibrationError(
                f"non-monotone estimates at n={n}: p({lo_e.alpha})={lo_e.p_hat:.3f} "
                f"vs p({hi_e.alpha})={hi_e.p_hat:.3f}; increase trials_per_point"
            )

    m_lo, m_hi = 1, math.floor(Fraction(alpha_max) * n)
    lo_e, hi_e = est(m_lo), est(m_hi)
    if lo_e.p_hat < 0.5:
        raise CalibrationError(
            f"p_sat({lo_e.alpha}) = {lo_e.p_hat:.3f} already below 0.5; family degenerate"
        )
    if hi_e.p_hat >= 0.5:
        raise CalibrationError(
            f"p_sat({hi_e.alpha}) = {hi_e.p_hat:.3f} still >= 0.5; raise alpha_max"
        )
    while m_hi - m_lo > 1:
        mid = (m_lo + m_hi) // 2
        mid_e = est(mid)
        check_monotone(est(m_lo), mid_e)
        check_monotone(mid_e, est(m_hi))
        if mid_e.p_hat >= 0.5:
            m_lo = mid
        else:
            m_hi = mid

    m_c = min(cache, key=lambda m: (abs(cache[m].p_hat - 0.5), m))
    best = est(m_c)
    if abs(best.p_hat - 0.5) > tolerance + best.halfwidth:
        best = est(m_c, trials_per_point * 4)  # one refinement pass
        if abs(best.p_hat - 0.5) > tolerance + best.halfwidth:
            raise CalibrationError(
                f"|p_sat - 0.5| = {abs(best.p_hat - 0.5):.3f} at alpha={best.alpha}; "
                "increase trials_per_point"
            )

    def bisect_crossing(threshold: float, lo: int, hi: int) -> None:
        """Evaluate points around the m where p_hat crosses threshold."""
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if est(mid).p_hat >= threshold:
                lo = mid
            else:
                hi = mid

    bisect_crossing(0.6, 1, m_c)                 # populate near the p=0.6 edge
    bisect_crossing(0.4, m_c, math.floor(Fraction(alpha_max) * n))

    in_band = [m for m, e in cache.items() if 0.4 <= e.p_hat <= 0.6]
    in_band.append(m_c)
    band = (Fraction(min(in_band), n), Fraction(max(in_band), n))

    points = tuple(
        (e.alpha, e.p_hat, e.trials) for _, e in sorted(cache.items())
    )
    return CalibrationResult(
        n, float(p_int), float(p_neg), best.alpha, band, points, trials_per_point
    )


def strategy_m_candidates(
    spec: SampleSpec,
    band: Optional[tuple],
    rng,
    diversity_fraction: float = DIVERSITY_FRACTION,
    widen: Fraction = DIVERSITY_WIDEN,
    naive_band: tuple = NAIVE_BAND,
) -> range:
    """Admissible clause counts for one draw under a sampling strategy.

    For the hard strategy this consumes one rng draw to decide whether
    the critical band or the widened diversity band applies.
    """
    if spec.strategy == NAIVE:
        ms = admissible_m(spec.n, naive_band[0], naive_band[1])
        if len(ms) == 0:
            raise ValueError(f"empty naive band {naive_band} at n={spec.n}")
        return ms
    if band is None:
        raise CalibrationError(
            f"no calibration for (n={spec.n}, p_int={spec.p_int}, p_neg={spec.p_neg}); "
            "run calibrate first"
        )
    lo, hi = Fraction(band[0]), Fraction(band[1])
    if spec.strategy == HARD:
        if rng.random() < diversity_fraction:
            lo = max(lo - widen, Fraction(1, spec.n))
            hi = hi + widen
        ms = admissible_m(spec.n, lo, hi)
        if len(ms) == 0:
            raise ValueError(f"empty hard band [{lo}, {hi}] at n={spec.n}")
        return ms
    # biased: far left and far right of the band, inside the naive limits
    left = admissible_m(spec.n, naive_band[0], lo / 2)
    right = admissible_m(spec.n, 2 * hi, naive_band[1])
    if len(left) == 0 and len(right) == 0:
        raise ValueError(
            f"biased strategy bands empty for band [{lo}, {hi}] at n={spec.n}"
        )
    if len(left) == 0:
        return right
    if len(right) == 0:
        return left
    return _RangeUnion(left, right)


class _RangeUnion:
    """Two disjoint ranges behaving like one indexable sequence."""

    def __init__(self, first: range, second: range):
        self.first, self.second = first, second

    def __len__(self) -> int:
        return len(self.first) + len(self.second)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += len(self)
        if i < len(self.first):
            return self.first[i]
        return self.second[i - len(self.first)]


def sample_with_strategy(
    spec: SampleSpec,
    band: Optional[tuple],
    rng,
    diversity_fraction: float = DIVERSITY_FRACTION,
    widen: Fraction = DIVERSITY_WIDEN,
    naive_band: tuple = NAIVE_BAND,
    max_decisions: int = DEFAULT_MAX_DECISIONS,
) -> tuple:
    """Draw one formula under spec.strategy and solve it.

    ``band`` is the calibrated critical band for (n, p_int, p_neg);
    the naive strategy ignores it.  Returns (formula, SolveResult).
    """
    ms = strategy_m_candidates(spec, band, rng, diversity_fraction, widen, naive_band)
    m = ms[rng.randrange(len(ms))]
    f = CnfFormula(spec.n, tuple(sample_clause(spec, rng) for _ in range(m)))
    return f, solve(f, max_decisions)
