"""Constructive search for solutions of ``y = a x + b`` inside PS(alpha).

The pipeline follows the rational-approximation argument: write the
equation as ``c y - d x = e`` over the integers, take convergents ``p/q`` of
``(d/c)**(1/alpha)``, and for ``x`` in a window ``(V, 2V]`` with
``V = q**((gamma - alpha - xi)/alpha)`` test whether
``{(q x)**alpha / c}`` lands in a target interval.  Hits give candidates
``(floor((q x)**alpha), floor((p x)**alpha))``.  The interval filter only
prioritises; every emitted pair is checked with the exact identity
``c Y - d X = e`` on certified floors.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import gmpy2

from .certreal import (
    START_PREC,
    AlphaSpec,
    PowerExpr,
    as_alpha,
    prec_cap,
    start_prec_for,
)
from .dioph import Convergent, iter_convergents
from .errors import (
    BudgetExceeded,
    EmptyInterval,
    InvalidParams,
    NoSolutionFound,
    NotSolvableInN,
    PrecisionOverflow,
)
from .pscore import floor_pow, rank, segment


def _q(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParams(f"not an exact rational: {x!r}") from exc
    return Fraction(x)


@dataclass(frozen=True)
class LinearEquation:
    """``y = a x + b`` with ``a = a1/a2``, ``b = b1/b2`` in lowest terms and
    the integer form ``c y - d x = e`` where ``c = a2 b2``, ``d = a1 b2``,
    ``e = a2 b1``."""

    a: Fraction
    b: Fraction
    c: int
    d: int
    e: int

    @property
    def solvable_in_n(self) -> bool:
        return self.e % math.gcd(self.c, self.d) == 0

    @property
    def lower_path(self) -> bool:
        """``0 <= b < a``, equivalently ``0 <= e < d``."""
        return 0 <= self.e < self.d

    def holds(self, x: int, y: int) -> bool:
        return self.c * y - self.d * x == self.e


def normalize(a, b) -> LinearEquation:
    a, b = _q(a), _q(b)
    if a <= 0 or a == 1:
        raise InvalidParams(f"need a > 0 and a != 1, got {a}")
    if b < 0:
        raise InvalidParams(f"need b >= 0, got {b}")
    a1, a2 = a.numerator, a.denominator
    b1, b2 = b.numerator, b.denominator
    return LinearEquation(a, b, a2 * b2, a1 * b2, a2 * b1)


@dataclass(frozen=True)
class BaseSolution:
    u: int
    v: int


def base_solution(eq: LinearEquation) -> BaseSolution:
    """``(u, v)`` with ``c u - d v = e`` and the smallest ``v >= 0`` (so ``v < c``)."""
    g, s, t = (int(v) for v in gmpy2.gcdext(eq.c, eq.d))
    if eq.e % g:
        raise NotSolvableInN(f"gcd({eq.c}, {eq.d}) = {g} does not divide {eq.e}")
    k = eq.e // g
    u0, v0 = s * k, -t * k
    step_u, step_v = eq.d // g, eq.c // g
    shift = v0 // step_v
    u, v = u0 - shift * step_u, v0 - shift * step_v
    assert eq.c * u - eq.d * v == eq.e and 0 <= v < eq.c
    return BaseSolution(u, v)


@dataclass(frozen=True)
class TargetInterval:
    epsilon: Fraction
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def max_epsilon(eq: LinearEquation) -> Fraction:
    """Supremum of the ``epsilon`` giving a non-empty target interval.

    Scaled by ``c d`` and shifted by ``d v``, the interval is
    ``[0, d) ∩ [e + c eps, e + c - c eps)``, which is non-empty exactly when
    ``eps < 1/2`` and ``eps < (d - e)/c``.
    """
    return min(Fraction(1, 2), Fraction(eq.d - eq.e, eq.c))


def target_interval(eq: LinearEquation, base: BaseSolution, epsilon) -> TargetInterval:
    """``[v/c, (v+1)/c) ∩ [(u+eps)/d, (u+1-eps)/d)``.

    Raises ``EmptyInterval`` unless ``0 < eps < 1 - e/d`` and ``eps`` is
    below ``max_epsilon(eq)``.
    """
    eps = _q(epsilon)
    if not eq.lower_path:
        raise EmptyInterval(f"need 0 <= e < d, got e={eq.e}, d={eq.d}")
    if not 0 < eps < 1 - Fraction(eq.e, eq.d):
        raise EmptyInterval(f"need 0 < epsilon < 1 - e/d = {1 - Fraction(eq.e, eq.d)}, got {eps}")
    if eps >= max_epsilon(eq):
        raise EmptyInterval(f"epsilon={eps} empties the interval; need epsilon < {max_epsilon(eq)}")
    c, d, u, v = eq.c, eq.d, base.u, base.v
    lo = max(Fraction(v, c), (u + eps) / d)
    hi = min(Fraction(v + 1, c), (u + 1 - eps) / d)
    if not 0 <= lo < hi <= 1:
        raise AssertionError(f"target interval [{lo}, {hi}) degenerate")
    return TargetInterval(eps, lo, hi)


@dataclass(frozen=True)
class SolutionPair:
    x: int
    y: int
    n_x: int
    n_y: int
    provenance: Tuple = ()

    def provenance_dict(self) -> dict:
        if self.provenance and self.provenance[0] == "convergent":
            _, p, q, x = self.provenance
            return {"kind": "convergent", "p": p, "q": q, "scan_x": x}
        return {"kind": "brute_force"}


@dataclass
class SearchParams:
    """Knobs for ``find_solutions``; ``None`` fields are resolved to defaults.

    Defaults: gamma from ``plan_gamma``, ``xi = (gamma - alpha)/100``,
    ``epsilon = min(1/10, (1 - e/d)/2, max_epsilon/2)``; the last term only
    binds for ``a < 1``.
    """

    gamma: Optional[Fraction] = None
    xi: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    s: Optional[Fraction] = None
    t: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    max_convergents: int = 200
    window_multiplier: Fraction = Fraction(1)
    max_window_points: int = 50_000
    time_budget: Optional[float] = 120.0
    limit: Optional[int] = None
    workers: int = 1


@dataclass
class ScanStats:
    window: Tuple[int, int] = (0, 0)
    truncated: bool = False
    in_filter: int = 0
    undecided: int = 0
    accepted: int = 0


def _alpha_upper(alpha: AlphaSpec) -> Fraction:
    return alpha.enclose(START_PREC).upper()


def plan_gamma(alpha, s=None, t=None, delta=None) -> Fraction:
    """gamma = 2 for 1 < alpha < 2; otherwise ``min(s + delta, floor(s) + 1, t)``.

    Without ``s, t, delta`` the range is built around alpha:
    ``t = floor(alpha) + 1``, ``delta = (t - alpha)/2`` and
    ``s = alpha - min(delta, alpha - floor(alpha))/2``, which keeps
    ``floor(s) < s < alpha < gamma < floor(s) + 1``.
    """
    alpha = as_alpha(alpha)
    fl = alpha.floor
    if s is not None and t is not None and _q(s) == 1 and _q(t) == 2:
        return Fraction(2)
    if fl == 1 and s is None:
        return Fraction(2)
    if s is None or t is None or delta is None:
        if fl < 2 and s is None:
            return Fraction(2)
        a = _alpha_upper(alpha)
        t = Fraction(fl + 1) if t is None else _q(t)
        delta = (t - a) / 2 if delta is None else _q(delta)
        s = a - min(delta, a - fl) / 2 if s is None else _q(s)
    s, t, delta = _q(s), _q(t), _q(delta)
    if not 2 < s < t or delta <= 0:
        raise InvalidParams(f"need 2 < s < t and delta > 0, got s={s}, t={t}, delta={delta}")
    return min(s + delta, Fraction(math.floor(s) + 1), t)


@dataclass(frozen=True)
class ResolvedParams:
    gamma: Fraction
    xi: Fraction
    epsilon: Fraction
    window_exponent: float
    window_multiplier: Fraction
    max_window_points: int

    def as_record(self) -> dict:
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, Fraction):
                out[key] = f"{value.numerator}/{value.denominator}"
        return out


def resolve_params(eq: LinearEquation, alpha: AlphaSpec, params: SearchParams) -> ResolvedParams:
    gamma = _q(params.gamma) if params.gamma is not None else plan_gamma(alpha, params.s, params.t, params.delta)
    a_hi = _alpha_upper(alpha)
    a_lo = alpha.enclose(START_PREC).lower()
    if not gamma > a_hi or not gamma - a_lo < 1:
        raise InvalidParams(f"need 0 < gamma - alpha < 1, got gamma={gamma}, alpha={alpha}")
    xi = _q(params.xi) if params.xi is not None else (gamma - a_hi) / 100
    if xi <= 0 or gamma - a_hi - xi <= 0:
        raise InvalidParams(f"xi={xi} must satisfy 0 < xi < gamma - alpha")
    room = 1 - Fraction(eq.e, eq.d)
    eps = _q(params.epsilon) if params.epsilon is not None else min(Fraction(1, 10), room / 2, max_epsilon(eq) / 2)
    exponent = float((gamma - a_hi - xi) / a_lo)
    w = _q(params.window_multiplier)
    if w <= 0:
        raise InvalidParams("window multiplier must be positive")
    return ResolvedParams(gamma, xi, eps, exponent, w, params.max_window_points)


def window_bounds(q: int, exponent: float, multiplier: Fraction) -> Tuple[int, int]:
    """Integers in ``(V, (1 + w) V]`` with ``V = q**exponent``."""
    log_v = exponent * math.log(q)
    if log_v > 700:
        raise InvalidParams("window beyond double range")
    v = math.exp(log_v)
    return math.floor(v) + 1, math.floor((1 + float(multiplier)) * v)


def compare_pow(n: int, alpha: AlphaSpec, t: Fraction) -> Optional[int]:
    """Sign of ``n**alpha - t`` (certified), or None if undecided at the cap."""
    if alpha.is_rational:
        r, s = alpha.ratio.numerator, alpha.ratio.denominator
        lhs = gmpy2.mpz(n) ** r * gmpy2.mpz(t.denominator) ** s
        rhs = gmpy2.mpz(t.numerator) ** s
        return (lhs > rhs) - (lhs < rhs)
    prec = start_prec_for(max(1, abs(t.numerator).bit_length() - t.denominator.bit_length()))
    cap = prec_cap()
    expr = PowerExpr(n, alpha)
    while prec <= cap:
        enc = expr.enclose(prec)
        if enc.lower() > t:
            return 1
        if enc.upper() < t:
            return -1
        prec *= 2
    return None


def in_filter(n: int, X: int, alpha: AlphaSpec, c: int, interval: TargetInterval) -> Optional[bool]:
    """Whether ``{n**alpha / c}`` lies in ``[lo, hi)``, given ``X = floor(n**alpha)``.

    ``{n^alpha/c} = ((X mod c) + {n^alpha})/c``, so the test reduces to
    ``X + c lo - r <= n^alpha < X + c hi - r`` with ``r = X mod c``.
    """
    r = X % c
    low = X + c * interval.lo - r
    high = X + c * interval.hi - r
    lower_ok = True if low <= X else compare_pow(n, alpha, low)
    if lower_ok is not None and lower_ok is not True:
        lower_ok = lower_ok >= 0
    if lower_ok is False:
        return False
    upper_ok = False if high <= X else None
    if high >= X + 1:
        upper_ok = True
    elif high > X:
        sign = compare_pow(n, alpha, high)
        upper_ok = None if sign is None else sign < 0
    if upper_ok is False:
        return False
    if lower_ok is None or upper_ok is None:
        return None
    return True


def _scan_block(args) -> Tuple[List[SolutionPair], ScanStats]:
    eq, alpha, p, q, interval, x_lo, x_hi = args
    stats = ScanStats(window=(x_lo, x_hi))
    out = []
    for x in range(x_lo, x_hi + 1):
        n_x = q * x
        X = floor_pow(n_x, alpha)
        verdict = in_filter(n_x, X, alpha, eq.c, interval)
        if verdict is False:
            continue
        stats.in_filter += 1
        if verdict is None:
            stats.undecided += 1
        n_y = p * x
        Y = floor_pow(n_y, alpha)
        if eq.holds(X, Y):
            stats.accepted += 1
            out.append(SolutionPair(X, Y, n_x, n_y, ("convergent", p, q, x)))
    return out, stats


def scan_window(
    eq: LinearEquation,
    alpha,
    conv: Convergent,
    interval: TargetInterval,
    resolved: ResolvedParams,
    workers: int = 1,
) -> Tuple[List[SolutionPair], ScanStats]:
    """Scan ``x`` in the window of ``conv`` and return exactly verified pairs.

    Pairs come back sorted by ``x``; the block split used for
    ``workers > 1`` does not change the result.
    """
    alpha = as_alpha(alpha)
    if conv.p <= 0 or conv.p == conv.q:
        raise InvalidParams(f"convergent {conv.p}/{conv.q} needs p > 0 and p != q")
    x_lo, x_hi = window_bounds(conv.q, resolved.window_exponent, resolved.window_multiplier)
    truncated = x_hi - x_lo + 1 > resolved.max_window_points
    if truncated:
        x_hi = x_lo + resolved.max_window_points - 1
    if x_hi < x_lo:
        return [], ScanStats(window=(x_lo, x_hi))
    if workers <= 1 or x_hi - x_lo < 256:
        pairs, stats = _scan_block((eq, alpha, conv.p, conv.q, interval, x_lo, x_hi))
    else:
        step = -(-(x_hi - x_lo + 1) // workers)
        jobs = [
            (eq, alpha, conv.p, conv.q, interval, b, min(b + step - 1, x_hi))
            for b in range(x_lo, x_hi + 1, step)
        ]
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_scan_block, jobs))
        pairs = sorted({pr for block, _ in results for pr in block}, key=lambda pr: (pr.x, pr.y))
        stats = ScanStats(window=(x_lo, x_hi))
        for _, st in results:
            stats.in_filter += st.in_filter
            stats.undecided += st.undecided
            stats.accepted += st.accepted
    stats.window = (x_lo, x_hi)
    stats.truncated = truncated
    return pairs, stats


def filter_fraction(eq, alpha, conv: Convergent, interval: TargetInterval, resolved: ResolvedParams):
    """``|B ∩ window| / V`` next to ``diam(I)`` for one convergent's window."""
    alpha = as_alpha(alpha)
    x_lo, x_hi = window_bounds(conv.q, resolved.window_exponent, resolved.window_multiplier)
    hits = 0
    for x in range(x_lo, x_hi + 1):
        n = conv.q * x
        if in_filter(n, floor_pow(n, alpha), alpha, eq.c, interval) is not False:
            hits += 1
    v = math.exp(resolved.window_exponent * math.log(conv.q))
    return hits / (float(resolved.window_multiplier) * v), float(interval.length)


@dataclass
class SearchReport:
    equation: dict
    alpha: str
    params: dict
    convergents_tried: int = 0
    largest_q: int = 0
    candidates: int = 0
    undecided_filter: int = 0
    accepted: int = 0
    pairs: int = 0
    truncated_windows: int = 0
    outcome: str = "running"
    elapsed: float = 0.0
    stopped_by: str = ""
    notes: List[str] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return self.outcome == "exhausted"


class SolutionStream:
    """Iterable of verified pairs; ``report`` is filled in as it runs.

    If the budget runs out before any pair is found, iteration ends by
    raising ``NoSolutionFound`` carrying the report.
    """

    def __init__(self, eq: LinearEquation, alpha: AlphaSpec, params: SearchParams):
        self.eq = eq
        self.alpha = alpha
        self.params = params
        self.base = base_solution(eq)
        self.resolved = resolve_params(eq, alpha, params)
        self.interval = target_interval(eq, self.base, self.resolved.epsilon)
        self.report = SearchReport(
            equation={"a": str(eq.a), "b": str(eq.b), "c": eq.c, "d": eq.d, "e": eq.e,
                      "u": self.base.u, "v": self.base.v},
            alpha=str(alpha),
            params={
                **self.resolved.as_record(),
                "interval": [str(self.interval.lo), str(self.interval.hi)],
                "max_convergents": params.max_convergents,
                "time_budget": params.time_budget,
                "limit": params.limit,
                "prec_cap": prec_cap(),
            },
        )

    def __iter__(self) -> Iterator[SolutionPair]:
        report, params = self.report, self.params
        start = time.monotonic()
        seen = set()
        target = Fraction(self.eq.d, self.eq.c)
        convs = iter_convergents(target, self.alpha)
        try:
            while True:
                if report.convergents_tried >= params.max_convergents:
                    report.stopped_by = "max_convergents"
                    break
                if params.time_budget is not None and time.monotonic() - start > params.time_budget:
                    report.stopped_by = "time_budget"
                    break
                try:
                    conv = next(convs)
                except PrecisionOverflow as exc:
                    report.stopped_by = "precision_cap"
                    report.notes.append(str(exc))
                    if not seen:
                        report.outcome = "precision_overflow"
                        raise
                    break
                report.convergents_tried += 1
                report.largest_q = conv.q
                if conv.p <= 0 or conv.p == conv.q:
                    continue
                pairs, stats = scan_window(
                    self.eq, self.alpha, conv, self.interval, self.resolved, params.workers
                )
                report.candidates += stats.in_filter
                report.undecided_filter += stats.undecided
                report.accepted += stats.accepted
                report.truncated_windows += stats.truncated
                for pair in pairs:
                    if (pair.x, pair.y) in seen:
                        continue
                    seen.add((pair.x, pair.y))
                    report.pairs += 1
                    yield pair
                    if params.limit is not None and report.pairs >= params.limit:
                        report.outcome = "limit"
                        return
            report.outcome = "exhausted"
        finally:
            report.elapsed = time.monotonic() - start
        if not seen:
            raise NoSolutionFound(
                f"no verified pair after {report.convergents_tried} convergents "
                f"(largest q = {report.largest_q}); budget report, not a nonexistence claim",
                report=report,
            )


def find_solutions(a, b, alpha, params: Optional[SearchParams] = None) -> SolutionStream:
    """Stream exactly verified solutions of ``y = a x + b`` in PS(alpha)^2.

    Needs ``0 <= b < a`` and solvability in the positive integers; other
    inputs should go through ``brute_force_solutions``.
    """
    params = params or SearchParams()
    alpha = as_alpha(alpha)
    eq = normalize(a, b)
    if not eq.solvable_in_n:
        raise NotSolvableInN(f"y = {eq.a} x + {eq.b} has no solutions in N")
    if not eq.lower_path:
        raise InvalidParams("the constructive search needs 0 <= b < a; use brute_force_solutions")
    return SolutionStream(eq, alpha, params)


def brute_force_solutions(a, b, alpha, x_max: int, max_terms: int = 5_000_000) -> List[SolutionPair]:
    """All pairs with ``x <= x_max`` by enumerating PS(alpha) up to ``a x_max + b``."""
    alpha = as_alpha(alpha)
    a, b = _q(a), _q(b)
    if a <= 0 or a == 1:
        raise InvalidParams(f"need a > 0 and a != 1, got {a}")
    if x_max < 1:
        raise InvalidParams("x_max must be positive")
    y_max = math.floor(a * x_max + b)
    if y_max < 1:
        return []
    count = rank(alpha, y_max)
    if count > max_terms:
        raise BudgetExceeded(f"{count} terms needed, budget is {max_terms}")
    terms = segment(alpha, 1, count)
    index = {t.value: t.n for t in terms}
    out = []
    for t in terms:
        if t.value > x_max:
            break
        y = a * t.value + b
        if y.denominator == 1 and int(y) in index:
            out.append(SolutionPair(t.value, int(y), t.n, index[int(y)], ("brute_force",)))
    return out


@dataclass(frozen=True)
class ThreeTermReduction:
    """``a x + b y = c z`` with ``y = 1`` becomes ``z = (a/c) x + b/c``."""

    a: int
    b: int
    c: int
    equation: LinearEquation
    y: int = 1

    def lift(self, pair: SolutionPair) -> Tuple[int, int, int]:
        x, z = pair.x, pair.y
        assert self.a * x + self.b * self.y == self.c * z
        return x, self.y, z


def reduce_three_term(a: int, b: int, c: int) -> ThreeTermReduction:
    if min(a, b, c) < 1:
        raise InvalidParams("a, b, c must be positive integers")
    if b % math.gcd(a, c):
        raise InvalidParams(f"gcd({a}, {c}) must divide {b}")
    if not a > b:
        raise InvalidParams(f"need a > b, got a={a}, b={b}")
    if a == c:
        raise InvalidParams("a = c gives slope 1")
    return ThreeTermReduction(a, b, c, normalize(Fraction(a, c), Fraction(b, c)))
