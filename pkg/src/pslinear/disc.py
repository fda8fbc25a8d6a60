"""Discrepancy of finite sequences mod 1 and the exponent bookkeeping behind
the equidistribution estimates used by the solver.

Bounds whose implied constants are unknown (the balanced exponential-sum shape, van der
Corput) are evaluated with constant 1 and are only meaningful for trend
comparisons; they are never certified upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from .certreal import CertifiedReal, PowerExpr, as_alpha
from .errors import InvalidParams

Point = Union[Fraction, int, float, CertifiedReal]


@dataclass
class DiscrepancyReport:
    n_points: int
    exact_d: Union[Fraction, CertifiedReal]
    et_bounds: List[Tuple[int, float]] = field(default_factory=list)
    notes: dict = field(default_factory=dict)


def _check_unit(points):
    if not points:
        raise InvalidParams("discrepancy of an empty sequence")


def exact_discrepancy(points: Sequence[Point]) -> Union[Fraction, CertifiedReal]:
    """Extreme discrepancy over half-open intervals ``[a, b)`` in ``[0, 1)``.

    With ``x_(1) <= ... <= x_(N)`` sorted,
    ``D = 1/N + max_i (x_(i) - i/N) - min_i (x_(i) - i/N)``.

    Exact inputs (ints, Fractions, floats taken at their exact binary value)
    give an exact Fraction.  ``CertifiedReal`` inputs give an enclosure,
    built from enclosures of the order statistics (the i-th smallest lower
    end and the i-th smallest upper end), so overlapping points need no
    separation.
    """
    _check_unit(points)
    n = len(points)
    if any(isinstance(x, CertifiedReal) for x in points):
        return _certified_discrepancy(points)
    xs = sorted(Fraction(x) for x in points)
    if xs[0] < 0 or xs[-1] >= 1:
        raise InvalidParams("points must lie in [0, 1)")
    # scale by N so the offsets x_(i) - i/N become N*x_(i) - i
    shifted = [n * x - i for i, x in enumerate(xs, start=1)]
    return (1 + max(shifted) - min(shifted)) / n


def _certified_discrepancy(points) -> CertifiedReal:
    balls = [p if isinstance(p, CertifiedReal) else CertifiedReal.exact(Fraction(p), 64) for p in points]
    n = len(balls)
    los = sorted(b.lower() for b in balls)
    his = sorted(b.upper() for b in balls)
    if los[0] < 0 or his[-1] > 1:
        raise InvalidParams("points must lie in [0, 1)")
    off_lo = [n * x - i for i, x in enumerate(los, start=1)]
    off_hi = [n * x - i for i, x in enumerate(his, start=1)]
    d_lo = (1 + max(off_lo) - min(off_hi)) / n
    d_hi = (1 + max(off_hi) - min(off_lo)) / n
    prec = max(b.prec for b in balls)
    return CertifiedReal.from_bounds(max(d_lo, Fraction(1, n)), min(d_hi, Fraction(1)), prec)


def discrepancy_bruteforce(points: Sequence[Union[Fraction, int, float]]):
    """Supremum of ``|#{x in [a,b)}/N - (b - a)|`` over all critical intervals.

    Independent of the closed formula: the count is piecewise constant, so
    the supremum is approached with ``a`` at a point (closed, for excess) or
    just past a point / at 0 (for deficit), and ``b`` just past a point
    (excess) or at a point / at 1 (deficit).  Exact for rational input.
    """
    _check_unit(points)
    n = len(points)
    exact = all(isinstance(x, (int, Fraction)) for x in points)
    if exact:
        fr = [Fraction(x) for x in points]
        scale = math.lcm(*(x.denominator for x in fr))
        vals = sorted(int(x * scale) for x in fr)
    else:
        scale = 1
        vals = sorted(float(x) for x in points)
    distinct = sorted(set(vals))
    counts = {v: 0 for v in distinct}
    for v in vals:
        counts[v] += 1
    k = len(distinct)
    # prefix[j] = number of points with value < distinct[j]
    prefix = [0] * (k + 1)
    for j, v in enumerate(distinct):
        prefix[j + 1] = prefix[j] + counts[v]
    one = scale

    best = None

    def consider(count, length):
        # value scaled by N*scale: count*scale - N*length
        nonlocal best
        v = abs(count * one - n * length)
        if best is None or v > best:
            best = v

    # excess: [v_i, v_j + 0), i <= j
    for i in range(k):
        for j in range(i, k):
            consider(prefix[j + 1] - prefix[i], distinct[j] - distinct[i])
    # deficit: a in {0 (closed)} U {v_i + 0}, b in {v_j (open)} U {1}
    lefts = [(0, 0)] + [(distinct[i], prefix[i + 1]) for i in range(k)]
    rights = [(distinct[j], prefix[j]) for j in range(k)] + [(one, n)]
    for a, below_a in lefts:
        for b, below_b in rights:
            if b > a:
                consider(below_b - below_a, b - a)
    if exact:
        return Fraction(best, n * scale)
    return best / n


def erdos_turan_bound(points: Sequence[Point], m: int) -> float:
    """``6/(m+1) + (2/pi) * sum_{h<=m} (1/h - 1/(m+1)) |(1/N) sum_n e(h x_n)|``.

    Evaluated in double precision; an upper bound on the discrepancy, not a
    certified one.
    """
    _check_unit(points)
    if m < 1:
        raise InvalidParams("m must be positive")
    x = np.array([float(p.mid) if isinstance(p, CertifiedReal) else float(Fraction(p) % 1) for p in points])
    x = np.mod(x, 1.0)
    h = np.arange(1, m + 1)
    total = 0.0
    # fixed block order keeps the reduction deterministic
    for start in range(0, m, 16):
        hs = h[start : start + 16]
        sums = np.exp(2j * np.pi * np.outer(hs, x)).mean(axis=1)
        total += float(np.sum((1.0 / hs - 1.0 / (m + 1)) * np.abs(sums)))
    return 6.0 / (m + 1) + (2.0 / math.pi) * total


def discrepancy_report(points: Sequence[Point], ms: Sequence[int] = (1, 10, 100)) -> DiscrepancyReport:
    d = exact_discrepancy(points)
    return DiscrepancyReport(
        n_points=len(points),
        exact_d=d,
        et_bounds=[(m, erdos_turan_bound(points, m)) for m in ms],
    )


# --------------------------------------------------------------------------
# exponent bookkeeping


def _exact(x) -> Fraction:
    # floats are read as the decimal they print as, like exponent literals
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def bracket_holds(alpha, gamma, k: int) -> bool:
    """``gamma (k-3)/(gamma+k-3) < alpha < gamma k/(k+gamma)``, exactly."""
    a, g = _exact(alpha), _exact(gamma)
    return g * (k - 3) / (g + k - 3) < a < g * k / (k + g)


def _check_alpha_gamma(a: Fraction, g: Fraction):
    if not a > 1:
        raise InvalidParams(f"alpha must exceed 1, got {a}")
    if not 0 < g - a < 1:
        raise InvalidParams(f"need 0 < gamma - alpha < 1, got alpha={a}, gamma={g}")


def choose_k(alpha, gamma) -> int:
    """Smallest ``k >= 4`` with the bracket inequality.

    The bracket is equivalent to ``T < k < T + 3`` with
    ``T = alpha*gamma/(gamma - alpha)``.
    """
    a, g = _exact(alpha), _exact(gamma)
    _check_alpha_gamma(a, g)
    t = a * g / (g - a)
    k = max(4, math.floor(t) + 1)
    if not bracket_holds(a, g, k):
        raise AssertionError(f"no admissible k found for alpha={a}, gamma={g}")
    return k


@dataclass(frozen=True)
class BoundExponents:
    k: int
    psi1: Fraction
    psi2: Fraction
    psi: Fraction

    @property
    def negative(self) -> bool:
        return self.psi < 0


def compute_exponents(alpha, gamma, xi, k: int) -> BoundExponents:
    """``psi1 = alpha + w (alpha - k)/alpha`` and
    ``psi2 = -alpha/(2^k-2) + (w/alpha)((k - alpha)/(2^k-2) - 4/2^k)`` with
    ``w = gamma - alpha - xi``; ``psi = max(psi1/(2^k-1), psi2)``."""
    a, g, x = _exact(alpha), _exact(gamma), _exact(xi)
    _check_alpha_gamma(a, g)
    if k < 4:
        raise InvalidParams(f"k must be at least 4, got {k}")
    if not x > 0:
        raise InvalidParams("xi must be positive")
    w = g - a - x
    if w <= 0:
        raise InvalidParams(f"gamma - alpha - xi must stay positive, got {w}")
    if not bracket_holds(a, g, k):
        raise InvalidParams(f"k={k} violates the bracket for alpha={a}, gamma={g}")
    two_k = 2**k
    psi1 = a + w * (a - k) / a
    psi2 = -a / (two_k - 2) + (w / a) * (Fraction(k) - a) / (two_k - 2) - (w / a) * Fraction(4, two_k)
    return BoundExponents(k, psi1, psi2, max(psi1 / (two_k - 1), psi2))


def xi_threshold(alpha, gamma, k: int = None, iterations: int = 60) -> Fraction:
    """Largest ``xi`` in ``(0, gamma - alpha)`` below which ``psi < 0``, by bisection.

    ``psi1`` increases with ``xi`` and ``psi2`` is monotone in ``xi``, so the
    set where ``psi < 0`` is an initial segment whenever it is non-empty.
    """
    a, g = _exact(alpha), _exact(gamma)
    if k is None:
        k = choose_k(a, g)
    width = g - a
    lo, hi = Fraction(0), width

    def neg(xi):
        return compute_exponents(a, g, xi, k).negative

    probe = width / 2**iterations
    if not neg(probe):
        return Fraction(0)
    lo = probe
    if neg(hi - probe):
        return hi
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if neg(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class VdcBound:
    value: float
    first: float
    second: float
    m: int


def lemma31_bound(eta: float, V: float, alpha, k: int) -> VdcBound:
    """Shape ``(eta V^(alpha-k))^(1/(2^k-1)) + eta^(-1/(2^k-2)) V^((k-alpha)/(2^k-2) - 2^(2-k))``
    with implied constant 1, plus the ``m`` used to balance the two terms."""
    alpha = float(alpha)
    if k < 4:
        raise InvalidParams(f"k must be at least 4, got {k}")
    if eta <= 0 or V < 1:
        raise InvalidParams("need eta > 0 and V >= 1")
    # log form keeps eta*V^(alpha-k) representable for large V
    log_t = math.log(eta) + (alpha - k) * math.log(V)
    if log_t >= 0:
        raise InvalidParams("need eta * V**(alpha - k) < 1")
    first = math.exp(log_t / (2**k - 1))
    second = math.exp(-math.log(eta) / (2**k - 2) + ((k - alpha) / (2**k - 2) - 2.0 ** (2 - k)) * math.log(V))
    m = math.ceil(math.exp(-log_t / (2**k - 1)))
    return VdcBound(first + second, first, second, m)


def van_der_corput_shape(length: float, lam: float, k: int) -> float:
    """``length * lam^(1/(2^k-2)) + length^(1 - 2^(2-k)) * lam^(-1/(2^k-2))``, constant 1."""
    if k < 4 or length < 1 or lam <= 0:
        raise InvalidParams("need k >= 4, length >= 1, lam > 0")
    e = 1.0 / (2**k - 2)
    return length * lam**e + length ** (1 - 2.0 ** (2 - k)) * lam ** (-e)


def power_sequence_fracs(coef, alpha, n_max: int, n_min: int = 1) -> List[CertifiedReal]:
    """Certified fractional parts of ``coef * n**alpha`` for ``n_min <= n <= n_max``."""
    alpha = as_alpha(alpha)
    coef = _exact(coef)
    if coef <= 0:
        raise InvalidParams("coefficient must be positive")
    return [PowerExpr(n, alpha, coef).frac() for n in range(n_min, n_max + 1)]
