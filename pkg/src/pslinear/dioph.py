"""Certified continued fractions of a**(1/alpha) and rational-approximation witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Tuple

from .certreal import (
    START_PREC,
    AlphaSpec,
    CertifiedReal,
    as_alpha,
    prec_cap,
)
from .errors import InvalidParams, NotMember, PrecisionOverflow
from .pscore import member


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    err_bound: CertifiedReal  # encloses |target - p/q|
    index: int
    exact: bool = False  # p/q equals the target
    exact_multiple: bool = False  # (p, q) = k * (exact numerator, denominator), k >= 2

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class WitnessQuery:
    a: Fraction
    alpha: AlphaSpec
    gamma: Fraction
    q_max: int

    def __post_init__(self):
        if self.gamma <= 1:
            raise InvalidParams(f"gamma must exceed 1, got {self.gamma}")
        if self.a <= 0 or self.a == 1:
            raise InvalidParams(f"base must be positive and != 1, got {self.a}")
        if self.q_max < 1:
            raise InvalidParams("q_max must be positive")

    @property
    def complete(self) -> bool:
        """Convergent-only search misses nothing when gamma >= 2."""
        return self.gamma >= 2


def _check_base(a) -> Fraction:
    a = Fraction(a)
    if a <= 0 or a == 1:
        raise InvalidParams(f"base must be positive and != 1, got {a}")
    return a


def root_enclosure(a: Fraction, alpha: AlphaSpec, prec: int) -> CertifiedReal:
    """Enclosure of ``a ** (1/alpha)``."""
    wp = prec + 16
    al = alpha.enclose(wp)
    return (CertifiedReal.exact(a, wp).log() / CertifiedReal(al.lo, al.hi, wp)).exp()


def _common_quotients(lo: Fraction, hi: Fraction) -> List[int]:
    """Partial quotients shared by every real in [lo, hi]."""
    ln, ld = lo.numerator, lo.denominator
    hn, hd = hi.numerator, hi.denominator
    out = []
    while True:
        a = ln // ld
        if hn // hd != a:
            return out
        out.append(a)
        ln, hn = ln - a * ld, hn - a * hd
        if ln == 0 or hn == 0:
            return out
        # x -> 1/(x - a) reverses the order of the endpoints
        ln, ld, hn, hd = hd, hn, ld, ln


def _rational_quotients(x: Fraction) -> List[int]:
    n, d = x.numerator, x.denominator
    out = []
    while d:
        a = n // d
        out.append(a)
        n, d = d, n - a * d
    return out


def _continuants(quotients):
    p0, q0, p1, q1 = 1, 0, quotients[0], 1
    yield p1, q1
    for a in quotients[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def iter_convergents(a, alpha) -> Iterator[Convergent]:
    """Continued-fraction convergents of ``a ** (1/alpha)``, lazily.

    When the target is a provable rational the finite expansion is emitted
    with zero error and then continues with exact multiples ``k*p/k*q``.
    A convergent is emitted only once the two quotients after it are
    certified, so its error enclosure stays well away from zero.
    """
    a = _check_base(a)
    alpha = as_alpha(alpha)
    exact = alpha.exact_root(a)
    if exact is not None:
        yield from _exact_convergents(exact)
        return
    prec = START_PREC
    cap = prec_cap()
    known: List[int] = []
    emitted = 0
    while True:
        enc = root_enclosure(a, alpha, prec)
        qs = _common_quotients(enc.lower(), enc.upper())
        if qs[: len(known)] != known[: len(qs)]:
            raise AssertionError("certified partial quotients changed under refinement")
        if len(qs) > len(known):
            known = qs
        ready = len(known) - 2
        if ready > emitted:
            for i, (p, q) in enumerate(_continuants(known[:ready])):
                if i < emitted:
                    continue
                yield Convergent(p, q, abs(enc - Fraction(p, q)), i)
            emitted = ready
        prec *= 2
        if prec > cap:
            raise PrecisionOverflow(
                f"partial quotient {emitted} of {a}^(1/{alpha}) not certified below {cap} bits",
                prec=prec // 2,
                index=emitted,
            )


def _exact_convergents(x: Fraction) -> Iterator[Convergent]:
    qs = _rational_quotients(x)
    last = len(qs) - 1
    for i, (p, q) in enumerate(_continuants(qs)):
        err = abs(x - Fraction(p, q))
        yield Convergent(p, q, CertifiedReal.exact(err, START_PREC), i, exact=(i == last))
    k = 2
    while True:
        yield Convergent(
            k * x.numerator,
            k * x.denominator,
            CertifiedReal.exact(0, START_PREC),
            last + k - 1,
            exact=True,
            exact_multiple=True,
        )
        k += 1


def convergents(a, alpha, count: int) -> List[Convergent]:
    if count < 1:
        raise InvalidParams("count must be positive")
    out = []
    for conv in iter_convergents(a, alpha):
        out.append(conv)
        if len(out) == count:
            break
    return out


def _decide(compute: Callable[[int], Optional[bool]], what: str) -> bool:
    prec = START_PREC
    cap = prec_cap()
    while prec <= cap:
        verdict = compute(prec)
        if verdict is not None:
            return verdict
        prec *= 2
    raise PrecisionOverflow(f"cannot certify {what} below {cap} bits", prec=cap)


def neg_power(q: int, gamma: Fraction, prec: int) -> CertifiedReal:
    """Enclosure of ``q ** -gamma``."""
    wp = prec + 16
    return (-(CertifiedReal.exact(gamma, wp) * CertifiedReal.exact(q, wp).log())).exp()


def approximation_error(a: Fraction, alpha: AlphaSpec, p: int, q: int, prec: int) -> CertifiedReal:
    exact = alpha.exact_root(a)
    if exact is not None:
        return CertifiedReal.exact(abs(exact - Fraction(p, q)), prec)
    return abs(root_enclosure(a, alpha, prec) - Fraction(p, q))


def is_gamma_witness(a, alpha, p: int, q: int, gamma) -> bool:
    """Certified test of ``|a**(1/alpha) - p/q| <= q**-gamma``."""
    a, alpha, gamma = Fraction(a), as_alpha(alpha), Fraction(gamma)
    exact = alpha.exact_root(a)
    if exact is not None and exact == Fraction(p, q):
        return True
    return _decide(
        lambda prec: approximation_error(a, alpha, p, q, prec).le(neg_power(q, gamma, prec)),
        f"|a^(1/alpha) - {p}/{q}| <= {q}^-{gamma}",
    )


def gamma_witnesses(wq: WitnessQuery) -> List[Tuple[int, int]]:
    """Convergents ``p/q`` with ``q <= q_max`` and ``|a**(1/alpha) - p/q| <= q**-gamma``.

    Only convergents are examined; for ``gamma >= 2`` every such rational
    is a convergent, so the list is complete (see ``WitnessQuery.complete``).
    Exact multiples of an exact rational target are not reported.
    """
    out = []
    for conv in iter_convergents(wq.a, wq.alpha):
        if conv.q > wq.q_max or conv.exact_multiple:
            break
        if is_gamma_witness(wq.a, wq.alpha, conv.p, conv.q, wq.gamma):
            out.append((conv.p, conv.q))
        if conv.exact:
            break
    return out


@dataclass(frozen=True)
class Witness:
    p: int
    q: int
    error: CertifiedReal
    holds: bool


def solution_to_witness(pair, eq, alpha, beta) -> Witness:
    """Recover ``(p, q)`` with ``floor(p**alpha) = y``, ``floor(q**alpha) = x``
    and test ``|a**(1/alpha) - p/q| <= q**-beta``."""
    alpha = as_alpha(alpha)
    x, y = pair.x, pair.y
    if Fraction(y) != eq.a * x + eq.b:
        raise InvalidParams(f"({x}, {y}) does not satisfy y = {eq.a} x + {eq.b}")
    q = member(x, alpha)
    p = member(y, alpha)
    if p is None or q is None:
        raise NotMember(f"pair ({x}, {y}) is not in PS({alpha})^2")
    holds = is_gamma_witness(eq.a, alpha, p, q, beta)
    return Witness(p, q, approximation_error(eq.a, alpha, p, q, START_PREC), holds)


def construct_solvable_alpha(a, p: int, q: int, interval) -> Optional[AlphaSpec]:
    """Exponent ``alpha = ln a / ln(p/q)``, so that ``a**(1/alpha) = p/q``.

    Returns None when alpha falls outside the open ``interval``; raises
    ``InvalidParams`` for degenerate input or an integral alpha.
    """
    a = _check_base(a)
    r = Fraction(p, q)
    if r <= 0:
        raise InvalidParams("p/q must be positive")
    if r == 1:
        raise InvalidParams("p/q = 1 is degenerate")
    if (a > 1) != (r > 1):
        raise InvalidParams("a and p/q must lie on the same side of 1")
    s, t = (Fraction(v) for v in interval)
    if not s < t:
        raise InvalidParams(f"empty range ({s}, {t})")
    # alpha > 1 exactly: a > r above 1, a < r below 1
    if not ((r > 1 and a > r) or (r < 1 and a < r)):
        if s >= 1:
            return None
        raise InvalidParams(f"ln({a})/ln({r}) does not exceed 1")
    alpha = AlphaSpec.logquot(a, r.numerator, r.denominator)
    inside = _decide(lambda prec: _in_open(alpha.enclose(prec), s, t), f"alpha in ({s}, {t})")
    return alpha if inside else None


def _in_open(enc: CertifiedReal, s: Fraction, t: Fraction) -> Optional[bool]:
    lo, hi = enc.lower(), enc.upper()
    if s < lo and hi < t:
        return True
    if hi <= s or lo >= t:
        return False
    return None


def dirichlet_ok(conv: Convergent) -> bool:
    """Certified ``|target - p/q| < 1/q**2``."""
    bound = CertifiedReal.exact(Fraction(1, conv.q * conv.q), conv.err_bound.prec)
    return conv.err_bound.lt(bound) is True

