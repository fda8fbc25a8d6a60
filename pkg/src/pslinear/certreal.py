"""Certified real enclosures and exact exponents.

Every real quantity the package decides on (``n**alpha``, fractional parts,
``a**(1/alpha)``) is held as an interval ``[lo, hi]`` whose endpoints are
MPFR numbers computed with directed rounding, so the true value is always
inside.  Floors are decided from the interval when it does not straddle an
integer and otherwise from an exact integer test, or by re-evaluating at
doubled precision up to a hard cap.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import gmpy2
from gmpy2 import mpfr, mpz

from .errors import InvalidParams, PrecisionOverflow

START_PREC = 64
DEFAULT_PREC_CAP = 4096
PREC_CAP_ENV = "PSLINEAR_PREC_CAP"
# bit budget for the exact n**p integer-root shortcut on rational exponents
EXACT_ROOT_BITS = 1 << 20

Number = Union[int, Fraction]


def prec_cap() -> int:
    value = os.environ.get(PREC_CAP_ENV)
    if not value:
        return DEFAULT_PREC_CAP
    cap = int(value)
    if cap < START_PREC:
        raise InvalidParams(f"{PREC_CAP_ENV}={cap} is below the start precision {START_PREC}")
    return cap


@lru_cache(maxsize=None)
def _ctx(prec: int, rnd: int) -> gmpy2.context:
    return gmpy2.context(precision=prec, round=rnd)


def _down(prec):
    return _ctx(prec, gmpy2.RoundDown)


def _up(prec):
    return _ctx(prec, gmpy2.RoundUp)


def _to_fraction(x: mpfr) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def _round_down(value: Number, prec: int) -> mpfr:
    value = Fraction(value)
    return _down(prec).div(mpz(value.numerator), mpz(value.denominator))


def _round_up(value: Number, prec: int) -> mpfr:
    value = Fraction(value)
    return _up(prec).div(mpz(value.numerator), mpz(value.denominator))


def _is_integral(x: mpfr) -> bool:
    return gmpy2.is_integer(x)


def floor_int(x: mpfr) -> int:
    # gmpy2.floor rounds its result to the context precision; go through the exact ratio
    n, d = x.as_integer_ratio()
    return int(n // d)


def ceil_int(x: mpfr) -> int:
    n, d = x.as_integer_ratio()
    return int(-(-n // d))


class ExactInteger(int):
    """Floor result for a value proven to be exactly this integer."""

    def __repr__(self):
        return f"ExactInteger({int(self)})"


@dataclass(frozen=True)
class CertifiedReal:
    """Closed interval ``[lo, hi]`` known to contain a real number.

    ``prec`` is the working precision (bits) the enclosure was produced at;
    ``mid`` and ``rad`` give the ball view of the same interval.
    """

    lo: mpfr
    hi: mpfr
    prec: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: Number, prec: int = START_PREC) -> "CertifiedReal":
        return cls(_round_down(value, prec), _round_up(value, prec), prec)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int = START_PREC) -> "CertifiedReal":
        return cls(_round_down(lo, prec), _round_up(hi, prec), prec)

    @property
    def mid(self) -> mpfr:
        s = (self.lower() + self.upper()) / 2
        return _ctx(self.prec + 2, gmpy2.RoundToNearest).div(mpz(s.numerator), mpz(s.denominator))

    @property
    def rad(self) -> mpfr:
        m = self.mid
        up = _up(self.prec)
        return max(up.sub(self.hi, m), up.sub(m, self.lo))

    @property
    def width(self) -> mpfr:
        return _up(self.prec).sub(self.hi, self.lo)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def lower(self) -> Fraction:
        return _to_fraction(self.lo)

    def upper(self) -> Fraction:
        return _to_fraction(self.hi)

    def __float__(self):
        return float(self.mid)

    def contains(self, value: Union[Number, mpfr, float]) -> bool:
        if isinstance(value, (int, Fraction)):
            value = Fraction(value)
            return self.lower() <= value <= self.upper()
        return self.lo <= value <= self.hi

    def _coerce(self, other) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CertifiedReal.exact(other, self.prec)
        return NotImplemented

    def _wp(self, other: "CertifiedReal") -> int:
        return max(self.prec, other.prec)

    def __neg__(self):
        return CertifiedReal(-self.hi, -self.lo, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self._wp(other)
        return CertifiedReal(_down(p).add(self.lo, other.lo), _up(p).add(self.hi, other.hi), p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self._wp(other)
        return CertifiedReal(_down(p).sub(self.lo, other.hi), _up(p).sub(self.hi, other.lo), p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self._wp(other)
        d, u = _down(p), _up(p)
        pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        return CertifiedReal(min(d.mul(x, y) for x, y in pairs), max(u.mul(x, y) for x, y in pairs), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        p = self._wp(other)
        d, u = _down(p), _up(p)
        pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        return CertifiedReal(min(d.div(x, y) for x, y in pairs), max(u.div(x, y) for x, y in pairs), p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedReal(mpfr(0), max(-self.lo, self.hi), self.prec)

    def exp(self) -> "CertifiedReal":
        return CertifiedReal(_down(self.prec).exp(self.lo), _up(self.prec).exp(self.hi), self.prec)

    def log(self) -> "CertifiedReal":
        if self.lo <= 0:
            raise ValueError("log of an enclosure that is not strictly positive")
        return CertifiedReal(_down(self.prec).log(self.lo), _up(self.prec).log(self.hi), self.prec)

    def sqrt(self) -> "CertifiedReal":
        if self.lo < 0:
            raise ValueError("sqrt of an enclosure with negative part")
        return CertifiedReal(_down(self.prec).sqrt(self.lo), _up(self.prec).sqrt(self.hi), self.prec)

    def intersect(self, lo: Number, hi: Number) -> "CertifiedReal":
        """Clamp to ``[lo, hi]``, which must be known to contain the value."""
        new_lo = max(self.lo, _round_down(lo, self.prec))
        new_hi = min(self.hi, _round_up(hi, self.prec))
        if new_lo > new_hi:
            raise ValueError("clamp bounds exclude the enclosure")
        return CertifiedReal(new_lo, new_hi, self.prec)

    # three-valued comparisons: True/False when certified, None when the
    # enclosures overlap
    def lt(self, other) -> Optional[bool]:
        other = self._coerce(other)
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def le(self, other) -> Optional[bool]:
        other = self._coerce(other)
        if self.hi <= other.lo:
            return True
        if self.lo > other.hi:
            return False
        return None


def exact_interval(value: Number, prec: int) -> CertifiedReal:
    return CertifiedReal.exact(value, prec)


# --------------------------------------------------------------------------
# exponents


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParams(f"not an exact rational: {text!r}") from exc


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _exact_rational_root(x: Fraction, k: int) -> Optional[Fraction]:
    """k-th root of a positive rational if it is rational, else None."""
    num, ok_n = gmpy2.iroot(mpz(x.numerator), k)
    if not ok_n:
        return None
    den, ok_d = gmpy2.iroot(mpz(x.denominator), k)
    if not ok_d:
        return None
    return Fraction(int(num), int(den))


_DECIMAL_RE = re.compile(r"^[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class AlphaSpec:
    """A non-integral exponent alpha > 1 given exactly.

    Forms:

    * ``decimal`` -- a decimal literal, taken as the rational it denotes
    * ``rational`` -- p/q
    * ``logquot`` -- ln(base) / ln(ratio), e.g. ln 2 / ln(4/3)
    * ``surd`` -- u + v*sqrt(w) with rational u, v and a non-square w > 0
    """

    form: str
    ratio: Optional[Fraction] = None
    literal: Optional[str] = None
    log_base: Optional[Fraction] = None
    log_ratio: Optional[Fraction] = None
    surd: Optional[tuple] = None
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        check = getattr(self, f"_check_{self.form}", None)
        if check is None:
            raise InvalidParams(f"unknown alpha form {self.form!r}")
        check()

    # -- construction -----------------------------------------------------

    @classmethod
    def decimal(cls, literal: str) -> "AlphaSpec":
        literal = literal.strip()
        if not _DECIMAL_RE.match(literal):
            raise InvalidParams(f"not a decimal literal: {literal!r}")
        return cls("decimal", ratio=Fraction(literal), literal=literal)

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "AlphaSpec":
        return cls("rational", ratio=Fraction(p, q))

    @classmethod
    def logquot(cls, base: Number, num: Number, den: Number = 1) -> "AlphaSpec":
        return cls(
            "logquot",
            log_base=Fraction(base),
            log_ratio=Fraction(num) / Fraction(den),
            notes=("integrality decided exactly by rational power comparison",),
        )

    @classmethod
    def surd_form(cls, u: Number, v: Number, w: int) -> "AlphaSpec":
        return cls("surd", surd=(Fraction(u), Fraction(v), int(w)))

    # -- validation -------------------------------------------------------

    def _check_rational(self):
        r = self.ratio
        if r is None:
            raise InvalidParams("rational alpha needs a value")
        if r <= 1:
            raise InvalidParams(f"alpha must exceed 1, got {r}")
        if r.denominator == 1:
            raise InvalidParams(f"alpha must be non-integral, got {r}")

    _check_decimal = _check_rational

    def _check_logquot(self):
        a, r = self.log_base, self.log_ratio
        if a is None or r is None or a <= 0 or r <= 0:
            raise InvalidParams("logquot alpha needs positive base and ratio")
        if a == 1 or r == 1:
            raise InvalidParams("logquot alpha is degenerate when base or ratio equals 1")
        if (a > 1) != (r > 1):
            raise InvalidParams("logquot alpha is negative: base and ratio on opposite sides of 1")
        # ln a / ln r > 1  <=>  a > r for r > 1, a < r for r < 1
        if (r > 1 and not a > r) or (r < 1 and not a < r):
            raise InvalidParams("logquot alpha must exceed 1")
        enc = self._enclose_logquot(START_PREC)
        k_lo = ceil_int(enc.lo)
        k_hi = floor_int(enc.hi)
        for k in range(max(k_lo, 1), k_hi + 1):
            if r**k == a:
                raise InvalidParams(f"logquot alpha is exactly the integer {k}")

    def _check_surd(self):
        u, v, w = self.surd
        if w <= 0:
            raise InvalidParams("surd radicand must be positive")
        if v == 0 or gmpy2.is_square(w):
            raise InvalidParams("surd alpha is rational; use the rational form")
        # u + v*sqrt(w) > 1  <=>  v*sqrt(w) > 1 - u
        rhs = 1 - u
        if v > 0:
            ok = rhs < 0 or v * v * w > rhs * rhs
        else:
            ok = rhs < 0 and v * v * w < rhs * rhs
        if not ok:
            raise InvalidParams("surd alpha must exceed 1")

    # -- properties -------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.ratio is not None

    def __str__(self):
        if self.form == "decimal":
            return self.literal
        if self.form == "rational":
            return f"rat:{_frac_str(self.ratio)}"
        if self.form == "logquot":
            r = self.log_ratio
            return f"logquot:{_frac_str(self.log_base)}:{r.numerator}:{r.denominator}"
        u, v, w = self.surd
        return f"surd:{_frac_str(u)}:{_frac_str(v)}:{w}"

    def __float__(self):
        return float(self.enclose(START_PREC).mid)

    @property
    def floor(self) -> int:
        """Integer part of alpha (certified)."""
        prec = START_PREC
        while True:
            enc = self.enclose(prec)
            lo, hi = floor_int(enc.lo), floor_int(enc.hi)
            if lo == hi:
                return lo
            prec *= 2
            if prec > prec_cap():
                raise PrecisionOverflow("cannot certify floor(alpha)", prec=prec)

    # -- enclosures -------------------------------------------------------

    @lru_cache(maxsize=64)
    def enclose(self, prec: int) -> CertifiedReal:
        if self.ratio is not None:
            return CertifiedReal.exact(self.ratio, prec)
        if self.form == "logquot":
            return self._enclose_logquot(prec)
        u, v, w = self.surd
        wp = prec + 8
        root = CertifiedReal.exact(w, wp).sqrt()
        return CertifiedReal.exact(u, wp) + CertifiedReal.exact(v, wp) * root

    def _enclose_logquot(self, prec: int) -> CertifiedReal:
        wp = prec + 8
        num = CertifiedReal.exact(self.log_base, wp).log()
        den = CertifiedReal.exact(self.log_ratio, wp).log()
        return num / den

    def exact_root(self, a: Number) -> Optional[Fraction]:
        """``a ** (1/alpha)`` when it is provably rational, else None.

        Rational alpha = r/s reduces to exact integer r-th roots.  For
        ``logquot`` alpha = ln A / ln R and ``a`` a rational power of ``A``,
        the root is the matching power of ``R``.  Surd exponents give a
        transcendental root (Gelfond-Schneider) and return None.
        """
        a = Fraction(a)
        if a <= 0:
            raise InvalidParams("base must be positive")
        if a == 1:
            return Fraction(1)
        if self.ratio is not None:
            r, s = self.ratio.numerator, self.ratio.denominator
            if r * max(a.numerator.bit_length(), a.denominator.bit_length()) > EXACT_ROOT_BITS * 64:
                return None
            root = _exact_rational_root(a, r)
            return None if root is None else root**s
        if self.form == "logquot":
            A, R = self.log_base, self.log_ratio
            j = Fraction(math.log(a.numerator) - math.log(a.denominator)) / Fraction(
                math.log(A.numerator) - math.log(A.denominator)
            )
            j = j.limit_denominator(64)
            if j == 0:
                return None
            k, m = j.numerator, j.denominator
            lhs = a**m
            rhs = A**k
            if lhs != rhs:
                return None
            base = _exact_rational_root(R, m)
            return None if base is None else base**k
        return None


def parse_alpha(text: str) -> AlphaSpec:
    """Parse ``1.5``, ``3/2``, ``rat:3/2``, ``logquot:2:4:3`` or ``surd:1:1/2:2``."""
    text = text.strip()
    if text.startswith("rat:"):
        r = _parse_fraction(text[4:])
        return AlphaSpec("rational", ratio=r)
    if text.startswith("logquot:"):
        parts = text[8:].split(":")
        if len(parts) not in (2, 3):
            raise InvalidParams(f"logquot needs base:num[:den], got {text!r}")
        base = _parse_fraction(parts[0])
        num = _parse_fraction(parts[1])
        den = _parse_fraction(parts[2]) if len(parts) == 3 else Fraction(1)
        return AlphaSpec.logquot(base, num, den)
    if text.startswith("surd:"):
        parts = text[5:].split(":")
        if len(parts) != 3:
            raise InvalidParams(f"surd needs u:v:w, got {text!r}")
        return AlphaSpec.surd_form(_parse_fraction(parts[0]), _parse_fraction(parts[1]), int(parts[2]))
    if "/" in text:
        return AlphaSpec("rational", ratio=_parse_fraction(text))
    return AlphaSpec.decimal(text)


def as_alpha(alpha) -> AlphaSpec:
    if isinstance(alpha, AlphaSpec):
        return alpha
    if isinstance(alpha, Fraction):
        return AlphaSpec("rational", ratio=alpha)
    if isinstance(alpha, str):
        return parse_alpha(alpha)
    if isinstance(alpha, int):
        return AlphaSpec("rational", ratio=Fraction(alpha))
    if isinstance(alpha, float):
        return AlphaSpec.decimal(repr(alpha))
    raise TypeError(f"cannot interpret {alpha!r} as an exponent")


# --------------------------------------------------------------------------
# powers and floors


def _check_prec(prec: int) -> None:
    cap = prec_cap()
    if prec > cap:
        raise PrecisionOverflow(f"precision {prec} exceeds cap {cap}", prec=prec)


def _exact_pow_root(n: int, alpha: AlphaSpec):
    """(floor(n**alpha), is_exact) by integer root extraction, rational alpha only."""
    r, s = alpha.ratio.numerator, alpha.ratio.denominator
    if r * n.bit_length() > EXACT_ROOT_BITS:
        return None
    root, exact = gmpy2.iroot(mpz(n) ** r, s)
    return int(root), bool(exact)


def eval_pow(n: int, alpha: AlphaSpec, prec: int) -> CertifiedReal:
    """Enclosure of ``n ** alpha`` with relative radius about ``2**-prec``."""
    if n < 1:
        raise InvalidParams(f"eval_pow needs n >= 1, got {n}")
    _check_prec(prec)
    if n == 1:
        return CertifiedReal(mpfr(1), mpfr(1), prec)
    if alpha.is_rational:
        hit = _exact_pow_root(n, alpha)
        if hit is not None and hit[1]:
            return CertifiedReal.exact(hit[0], max(prec, hit[0].bit_length() + 1))
    # absolute error in alpha*ln(n) becomes relative error of the result
    exponent_bits = max(1, int(float(alpha.enclose(START_PREC).hi) * math.log(n)) + 1).bit_length()
    wp = prec + exponent_bits + 8
    logn = CertifiedReal.exact(n, wp).log()
    a = alpha.enclose(wp)
    t = logn * CertifiedReal(a.lo, a.hi, wp)
    enc = t.exp()
    return CertifiedReal(enc.lo, enc.hi, prec)


def start_prec_for(bits: int) -> int:
    """First rung of the 64 * 2**j ladder that leaves 32 guard bits above ``bits``."""
    prec = START_PREC
    while prec < bits + 32:
        prec *= 2
    return prec


def _decide_floor(x: CertifiedReal, refine, exact):
    cap = prec_cap()
    tried_exact = False
    prec = x.prec
    while True:
        if x.is_point and _is_integral(x.lo):
            return ExactInteger(int(x.lo)), x
        fl = floor_int(x.lo)
        if fl == floor_int(x.hi):
            return fl, x
        if exact is not None and not tried_exact:
            tried_exact = True
            k = exact()
            if k is not None:
                return k, x
        prec *= 2
        if refine is None or prec > cap:
            raise PrecisionOverflow(
                f"floor undecided at {prec // 2} bits: [{x.lo}, {x.hi}]", prec=prec // 2
            )
        x = refine(prec)


def certified_floor(
    x: CertifiedReal,
    refine: Optional[Callable[[int], CertifiedReal]] = None,
    exact: Optional[Callable[[], Optional[int]]] = None,
) -> int:
    """Certified ``floor`` of the real enclosed by ``x``.

    ``refine(prec)`` re-evaluates the same expression at a higher precision;
    ``exact()`` may settle the floor exactly (returning an ``ExactInteger``
    when the value is an integer).  Returns ``ExactInteger(k)`` when the
    value is proven equal to ``k``.
    """
    return _decide_floor(x, refine, exact)[0]


def frac(
    x: CertifiedReal,
    refine: Optional[Callable[[int], CertifiedReal]] = None,
    exact: Optional[Callable[[], Optional[int]]] = None,
) -> CertifiedReal:
    """Enclosure of the fractional part, inside ``[0, 1)``."""
    k, x = _decide_floor(x, refine, exact)
    if isinstance(k, ExactInteger):
        return CertifiedReal(mpfr(0), mpfr(0), x.prec)
    return (x - k).intersect(0, 1)


@dataclass(frozen=True)
class PowerExpr:
    """Re-evaluable expression ``scale * n ** alpha`` with ``scale > 0`` rational."""

    n: int
    alpha: AlphaSpec
    scale: Fraction = Fraction(1)

    def enclose(self, prec: int) -> CertifiedReal:
        enc = eval_pow(self.n, self.alpha, prec)
        if self.scale == 1:
            return enc
        return enc * CertifiedReal.exact(self.scale, max(enc.lo.precision, enc.hi.precision, prec) + 8)

    def exact_floor(self) -> Optional[int]:
        """Exact floor for rational alpha = r/s via ``floor((c^s n^r / d^s)^(1/s))``."""
        if not self.alpha.is_rational:
            return None
        r, s = self.alpha.ratio.numerator, self.alpha.ratio.denominator
        num = mpz(self.scale.numerator) ** s * mpz(self.n) ** r
        den = mpz(self.scale.denominator) ** s
        quo, rem = divmod(num, den)
        root, exact = gmpy2.iroot(quo, s)
        if exact and rem == 0:
            return ExactInteger(int(root))
        return int(root)

    def start_prec(self) -> int:
        bits = float(self.alpha.enclose(START_PREC).hi) * math.log2(self.n) if self.n > 1 else 1
        bits += max(0.0, math.log2(self.scale))
        return start_prec_for(int(bits) + 1)

    def floor(self) -> int:
        return certified_floor(self.enclose(self.start_prec()), self.enclose, self.exact_floor)

    def frac(self) -> CertifiedReal:
        return frac(self.enclose(self.start_prec()), self.enclose, self.exact_floor)
