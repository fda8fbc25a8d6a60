"""Terms of PS(alpha) = {floor(n**alpha) : n >= 1} and membership tests."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import gmpy2
from gmpy2 import mpz

from .certreal import (
    AlphaSpec,
    CertifiedReal,
    PowerExpr,
    as_alpha,
    ceil_int,
    start_prec_for,
)
from .errors import InvalidParams


@dataclass(frozen=True)
class PsTerm:
    n: int
    value: int


def floor_pow(n: int, alpha: AlphaSpec) -> int:
    """Certified ``floor(n ** alpha)``.

    Rational exponents go straight to exact integer root extraction, which
    is both exact and faster than the enclosure route at large ``n``.
    """
    if alpha.is_rational:
        r, s = alpha.ratio.numerator, alpha.ratio.denominator
        if r * n.bit_length() <= 1 << 22:
            return int(gmpy2.iroot(mpz(n) ** r, s)[0])
    return PowerExpr(n, alpha).floor()


def _segment_block(alpha: AlphaSpec, lo: int, hi: int) -> List[int]:
    return [floor_pow(n, alpha) for n in range(lo, hi + 1)]


def segment(alpha, n_lo: int, n_hi: int, workers: int = 1) -> List[PsTerm]:
    alpha = as_alpha(alpha)
    if not 1 <= n_lo <= n_hi:
        raise InvalidParams(f"segment needs 1 <= n_lo <= n_hi, got {n_lo}, {n_hi}")
    if workers <= 1 or n_hi - n_lo < 4096:
        values = _segment_block(alpha, n_lo, n_hi)
    else:
        step = -(-(n_hi - n_lo + 1) // workers)
        bounds = [(b, min(b + step - 1, n_hi)) for b in range(n_lo, n_hi + 1, step)]
        with ProcessPoolExecutor(workers) as pool:
            blocks = pool.map(_segment_block, [alpha] * len(bounds), *zip(*bounds))
            values = [v for block in blocks for v in block]
    return [PsTerm(n, v) for n, v in zip(range(n_lo, n_hi + 1), values)]


def _inverse_estimate(m: int, alpha: AlphaSpec) -> int:
    """Integer close to ``m ** (1/alpha)``; only a starting point."""
    prec = start_prec_for(m.bit_length())
    a = alpha.enclose(prec)
    root = (CertifiedReal.exact(m, prec + 16).log() / CertifiedReal(a.lo, a.hi, prec + 16)).exp()
    return max(1, ceil_int(root.mid))


def least_index_at_least(m: int, alpha: AlphaSpec) -> int:
    """Smallest n >= 1 with floor(n**alpha) >= m, i.e. n = ceil(m**(1/alpha))."""
    if m <= 1:
        return 1
    n = _inverse_estimate(m, alpha)
    while n > 1 and floor_pow(n - 1, alpha) >= m:
        n -= 1
    while floor_pow(n, alpha) < m:
        n += 1
    return n


def member(m: int, alpha) -> Optional[int]:
    """Index ``n`` with ``floor(n**alpha) == m``, or None if ``m`` is not a term."""
    alpha = as_alpha(alpha)
    if m < 1:
        raise InvalidParams(f"member needs m >= 1, got {m}")
    n = least_index_at_least(m, alpha)
    return n if floor_pow(n, alpha) == m else None


def rank(alpha, X: int) -> int:
    """Number of terms of PS(alpha) in [1, X]."""
    alpha = as_alpha(alpha)
    if X < 1:
        raise InvalidParams(f"rank needs X >= 1, got {X}")
    return least_index_at_least(X + 1, alpha) - 1


def terms_up_to(alpha, limit: int) -> List[int]:
    """All values of PS(alpha) not exceeding ``limit``, ascending."""
    alpha = as_alpha(alpha)
    if limit < 1:
        return []
    count = rank(alpha, limit)
    return [t.value for t in segment(alpha, 1, count)] if count else []
