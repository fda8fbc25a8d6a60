from fractions import Fraction

import mpmath
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def alpha_mp(alpha):
    """mpmath value of an AlphaSpec at the current working precision."""
    if alpha.form in ("decimal", "rational"):
        r = alpha.ratio
        return mpmath.mpf(r.numerator) / r.denominator
    if alpha.form == "logquot":
        r = alpha.log_ratio
        return mpmath.log(mpmath.mpf(alpha.log_base.numerator) / alpha.log_base.denominator) / mpmath.log(
            mpmath.mpf(r.numerator) / r.denominator
        )
    u, v, w = alpha.surd
    return mpmath.mpf(u.numerator) / u.denominator + mpmath.mpf(v.numerator) / v.denominator * mpmath.sqrt(w)


def ref_pow(n, alpha, prec):
    """Reference n**alpha at ``prec`` bits (independent of the package's MPFR path)."""
    with mpmath.workprec(prec):
        if alpha.form in ("decimal", "rational"):
            r = alpha.ratio
            return mpmath.root(mpmath.mpf(n) ** r.numerator, r.denominator)
        return mpmath.mpf(n) ** alpha_mp(alpha)


def ref_floor(n, alpha, prec=None):
    bits = int(n).bit_length() * 4 + 64
    prec = prec or 4 * max(bits, 64)
    with mpmath.workprec(prec):
        return int(mpmath.floor(ref_pow(n, alpha, prec)))


def mp_to_fraction(x):
    m, e = x.man_exp
    return Fraction(int(m)) * Fraction(2) ** e


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
