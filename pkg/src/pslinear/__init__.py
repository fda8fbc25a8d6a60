"""Constructive solutions of y = a x + b inside the sequences floor(n**alpha)."""

from .certreal import AlphaSpec, CertifiedReal, as_alpha, parse_alpha
from .dioph import convergents, gamma_witnesses, iter_convergents
from .disc import exact_discrepancy, erdos_turan_bound
from .pscore import floor_pow, member, rank, segment
from .solver import SearchParams, brute_force_solutions, find_solutions, normalize
from .sums import find_triples

__version__ = "0.1.0"

__all__ = [
    "AlphaSpec",
    "CertifiedReal",
    "SearchParams",
    "as_alpha",
    "brute_force_solutions",
    "convergents",
    "erdos_turan_bound",
    "exact_discrepancy",
    "find_solutions",
    "find_triples",
    "floor_pow",
    "gamma_witnesses",
    "iter_convergents",
    "member",
    "normalize",
    "parse_alpha",
    "rank",
    "segment",
]
