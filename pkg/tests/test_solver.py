import random
from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslinear.certreal import parse_alpha
from pslinear.dioph import Convergent, convergents
from pslinear.errors import EmptyInterval, InvalidParams, NoSolutionFound, NotSolvableInN
from pslinear.pscore import member
from pslinear.solver import (
    BaseSolution,
    LinearEquation,
    SearchParams,
    base_solution,
    brute_force_solutions,
    filter_fraction,
    max_epsilon,
    find_solutions,
    normalize,
    plan_gamma,
    reduce_three_term,
    resolve_params,
    scan_window,
    target_interval,
)

from conftest import ref_floor

pos = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=60)


def test_normalize_examples():
    assert (lambda e: (e.c, e.d, e.e, e.solvable_in_n))(normalize(2, 0)) == (1, 2, 0, True)
    assert (lambda e: (e.c, e.d, e.e, e.solvable_in_n))(normalize(3, 1)) == (1, 3, 1, True)
    eq = normalize(Fraction(3, 2), Fraction(1, 2))
    assert (eq.c, eq.d, eq.e, eq.solvable_in_n) == (4, 6, 2, True)
    assert eq.holds(1, 2)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), ("1.0", 0), (2, -1)])
def test_normalize_invalid(a, b):
    with pytest.raises(InvalidParams):
        normalize(a, b)


@given(pos.filter(lambda a: a != 1), st.fractions(min_value=0, max_value=20, max_denominator=60), st.integers(-99, 99), st.integers(-99, 99))
def test_integer_form_is_equivalent(a, b, x, y):
    eq = normalize(a, b)
    assert eq.holds(x, y) == (Fraction(y) == a * x + b)


@given(pos.filter(lambda a: a != 1), st.fractions(min_value=0, max_value=5, max_denominator=12))
def test_solvability_matches_small_search(a, b):
    eq = normalize(a, b)
    # x runs over a full residue system mod c; y is then forced
    found = any((eq.e + eq.d * x) % eq.c == 0 for x in range(1, eq.c + 1))
    assert found == eq.solvable_in_n


def test_base_solution_examples():
    assert base_solution(LinearEquation(2, 0, 1, 2, 0)) == BaseSolution(0, 0)
    assert base_solution(LinearEquation(3, 1, 1, 3, 1)) == BaseSolution(1, 0)
    assert base_solution(LinearEquation(Fraction(3, 2), Fraction(1, 2), 4, 6, 2)) == BaseSolution(2, 1)
    with pytest.raises(NotSolvableInN):
        base_solution(normalize(2, Fraction(1, 2)))


@given(pos.filter(lambda a: a != 1), st.fractions(min_value=0, max_value=20, max_denominator=60))
def test_base_solution_invariant(a, b):
    eq = normalize(a, b)
    if not eq.solvable_in_n:
        return
    u, v = base_solution(eq).u, base_solution(eq).v
    assert eq.c * u - eq.d * v == eq.e and 0 <= v < eq.c


def test_target_interval_examples():
    eq = normalize(2, 0)
    iv = target_interval(eq, base_solution(eq), Fraction(1, 10))
    assert (iv.lo, iv.hi) == (Fraction(1, 20), Fraction(9, 20))
    eq = normalize(3, 1)
    iv = target_interval(eq, base_solution(eq), Fraction(1, 10))
    assert (iv.lo, iv.hi) == (Fraction(1, 3) + Fraction(1, 30), Fraction(2, 3) - Fraction(1, 30))
    with pytest.raises(EmptyInterval):
        target_interval(eq, base_solution(eq), 1 - Fraction(eq.e, eq.d))
    eq = normalize(2, 3)
    with pytest.raises(EmptyInterval):
        target_interval(eq, base_solution(eq), Fraction(1, 10))


def _random_equations(rng, count):
    out = []
    while len(out) < count:
        a = Fraction(rng.randint(1, 60), rng.randint(1, 60))
        b = Fraction(rng.randint(0, 60), rng.randint(1, 60))
        if a == 1 or not b < a:
            continue
        eq = normalize(a, b)
        if eq.solvable_in_n:
            out.append(eq)
    return out


def test_target_interval_positive_randomized():
    rng = random.Random(11)
    for eq in _random_equations(rng, 1000):
        bound = min(1 - Fraction(eq.e, eq.d), max_epsilon(eq))
        eps = bound * Fraction(rng.randint(1, 999), 1000)
        iv = target_interval(eq, base_solution(eq), eps)
        assert 0 <= iv.lo < iv.hi <= 1


def test_target_interval_large_epsilon_is_reported():
    # epsilon < 1 - e/d alone does not keep the interval non-empty
    eq = normalize(Fraction(10, 11), 0)
    with pytest.raises(EmptyInterval):
        target_interval(eq, base_solution(eq), Fraction(777, 1000))
    eq = normalize(2, 0)
    with pytest.raises(EmptyInterval):
        target_interval(eq, base_solution(eq), Fraction(3, 5))
    # the exact boundary: just below max_epsilon is fine
    eq = normalize(Fraction(10, 11), 0)
    target_interval(eq, base_solution(eq), max_epsilon(eq) - Fraction(1, 10**6))


def test_scan_window_small_convergent_fails_verification():
    alpha = parse_alpha("1.5")
    eq = normalize(2, 0)
    res = resolve_params(eq, alpha, SearchParams(gamma=Fraction(2), xi=Fraction(1, 100)))
    iv = target_interval(eq, base_solution(eq), res.epsilon)
    conv = Convergent(8, 5, None, 3)
    pairs, stats = scan_window(eq, alpha, conv, iv, res)
    assert pairs == [] and stats.window == (2, 3)
    assert stats.in_filter >= 1 and stats.accepted == 0
    assert ref_floor(24, alpha) == 117 and ref_floor(15, alpha) == 58


def test_scan_window_rejects_degenerate_convergent():
    alpha = parse_alpha("1.5")
    eq = normalize(2, 0)
    res = resolve_params(eq, alpha, SearchParams())
    iv = target_interval(eq, base_solution(eq), res.epsilon)
    with pytest.raises(InvalidParams):
        scan_window(eq, alpha, Convergent(1, 1, None, 0), iv, res)


def test_scan_window_exact_branch_accepts_every_filtered_x():
    alpha = parse_alpha("logquot:2:4:3")
    eq = normalize(2, 0)
    res = resolve_params(eq, alpha, SearchParams(window_multiplier=Fraction(400)))
    iv = target_interval(eq, base_solution(eq), res.epsilon)
    conv = convergents(2, alpha, 2)[1]
    assert (conv.p, conv.q, conv.exact) == (4, 3, True)
    pairs, stats = scan_window(eq, alpha, conv, iv, res)
    assert stats.in_filter > 10
    assert stats.accepted == stats.in_filter == len(pairs)


def test_scan_window_parallel_matches_serial():
    alpha = parse_alpha("logquot:2:4:3")
    eq = normalize(2, 0)
    res = resolve_params(eq, alpha, SearchParams(window_multiplier=Fraction(2000)))
    iv = target_interval(eq, base_solution(eq), res.epsilon)
    conv = convergents(2, alpha, 2)[1]
    serial, _ = scan_window(eq, alpha, conv, iv, res)
    parallel, _ = scan_window(eq, alpha, conv, iv, res, workers=3)
    assert serial == parallel


@pytest.mark.parametrize("alpha", ["1.5", "surd:1:1/2:2", "1.8"])
@pytest.mark.parametrize("a,b", [(2, 0), (3, 1), (Fraction(3, 2), Fraction(1, 2))])
def test_find_solutions_sound(alpha, a, b):
    al = parse_alpha(alpha)
    stream = find_solutions(a, b, al, SearchParams(limit=4, time_budget=60))
    pairs = list(stream)
    assert len(pairs) == 4
    assert len({(p.x, p.y) for p in pairs}) == 4
    for p in pairs:
        assert Fraction(p.y) == Fraction(a) * p.x + Fraction(b)
        assert member(p.x, al) == p.n_x and member(p.y, al) == p.n_y
        assert ref_floor(p.n_x, al) == p.x and ref_floor(p.n_y, al) == p.y


def test_find_solutions_deterministic():
    run = lambda: [(p.x, p.y, p.provenance) for p in find_solutions(2, 0, "1.8", SearchParams(limit=5))]  # noqa: E731
    assert run() == run()


def test_find_solutions_subset_of_oracle():
    pairs = [p for p in find_solutions(2, 0, "1.5", SearchParams(limit=6)) if p.x <= 10**5]
    oracle = {(p.x, p.y) for p in brute_force_solutions(2, 0, "1.5", 10**5)}
    assert pairs and all((p.x, p.y) in oracle for p in pairs)


def test_find_solutions_regression_constants():
    # first emission of the constructive search for y = 3x + 1 at alpha = 3/2
    first = next(iter(find_solutions(3, 1, "1.5", SearchParams(limit=1))))
    assert (first.x, first.y) == (649, 1948)
    assert first.provenance[:3] == ("convergent", 52, 25)


def test_find_solutions_errors():
    with pytest.raises(NotSolvableInN):
        find_solutions(2, Fraction(1, 2), "1.5")
    with pytest.raises(InvalidParams):
        find_solutions(2, 3, "1.5")


def test_find_solutions_budget_report():
    stream = find_solutions(2, 0, "surd:1:1:2", SearchParams(max_convergents=15, time_budget=30))
    with pytest.raises(NoSolutionFound) as info:
        list(stream)
    rep = info.value.report
    assert rep.convergents_tried == 15 and rep.largest_q > 1 and rep.stopped_by == "max_convergents"


def test_brute_force_examples():
    # 1 = floor(1^1.5) and 2 = floor(2^1.5), so (1, 2) is the only pair with x <= 10
    assert [(p.x, p.y, p.n_x, p.n_y) for p in brute_force_solutions(2, 0, "1.5", 10)] == [(1, 2, 1, 2)]
    pairs = [(p.x, p.y) for p in brute_force_solutions(2, 0, "1.5", 100)]
    assert (11, 22) in pairs
    with pytest.raises(InvalidParams):
        brute_force_solutions(Fraction("1.0"), 0, "1.5", 10)
    assert [(p.x, p.y) for p in brute_force_solutions(3, 1, "1.5", 10**6)][0] == (27, 82)


def test_brute_force_beyond_lower_path():
    pairs = brute_force_solutions(2, 5, "1.5", 1000)
    assert pairs and all(p.y == 2 * p.x + 5 for p in pairs)


def test_plan_gamma_examples():
    assert plan_gamma("1.5") == 2
    assert plan_gamma("2.5", "2.3", "3.1", "0.2") == Fraction(5, 2)
    assert plan_gamma("3.2", "2.9", "3.5", "0.3") == 3
    assert plan_gamma("1.5", 1, 2, "0.1") == 2
    with pytest.raises(InvalidParams):
        plan_gamma("2.5", "3.1", "2.3", "0.2")


@pytest.mark.parametrize("alpha", ["logquot:2:4:3", "2.5", "rat:7/3", "3.9"])
def test_plan_gamma_default_range(alpha):
    al = parse_alpha(alpha)
    g = plan_gamma(al)
    lo = al.enclose(64).upper()
    assert lo < g < al.floor + 1 and g - lo < 1


def test_reduce_three_term():
    r = reduce_three_term(2, 1, 1)
    assert (r.equation.a, r.equation.b, r.y) == (2, 1, 1)
    r = reduce_three_term(4, 2, 2)
    assert (r.equation.a, r.equation.b) == (2, 1)
    with pytest.raises(InvalidParams):
        reduce_three_term(2, 3, 1)
    with pytest.raises(InvalidParams):
        reduce_three_term(4, 1, 2)
    pair = next(iter(find_solutions(r.equation.a, r.equation.b, "1.5", SearchParams(limit=1))))
    x, y, z = r.lift(pair)
    assert 4 * x + 2 * y == 2 * z and member(y, "1.5") == 1


def test_filter_fraction_tracks_interval_length():
    alpha = parse_alpha("1.5")
    eq = normalize(2, 0)
    res = resolve_params(eq, alpha, SearchParams())
    iv = target_interval(eq, base_solution(eq), res.epsilon)
    conv = [c for c in islice(convergents(2, alpha, 40), 40) if c.q > 10**12][0]
    frac, diam = filter_fraction(eq, alpha, conv, iv, res)
    assert abs(frac - diam) <= 0.1
