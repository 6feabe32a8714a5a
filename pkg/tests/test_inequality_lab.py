import itertools
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funceq.inequality_lab import (
    DyadicGrid,
    GridFunction,
    alienation_failure_check,
    check_c2_condition,
    check_phi_hypotheses,
    check_star_star,
    construct_solution,
    evaluate_spec,
    extract_remainder,
    is_additive_on_core,
    is_subadditive_on_core,
    parse_function,
    phi,
    phi_is_biadditive_on_core,
    slack_matches_defect,
    star_star_slack,
    subadditivity_defect,
)

G = DyadicGrid(3, 4)
SMALL = DyadicGrid(1, 2)


def fn(grid, f):
    return GridFunction.from_fn(grid, f)


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


class TestGrid:
    def test_points(self):
        assert len(SMALL) == 9
        assert SMALL.points[0] == -2 and SMALL.points[-1] == 2
        for x in G.points:
            assert -x in G
        assert 0 in G and 1 in G and -1 in G
        assert Q(1, 8) in G and Q(1, 16) not in G and 5 not in G

    def test_halving_closure(self):
        for k in range(-G.N, G.N + 1):
            x = Q(k, G.scale)
            if x.denominator < G.scale:
                assert x / 2 in G

    def test_core_size(self):
        brute = sum(1 for x in G.points for y in G.points if x + y in G)
        assert G.core_size() == brute == sum(1 for _ in G.core_pairs())

    def test_off_grid(self):
        with pytest.raises(ValueError):
            G.index(Q(1, 3))
        with pytest.raises(ValueError):
            phi(fn(G, lambda x: x), Q(1, 3), 1)

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            DyadicGrid(-1, 2)
        with pytest.raises(ValueError):
            DyadicGrid(1, 0)


class TestExactness:
    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            GridFunction(SMALL, (0.5,) * 9)

    def test_scaled_values_are_exact(self):
        f = fn(G, lambda x: Q(2, 3) * x + Q(1, 7))
        nums, den = f.scaled
        assert all(Q(n, den) == v for n, v in zip(nums, f.values))


    def test_huge_values_stay_exact(self):
        # magnitudes beyond int64 take the Python-int path
        big = Q(10 ** 30 + 1, 7)
        f = fn(SMALL, lambda x: big * x)
        g = fn(SMALL, lambda x: big * x * x - abs(x) + (Q(1, 10 ** 25) if x == 1 else 0))
        direct = [(x, y) for x in SMALL.points for y in SMALL.points if x + y in SMALL
                  and g(x + y) - g(x) - g(y) < x * f(y) + y * f(x)]
        assert direct
        assert [(v.x, v.y) for v in check_star_star(f, g)] == direct
        A = fn(SMALL, lambda x: big * abs(x))
        g2 = construct_solution(f, A)
        assert check_star_star(f, g2) == [] and slack_matches_defect(f, g2, A)
        assert extract_remainder(f, g2) == A


class TestPhi:
    def test_examples(self):
        f = fn(G, lambda x: x)
        assert phi(f, 3, Q(1, 2)) == 3
        h = fn(G, lambda x: x * x + 1)
        for y in G.points:
            assert phi(h, 0, y) == y * h(0)
        odd = fn(G, lambda x: x ** 3 - 2 * x)
        assert all(phi(odd, x, -y) == -phi(odd, x, y) for x in G.points for y in G.points)


class TestStarStar:
    def test_examples(self):
        x_ = fn(G, lambda x: x)
        assert check_star_star(x_, fn(G, lambda x: x * x - abs(x))) == []
        assert check_star_star(GridFunction.zero(G), GridFunction.zero(G)) == []
        bad = check_star_star(x_, GridFunction.zero(G))
        assert (1, 1, 0, 2) in [tuple(v) for v in bad]

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            check_star_star(GridFunction.zero(G), GridFunction.zero(SMALL))

    def test_violations_by_direct_scan(self):
        f = fn(SMALL, lambda x: x)
        g = fn(SMALL, lambda x: x * x - 2 * abs(x) + (1 if x == 1 else 0))
        direct = [(x, y) for x in SMALL.points for y in SMALL.points if x + y in SMALL
                  and g(x + y) - g(x) - g(y) < x * f(y) + y * f(x)]
        assert [(v.x, v.y) for v in check_star_star(f, g)] == direct
        assert direct


class TestPhiHypotheses:
    def test_linear(self):
        r = check_phi_hypotheses(fn(G, lambda x: x))
        assert all(r.conditions.values())

    def test_cube_fails_doubling(self):
        f = fn(G, lambda x: x ** 3)
        assert f(2) == 8 * f(1) != 2 * f(1)
        r = check_phi_hypotheses(f)
        assert r["odd"] and not r["doubling"]

    def test_abs_not_odd(self):
        assert not check_phi_hypotheses(fn(G, abs))["odd"]

    def test_growth_is_labelled_truncated(self):
        assert "growth_truncated" in check_phi_hypotheses(fn(SMALL, lambda x: x)).truncated

    @given(rationals)
    def test_additive_f_gives_biadditive_phi(self, q):
        f = fn(SMALL, lambda x: q * x)
        assert phi_is_biadditive_on_core(f)
        assert check_phi_hypotheses(f)["symmetric"]


class TestConstruct:
    def test_examples(self):
        g = construct_solution(fn(G, lambda x: 2 * x), fn(G, abs))
        assert g == fn(G, lambda x: 2 * x * x - abs(x))
        slack = star_star_slack(fn(G, lambda x: 2 * x), g)
        assert all(s == abs(x) + abs(y) - abs(x + y) for (x, y), s in slack.items())

        g = construct_solution(fn(G, lambda x: x), GridFunction.zero(G))
        assert g == fn(G, lambda x: x * x)
        assert set(star_star_slack(fn(G, lambda x: x), g).values()) == {0}

        g = construct_solution(GridFunction.zero(G), fn(G, lambda x: 3 * abs(x)))
        assert g == fn(G, lambda x: -3 * abs(x))
        assert check_star_star(GridFunction.zero(G), g) == []

    def test_preconditions(self):
        with pytest.raises(ValueError, match="additive"):
            construct_solution(fn(G, lambda x: x * x), GridFunction.zero(G))
        with pytest.raises(ValueError, match="subadditive"):
            construct_solution(fn(G, lambda x: x), fn(G, lambda x: -abs(x)))


class TestExtract:
    def test_examples(self):
        A0 = fn(G, lambda x: abs(x) + x / 3)
        f = fn(G, lambda x: Q(-3, 4) * x)
        assert extract_remainder(f, construct_solution(f, A0)) == A0
        x_ = fn(G, lambda x: x)
        assert extract_remainder(x_, fn(G, lambda x: x * x)) == GridFunction.zero(G)
        assert extract_remainder(x_, fn(G, lambda x: x * x - abs(x))) == fn(G, abs)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            extract_remainder(fn(G, lambda x: x), GridFunction.zero(G))
        with pytest.raises(ValueError):
            extract_remainder(fn(G, abs), GridFunction.zero(G))

    @settings(max_examples=60)
    @given(rationals, st.data())
    def test_equivalence_lemma(self, q, data):
        # for additive f and ANY g, slack(x, y) is the subadditivity defect of x f(x) - g(x)
        f = fn(SMALL, lambda x: q * x)
        g = GridFunction(SMALL, tuple(data.draw(st.lists(rationals, min_size=9, max_size=9))))
        A = GridFunction(SMALL, tuple(x * f(x) - g(x) for x in SMALL.points))
        assert star_star_slack(f, g) == subadditivity_defect(A)
        assert is_subadditive_on_core(A) == (check_star_star(f, g) == [])

    @settings(max_examples=40)
    @given(rationals, st.sampled_from(["zero", "abs", "scaled_abs", "abs_plus_linear"]),
           st.fractions(min_value=0, max_value=5, max_denominator=4), rationals)
    def test_round_trip(self, slope, kind, q, r):
        A = {
            "zero": lambda x: Q(0),
            "abs": abs,
            "scaled_abs": lambda x: q * abs(x),
            "abs_plus_linear": lambda x: abs(x) + r * x,
        }[kind]
        f, A = fn(SMALL, lambda x: slope * x), fn(SMALL, A)
        g = construct_solution(f, A)
        assert check_star_star(f, g) == []
        assert extract_remainder(f, g) == A
        assert slack_matches_defect(f, g, A)


class TestC2:
    def test_square(self):
        r = check_c2_condition(fn(G, lambda x: x * x), 1)
        assert (r.holds, r.k0, r.depth) == (True, 0, 3)

    def test_square_minus_abs(self):
        g = fn(G, lambda x: x * x - abs(x))
        # t = 1/2^k for k = 1..3 gives 2t^2 - 2t < 0
        assert [g(Q(1, 2 ** k)) + g(-Q(1, 2 ** k)) < 0 for k in range(1, 4)] == [True] * 3
        assert not check_c2_condition(g, 1).holds

    def test_square_minus_linear(self):
        f = fn(G, lambda x: x)
        g = fn(G, lambda x: x * x - x)
        assert check_c2_condition(g, 1).holds
        A = extract_remainder(f, g)
        assert A == fn(G, lambda x: x)
        assert is_additive_on_core(A)

    def test_depth_follows_point(self):
        assert check_c2_condition(fn(G, lambda x: x * x), Q(3, 4)).depth == 1
        assert check_c2_condition(fn(G, lambda x: x * x), 0).depth == G.m
        with pytest.raises(ValueError):
            check_c2_condition(fn(G, lambda x: x * x), Q(1, 3))


class TestAlienationFailure:
    def test_examples(self):
        assert alienation_failure_check(GridFunction.zero(G))
        f = fn(G, lambda x: -x)
        assert phi(f, 1, -1) > 0
        assert alienation_failure_check(f)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            alienation_failure_check(fn(G, abs))

    def test_premise_ranges_over_all_pairs(self):
        # nonzero only at the grid edge: phi <= 0 on every core pair, yet f != 0.
        # The premise must therefore use all grid pairs, where phi(K, 1) > 0.
        K = SMALL.K
        f = fn(SMALL, lambda x: (x == K) - (x == -K))
        core_ok = all(phi(f, x, y) <= 0 for x in SMALL.points for y in SMALL.points if x + y in SMALL)
        assert core_ok and not f.is_zero()
        assert phi(f, K, 1) > 0
        assert alienation_failure_check(f)

    def test_small_enumeration(self):
        values = [Q(n, 2) for n in range(-2, 3)]
        positives = [x for x in SMALL.points if x > 0]
        for combo in itertools.product(values, repeat=len(positives)):
            table = dict(zip(positives, combo))
            f = fn(SMALL, lambda x: table[x] if x > 0 else (-table[-x] if x < 0 else 0))
            assert alienation_failure_check(f)


class TestSpecFiles:
    def test_parse_forms(self):
        assert parse_function(SMALL, "zero") == GridFunction.zero(SMALL)
        assert parse_function(SMALL, "linear:3/2") == fn(SMALL, lambda x: Q(3, 2) * x)
        assert parse_function(SMALL, "square:1 + abs:-1") == fn(SMALL, lambda x: x * x - abs(x))
        table = [str(x * x) for x in SMALL.points]
        assert parse_function(SMALL, table) == parse_function(SMALL, {"table": table})
        for bad in ("bogus:1", "linear", 3, {"tab": []}):
            with pytest.raises(ValueError):
                parse_function(SMALL, bad)

    def test_known_solution_passes(self):
        g = [str(x * x - abs(x)) for x in G.points]
        checks, info = evaluate_spec({"grid": {"m": 3, "K": 4}, "f": "linear:1", "g": g})
        assert checks == {"star_star": True}
        assert info["core_pairs"] == G.core_size()

    def test_f_and_A(self):
        checks, _ = evaluate_spec({"grid": {"m": 2, "K": 2}, "f": "linear:2", "A": "abs:1"})
        assert all(checks.values()) and {"round_trip", "slack_equals_defect"} <= set(checks)

    def test_failure_and_validation(self):
        checks, info = evaluate_spec({"grid": {"m": 3, "K": 4}, "f": "linear:1", "g": "zero"})
        assert checks == {"star_star": False}
        assert ["1", "1", "0", "2"] in info["violations"]
        with pytest.raises(ValueError):
            evaluate_spec({"f": "zero", "g": "zero"})
        with pytest.raises(ValueError):
            evaluate_spec({"grid": {"m": 1}, "f": "zero", "g": "zero"})
