import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import cone_count_one_point_blowup, cone_count_projective
from motivic.errors import (
    BudgetExceededError, NonHomogeneousError, NonIntegralFitError, NotCountableError,
    ParseError, TooFewPointsError,
)
from motivic.oracle import (
    Ambient, CountingProblem, CountSample, PrimeField, count_expression, count_points,
    enumerate_projective, expression_points, fit_polynomial, one_point_blowup_problem,
)
from motivic.ring import LPolynomial, parse_class
from motivic.varieties import (
    Affine, Atom, BlowUp, Complement, Disjoint, Empty, Fibration, Point, Product,
    Projective, Scale,
)

# Frozen from the affine-cone oracle in helpers.py.
ONE_POINT_COUNTS = {2: 21, 3: 52, 5: 186, 7: 456}
P3_COUNTS = {2: 15, 3: 40, 5: 156, 7: 400}


@pytest.mark.parametrize("p", [0, 1, 4, 9, 101, 2.0])
def test_prime_field_rejects_non_primes(p):
    with pytest.raises(ValueError):
        PrimeField(p)


@pytest.mark.parametrize("n, q, expected", [(2, 2, 7), (3, 3, 40), (0, 5, 1), (0, 2, 1)])
def test_enumerate_projective_sizes(n, q, expected):
    assert len(enumerate_projective(n, PrimeField(q))) == expected


@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("q", [2, 3, 5])
def test_enumerate_projective_representatives(n, q):
    pts = enumerate_projective(n, q)
    assert len(set(pts)) == len(pts) == cone_count_projective(n, q)
    for pt in pts:
        assert len(pt) == n + 1
        assert next(c for c in pt if c) == 1
    assert pts == sorted(pts)


def test_enumerate_projective_budget():
    with pytest.raises(BudgetExceededError):
        enumerate_projective(6, 5, budget=1000)


def test_cone_oracle_agrees_with_frozen_values():
    assert cone_count_one_point_blowup(2) == ONE_POINT_COUNTS[2]
    assert cone_count_one_point_blowup(3) == ONE_POINT_COUNTS[3]


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_one_point_blowup_graph_closure(q):
    assert count_points(one_point_blowup_problem(q)) == CountSample(q, ONE_POINT_COUNTS[q])


def test_empty_system_counts_the_ambient():
    problem = CountingProblem(Ambient.projective(2), (), PrimeField(5))
    assert count_points(problem).count == 31
    problem = CountingProblem(Ambient.affine(2), (), 3)
    assert count_points(problem).count == 9


def test_affine_equations():
    # x0*x1 = 1 over F_5 is a torus: 4 points
    assert count_points(CountingProblem(Ambient.affine(2), ("x0*x1 - 1",), 5)).count == 4
    # a smooth conic in P^2 has q + 1 points
    assert count_points(CountingProblem(Ambient.projective(2), ("x0^2 + x1^2 - x2^2",), 7)).count == 8


def test_non_homogeneous_equation_is_rejected():
    with pytest.raises(NonHomogeneousError):
        CountingProblem(Ambient.projective(2), ("x0*x1 - x2",), 3)
    with pytest.raises(NonHomogeneousError):
        CountingProblem(Ambient.multiprojective((1, 1)), ("x0*y0 - x1",), 3)


def test_unknown_variable_is_a_parse_error():
    with pytest.raises(ParseError) as info:
        CountingProblem(Ambient.projective(1), ("x0 - x5",), 3)
    assert info.value.col == 6


def test_problem_json_round_trip(tmp_path):
    problem = one_point_blowup_problem(3)
    path = tmp_path / "blowup.json"
    path.write_text(json.dumps(problem.to_json()))
    loaded = CountingProblem.load(path)
    assert loaded == problem
    assert count_points(loaded).count == 52


def test_ambient_json():
    for ambient in (Ambient.affine(3), Ambient.projective(2), Ambient.multiprojective((3, 2, 1))):
        assert Ambient.from_json(ambient.to_json()) == ambient
    assert Ambient.multiprojective((1, 1)).variables == ["x0", "x1", "y0", "y1"]
    with pytest.raises(ValueError):
        Ambient("grassmannian", (2,))


def test_count_points_budget():
    with pytest.raises(BudgetExceededError):
        count_points(one_point_blowup_problem(7), budget=1000)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from(["x0*y1 - x1*y0", "x0*y0", "x1^2*y1 - x0^2*y0", "x2*y1", "x0*y0 + x1*y1 + x2*y1"]),
             max_size=4),
    st.sampled_from(["x1*y0 - x0*y1", "x2*y0", "x0*y1 + x2*y1"]),
    st.sampled_from([2, 3, 5]),
)
def test_count_points_is_monotone(equations, extra, q):
    problem = CountingProblem(Ambient.multiprojective((2, 1)), tuple(equations), q)
    assert count_points(problem.with_equations([extra])).count <= count_points(problem).count


@pytest.mark.parametrize(
    "expr, q, expected",
    [
        (BlowUp(Projective(3), Scale(8, Point()), 3), 2, 15 - 8 + 8 * 7),
        (BlowUp(Projective(3), Scale(8, Point()), 3), 3, 40 - 8 + 8 * 13),
        (Product(Projective(1), Projective(1)), 3, 16),
        (Complement(Projective(2), Projective(1)), 2, 4),
        (Complement(Affine(2), Scale(3, Point())), 5, 22),
        (Disjoint((Projective(1), Affine(2))), 2, 7),
        (Empty(), 3, 0),
        (Scale(4, Affine(1)), 5, 20),
    ],
)
def test_count_expression(expr, q, expected):
    assert count_expression(expr, q).count == expected


def test_center_placement_does_not_change_counts():
    e = BlowUp(Projective(3), Scale(8, Point()), 3)
    first = expression_points(e, 3)
    placed = [expression_points(e, 3, configuration=seed) for seed in range(5)]
    centers = {frozenset(x[1] for x in pts if x[0] == "e") for pts in placed}
    assert len(centers) > 1
    assert all(len(pts) == len(first) == 136 for pts in placed)


def test_blowup_labels_are_distinct():
    pts = expression_points(BlowUp(Projective(2), Scale(3, Point()), 2), 3)
    assert len(pts) == len(set(pts)) == 13 - 3 + 3 * 4


def test_too_few_rational_points():
    with pytest.raises(TooFewPointsError):
        count_expression(BlowUp(Projective(3), Scale(16, Point()), 3), 2)
    assert count_expression(BlowUp(Projective(3), Scale(16, Point()), 3), 3).count == 40 - 16 + 16 * 13


@pytest.mark.parametrize(
    "expr",
    [
        Atom("C"),
        Fibration(Projective(1), Projective(1)),
        BlowUp(Projective(3), Projective(1), 2),
        BlowUp(Projective(3), Point(), 2),
        BlowUp(Affine(3), Point(), 3),
        Complement(Projective(2), Affine(1)),
        Complement(Affine(1), Projective(1)),
    ],
)
def test_not_countable(expr):
    with pytest.raises(NotCountableError):
        count_expression(expr, 3)


def test_nested_closed_pieces():
    # a line and a point off it inside P^2
    e = Complement(Projective(2), Disjoint((Projective(1), Point())))
    assert count_expression(e, 3).count == 13 - 4 - 1
    # componentwise inside a union and a product
    e = Complement(Product(Projective(1), Affine(2)), Product(Point(), Affine(1)))
    assert count_expression(e, 5).count == 6 * 25 - 5


def test_expression_budget():
    with pytest.raises(BudgetExceededError):
        count_expression(Product(Projective(3), Projective(3)), 7, budget=10_000)


def test_fit_examples():
    samples = [CountSample(q, n) for q, n in ONE_POINT_COUNTS.items()]
    assert fit_polynomial(samples) == parse_class("L^3 + 2*L^2 + 2*L + 1").to_lpolynomial()
    samples = [CountSample(q, n) for q, n in P3_COUNTS.items()]
    assert fit_polynomial(samples) == LPolynomial.projective(3)
    # two samples pin down at most a line; a third recovers the affine plane
    assert fit_polynomial([CountSample(2, 4), CountSample(3, 9)]) == parse_class("5*L - 6").to_lpolynomial()
    assert fit_polynomial([CountSample(2, 4), CountSample(3, 9), CountSample(5, 25)]) == LPolynomial.monomial(2)


def test_fit_rejects_non_integral():
    with pytest.raises(NonIntegralFitError):
        fit_polynomial([CountSample(2, 1), CountSample(3, 2), CountSample(5, 2)])


def test_fit_preconditions():
    with pytest.raises(ValueError):
        fit_polynomial([CountSample(2, 4)])
    with pytest.raises(ValueError):
        fit_polynomial([CountSample(2, 4), CountSample(2, 4)])


@settings(max_examples=200)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5))
def test_fit_recovers_any_integer_polynomial(coeffs):
    poly = LPolynomial(enumerate(coeffs))
    primes = [2, 3, 5, 7, 11, 13][: max(len(coeffs), 2)]
    assert fit_polynomial([CountSample(q, poly.evaluate(q)) for q in primes]) == poly


def test_fit_against_fraction_oracle():
    # independent check: solve the Vandermonde system by Gaussian elimination
    samples = [(2, 63), (3, 136), (5, 396), (7, 848)]
    n = len(samples)
    rows = [[Fraction(q) ** j for j in range(n)] + [Fraction(y)] for q, y in samples]
    for i in range(n):
        piv = rows[i][i]
        rows[i] = [v / piv for v in rows[i]]
        for k in range(n):
            if k != i:
                f = rows[k][i]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
    solution = {j: int(rows[j][-1]) for j in range(n)}
    assert fit_polynomial([CountSample(q, y) for q, y in samples]) == LPolynomial(solution)
    assert LPolynomial(solution) == parse_class("L^3 + 9*L^2 + 9*L + 1").to_lpolynomial()
