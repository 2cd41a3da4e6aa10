"""Tests for multiplier ideals and thresholds."""
from fractions import Fraction

import pytest

from app.errors import ClassificationError, ComputationCancelled, DivisorError
from app.models import MonomialFractionalIdeal, PairSpec, TWeilDivisor
from app.services.divisors import make_boundary
from app.services.mult import (
    adjoint_ideal, adjoint_sequence_check, asymptotic_contains_base_ideal,
    asymptotic_mult_ideal, base_ideal, compatible_boundary_search, ideal_contains,
    ideal_equal, ideal_power, ideal_product, ideal_sum, jumping_numbers, lct,
    log_lct, log_mult_ideal, monomial_membership, mult_ideal, mult_ideal_m,
    stabilization_certificate, valuative_mult_ideal,
)
from app.services.ratgeom import dualize
from app.utils import CancellationToken


@pytest.fixture
def maximal(quadric):
    return MonomialFractionalIdeal.of([(0, 1), (1, 0), (2, -1)], quadric)


@pytest.fixture
def cusp(plane):
    return PairSpec.of(plane, [(1, MonomialFractionalIdeal.of([(2, 0), (0, 3)], plane), 'cusp')])


@pytest.fixture
def line(plane):
    return PairSpec.of(plane, [(1, MonomialFractionalIdeal.of([(1, 0)], plane), 'line')])


class TestIdealArithmetic:

    def test_membership(self, maximal):
        assert monomial_membership((1, 1), maximal)
        assert monomial_membership((3, -1), maximal)
        assert not monomial_membership((0, 0), maximal)

    def test_containment_and_equality(self, quadric, maximal):
        unit = MonomialFractionalIdeal.unit(quadric)
        assert ideal_contains(unit, maximal)
        assert not ideal_contains(maximal, unit)
        assert ideal_equal(ideal_sum(maximal, unit), unit)

    def test_square_of_maximal_ideal(self, maximal):
        square = ideal_power(maximal, 2)
        assert square.generators == ((0, 2), (1, 1), (2, 0), (3, -1), (4, -2))
        assert ideal_equal(square, ideal_product(maximal, maximal))


class TestStabilization:

    @pytest.mark.parametrize('fixture, expected', [
        ('plane', 1), ('quadric', 1), ('conifold', 1), ('nqg', 2),
    ])
    def test_m_star(self, request, fixture, expected):
        X = request.getfixturevalue(fixture)
        assert stabilization_certificate(X).m_star == expected

    def test_nqg_certificate_lists_vertices(self, nqg):
        certificate = stabilization_certificate(nqg)
        assert certificate.denominators == (2, 1)
        assert certificate.to_dict()['m_star'] == 2


class TestMultiplierIdeals:

    def test_cusp(self, cusp):
        ideal, certificate = mult_ideal(cusp)
        assert ideal.generators == ((0, 1), (1, 0))
        assert certificate.m_star == 1

    def test_line(self, line):
        assert mult_ideal(line)[0].generators == ((1, 0),)

    def test_trivial_pair_on_log_terminal_cone(self, quadric):
        assert mult_ideal(PairSpec.of(quadric))[0].is_unit

    def test_valuative_criterion_agrees(self, cusp, quadric, maximal):
        vertex = PairSpec.of(quadric, [(Fraction(3, 2), maximal, 'maximal')])
        for P in (cusp, vertex):
            assert ideal_equal(valuative_mult_ideal(P), mult_ideal(P)[0])

    def test_reverse_resolution_gives_the_same_ideal(self, nqg):
        maximal = MonomialFractionalIdeal.of([(0, 1, 0), (0, 1, 1), (0, 1, 2), (1, 0, 0), (1, 0, 1)], nqg)
        P = PairSpec.of(nqg, [(1, maximal, 'maximal')])
        assert ideal_equal(mult_ideal(P)[0], mult_ideal(P, reverse=True)[0])

    def test_m_must_be_positive(self, cusp):
        with pytest.raises(ValueError):
            mult_ideal_m(cusp, 0)

    def test_non_integral_divisor_body(self, quadric):
        P = PairSpec.of(quadric, [(1, TWeilDivisor.of(quadric.rays, ['1/2', '0']), 'half')])
        with pytest.raises(DivisorError) as exc:
            mult_ideal(P)
        assert exc.value.code == 'NOT_INTEGRAL'


class TestThresholds:

    def test_cusp_lct(self, cusp):
        assert lct(cusp) == Fraction(5, 6)

    def test_line_lct(self, line):
        assert lct(line) == 1

    def test_quadric_vertex_lct(self, quadric, maximal):
        assert lct(PairSpec.of(quadric, [(1, maximal, 'maximal')])) == 1

    def test_trivial_pair_has_no_threshold(self, quadric):
        assert lct(PairSpec.of(quadric)) is None

    def test_jumping_numbers_of_a_line(self, line):
        assert jumping_numbers(line, 2) == [1, 2]

    def test_jumping_numbers_of_the_cusp(self, cusp):
        assert jumping_numbers(cusp, 1) == [Fraction(5, 6)]

    def test_first_jump_is_the_lct(self, cusp):
        assert jumping_numbers(cusp, 2)[0] == lct(cusp)

    def test_t_max_must_be_positive(self, cusp):
        with pytest.raises(ValueError):
            jumping_numbers(cusp, 0)


class TestLogPairs:

    def test_log_mult_ideal_with_boundary(self, quadric):
        boundary = make_boundary(quadric, ['1/2', '1/2'])
        assert log_mult_ideal(boundary, PairSpec.of(quadric)).is_unit

    def test_log_lct(self, quadric, maximal):
        boundary = make_boundary(quadric, ['1/2', '1/2'])
        assert log_lct(boundary, PairSpec.of(quadric, [(1, maximal, 'maximal')])) == Fraction(1, 2)

    def test_boundary_sharing_a_component(self, quadric):
        boundary = make_boundary(quadric, ['1/2', '1/2'])
        P = PairSpec.of(quadric, [(1, TWeilDivisor.of(quadric.rays, [1, 0]), 'L')])
        with pytest.raises(DivisorError) as exc:
            log_mult_ideal(boundary, P)
        assert exc.value.code == 'BAD_BOUNDARY'


class TestAsymptotic:

    def test_base_ideal(self, quadric):
        L = TWeilDivisor.of(quadric.rays, [1, 0])
        assert base_ideal(quadric, L, 2).is_unit

    def test_asymptotic_ideal_of_a_qcartier_divisor(self, quadric):
        L = TWeilDivisor.of(quadric.rays, [1, 0])
        assert asymptotic_mult_ideal(quadric, L, 1).is_unit
        assert asymptotic_contains_base_ideal(quadric, L)

    def test_c_must_be_positive(self, quadric):
        with pytest.raises(ValueError):
            asymptotic_mult_ideal(quadric, TWeilDivisor.of(quadric.rays, [1, 0]), 0)

    @pytest.mark.parametrize('max_rounds', [1, 2])
    def test_too_few_rounds_is_not_stabilized(self, quadric, max_rounds):
        L = TWeilDivisor.of(quadric.rays, [1, 0])
        with pytest.raises(ClassificationError) as exc:
            asymptotic_mult_ideal(quadric, L, 1, max_rounds=max_rounds)
        assert exc.value.code == 'NOT_STABILIZED'
        assert exc.value.details['rounds'] == max_rounds

    def test_three_rounds_suffice_for_a_constant_sequence(self, quadric):
        L = TWeilDivisor.of(quadric.rays, [1, 0])
        assert asymptotic_mult_ideal(quadric, L, 1, max_rounds=3).is_unit


class TestAdjoint:

    def test_plane(self, plane):
        P = PairSpec.of(plane, [(1, MonomialFractionalIdeal.of([(0, 2)], plane), 'y2')])
        H = TWeilDivisor.of(plane.rays, [1, 0])
        assert adjoint_ideal(P, H).generators == ((0, 2),)
        assert adjoint_sequence_check(P, H).passed

    def test_quadric_boundary(self, quadric, maximal):
        H = TWeilDivisor.of(quadric.rays, [1, 1])
        assert ideal_equal(adjoint_ideal(PairSpec.of(quadric), H), maximal)

    def test_h_must_be_cartier(self, quadric):
        with pytest.raises(DivisorError) as exc:
            adjoint_ideal(PairSpec.of(quadric), TWeilDivisor.of(quadric.rays, [1, 0]))
        assert exc.value.code == 'NOT_CARTIER'

    def test_h_must_avoid_z(self, line, plane):
        with pytest.raises(DivisorError) as exc:
            adjoint_ideal(line, TWeilDivisor.of(plane.rays, [1, 0]))
        assert exc.value.code == 'SHARED_COMPONENT'


class TestBoundarySearch:

    def test_quadric_finds_zero_boundary(self, quadric):
        boundary = compatible_boundary_search(PairSpec.of(quadric), 2)
        assert boundary.delta.coefficients == (0, 0)

    def test_m_must_be_at_least_two(self, quadric):
        with pytest.raises(ValueError):
            compatible_boundary_search(PairSpec.of(quadric), 1)

    def test_cancelled_search(self, quadric):
        token = CancellationToken()
        token.cancel()
        with pytest.raises(ComputationCancelled):
            compatible_boundary_search(PairSpec.of(quadric), 2, token=token)


def _random_ideal(rng, X, size=2):
    dual = dualize(X.sigma).generators
    generators = []
    for _ in range(size):
        weights = [rng.randint(0, 2) for _ in dual]
        if not any(weights):
            weights[rng.randrange(len(dual))] = 1
        generators.append(tuple(sum(c * g[j] for c, g in zip(weights, dual)) for j in range(X.rank)))
    return MonomialFractionalIdeal.of(generators, X)


def _random_pair(rng, X):
    coeff = Fraction(rng.randint(1, 4), rng.randint(1, 3))
    return PairSpec.of(X, [(coeff, _random_ideal(rng, X), 'a')])


class TestMultiplierProperties:

    @pytest.mark.parametrize('fixture', ['quadric', 'nqg'])
    def test_monotone_chain(self, request, rng, fixture):
        X = request.getfixturevalue(fixture)
        unit = MonomialFractionalIdeal.unit(X)
        for _ in range(2 if X.rank == 2 else 1):
            P = _random_pair(rng, X)
            for m in (1, 2, 3):
                J = mult_ideal_m(P, m)
                assert ideal_contains(unit, J)
                for q in (2, 3):
                    assert ideal_contains(mult_ideal_m(P, m * q), J), (P.terms, m, q)

    @pytest.mark.parametrize('fixture', ['plane', 'quadric', 'conifold'])
    def test_larger_pairs_give_smaller_ideals(self, request, rng, fixture):
        X = request.getfixturevalue(fixture)
        for _ in range(3):
            a = _random_ideal(rng, X)
            b = _random_ideal(rng, X, size=1)
            t = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            J = mult_ideal(PairSpec.of(X, [(t, a, 'a')]))[0]
            bigger_coefficient = mult_ideal(PairSpec.of(X, [(t + Fraction(1, 2), a, 'a')]))[0]
            smaller_ideal = mult_ideal(PairSpec.of(X, [(t, ideal_product(a, b), 'ab')]))[0]
            assert ideal_contains(J, bigger_coefficient)
            assert ideal_contains(J, smaller_ideal)

    @pytest.mark.parametrize('fixture', ['plane', 'quadric'])
    def test_small_perturbations_do_not_change_the_ideal(self, request, rng, fixture):
        X = request.getfixturevalue(fixture)
        for _ in range(3):
            a = _random_ideal(rng, X)
            later = [j for j in jumping_numbers(PairSpec.of(X, [(1, a, 'a')]), 2) if j > 1]
            gap = (min(later) if later else 2) - 1
            epsilon = Fraction(1, int(1 / gap) + 1)
            J = mult_ideal(PairSpec.of(X, [(1, a, 'a')]))[0]
            for t in (epsilon / 2, epsilon):
                assert ideal_equal(mult_ideal(PairSpec.of(X, [(1 + t, a, 'a')]))[0], J), (a.generators, t)

    @pytest.mark.parametrize('fixture', ['quadric', 'nqg'])
    def test_valuative_route_agrees(self, request, rng, fixture):
        X = request.getfixturevalue(fixture)
        for _ in range(2):
            P = _random_pair(rng, X)
            assert ideal_equal(valuative_mult_ideal(P), mult_ideal(P)[0]), P.terms
