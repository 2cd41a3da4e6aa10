"""Tests for the exact polyhedral kernel."""
from fractions import Fraction
from math import gcd

import pytest

from app.errors import GeometryError
from app.models import HPolyhedron, RationalCone
from app.services.ratgeom import (
    LPStatus, cone_contains, cone_dim, cone_from_inequalities, cone_multiplicity,
    dualize, extreme_rays, facet_normals, hilbert_basis, ilp_min, in_relative_interior,
    intersect_cones, is_pointed, is_simplicial, lattice_points_in_box, lp_min, min_generators,
    primitive, recession_cone, triangulate, vertex_denominators, vertices,
)


QUADRIC_SIGMA = RationalCone.of([(1, 0), (1, 2)])
CONIFOLD_SIGMA = RationalCone.of([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
NQG_SIGMA = RationalCone.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -1)])


class TestPrimitive:

    def test_divides_by_gcd(self):
        assert primitive((2, 4)) == (1, 2)
        assert primitive((0, -4, 6)) == (0, -2, 3)

    def test_clears_denominators(self):
        assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)

    def test_zero_vector(self):
        with pytest.raises(GeometryError) as exc:
            primitive((0, 0))
        assert exc.value.code == 'ZERO_VECTOR'


class TestCones:

    def test_quadric_dual(self):
        assert dualize(QUADRIC_SIGMA).generators == ((0, 1), (2, -1))

    def test_conifold_dual(self):
        expected = RationalCone.of([(1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1)])
        assert dualize(CONIFOLD_SIGMA) == expected

    def test_double_dual(self):
        assert dualize(dualize(NQG_SIGMA)) == NQG_SIGMA

    def test_facet_normals_are_inward(self):
        for normal in facet_normals(CONIFOLD_SIGMA):
            assert all(sum(a * b for a, b in zip(normal, g)) >= 0 for g in CONIFOLD_SIGMA.generators)

    def test_extreme_rays_drop_redundant_generators(self):
        cone = RationalCone.of([(1, 0), (1, 1), (0, 1)])
        assert extreme_rays(cone) == ((0, 1), (1, 0))

    def test_non_pointed(self):
        cone = RationalCone.of([(1, 0), (-1, 0), (0, 1)])
        assert not is_pointed(cone)
        with pytest.raises(GeometryError) as exc:
            extreme_rays(cone)
        assert exc.value.code == 'NON_POINTED'

    def test_containment(self):
        assert cone_contains(QUADRIC_SIGMA, (1, 1))
        assert not cone_contains(QUADRIC_SIGMA, (0, 1))
        assert in_relative_interior(QUADRIC_SIGMA, (1, 1))
        assert not in_relative_interior(QUADRIC_SIGMA, (1, 0))

    def test_lower_dimensional_cone(self):
        ray = RationalCone.of([(1, 1, 0)])
        assert cone_dim(ray) == 1
        assert cone_contains(ray, (2, 2, 0))
        assert not cone_contains(ray, (1, 2, 0))

    def test_cone_from_inequalities(self):
        cone = cone_from_inequalities([(1, 0), (0, 1), (1, -1)], 2)
        assert extreme_rays(cone) == ((1, 0), (1, 1))

    def test_intersection(self):
        first = RationalCone.of([(1, 0), (0, 1)])
        second = RationalCone.of([(1, 1), (-1, 1)])
        assert extreme_rays(intersect_cones(first, second)) == ((0, 1), (1, 1))


class TestTriangulationAndMultiplicity:

    def test_simplicial(self):
        assert is_simplicial(QUADRIC_SIGMA)
        assert not is_simplicial(CONIFOLD_SIGMA)

    def test_conifold_triangulation(self):
        pieces = triangulate(CONIFOLD_SIGMA)
        assert len(pieces) == 2
        assert all(cone_multiplicity(c) == 1 for c in pieces)
        assert all((0, 0, 1) in c.generators and (1, 1, 1) in c.generators for c in pieces)

    def test_multiplicity(self):
        assert cone_multiplicity(QUADRIC_SIGMA) == 2
        assert cone_multiplicity(RationalCone.of([(1, 0), (3, 5)])) == 5
        assert cone_multiplicity(RationalCone.of([(1, 0, 0), (0, 1, 0)], 3)) == 1

    def test_multiplicity_needs_independent_generators(self):
        with pytest.raises(GeometryError) as exc:
            cone_multiplicity(CONIFOLD_SIGMA)
        assert exc.value.code == 'NON_SIMPLICIAL'


class TestHilbertBasis:

    def test_quadric(self):
        assert hilbert_basis(QUADRIC_SIGMA) == ((1, 0), (1, 1), (1, 2))

    def test_quadric_dual(self):
        assert hilbert_basis(dualize(QUADRIC_SIGMA)) == ((0, 1), (1, 0), (2, -1))

    def test_nqg_dual(self):
        basis = hilbert_basis(dualize(NQG_SIGMA))
        assert set(basis) == {(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 2), (0, 1, 1)}

    def test_smooth_cone(self):
        assert hilbert_basis(RationalCone.of([(1, 0, 0), (0, 1, 0), (0, 0, 1)])) == (
            (0, 0, 1), (0, 1, 0), (1, 0, 0),
        )

    def test_cyclic_quotient(self):
        # Cone((1,0),(2,5)): 5/3 = [2, 3]
        assert hilbert_basis(RationalCone.of([(1, 0), (2, 5)])) == ((1, 0), (1, 1), (1, 2), (2, 5))


class TestLinearProgramming:

    def test_quadric_minimum(self):
        poly = HPolyhedron.of([(1, 0), (1, 2)], [-1, -1])
        result = lp_min(poly, (1, 1))
        assert result.status is LPStatus.OPTIMAL
        assert result.value == -1

    def test_fractional_optimum(self):
        poly = HPolyhedron.of([(1, 0), (1, 2)], [1, 0])
        assert lp_min(poly, (1, 1)).value == Fraction(1, 2)
        assert ilp_min(poly, (1, 1)).value == 1

    def test_unbounded(self):
        poly = HPolyhedron.of([(1, 0), (1, 2)], [-1, -1])
        result = lp_min(poly, (-1, 0))
        assert result.status is LPStatus.UNBOUNDED
        with pytest.raises(GeometryError) as exc:
            result.require()
        assert exc.value.code == 'UNBOUNDED'

    def test_infeasible(self):
        poly = HPolyhedron.of([(1, 0), (-1, 0)], [1, 0])
        result = lp_min(poly, (1, 0))
        assert result.status is LPStatus.INFEASIBLE
        with pytest.raises(GeometryError) as exc:
            result.require()
        assert exc.value.code == 'INFEASIBLE'

    def test_lp_agrees_with_vertices(self):
        poly = HPolyhedron.of(NQG_SIGMA.generators, [-1] * 4)
        for w in [(1, 1, 0), (1, 0, 1), (2, 3, 1), (1, 1, 1)]:
            best = min(sum(a * b for a, b in zip(v, w)) for v in vertices(poly))
            assert lp_min(poly, w).value == best


class TestPolyhedra:

    def test_quadric_vertices(self):
        poly = HPolyhedron.of([(1, 0), (1, 2)], [-1, -1])
        assert vertices(poly) == ((-1, 0),)
        assert min_generators(poly) == ((-1, 0),)

    def test_nqg_vertices(self):
        poly = HPolyhedron.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -1)], [-1] * 4)
        assert vertices(poly) == ((-1, Fraction(-1, 2), -1), (0, -1, -1))
        assert vertex_denominators(poly) == (2, 1)

    def test_nqg_plus_vertices(self):
        poly = HPolyhedron.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -1)], [1] * 4)
        assert vertices(poly) == ((1, 1, 1), (1, 1, 2))

    def test_recession_cone(self):
        poly = HPolyhedron.of([(1, 0), (1, 2)], [5, -3])
        assert recession_cone(poly) == dualize(QUADRIC_SIGMA)

    def test_min_generators_of_a_section_module(self):
        # O_X(-L) on the quadric cone: {u1 >= 1, u1 + 2u2 >= 0}
        poly = HPolyhedron.of([(1, 0), (1, 2)], [1, 0])
        assert min_generators(poly) == ((1, 0), (2, -1))

    def test_min_generators_of_empty_polyhedron(self):
        poly = HPolyhedron.of([(1, 0), (-1, 0), (0, 1)], [1, 0, 0])
        with pytest.raises(GeometryError) as exc:
            min_generators(poly)
        assert exc.value.code == 'INFEASIBLE'

    def test_ilp_witness_is_a_lattice_point(self):
        poly = HPolyhedron.of([(1, 0), (1, 2)], [1, 0])
        result = ilp_min(poly, (1, 1))
        assert all(isinstance(x, int) for x in result.witness)
        assert poly.contains(result.witness)


def _random_w(rng, rays):
    """A primitive lattice point of the cone spanned by ``rays``."""
    weights = [rng.randint(0, 3) for _ in rays]
    if not any(weights):
        weights[rng.randrange(len(rays))] = 1
    return primitive([sum(c * r[j] for c, r in zip(weights, rays)) for j in range(len(rays[0]))])


def _decomposes(point, basis, cone, seen):
    if not any(point):
        return True
    if point in seen:
        return seen[point]
    seen[point] = False
    for b in basis:
        rest = tuple(p - x for p, x in zip(point, b))
        if cone_contains(cone, rest) and _decomposes(rest, basis, cone, seen):
            seen[point] = True
            break
    return seen[point]


class TestRatgeomProperties:

    SIGMAS = [QUADRIC_SIGMA, CONIFOLD_SIGMA, NQG_SIGMA]

    def test_lp_bounds_ilp_and_scaling_closes_the_gap(self, rng):
        for _ in range(12):
            sigma = rng.choice(self.SIGMAS)
            rays = sigma.generators
            poly = HPolyhedron.of(rays, [rng.randint(-2, 2) for _ in rays])
            w = _random_w(rng, rays)
            lp = lp_min(poly, w).require().value
            ilp = ilp_min(poly, w).require()
            assert lp <= ilp.value
            assert poly.contains(ilp.witness)
            k = 1
            for d in vertex_denominators(poly):
                k = k * d // gcd(k, d)
            assert ilp_min(poly.scaled(k), w).require().value == k * lp

    def test_dualize_is_an_involution(self, rng):
        checked = 0
        while checked < 8:
            gens = [(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(rng.randint(3, 5))]
            cone = RationalCone.of(gens)
            if cone_dim(cone) < 3:
                continue
            assert set(dualize(dualize(cone)).generators) == set(extreme_rays(cone))
            checked += 1

    def test_hilbert_basis_generates(self, rng):
        for _ in range(5):
            p = rng.randint(2, 9)
            q = rng.choice([q for q in range(1, p) if gcd(p, q) == 1])
            cone = RationalCone.of([(1, 0), (q, p)])
            basis = hilbert_basis(cone)
            for _ in range(10):
                combination = tuple(sum(rng.randint(0, 3) * b[j] for b in basis) for j in range(2))
                assert cone_contains(cone, combination)
            seen = {}
            for point in lattice_points_in_box([0, 0], [6, 6]):
                if cone_contains(cone, point):
                    assert _decomposes(tuple(point), basis, cone, seen), (p, q, point)

    def test_min_generators_are_minimal(self, rng):
        for _ in range(8):
            sigma = rng.choice(self.SIGMAS)
            dual = dualize(sigma)
            poly = HPolyhedron.of(sigma.generators, [rng.randint(-2, 2) for _ in sigma.generators])
            generators = min_generators(poly)
            assert list(generators) == sorted(generators)
            for g in generators:
                assert poly.contains(g)
                for h in generators:
                    if h != g:
                        assert not cone_contains(dual, tuple(a - b for a, b in zip(g, h)))
