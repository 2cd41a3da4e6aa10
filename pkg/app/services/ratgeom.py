"""Exact rational polyhedral kernel.

Cone duality, exact linear programming (two-phase tableau simplex with
Bland's rule), integer minimisation over polyhedra with conical recession,
Hilbert bases and minimal monomial generators.

Everything is computed in ``int`` / ``Fraction``; nothing is floating point.
Vectors are plain integer tuples. Whether a vector lives in N or in M is
fixed by its position in the call (cone generators and objectives are in N,
polyhedron points are in M).
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence

import sympy

from app.errors import GeometryError
from app.models import HPolyhedron, RationalCone, Vector
from app.utils import lcm_all, pair

logger = logging.getLogger(__name__)


class LPStatus(Enum):
    """Outcome of an exact optimisation."""
    OPTIMAL = 'OPTIMAL'
    UNBOUNDED = 'UNBOUNDED'
    INFEASIBLE = 'INFEASIBLE'


@dataclass(frozen=True)
class LPResult:
    """Result of lp_min / ilp_min."""
    status: LPStatus
    value: Optional[Fraction] = None
    witness: Optional[tuple] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL

    def require(self) -> 'LPResult':
        """Return self, or raise GeometryError(UNBOUNDED/INFEASIBLE)."""
        if not self.is_optimal:
            raise GeometryError(f"optimisation is {self.status.value.lower()}", code=self.status.value)
        return self


# ---------------------------------------------------------------------------
# Small exact linear algebra
# ---------------------------------------------------------------------------

def _to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _matrix(rows: Sequence[Sequence], ncols: int) -> sympy.Matrix:
    entries = [sympy.Rational(x.numerator, x.denominator) for row in rows for x in map(Fraction, row)]
    return sympy.Matrix(len(rows), ncols, entries)


def _rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return _matrix(rows, ncols).rank()


def _nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    return [[_to_fraction(x) for x in column] for column in _matrix(rows, ncols).nullspace()]


def _det(matrix: Sequence[Sequence]) -> Fraction:
    if not matrix:
        return Fraction(1)
    return _to_fraction(_matrix(matrix, len(matrix)).det())


def _cross(rows: Sequence[Sequence], ncols: int) -> Vector:
    """Generalised cross product of ncols − 1 integer rows."""
    result = []
    for j in range(ncols):
        minor = [[row[c] for c in range(ncols) if c != j] for row in rows]
        value = _det(minor)
        result.append(int(value) if j % 2 == 0 else -int(value))
    return tuple(result)


def _solve(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[list[Fraction]]:
    """Solve a square system exactly; None if singular."""
    n = len(matrix)
    system = _matrix(matrix, n)
    if system.rank() < n:
        return None
    solution = system.LUsolve(_matrix([[b] for b in rhs], 1))
    return [_to_fraction(x) for x in solution]


def primitive(v: Iterable) -> Vector:
    """
    Divide a nonzero vector by the gcd of its entries.

    Rational entries are cleared first.

    Examples:
        >>> primitive((2, 2))
        (1, 1)
        >>> primitive((0, -4, 6))
        (0, -2, 3)
    """
    entries = [Fraction(x) for x in v]
    if all(x == 0 for x in entries):
        raise GeometryError('the zero vector has no primitive generator', code='ZERO_VECTOR')
    scale = lcm_all(x.denominator for x in entries)
    ints = [int(x * scale) for x in entries]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def lattice_points_in_box(lo: Sequence[int], hi: Sequence[int]):
    """All integer points of the box ∏[lo_j, hi_j]."""
    return itertools.product(*(range(int(a), int(b) + 1) for a, b in zip(lo, hi)))


def _negate(v: Vector) -> Vector:
    return tuple(-x for x in v)


def _sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8192)
def cone_hrep(cone: RationalCone) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """(inequalities, equations): cone = {w : ⟨n, w⟩ ≥ 0, ⟨e, w⟩ = 0}.

    Inequalities are the primitive facet normals inside the linear span of
    the cone, equations a basis of its orthogonal complement.
    """
    d = cone.rank
    gens = cone.generators
    if not gens:
        return (), tuple(tuple(int(i == j) for j in range(d)) for i in range(d))

    equations = tuple(primitive(v) for v in _nullspace(gens, d))
    dim = d - len(equations)

    inequalities = set()
    for subset in itertools.combinations(gens, dim - 1):
        normal = _cross(list(subset) + list(equations), d)
        if not any(normal):
            continue
        values = [pair(normal, g) for g in gens]
        if all(v >= 0 for v in values):
            inequalities.add(primitive(normal))
        elif all(v <= 0 for v in values):
            inequalities.add(primitive(_negate(normal)))
    return tuple(sorted(inequalities)), equations


def facet_normals(cone: RationalCone) -> tuple[Vector, ...]:
    """Primitive inward facet normals of a full-dimensional cone."""
    return cone_hrep(cone)[0]


def cone_dim(cone: RationalCone) -> int:
    return cone.rank - len(cone_hrep(cone)[1])


def is_full_dimensional(cone: RationalCone) -> bool:
    return bool(cone.generators) and not cone_hrep(cone)[1]


def is_pointed(cone: RationalCone) -> bool:
    ineqs, eqs = cone_hrep(cone)
    return _rank(list(ineqs) + list(eqs), cone.rank) == cone.rank


def cone_contains(cone: RationalCone, w: Sequence) -> bool:
    ineqs, eqs = cone_hrep(cone)
    return all(pair(n, w) >= 0 for n in ineqs) and all(pair(e, w) == 0 for e in eqs)


def in_relative_interior(cone: RationalCone, w: Sequence) -> bool:
    ineqs, eqs = cone_hrep(cone)
    return all(pair(n, w) > 0 for n in ineqs) and all(pair(e, w) == 0 for e in eqs)


@lru_cache(maxsize=8192)
def extreme_rays(cone: RationalCone) -> tuple[Vector, ...]:
    """Irredundant primitive generators of a pointed cone."""
    if not is_pointed(cone):
        raise GeometryError('cone contains a line', code='NON_POINTED')
    ineqs, eqs = cone_hrep(cone)
    d = cone.rank
    result = []
    for g in cone.generators:
        tight = [n for n in ineqs if pair(n, g) == 0]
        if _rank(tight + list(eqs), d) == d - 1:
            result.append(g)
    return tuple(sorted(result))


def is_simplicial(cone: RationalCone) -> bool:
    return len(extreme_rays(cone)) == cone_dim(cone)


def dualize(cone: RationalCone) -> RationalCone:
    """σ^∨ = {u : ⟨u, w⟩ ≥ 0 for all w ∈ σ} for pointed full-dimensional σ."""
    ineqs, eqs = cone_hrep(cone)
    if eqs:
        raise GeometryError('cone is not full-dimensional, its dual contains a line', code='NON_POINTED')
    if not is_pointed(cone):
        raise GeometryError('cone contains a line', code='NON_POINTED')
    return RationalCone.of(ineqs, cone.rank)


def cone_from_inequalities(inequalities: Iterable[Sequence], rank: int) -> RationalCone:
    """The pointed cone {w : ⟨a, w⟩ ≥ 0 for every a}.

    The inequality vectors must span the whole space (true whenever they
    include the facet normals of a pointed full-dimensional σ).
    """
    ineq_cone = RationalCone.of([primitive(a) for a in inequalities if any(a)], rank)
    ineqs, eqs = cone_hrep(ineq_cone)
    if eqs:
        raise GeometryError('inequalities do not cut out a pointed cone', code='NON_POINTED')
    return RationalCone(generators=ineqs, rank=rank)


def intersect_cones(first: RationalCone, second: RationalCone) -> RationalCone:
    """Intersection of two full-dimensional pointed cones."""
    normals = list(facet_normals(first)) + list(facet_normals(second))
    return cone_from_inequalities(normals, first.rank)


def _triangulate(rays: Sequence[Vector], rank: int) -> list[tuple[Vector, ...]]:
    """Pulling triangulation with respect to the lexicographic order.

    The induced triangulation of a common face only depends on the face,
    so triangulating every cone of a fan this way gives a fan.
    """
    rays = sorted(rays)
    cone = RationalCone(generators=tuple(rays), rank=rank)
    if len(rays) == cone_dim(cone):
        return [tuple(rays)]
    apex = rays[0]
    result = []
    for normal in cone_hrep(cone)[0]:
        if pair(normal, apex) == 0:
            continue
        facet = [r for r in rays if pair(normal, r) == 0]
        for simplex in _triangulate(facet, rank):
            result.append(tuple(sorted((apex,) + simplex)))
    return sorted(set(result))


def triangulate(cone: RationalCone) -> list[RationalCone]:
    """Simplicial cones subdividing a pointed cone without new rays."""
    return [RationalCone(generators=s, rank=cone.rank) for s in _triangulate(extreme_rays(cone), cone.rank)]


def _parallelepiped_points(simplex: Sequence[Vector], rank: int) -> set:
    """Lattice points Σλ_i g_i with 0 ≤ λ_i < 1."""
    k = len(simplex)
    rows = None
    for candidate in itertools.combinations(range(rank), k):
        minor = [[g[c] for g in simplex] for c in candidate]
        if _det(minor) != 0:
            rows = candidate
            break
    inverse = sympy.Matrix([[g[c] for g in simplex] for c in rows]).inv()
    inverse = [[_to_fraction(inverse[i, j]) for j in range(k)] for i in range(k)]

    lo = [sum(min(0, g[c]) for g in simplex) for c in range(rank)]
    hi = [sum(max(0, g[c]) for g in simplex) for c in range(rank)]
    points = set()
    for p in lattice_points_in_box(lo, hi):
        coords = [sum(inverse[i][j] * p[rows[j]] for j in range(k)) for i in range(k)]
        if not all(0 <= x < 1 for x in coords):
            continue
        combination = tuple(sum(coords[i] * simplex[i][c] for i in range(k)) for c in range(rank))
        if combination == tuple(p):
            points.add(tuple(p))
    return points


@lru_cache(maxsize=4096)
def hilbert_basis(cone: RationalCone) -> tuple[Vector, ...]:
    """Minimal generating set of the semigroup cone ∩ N, lexicographically sorted."""
    if cone.is_zero:
        return ()
    rays = extreme_rays(cone)
    candidates = set(rays)
    for simplex in _triangulate(rays, cone.rank):
        candidates.update(_parallelepiped_points(simplex, cone.rank))
    candidates.discard(tuple(0 for _ in range(cone.rank)))

    basis = []
    for x in candidates:
        reducible = any(y != x and cone_contains(cone, _sub(x, y)) for y in candidates)
        if not reducible:
            basis.append(x)
    return tuple(sorted(basis))


def cone_multiplicity(cone: RationalCone) -> int:
    """Index of the sublattice spanned by the generators in its saturation."""
    gens = cone.generators
    if not gens:
        return 1
    d = cone.rank
    if _rank(gens, d) < len(gens):
        raise GeometryError('cone generators are linearly dependent', code='NON_SIMPLICIAL')
    if len(gens) == d:
        return abs(int(sympy.Matrix(gens).det()))
    g = 0
    for cols in itertools.combinations(range(d), len(gens)):
        g = gcd(g, int(_det([[v[c] for c in cols] for v in gens])))
    return abs(g)


# ---------------------------------------------------------------------------
# Polyhedra
# ---------------------------------------------------------------------------

def _pivot(tableau: list, obj: list, row: int, col: int) -> None:
    pv = tableau[row][col]
    tableau[row] = [x / pv for x in tableau[row]]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            f = r[col]
            tableau[i] = [a - f * b for a, b in zip(r, tableau[row])]
    if obj[col] != 0:
        f = obj[col]
        obj[:] = [a - f * b for a, b in zip(obj, tableau[row])]


def _iterate(tableau: list, basis: list, obj: list, allowed: range) -> LPStatus:
    """Bland's rule: smallest entering index, smallest leaving basis index."""
    while True:
        col = next((j for j in allowed if obj[j] < 0), None)
        if col is None:
            return LPStatus.OPTIMAL
        best = None
        for i, r in enumerate(tableau):
            if r[col] > 0:
                ratio = r[-1] / r[col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return LPStatus.UNBOUNDED
        _pivot(tableau, obj, best[1], col)
        basis[best[1]] = col


def _simplex(rows: list, rhs: list, cost: list) -> tuple[LPStatus, Optional[list]]:
    """min cost·x subject to rows·x = rhs, x ≥ 0."""
    m, n = len(rows), len(cost)
    tableau = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        row = [Fraction(x) for x in row]
        b = Fraction(b)
        if b < 0:
            row, b = [-x for x in row], -b
        tableau.append(row + [Fraction(int(i == j)) for j in range(m)] + [b])
    basis = [n + i for i in range(m)]

    # phase 1: minimise the sum of artificials
    obj = [-sum(t[j] for t in tableau) for j in range(n)] + [Fraction(0)] * m + [-sum(t[-1] for t in tableau)]
    _iterate(tableau, basis, obj, range(n + m))
    if -obj[-1] > 0:
        return LPStatus.INFEASIBLE, None

    dummy = [Fraction(0)] * (n + m + 1)
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                continue
            _pivot(tableau, dummy, i, col)
            basis[i] = col
        keep.append(i)
    tableau = [tableau[i] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2
    obj = [Fraction(c) for c in cost] + [Fraction(0)] * m + [Fraction(0)]
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [a - f * x for a, x in zip(obj, tableau[i])]
    status = _iterate(tableau, basis, obj, range(n))
    if status is not LPStatus.OPTIMAL:
        return status, None
    x = [Fraction(0)] * (n + m)
    for i, b in enumerate(basis):
        x[b] = tableau[i][-1]
    return LPStatus.OPTIMAL, x[:n]


@lru_cache(maxsize=65536)
def _lp_min(poly: HPolyhedron, objective: tuple) -> LPResult:
    d = poly.rank
    m = len(poly.constraints)
    rows = []
    for i, (normal, _) in enumerate(poly.constraints):
        slack = [0] * m
        slack[i] = -1
        rows.append(list(normal) + [-x for x in normal] + slack)
    cost = list(objective) + [-x for x in objective] + [0] * m
    status, x = _simplex(rows, list(poly.rhs), cost)
    if status is not LPStatus.OPTIMAL:
        return LPResult(status)
    witness = tuple(x[j] - x[d + j] for j in range(d))
    return LPResult(LPStatus.OPTIMAL, Fraction(pair(witness, objective)), witness)


def lp_min(poly: HPolyhedron, objective: Sequence[int]) -> LPResult:
    """Exact min of ⟨u, objective⟩ over the rational polyhedron.

    The witness is an optimal vertex when the polyhedron is pointed.
    """
    return _lp_min(poly, tuple(objective))


@lru_cache(maxsize=4096)
def vertices(poly: HPolyhedron) -> tuple[tuple[Fraction, ...], ...]:
    """Vertices of a pointed polyhedron, lexicographically sorted."""
    d = poly.rank
    if _rank(poly.normals, d) < d:
        return ()
    found = set()
    for idx in itertools.combinations(range(len(poly.constraints)), d):
        x = _solve([poly.constraints[i][0] for i in idx], [poly.constraints[i][1] for i in idx])
        if x is not None and poly.contains(x):
            found.add(tuple(x))
    return tuple(sorted(found))


def vertex_denominators(poly: HPolyhedron) -> tuple[int, ...]:
    """Per vertex, the lcm of its coordinate denominators."""
    return tuple(lcm_all(x.denominator for x in v) for v in vertices(poly))


def recession_cone(poly: HPolyhedron) -> RationalCone:
    """{u : ⟨u, normal⟩ ≥ 0 for every constraint} as a cone in M."""
    return cone_from_inequalities(poly.normals, poly.rank)


@lru_cache(maxsize=4096)
def min_generators(poly: HPolyhedron) -> tuple[Vector, ...]:
    """Minimal G ⊂ poly ∩ M with poly ∩ M = ∪_g (g + recession ∩ M).

    Every minimal generator lies in conv(vertices) + Σ[0,1)·r over the
    recession generators, so a bounding box of that set is enumerated and
    filtered by g − h ∉ poly for every Hilbert basis element h.
    """
    verts = vertices(poly)
    if not verts:
        if not lp_min(poly, tuple(0 for _ in range(poly.rank))).is_optimal:
            raise GeometryError('polyhedron is empty', code='INFEASIBLE')
        raise GeometryError('polyhedron has no vertices', code='NON_POINTED')
    recession = recession_cone(poly)
    if not is_full_dimensional(recession):
        raise GeometryError('recession cone is not full-dimensional', code='NON_POINTED')
    basis = hilbert_basis(recession)

    d = poly.rank
    lo = []
    hi = []
    for j in range(d):
        low = min(v[j] for v in verts) + sum(min(0, r[j]) for r in recession.generators)
        high = max(v[j] for v in verts) + sum(max(0, r[j]) for r in recession.generators)
        lo.append(Fraction(low).__floor__())
        hi.append(Fraction(high).__ceil__())

    generators = []
    for u in lattice_points_in_box(lo, hi):
        if not poly.contains(u):
            continue
        if any(poly.contains(_sub(u, h)) for h in basis):
            continue
        generators.append(tuple(u))
    if not generators:
        raise GeometryError('polyhedron has no lattice points', code='INFEASIBLE')
    return tuple(sorted(generators))


def ilp_min(poly: HPolyhedron, objective: Sequence[int]) -> LPResult:
    """Exact min of ⟨u, objective⟩ over poly ∩ M.

    The objective must be nonnegative on the recession cone; the minimum is
    then attained at a minimal generator.
    """
    objective = tuple(objective)
    relaxation = lp_min(poly, objective)
    if not relaxation.is_optimal:
        return relaxation
    best = min(min_generators(poly), key=lambda g: (pair(g, objective), g))
    return LPResult(LPStatus.OPTIMAL, Fraction(pair(best, objective)), best)
