"""Discrepancies and singularity classification.

Two discrepancy functions on σ ∩ N drive everything here:

    h(w) = −LP₋(w) − Z(w)       log ladder, K⁻ semantics (= a_{m*,w})
    g(w) = LP₊(w) − Z_can(w)    canonical ladder, K_{Y/X} semantics

with LP₋ / LP₊ the LP minima over {⟨u, v_i⟩ ≥ −1} / {⟨u, v_i⟩ ≥ 1}. Both are
linear on the cones of a suitable linearity fan, so sign conditions over
all divisorial valuations reduce to finitely many lattice points.

On the canonical ladder divisor bodies use pullback semantics (limiting
valuations), ideal bodies their ordinary valuation.
"""
import itertools
import logging
import random
from fractions import Fraction
from typing import Optional, Union

import sympy

from app.errors import ClassificationError, DivisorError, GeometryError
from app.models import (
    AffineToricVariety, BoundarySpec, CanLevel, Classification, DivisorialValuation,
    FanRefinement, HPolyhedron, IntersectionData, LcCenter, LogLevel,
    MonomialFractionalIdeal, PairSpec, RationalCone, SurfaceLevel, TWeilDivisor, Witness,
)
from app.services.divisors import (
    is_qcartier, limit_val, limiting_relcan, make_boundary, section_polyhedron, val_ideal,
)
from app.services.logging_service import log_event
from app.services.mult import (
    body_ideals, uniform_polyhedron, working_resolution, linearity_fan, pair_value,
)
from app.services.ratgeom import (
    cone_contains, dualize, hilbert_basis, ilp_min, lp_min, primitive, vertex_denominators,
)
from app.services.toric import (
    build_fan, affine_toric_variety, center, common_refinement, fan_cones, log_resolution,
    newton_fan, normal_fan_restricted, resolve, star_subdivide, trivial_fan,
)
from app.utils import lcm_all, pair

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Log ladder
# ---------------------------------------------------------------------------

def stable_log_discrepancy(P: PairSpec, w) -> Fraction:
    """h(w) = −LP₋(w) − Z(w), the limiting log discrepancy at m*."""
    P_minus = uniform_polyhedron(P.variety, -1)
    return -lp_min(P_minus, w).require().value - pair_value(P, w)


def limiting_log_discrepancy(P: PairSpec, v: DivisorialValuation, m: int) -> Fraction:
    """a_{m,F}(X, Z) = ord_F(K_{m,Y/X}) + 1 − val_F(Z) on a log resolution containing F."""
    w = tuple(v.w)
    if not cone_contains(P.variety.sigma, w):
        raise GeometryError(f"{w} is outside σ", code='OUTSIDE_SUPPORT')
    Y = working_resolution(P, m)
    if w not in Y.rays:
        Y = resolve(star_subdivide(Y, w))
    relative = limiting_relcan(Y, m)
    return relative.coefficient(w) + 1 - pair_value(P, w)


def _ladder(values: dict, positive_level, zero_level, negative_level):
    if all(v > 0 for v in values.values()):
        tight = min(values.items(), key=lambda item: (item[1], item[0]))
        return positive_level, [Witness(tight[0], tight[1], 'minimum')]
    if all(v >= 0 for v in values.values()):
        return zero_level, [Witness(w, v, 'zero') for w, v in sorted(values.items()) if v == 0]
    return negative_level, [Witness(w, v, 'negative') for w, v in sorted(values.items()) if v < 0]


def classify_log(P: PairSpec) -> Classification:
    """LOG_TERMINAL / STRICTLY_LOG_CANONICAL / NOT_LOG_CANONICAL from the sign of h."""
    values = {w: stable_log_discrepancy(P, w) for w in linearity_fan(P).rays}
    level, witnesses = _ladder(
        values, LogLevel.LOG_TERMINAL, LogLevel.STRICTLY_LOG_CANONICAL, LogLevel.NOT_LOG_CANONICAL,
    )
    return Classification(log_level=level, log_witnesses=witnesses)


def classify_log_pair(B: Union[BoundarySpec, TWeilDivisor], P: PairSpec) -> Classification:
    """Log ladder of ((X, Δ); Z) from ℓ(w) = ⟨u_{KΔ}, w⟩ − Z(w)."""
    X = P.variety
    boundary = B if isinstance(B, BoundarySpec) else make_boundary(X, B.coefficients)
    fans = [trivial_fan(X)] + [newton_fan(ideal) for ideal in body_ideals(P)]
    values = {w: pair(boundary.slope, w) - pair_value(P, w) for w in common_refinement(fans).rays}
    level, witnesses = _ladder(
        values, LogLevel.LOG_TERMINAL, LogLevel.STRICTLY_LOG_CANONICAL, LogLevel.NOT_LOG_CANONICAL,
    )
    return Classification(log_level=level, log_witnesses=witnesses)


def lc_centers(P: PairSpec) -> list[LcCenter]:
    """Orbit closures V(τ) of the σ-faces meeting the zero locus of h.

    The zero locus is the union of the faces of linearity cones spanned by
    zero rays. Minimal centers (smallest orbit closures, i.e. largest
    faces) are flagged.
    """
    if classify_log(P).log_level is not LogLevel.STRICTLY_LOG_CANONICAL:
        raise ClassificationError('pair is not strictly log canonical', code='NOT_STRICTLY_LC')
    X = P.variety
    L = linearity_fan(P)
    zero = {w for w in L.rays if stable_log_discrepancy(P, w) == 0}
    base = trivial_fan(X)

    found = {}
    for i in range(len(L.cones)):
        zero_rays = [r for r in L.cone_rays(i) if r in zero]
        for k in range(1, len(zero_rays) + 1):
            for subset in itertools.combinations(zero_rays, k):
                w = primitive([sum(x) for x in zip(*subset)])
                face = center(DivisorialValuation(w), base)
                found.setdefault(face.generators, (face, w))

    centers = []
    for gens, (face, w) in sorted(found.items()):
        minimal = not any(set(gens) < set(other) for other in found)
        centers.append(LcCenter(face=face, witness=w, minimal=minimal))
    return centers


# ---------------------------------------------------------------------------
# Canonical ladder
# ---------------------------------------------------------------------------

def _canonical_value(body, w) -> Fraction:
    if isinstance(body, TWeilDivisor):
        return limit_val(DivisorialValuation(tuple(w)), body)
    return val_ideal(DivisorialValuation(tuple(w)), body)


def canonical_pair_value(P: PairSpec, w) -> Fraction:
    """Z_can(w): pullback semantics for divisor bodies."""
    return sum((t.coeff * _canonical_value(t.body, w) for t in P.active_terms), Fraction(0))


def log_discrepancy(P: PairSpec, v: DivisorialValuation) -> Fraction:
    """a_F(X, Z) = ord_F(K_{Y/X}) + 1 − val_F(Z) = LP₊(w) − Z(w)."""
    P_plus = uniform_polyhedron(P.variety, 1)
    return lp_min(P_plus, v.w).require().value - canonical_pair_value(P, v.w)


def _canonical_linearity_fan(P: PairSpec) -> FanRefinement:
    X = P.variety
    fans = [trivial_fan(X), normal_fan_restricted(uniform_polyhedron(X, 1), X)]
    for term in P.active_terms:
        if isinstance(term.body, TWeilDivisor):
            fans.append(normal_fan_restricted(section_polyhedron(term.body), X))
        else:
            fans.append(newton_fan(term.body))
    return common_refinement(fans)


def classify_can(P: PairSpec) -> Classification:
    """TERMINAL / CANONICAL / NEITHER from g on exceptional valuations.

    Per linearity cone τ: NEITHER if g < 0 on some Hilbert basis element.
    Otherwise every primitive exceptional w ∈ τ dominates some element of
    C(τ) = (HB(τ) minus σ-rays) ∪ {v_i + v_j} ∪ {v_i + b}, so the minimum of g
    over C(τ) decides the ladder.
    """
    X = P.variety
    rays = set(X.rays)
    candidates = set()
    for cone in fan_cones(_canonical_linearity_fan(P)):
        basis = hilbert_basis(cone)
        for b in basis:
            value = log_discrepancy(P, DivisorialValuation(b))
            if value < 0:
                return Classification(can_level=CanLevel.NEITHER, can_witnesses=[Witness(b, value, 'negative')])
        sigma_rays = [r for r in cone.generators if r in rays]
        inner = [b for b in basis if b not in rays]
        candidates.update(inner)
        for a, b in itertools.combinations(sigma_rays, 2):
            candidates.add(primitive([x + y for x, y in zip(a, b)]))
        for a in sigma_rays:
            for b in inner:
                candidates.add(primitive([x + y for x, y in zip(a, b)]))
    candidates -= rays

    values = {w: log_discrepancy(P, DivisorialValuation(w)) for w in candidates}
    if not values:
        return Classification(can_level=CanLevel.TERMINAL)
    tight = min(values.items(), key=lambda item: (item[1], item[0]))
    if tight[1] > 1:
        return Classification(can_level=CanLevel.TERMINAL, can_witnesses=[Witness(tight[0], tight[1], 'minimum')])
    if tight[1] == 1:
        witnesses = [Witness(w, v, 'tight') for w, v in sorted(values.items()) if v == 1]
        return Classification(can_level=CanLevel.CANONICAL, can_witnesses=witnesses)
    witnesses = [Witness(w, v, 'below_one') for w, v in sorted(values.items()) if v < 1]
    return Classification(can_level=CanLevel.NEITHER, can_witnesses=witnesses)


def classify(P: PairSpec) -> Classification:
    """Both ladders."""
    log_side = classify_log(P)
    can_side = classify_can(P)
    return Classification(
        log_level=log_side.log_level,
        can_level=can_side.can_level,
        log_witnesses=log_side.log_witnesses,
        can_witnesses=can_side.can_witnesses,
    )


def _divisor_part(P: PairSpec) -> TWeilDivisor:
    X = P.variety
    total = TWeilDivisor.zero(X.rays)
    for term in P.active_terms:
        body = term.body
        if not isinstance(body, TWeilDivisor) or is_qcartier(body) is None:
            raise ClassificationError(
                f"body {term.name or '?'} is not a Q-Cartier divisor", code='NOT_QCARTIER_BODY',
            )
        total = total + body.scaled(term.coeff)
    return total


def canonical_certificate_m(P: PairSpec) -> int:
    """Least m clearing the coefficients of Z and the vertices of {⟨u, v_i⟩ ≥ 1 − z_i}."""
    Z = _divisor_part(P)
    poly = HPolyhedron.of(Z.rays, [1 - z for z in Z.coefficients])
    return lcm_all([z.denominator for z in Z.coefficients] + list(vertex_denominators(poly)))


def canonical_inclusion_check(P: PairSpec, m: int) -> bool:
    """O_X(m(K_X + Z))·O_Y ⊆ O_Y(m(K_Y + Z_Y)) with Z_Y the strict transform.

    The module O_X(m(K_X + Z)) is {⟨u, v_i⟩ ≥ m − m·z_i}; its order val(w)
    is linear on the cones of a log resolution Y. The inclusion is tested on
    a refinement of Y containing every potential first violation: pairs
    a + b with a base ray and, for base rays with val(a) < 0, the least c
    with c·val(a) + val(b) < m.
    """
    X = P.variety
    Z = _divisor_part(P)
    if not Z.scaled(m).is_integral:
        raise DivisorError(f"m·Z is not integral for m={m}", code='NOT_INTEGRAL')
    module = HPolyhedron.of(X.rays, [m - m * z for z in Z.coefficients])
    Y = log_resolution(X, polys=[module])
    base = set(X.rays)

    def order(w) -> Fraction:
        return ilp_min(module, w).require().value

    extra = set()
    for i in range(len(Y.cones)):
        rays = Y.cone_rays(i)
        for a, b in itertools.permutations(rays, 2):
            if a not in base:
                continue
            extra.add(primitive([x + y for x, y in zip(a, b)]))
            val_a, val_b = order(a), order(b)
            if val_a < 0:
                c = (val_b - m) // (-val_a) + 1 if val_b >= m else 1
                extra.add(primitive([c * x + y for x, y in zip(a, b)]))

    refined = Y
    for w in sorted(extra):
        refined = star_subdivide(refined, w)
    refined = resolve(refined)

    strict = Z.as_dict()
    for w in refined.rays:
        if order(w) < m - m * strict.get(w, Fraction(0)):
            logger.debug("canonical_inclusion_check: violated at %s for m=%d", w, m)
            return False
    return True


# ---------------------------------------------------------------------------
# Surfaces
# ---------------------------------------------------------------------------

def hirzebruch_jung(p: int, q: int) -> list[int]:
    """
    Continued fraction p/q = b₁ − 1/(b₂ − 1/(…)).

    Examples:
        >>> hirzebruch_jung(5, 4)
        [2, 2, 2, 2]
        >>> hirzebruch_jung(5, 3)
        [2, 3]
    """
    result = []
    while q:
        b = -((-p) // q)
        result.append(b)
        p, q = q, b * q - p
    return result


def _det2(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def surface_minimal_resolution(X: AffineToricVariety) -> tuple[FanRefinement, IntersectionData]:
    """Minimal resolution of a toric surface singularity.

    Its rays are the Hilbert basis of σ, ordered from v₁ to v₂; adjacent rays
    satisfy w_{i−1} + w_{i+1} = b_i·w_i with E_i² = −b_i. The numerical
    discrepancies solve Σ_j a_j·(E_j·E_i) = b_i − 2.
    """
    if X.rank != 2:
        raise GeometryError('surface data needs lattice rank 2', code='WRONG_DIMENSION')
    v1, v2 = X.rays[0], X.rays[1]
    sign = 1 if _det2(v1, v2) > 0 else -1
    basis = hilbert_basis(X.sigma)
    chain = sorted(
        basis,
        key=lambda h: Fraction(sign * _det2(v1, h), sign * _det2(v1, h) + sign * _det2(h, v2)),
    )
    fan = build_fan(X, [RationalCone.of([a, b], 2) for a, b in zip(chain, chain[1:])])

    curves = chain[1:-1]
    b_values = []
    for i in range(1, len(chain) - 1):
        total = [x + y for x, y in zip(chain[i - 1], chain[i + 1])]
        j = 0 if chain[i][0] != 0 else 1
        b_values.append(total[j] // chain[i][j])

    s = len(curves)
    matrix = [[0] * s for _ in range(s)]
    for i in range(s):
        matrix[i][i] = -b_values[i]
        if i + 1 < s:
            matrix[i][i + 1] = matrix[i + 1][i] = 1

    discrepancies = []
    if s:
        M = sympy.Matrix(matrix)
        if not (-M).is_positive_definite:
            raise GeometryError('intersection matrix is not negative definite', code='NON_POINTED')
        rhs = sympy.Matrix([b - 2 for b in b_values])
        solution = M.LUsolve(rhs)
        if M * solution - rhs != sympy.zeros(s, 1):
            raise GeometryError('discrepancy system has a nonzero residual', code='NON_POINTED')
        discrepancies = [Fraction(int(sympy.Rational(x).p), int(sympy.Rational(x).q)) for x in solution]

    data = IntersectionData(
        curves=list(curves),
        self_intersections=[-b for b in b_values],
        matrix=matrix,
        discrepancies=discrepancies,
    )
    return fan, data


def surface_numerical_classify(X: AffineToricVariety) -> SurfaceLevel:
    _, data = surface_minimal_resolution(X)
    if all(a > -1 for a in data.discrepancies):
        return SurfaceLevel.NUM_LT
    if all(a >= -1 for a in data.discrepancies):
        return SurfaceLevel.NUM_LC_ONLY
    return SurfaceLevel.NEITHER


# ---------------------------------------------------------------------------
# Survey
# ---------------------------------------------------------------------------

SURVEY_RANK3_CONES = (
    ((0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, -1)),
)


def _random_ideal(X: AffineToricVariety, rng: random.Random) -> MonomialFractionalIdeal:
    dual = dualize(X.sigma).generators
    generators = []
    for _ in range(rng.randint(1, 2)):
        weights = [rng.randint(0, 2) for _ in dual]
        if not any(weights):
            weights[0] = 1
        generators.append(tuple(sum(c * g[j] for c, g in zip(weights, dual)) for j in range(X.rank)))
    return MonomialFractionalIdeal.of(generators, X)


def canonical_vs_log_survey(rng: Optional[random.Random] = None, samples: int = 10) -> list[dict]:
    """Compare the two ladders on random toric pairs and record every case
    where the canonical ladder says CANONICAL/TERMINAL but the log ladder says
    NOT_LOG_CANONICAL. Nothing is asserted either way.
    """
    rng = rng or random.Random(0)
    records = []
    for _ in range(samples):
        if rng.random() < 0.5:
            p = rng.randint(2, 7)
            q = rng.choice([q for q in range(1, p) if Fraction(q, p).denominator == p])
            X = affine_toric_variety([(1, 0), (q, p)])
        else:
            X = affine_toric_variety(rng.choice(SURVEY_RANK3_CONES))
        coeff = Fraction(rng.randint(1, 4), rng.randint(1, 4))
        ideal = _random_ideal(X, rng)
        P = PairSpec.of(X, [(coeff, ideal, 'a')])
        can_level = classify_can(P).can_level
        log_level = classify_log(P).log_level
        discrepancy = can_level is not CanLevel.NEITHER and log_level is LogLevel.NOT_LOG_CANONICAL
        records.append({
            'rays': [list(r) for r in X.rays],
            'coeff': coeff,
            'ideal': ideal.to_list(),
            'can_level': can_level.value,
            'log_level': log_level.value,
            'discrepancy': discrepancy,
        })
        if discrepancy:
            log_event('sing', 'canonical_not_lc', details=str(records[-1]), importance='high')
    return records
