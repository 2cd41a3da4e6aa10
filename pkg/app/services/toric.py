"""Fans, normal fans and toric (log) resolutions.

A FanRefinement is a subdivision of the base cone σ into full-dimensional
cones; it stands for the birational model Y → X. Rays are kept
lexicographically sorted so that fans built along different paths compare
equal when they are equal.
"""
import logging
from typing import Iterable, Optional, Sequence

from app.errors import GeometryError
from app.models import (
    AffineToricVariety, DivisorialValuation, FanRefinement, HPolyhedron,
    MonomialFractionalIdeal, RationalCone,
)
from app.services.logging_service import log_event
from app.services.ratgeom import (
    cone_contains, cone_from_inequalities, cone_multiplicity, extreme_rays,
    facet_normals, hilbert_basis, is_full_dimensional, is_pointed, min_generators,
    primitive, triangulate, vertices,
)
from app.utils import pair

logger = logging.getLogger(__name__)


def affine_toric_variety(rays: Iterable[Sequence[int]]) -> AffineToricVariety:
    """Validate ray generators and build X.

    The rays must be primitive and exactly the extreme rays of a pointed
    full-dimensional cone. Their order is kept.
    """
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    if not rays:
        raise GeometryError('at least one ray is required', code='NON_POINTED')
    rank = len(rays[0])
    for r in rays:
        if len(r) != rank:
            raise GeometryError(f"ray {r} has the wrong length", code='WRONG_DIMENSION')
        if primitive(r) != r:
            raise GeometryError(f"ray {r} is not primitive", code='ZERO_VECTOR' if not any(r) else 'NON_POINTED')
    if len(set(rays)) != len(rays):
        raise GeometryError('duplicate rays', code='NON_POINTED')
    sigma = RationalCone.of(rays, rank)
    if not is_full_dimensional(sigma) or not is_pointed(sigma):
        raise GeometryError('rays do not span a pointed full-dimensional cone', code='NON_POINTED')
    if set(extreme_rays(sigma)) != set(rays):
        raise GeometryError('some rays are not extreme', code='NON_POINTED')
    return AffineToricVariety(rays=rays, rank=rank)


def build_fan(base: AffineToricVariety, cones: Iterable[RationalCone]) -> FanRefinement:
    ray_sets = {tuple(sorted(extreme_rays(c))) for c in cones}
    rays = sorted({r for c in ray_sets for r in c})
    index = {r: i for i, r in enumerate(rays)}
    indexed = sorted(tuple(sorted(index[r] for r in c)) for c in ray_sets)
    return FanRefinement(base=base, rays=tuple(rays), cones=tuple(indexed))


def trivial_fan(X: AffineToricVariety) -> FanRefinement:
    """The fan {σ} (identity morphism)."""
    return build_fan(X, [X.sigma])


def fan_cones(fan: FanRefinement) -> list[RationalCone]:
    return [fan.cone(i) for i in range(len(fan.cones))]


def normal_fan_of_points(points: Iterable[Sequence], X: AffineToricVariety) -> FanRefinement:
    """Subdivision of σ on whose cones w ↦ min_p ⟨p, w⟩ is linear."""
    points = sorted({tuple(p) for p in points})
    sigma_normals = list(facet_normals(X.sigma))
    cones = []
    for p in points:
        inequalities = sigma_normals + [tuple(a - b for a, b in zip(q, p)) for q in points if q != p]
        cone = cone_from_inequalities(inequalities, X.rank)
        if is_full_dimensional(cone):
            cones.append(cone)
    return build_fan(X, cones)


def newton_fan(ideal: MonomialFractionalIdeal) -> FanRefinement:
    return normal_fan_of_points(ideal.generators, ideal.variety)


def normal_fan_restricted(poly: HPolyhedron, X: AffineToricVariety, integral: bool = False) -> FanRefinement:
    """Coarsest subdivision of σ on which w ↦ lp_min(poly, w) is linear.

    With ``integral=True`` the minimal lattice generators are used instead
    of the vertices, giving the linearity domains of w ↦ ilp_min(poly, w).
    """
    points = min_generators(poly) if integral else vertices(poly)
    if not points:
        raise GeometryError('polyhedron is empty', code='INFEASIBLE')
    return normal_fan_of_points(points, X)


def common_refinement(fans: Sequence[FanRefinement]) -> FanRefinement:
    """Pairwise intersections of maximal cones, refining every input."""
    if not fans:
        raise ValueError('at least one fan is required')
    base = fans[0].base
    for fan in fans[1:]:
        if fan.base != base:
            raise GeometryError('fans live over different base cones', code='BASE_MISMATCH')

    current = fan_cones(fans[0])
    for fan in fans[1:]:
        merged = []
        for first in current:
            first_normals = facet_normals(first)
            for second in fan_cones(fan):
                cone = cone_from_inequalities(list(first_normals) + list(facet_normals(second)), base.rank)
                if is_full_dimensional(cone):
                    merged.append(cone)
        current = merged
    return build_fan(base, current)


def star_subdivide(fan: FanRefinement, w: Sequence[int]) -> FanRefinement:
    """Stellar subdivision of the fan at the primitive vector w ∈ σ."""
    w = primitive(w)
    if not cone_contains(fan.base.sigma, w):
        raise GeometryError(f"{w} is outside the support of the fan", code='OUTSIDE_SUPPORT')
    if w in fan.rays:
        return fan
    rank = fan.base.rank
    cones = []
    for i, cone in enumerate(fan_cones(fan)):
        if not cone_contains(cone, w):
            cones.append(cone)
            continue
        rays = fan.cone_rays(i)
        for normal in facet_normals(cone):
            if pair(normal, w) > 0:
                facet = [r for r in rays if pair(normal, r) == 0]
                cones.append(RationalCone.of(facet + [w], rank))
    return build_fan(fan.base, cones)


def is_smooth(fan: FanRefinement) -> bool:
    rank = fan.base.rank
    return all(len(c) == rank and cone_multiplicity(fan.cone(i)) == 1 for i, c in enumerate(fan.cones))


def _triangulated(fan: FanRefinement) -> FanRefinement:
    cones = []
    for cone in fan_cones(fan):
        cones.extend(triangulate(cone))
    return build_fan(fan.base, cones)


def _max_multiplicity(fan: FanRefinement) -> int:
    return max(cone_multiplicity(c) for c in fan_cones(fan))


def resolve(fan: FanRefinement, reverse: bool = False) -> FanRefinement:
    """Smooth refinement by stellar subdivisions at Hilbert basis elements.

    The fan is first triangulated without new rays. Then, repeatedly, the
    lexicographically least cone of maximal multiplicity is subdivided at
    the Hilbert basis element that minimises the resulting maximal
    multiplicity (ties lexicographic). ``reverse`` picks greatest instead of
    least at both choices.
    """
    fan = _triangulated(fan)
    steps = 0
    while True:
        multiplicities = [(cone_multiplicity(c), fan.cone_rays(i)) for i, c in enumerate(fan_cones(fan))]
        worst = max(m for m, _ in multiplicities)
        if worst == 1:
            break
        tied = [rays for m, rays in multiplicities if m == worst]
        target = max(tied) if reverse else min(tied)
        cone = RationalCone.of(target, fan.base.rank)
        candidates = [h for h in hilbert_basis(cone) if h not in target]

        scored = []
        for h in candidates:
            refined = star_subdivide(fan, h)
            scored.append((_max_multiplicity(refined), h, refined))
        if reverse:
            best = min(scored, key=lambda s: (s[0], tuple(-x for x in s[1])))
        else:
            best = min(scored, key=lambda s: (s[0], s[1]))
        fan = best[2]
        steps += 1
    logger.debug("resolve: %d subdivisions, %d rays", steps, len(fan.rays))
    return fan


def log_resolution(
    X: AffineToricVariety,
    ideals: Iterable[MonomialFractionalIdeal] = (),
    polys: Iterable[HPolyhedron] = (),
    reverse: bool = False,
) -> FanRefinement:
    """Smooth refinement of σ on which every ideal and every section module is locally principal."""
    fans = [trivial_fan(X)]
    fans.extend(newton_fan(ideal) for ideal in ideals)
    fans.extend(normal_fan_restricted(poly, X, integral=True) for poly in polys)
    fan = resolve(common_refinement(fans), reverse=reverse)
    log_event('toric', 'log_resolution_built', details=f"{len(fan.rays)} rays, {len(fan.cones)} cones")
    return fan


def containing_cone(fan: FanRefinement, w: Sequence[int]) -> int:
    """Index of the first maximal cone containing w."""
    for i, cone in enumerate(fan_cones(fan)):
        if cone_contains(cone, w):
            return i
    raise GeometryError(f"{tuple(w)} is outside the support of the fan", code='OUTSIDE_SUPPORT')


def center(v: DivisorialValuation, fan: FanRefinement) -> RationalCone:
    """Smallest cone of the fan whose relative interior contains v.w."""
    index = containing_cone(fan, v.w)
    cone = fan.cone(index)
    rays = fan.cone_rays(index)
    tight = [n for n in facet_normals(cone) if pair(n, v.w) == 0]
    face = [r for r in rays if all(pair(n, r) == 0 for n in tight)]
    return RationalCone.of(face, fan.base.rank)


def is_locally_principal(fan: FanRefinement, points: Iterable[Sequence]) -> bool:
    """True if on every cone a single point attains the minimum at all rays."""
    points = [tuple(p) for p in points]
    for i in range(len(fan.cones)):
        rays = fan.cone_rays(i)
        minima = [min(pair(p, r) for p in points) for r in rays]
        if not any(all(pair(p, r) == mn for r, mn in zip(rays, minima)) for p in points):
            return False
    return True


def fan_to_dict(fan: FanRefinement, smooth: Optional[bool] = None) -> dict:
    data = fan.to_dict()
    if smooth is not None:
        data['smooth'] = smooth
    return data
