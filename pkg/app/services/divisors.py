"""Valuations, pullbacks and relative canonical divisors.

Toric dictionary: D = Σ d_i·D_i gives O_X(−D) = {u : ⟨u, v_i⟩ ≥ d_i}, the
section polyhedron of D. The canonical divisor is the invariant
representative with every coefficient −1, so f_*K_Y = K_X holds for every
refinement by construction.

Natural valuations are integer programs over the section polyhedron,
limiting valuations are their LP relaxations.
"""
import logging
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Union

import sympy

from app.errors import DivisorError
from app.models import (
    AffineToricVariety, BoundarySpec, DivisorialValuation, FanRefinement,
    HPolyhedron, MonomialFractionalIdeal, QCartierData, TWeilDivisor,
)
from app.services.ratgeom import ilp_min, lp_min, min_generators
from app.services.toric import containing_cone
from app.utils import lcm_all, pair, parallel_map

logger = logging.getLogger(__name__)

RaySource = Union[AffineToricVariety, FanRefinement]


def section_polyhedron(D: TWeilDivisor) -> HPolyhedron:
    """{u : ⟨u, v_i⟩ ≥ d_i}, whose lattice points are the monomials of O_X(−D)."""
    return HPolyhedron.of(D.rays, D.coefficients)


def principal_divisor(X: AffineToricVariety, u: Sequence) -> TWeilDivisor:
    """div(χ^u) = Σ ⟨u, v_i⟩·D_i."""
    return TWeilDivisor.of(X.rays, [pair(u, v) for v in X.rays])


def _uniform_polyhedron(rays: Sequence, value) -> HPolyhedron:
    return HPolyhedron.of(rays, [value] * len(rays))


def val_ideal(v: DivisorialValuation, ideal: MonomialFractionalIdeal) -> Fraction:
    """q · min over generators of ⟨g, w⟩."""
    return Fraction(v.q * min(pair(g, v.w) for g in ideal.generators))


def nat_val(v: DivisorialValuation, D: TWeilDivisor) -> Fraction:
    """v♮(D) = v(O_X(−D)), an integer multiple of q."""
    if not D.is_integral:
        raise DivisorError('natural valuations need an integral divisor', code='NOT_INTEGRAL')
    return v.q * ilp_min(section_polyhedron(D), v.w).require().value


def limit_val(v: DivisorialValuation, D: TWeilDivisor) -> Fraction:
    """v(D) = lim v♮(k!D)/k!, computed as one LP over the section polyhedron."""
    return v.q * lp_min(section_polyhedron(D), v.w).require().value


def natural_valuation_sequence(v: DivisorialValuation, D: TWeilDivisor, k_max: int = 6) -> list[tuple[int, Fraction]]:
    """(k, v♮(k!D)/k!) for every k ≤ k_max with k!·D integral."""
    sequence = []
    for k in range(1, k_max + 1):
        scale = factorial(k)
        scaled = D.scaled(scale)
        if scaled.is_integral:
            sequence.append((k, nat_val(v, scaled) / scale))
    return sequence


def divisorial_part(ideal: MonomialFractionalIdeal) -> TWeilDivisor:
    """Coefficient min_g ⟨g, v_i⟩ at every ray of X."""
    X = ideal.variety
    return TWeilDivisor.of(X.rays, [min(pair(g, v) for g in ideal.generators) for v in X.rays])


def reflexive_hull(ideal: MonomialFractionalIdeal) -> MonomialFractionalIdeal:
    """I^∨∨ = O_X(−divisorial_part(I)) in minimal generators."""
    return MonomialFractionalIdeal.of(min_generators(section_polyhedron(divisorial_part(ideal))), ideal.variety)


def nat_pullback(f: FanRefinement, D: TWeilDivisor, threads: int = 1) -> TWeilDivisor:
    """f♮D: natural valuation of D at every ray of f."""
    if not D.is_integral:
        raise DivisorError('natural pullbacks need an integral divisor', code='NOT_INTEGRAL')
    values = parallel_map(lambda w: nat_val(DivisorialValuation(w), D), f.rays, threads)
    return TWeilDivisor.of(f.rays, values)


def pullback(f: FanRefinement, D: TWeilDivisor, threads: int = 1) -> TWeilDivisor:
    """f*D: limiting valuation of D at every ray of f."""
    values = parallel_map(lambda w: limit_val(DivisorialValuation(w), D), f.rays, threads)
    return TWeilDivisor.of(f.rays, values)


def canonical_divisor(target: RaySource) -> TWeilDivisor:
    """K with coefficient −1 at every ray."""
    return TWeilDivisor.of(target.rays, [-1] * len(target.rays))


def limiting_relcan(f: FanRefinement, m: int, threads: int = 1) -> TWeilDivisor:
    """K_{m,Y/X} = K_Y − (1/m)·f♮(mK_X)."""
    if m < 1:
        raise ValueError('m must be positive')
    poly = _uniform_polyhedron(f.base.rays, -m)
    values = parallel_map(lambda w: -1 - ilp_min(poly, w).require().value / m, f.rays, threads)
    return TWeilDivisor.of(f.rays, values)


def relcan(f: FanRefinement, threads: int = 1) -> TWeilDivisor:
    """K_{Y/X} = K_Y + f*(−K_X)."""
    poly = _uniform_polyhedron(f.base.rays, 1)
    values = parallel_map(lambda w: -1 + lp_min(poly, w).require().value, f.rays, threads)
    return TWeilDivisor.of(f.rays, values)


def relcan_minus(f: FanRefinement, threads: int = 1) -> TWeilDivisor:
    """K⁻_{Y/X} = K_Y − f*K_X."""
    poly = _uniform_polyhedron(f.base.rays, -1)
    values = parallel_map(lambda w: -1 - lp_min(poly, w).require().value, f.rays, threads)
    return TWeilDivisor.of(f.rays, values)


def is_qcartier(D: TWeilDivisor) -> Optional[QCartierData]:
    """Slope u ∈ M_Q with ⟨u, v_i⟩ = d_i, or None if there is none."""
    rank = len(D.rays[0])
    matrix = sympy.Matrix([list(r) for r in D.rays])
    rhs = sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in D.coefficients])
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    slope = tuple(Fraction(int(sympy.Rational(solution[j]).p), int(sympy.Rational(solution[j]).q)) for j in range(rank))
    return QCartierData(slope=slope, index=lcm_all(x.denominator for x in slope))


def make_boundary(X: AffineToricVariety, coefficients: Sequence) -> BoundarySpec:
    """Check Δ and attach u_{KΔ} with ⟨u_{KΔ}, v_i⟩ = 1 − δ_i.

    Raises BAD_BOUNDARY for a non-effective Δ and NOT_QCARTIER when
    K_X + Δ has no rational slope.
    """
    delta = TWeilDivisor.of(X.rays, coefficients)
    if not delta.is_effective:
        raise DivisorError('boundary coefficients must be nonnegative', code='BAD_BOUNDARY')
    data = is_qcartier(canonical_divisor(X) + delta)
    if data is None:
        raise DivisorError('K_X + Δ is not Q-Cartier', code='NOT_QCARTIER')
    return BoundarySpec(delta=delta, slope=tuple(-x for x in data.slope), index=data.index)


def log_relcan(f: FanRefinement, delta: Union[TWeilDivisor, BoundarySpec]) -> TWeilDivisor:
    """K^Δ_{Y/X} = K_Y + Δ_Y − f*(K_X + Δ)."""
    boundary = delta if isinstance(delta, BoundarySpec) else make_boundary(f.base, delta.coefficients)
    base = boundary.delta.as_dict()
    values = [-1 + base.get(w, Fraction(0)) + pair(boundary.slope, w) for w in f.rays]
    return TWeilDivisor.of(f.rays, values)


def _chart_polyhedron(Y: FanRefinement, w, E: TWeilDivisor) -> HPolyhedron:
    rays = Y.cone_rays(containing_cone(Y, w))
    return HPolyhedron.of(rays, [E.coefficient(r) for r in rays])


def relative_nat_pullback(Y: FanRefinement, V: FanRefinement, E: TWeilDivisor) -> TWeilDivisor:
    """g♮E for a divisor E on Y and a refinement g: V → Y, chart by chart."""
    if not E.is_integral:
        raise DivisorError('natural pullbacks need an integral divisor', code='NOT_INTEGRAL')
    return TWeilDivisor.of(V.rays, [ilp_min(_chart_polyhedron(Y, w, E), w).require().value for w in V.rays])


def relative_pullback(Y: FanRefinement, V: FanRefinement, E: TWeilDivisor) -> TWeilDivisor:
    """g*E for a divisor E on Y and a refinement g: V → Y, chart by chart."""
    return TWeilDivisor.of(V.rays, [lp_min(_chart_polyhedron(Y, w, E), w).require().value for w in V.rays])


def relative_limiting_relcan(Y: FanRefinement, V: FanRefinement, m: int) -> TWeilDivisor:
    """K_{m,V/Y} = K_V − (1/m)·g♮(mK_Y)."""
    mK = canonical_divisor(Y).scaled(m)
    natural = relative_nat_pullback(Y, V, mK)
    return TWeilDivisor.of(V.rays, [-1 - c / m for c in natural.coefficients])
