"""Multiplier ideals, thresholds, asymptotic and adjoint ideals.

Conventions:
    * Z(w) = Σ a_k·val_w(Z_k). Divisor bodies are valuated through their
      ideal O_X(−D) (natural semantics), so they must be integral.
    * Ideals are monomial modules over σ^∨ ∩ M, stored by their unique minimal
      generating set; equality of ideals is equality of those sets.
    * J_m is read off a log resolution Y of (X, Z + O_X(mK_X)) as the
      pushforward of ⌈K_{m,Y/X} − f^{-1}(Z)⌉.
    * m* = lcm of the vertex denominators of P₁ = {⟨u, v_i⟩ ≥ −1}. At m*
      every ILP over m*·P₁ is attained at a scaled vertex, hence
      K_{m*,Y/X} = K⁻_{Y/X} and J(X, Z) = J_{m*}(X, Z).
"""
import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from app.errors import ClassificationError, DivisorError
from app.models import (
    AdjointSequenceCheck, AffineToricVariety, BoundarySpec, DivisorialValuation,
    FanRefinement, HPolyhedron, MonomialFractionalIdeal, PairSpec,
    StabilizationCertificate, TWeilDivisor,
)
from app.services.divisors import (
    canonical_divisor, is_qcartier, limiting_relcan, log_relcan, make_boundary,
    nat_val, section_polyhedron, val_ideal,
)
from app.services.logging_service import log_event
from app.services.ratgeom import (
    cone_contains, dualize, hilbert_basis, ilp_min, lattice_points_in_box, lp_min,
    min_generators, vertex_denominators, vertices,
)
from app.services.toric import (
    common_refinement, fan_cones, log_resolution, newton_fan,
    normal_fan_restricted, star_subdivide, trivial_fan,
)
from app.utils import CancellationToken, ceil_fraction, floor_fraction, lcm_all, pair

logger = logging.getLogger(__name__)

Body = Union[MonomialFractionalIdeal, TWeilDivisor]


# ---------------------------------------------------------------------------
# Monomial module arithmetic
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _dual_cone(X: AffineToricVariety):
    return dualize(X.sigma)


def _minimize(points, X: AffineToricVariety) -> tuple:
    dual = _dual_cone(X)
    points = sorted({tuple(p) for p in points})
    minimal = []
    for g in points:
        if not any(h != g and cone_contains(dual, tuple(a - b for a, b in zip(g, h))) for h in points):
            minimal.append(g)
    return tuple(minimal)


def ideal_from_points(points, X: AffineToricVariety) -> MonomialFractionalIdeal:
    """Module generated by the points, in minimal generators."""
    return MonomialFractionalIdeal(generators=_minimize(points, X), variety=X)


def monomial_membership(u: Sequence[int], ideal: MonomialFractionalIdeal) -> bool:
    dual = _dual_cone(ideal.variety)
    return any(cone_contains(dual, tuple(a - b for a, b in zip(u, g))) for g in ideal.generators)


def ideal_contains(big: MonomialFractionalIdeal, small: MonomialFractionalIdeal) -> bool:
    return all(monomial_membership(g, big) for g in small.generators)


def ideal_equal(first: MonomialFractionalIdeal, second: MonomialFractionalIdeal) -> bool:
    X = first.variety
    return _minimize(first.generators, X) == _minimize(second.generators, X)


def ideal_sum(first: MonomialFractionalIdeal, second: MonomialFractionalIdeal) -> MonomialFractionalIdeal:
    return ideal_from_points(first.generators + second.generators, first.variety)


def ideal_product(first: MonomialFractionalIdeal, second: MonomialFractionalIdeal) -> MonomialFractionalIdeal:
    points = [tuple(a + b for a, b in zip(g, h)) for g in first.generators for h in second.generators]
    return ideal_from_points(points, first.variety)


def ideal_power(ideal: MonomialFractionalIdeal, n: int) -> MonomialFractionalIdeal:
    result = MonomialFractionalIdeal.unit(ideal.variety)
    for _ in range(n):
        result = ideal_product(result, ideal)
    return result


def ideal_shift(ideal: MonomialFractionalIdeal, h: Sequence[int]) -> MonomialFractionalIdeal:
    """χ^h·I."""
    return MonomialFractionalIdeal(
        generators=tuple(sorted(tuple(a + b for a, b in zip(g, h)) for g in ideal.generators)),
        variety=ideal.variety,
    )


# ---------------------------------------------------------------------------
# Pair values
# ---------------------------------------------------------------------------

def body_ideal(body: Body, X: AffineToricVariety) -> MonomialFractionalIdeal:
    """The ideal that a body contributes: itself, or O_X(−D) for a divisor."""
    if isinstance(body, TWeilDivisor):
        if not body.is_integral:
            raise DivisorError('divisor bodies must be integral', code='NOT_INTEGRAL')
        return MonomialFractionalIdeal.of(min_generators(section_polyhedron(body)), X)
    return body


def body_value(body: Body, w: Sequence[int]) -> Fraction:
    v = DivisorialValuation(tuple(w))
    if isinstance(body, TWeilDivisor):
        return nat_val(v, body)
    return val_ideal(v, body)


def pair_value(P: PairSpec, w: Sequence[int]) -> Fraction:
    """Z(w) = Σ a_k·val_w(Z_k)."""
    return sum((term.coeff * body_value(term.body, w) for term in P.active_terms), Fraction(0))


def body_ideals(P: PairSpec) -> list[MonomialFractionalIdeal]:
    return [body_ideal(term.body, P.variety) for term in P.active_terms]


def uniform_polyhedron(X: AffineToricVariety, value) -> HPolyhedron:
    return HPolyhedron.of(X.rays, [value] * len(X.rays))


def stabilization_certificate(X: AffineToricVariety) -> StabilizationCertificate:
    poly = uniform_polyhedron(X, -1)
    denominators = vertex_denominators(poly)
    return StabilizationCertificate(
        m_star=lcm_all(denominators),
        vertices=vertices(poly),
        denominators=denominators,
    )


def linearity_fan(P: PairSpec) -> FanRefinement:
    """Common refinement on which LP₋ and every body valuation are linear."""
    X = P.variety
    fans = [trivial_fan(X), normal_fan_restricted(uniform_polyhedron(X, -1), X)]
    fans.extend(newton_fan(ideal) for ideal in body_ideals(P))
    return common_refinement(fans)


def working_resolution(P: PairSpec, m: int, reverse: bool = False) -> FanRefinement:
    X = P.variety
    return log_resolution(X, ideals=body_ideals(P), polys=[uniform_polyhedron(X, -m)], reverse=reverse)


# ---------------------------------------------------------------------------
# Multiplier ideals
# ---------------------------------------------------------------------------

def pushforward_module(f: FanRefinement, E: TWeilDivisor) -> MonomialFractionalIdeal:
    """f_*O_Y(E) = {u : ⟨u, w⟩ ≥ −e_w at every ray w of f}."""
    if not E.is_integral:
        raise DivisorError('pushforward needs an integral divisor', code='NOT_INTEGRAL')
    poly = HPolyhedron.of(f.rays, [-c for c in E.coefficients])
    return MonomialFractionalIdeal.of(min_generators(poly), f.base)


def _multiplier_on(Y: FanRefinement, P: PairSpec, m: int, threads: int = 1) -> MonomialFractionalIdeal:
    relative = limiting_relcan(Y, m, threads=threads)
    exponents = [ceil_fraction(k - pair_value(P, w)) for w, k in zip(Y.rays, relative.coefficients)]
    return pushforward_module(Y, TWeilDivisor.of(Y.rays, exponents))


def mult_ideal_m(P: PairSpec, m: int, reverse: bool = False, threads: int = 1) -> MonomialFractionalIdeal:
    """J_m(X, Z) = f_*O_Y(⌈K_{m,Y/X} − f^{-1}(Z)⌉)."""
    if m < 1:
        raise ValueError('m must be positive')
    Y = working_resolution(P, m, reverse=reverse)
    return _multiplier_on(Y, P, m, threads=threads)


def mult_ideal(P: PairSpec, reverse: bool = False, threads: int = 1) -> tuple[MonomialFractionalIdeal, StabilizationCertificate]:
    """J(X, Z) = J_{m*}(X, Z) together with the certificate for m*."""
    certificate = stabilization_certificate(P.variety)
    ideal = mult_ideal_m(P, certificate.m_star, reverse=reverse, threads=threads)
    return ideal, certificate


def valuative_mult_ideal(P: PairSpec) -> MonomialFractionalIdeal:
    """J(X, Z) through the valuative criterion.

    u ∈ J iff ⟨u, h⟩ > LP₋(h) + Z(h) for every Hilbert basis element h of
    every cone of the linearity fan; the right-hand side is linear on each
    such cone.
    """
    X = P.variety
    P_minus = uniform_polyhedron(X, -1)
    tests = set()
    for cone in fan_cones(linearity_fan(P)):
        tests.update(hilbert_basis(cone))
    tests = sorted(tests)
    rhs = [floor_fraction(lp_min(P_minus, h).require().value + pair_value(P, h)) + 1 for h in tests]
    return MonomialFractionalIdeal.of(min_generators(HPolyhedron.of(tests, rhs)), X)


def _check_boundary_against(boundary: BoundarySpec, P: PairSpec) -> None:
    for ray, delta in zip(boundary.delta.rays, boundary.delta.coefficients):
        if delta >= 1:
            raise DivisorError('boundary has a coefficient ≥ 1', code='BAD_BOUNDARY')
        if delta > 0 and pair_value(P, ray) > 0:
            raise DivisorError(f"boundary component {ray} is shared with Z", code='BAD_BOUNDARY')


def log_mult_ideal(B: Union[BoundarySpec, TWeilDivisor], P: PairSpec, reverse: bool = False) -> MonomialFractionalIdeal:
    """J((X, Δ); Z) = f_*O_Y(⌈K^Δ_{Y/X} − f^{-1}(Z)⌉)."""
    X = P.variety
    boundary = B if isinstance(B, BoundarySpec) else make_boundary(X, B.coefficients)
    _check_boundary_against(boundary, P)
    Y = log_resolution(X, ideals=body_ideals(P), reverse=reverse)
    relative = log_relcan(Y, boundary)
    exponents = [ceil_fraction(k - pair_value(P, w)) for w, k in zip(Y.rays, relative.coefficients)]
    return pushforward_module(Y, TWeilDivisor.of(Y.rays, exponents))


# ---------------------------------------------------------------------------
# Thresholds and jumping numbers
# ---------------------------------------------------------------------------

def lct(P: PairSpec) -> Optional[Fraction]:
    """min over linearity-fan rays with Z(w) > 0 of −LP₋(w)/Z(w); None stands for infinity."""
    X = P.variety
    P_minus = uniform_polyhedron(X, -1)
    best = None
    for w in linearity_fan(P).rays:
        discrepancy = -lp_min(P_minus, w).require().value
        if discrepancy <= 0:
            raise ClassificationError(f"X is not log terminal at {w}", code='NOT_LOG_TERMINAL')
        z = pair_value(P, w)
        if z > 0:
            t = discrepancy / z
            if best is None or t < best:
                best = t
    return best


def log_lct(B: Union[BoundarySpec, TWeilDivisor], P: PairSpec) -> Optional[Fraction]:
    """Threshold of ((X, Δ); Z): min of ⟨u_{KΔ}, w⟩/Z(w); None stands for infinity."""
    X = P.variety
    boundary = B if isinstance(B, BoundarySpec) else make_boundary(X, B.coefficients)
    fans = [trivial_fan(X)] + [newton_fan(ideal) for ideal in body_ideals(P)]
    best = None
    for w in common_refinement(fans).rays:
        discrepancy = pair(boundary.slope, w)
        if discrepancy <= 0:
            raise ClassificationError(f"(X, Δ) is not log terminal at {w}", code='NOT_LOG_TERMINAL')
        z = pair_value(P, w)
        if z > 0:
            t = discrepancy / z
            if best is None or t < best:
                best = t
    return best


def jumping_numbers(P: PairSpec, t_max, threads: int = 1) -> list[Fraction]:
    """All t ∈ (0, t_max] where J(X, tZ) drops.

    Candidates are the t at which ⌈A(w) − t·Z(w)⌉ changes at some ray of the
    stabilized resolution; each is kept only if the ideal really changes
    between t − 1/(2L) and t, L the lcm of all candidate denominators.
    """
    t_max = Fraction(t_max)
    if t_max <= 0:
        raise ValueError('t_max must be positive')
    m = stabilization_certificate(P.variety).m_star
    Y = working_resolution(P, m)
    relative = limiting_relcan(Y, m, threads=threads)

    values = {w: pair_value(P, w) for w in Y.rays}
    candidates = set()
    for w, a in zip(Y.rays, relative.coefficients):
        z = values[w]
        if z <= 0:
            continue
        for n in range(ceil_fraction(a - t_max * z), ceil_fraction(a)):
            t = (a - n) / z
            if 0 < t <= t_max:
                candidates.add(t)
    if not candidates:
        return []
    step = Fraction(1, 2 * lcm_all(t.denominator for t in candidates))

    cache = {}

    def ideal_at(t: Fraction) -> tuple:
        exponents = tuple(ceil_fraction(a - t * values[w]) for w, a in zip(Y.rays, relative.coefficients))
        if exponents not in cache:
            cache[exponents] = pushforward_module(Y, TWeilDivisor.of(Y.rays, exponents)).generators
        return cache[exponents]

    jumps = [t for t in sorted(candidates) if ideal_at(t) != ideal_at(t - step)]
    log_event('mult', 'jumping_numbers', details=f"{len(jumps)} of {len(candidates)} candidates")
    return jumps


# ---------------------------------------------------------------------------
# Asymptotic and adjoint ideals
# ---------------------------------------------------------------------------

def base_ideal(X: AffineToricVariety, D: TWeilDivisor, n: int) -> MonomialFractionalIdeal:
    """b_n = image of H⁰(O_X(nD)) ⊗ O_X(−nD) in O_X."""
    # never empty: σ^∨ is full-dimensional
    sections = HPolyhedron.of(X.rays, [-n * c for c in D.coefficients])
    twist = HPolyhedron.of(X.rays, [n * c for c in D.coefficients])
    points = [
        tuple(a + b for a, b in zip(g, h))
        for g in min_generators(sections) for h in min_generators(twist)
    ]
    return ideal_from_points(points, X)


def asymptotic_mult_ideal(X: AffineToricVariety, D: TWeilDivisor, c, max_rounds: int = 6) -> MonomialFractionalIdeal:
    """J(X, c·‖D‖) as the stable value of J(X, (c/n)·b_n) along n = n₀·2^k.

    n₀ clears the vertex denominators of the section polyhedra of D and −D.
    Iteration stops after two consecutive agreements. Running out of rounds
    first raises NOT_STABILIZED.
    """
    if not D.is_integral:
        raise DivisorError('asymptotic ideals need an integral divisor', code='NOT_INTEGRAL')
    c = Fraction(c)
    if c <= 0:
        raise ValueError('c must be positive')
    n0 = lcm_all(vertex_denominators(section_polyhedron(D)) + vertex_denominators(section_polyhedron(-D)))

    previous = None
    agreements = 0
    n = n0
    for _ in range(max_rounds):
        pair_n = PairSpec.of(X, [(c / n, base_ideal(X, D, n), f"b_{n}")])
        current = mult_ideal(pair_n)[0]
        if previous is not None and current.generators == previous.generators:
            agreements += 1
            if agreements == 2:
                break
        else:
            agreements = 0
        previous = current
        n *= 2
    if agreements < 2:
        log_event('mult', 'asymptotic_not_stabilized', details=f"c={c}, rounds={max_rounds}", importance='medium')
        raise ClassificationError(
            f"J(X, (c/n)·b_n) did not stabilize within {max_rounds} rounds",
            code='NOT_STABILIZED',
            details={'rounds': max_rounds, 'last_n': n // 2},
        )
    logger.debug("asymptotic_mult_ideal: stopped at n=%d", n)
    return previous


def asymptotic_contains_base_ideal(X: AffineToricVariety, D: TWeilDivisor, c=1) -> bool:
    """b_{n₀} ⊆ J(X, c·‖D‖) for c ≤ 1."""
    n0 = lcm_all(vertex_denominators(section_polyhedron(D)) + vertex_denominators(section_polyhedron(-D)))
    return ideal_contains(asymptotic_mult_ideal(X, D, c), base_ideal(X, D, n0))


def _cartier_slope(X: AffineToricVariety, H: TWeilDivisor) -> tuple:
    if not H.is_integral or not all(c in (0, 1) for c in H.coefficients):
        raise DivisorError('H must be reduced and effective', code='NOT_CARTIER')
    data = is_qcartier(H)
    if data is None or data.index != 1:
        raise DivisorError('H is not Cartier', code='NOT_CARTIER')
    return tuple(int(x) for x in data.slope)


def _separate_components(Y: FanRefinement, components: Sequence) -> FanRefinement:
    while True:
        shared = None
        for cone in Y.cones:
            present = [Y.rays[i] for i in cone if Y.rays[i] in components]
            if len(present) > 1:
                shared = present[:2]
                break
        if shared is None:
            return Y
        Y = star_subdivide(Y, tuple(a + b for a, b in zip(*shared)))


def adjoint_ideal(P: PairSpec, H: TWeilDivisor, threads: int = 1) -> MonomialFractionalIdeal:
    """adj_H(X, Z) at m*: pushforward of ⌈K_{m,Y/X} − f^{-1}(Z) − f*H + H_Y⌉.

    H must be a reduced effective Cartier divisor with no component in the
    divisorial support of Z.
    """
    X = P.variety
    h = _cartier_slope(X, H)
    components = [r for r, c in zip(H.rays, H.coefficients) if c == 1]
    for ray in components:
        if pair_value(P, ray) > 0:
            raise DivisorError(f"component {ray} of H lies in the support of Z", code='SHARED_COMPONENT')

    m = stabilization_certificate(X).m_star
    Y = _separate_components(working_resolution(P, m), components)
    relative = limiting_relcan(Y, m, threads=threads)
    exponents = []
    for w, k in zip(Y.rays, relative.coefficients):
        strict = 1 if w in components else 0
        exponents.append(ceil_fraction(k - pair_value(P, w)) - pair(h, w) + strict)
    return pushforward_module(Y, TWeilDivisor.of(Y.rays, exponents))


def adjoint_sequence_check(P: PairSpec, H: TWeilDivisor, margin: int = 3) -> AdjointSequenceCheck:
    """Degreewise checks of 0 → J·O(−H) → adj_H → restriction to H → 0.

    Monomials are tested in a box around the generators of adj_H widened by
    ``margin``.
    """
    X = P.variety
    h = _cartier_slope(X, H)
    components = [r for r, c in zip(H.rays, H.coefficients) if c == 1]
    J = mult_ideal(P)[0]
    adjoint = adjoint_ideal(P, H)
    kernel = ideal_shift(J, h)
    dual = _dual_cone(X)

    points = list(adjoint.generators) + list(kernel.generators)
    lo = [min(p[j] for p in points) - 1 for j in range(X.rank)]
    hi = [max(p[j] for p in points) + margin for j in range(X.rank)]

    kernel_identity = True
    exact = True
    for u in lattice_points_in_box(lo, hi):
        in_adjoint = monomial_membership(u, adjoint)
        in_kernel = monomial_membership(u, kernel)
        vanishes = cone_contains(dual, tuple(a - b for a, b in zip(u, h)))
        if (in_adjoint and vanishes) != in_kernel:
            kernel_identity = False
        if in_adjoint and in_kernel == any(pair(u, r) == 0 for r in components):
            exact = False

    restriction = {
        ray: [g for g in adjoint.generators if pair(g, ray) == 0]
        for ray in components
    }
    return AdjointSequenceCheck(
        lower_inclusion=ideal_contains(adjoint, kernel),
        upper_inclusion=ideal_contains(J, adjoint),
        kernel_identity=kernel_identity,
        degreewise_exact=exact,
        restriction=restriction,
    )


# ---------------------------------------------------------------------------
# Boundaries
# ---------------------------------------------------------------------------

def compatible_boundary_search(
    P: PairSpec,
    m: int,
    denominator_bound: int = 4,
    token: Optional[CancellationToken] = None,
) -> Optional[BoundarySpec]:
    """First invariant m-compatible boundary in lexicographic order, or None.

    Candidates have coefficients j/d with d | m, d ≤ denominator_bound and
    0 ≤ j < d. A candidate qualifies when K_X + Δ is Q-Cartier, it shares
    no component with Z and K^Δ_{Y/X} = K_{m,Y/X} on the working resolution.
    None is not a refutation.
    """
    if m < 2:
        raise ValueError('m must be at least 2')
    token = token or CancellationToken()
    X = P.variety
    values = sorted({Fraction(j, d) for d in range(1, min(m, denominator_bound) + 1) if m % d == 0 for j in range(d)})
    Y = working_resolution(P, m)
    P_m = uniform_polyhedron(X, -m)
    targets = {w: -ilp_min(P_m, w).require().value / m for w in Y.exceptional_rays}
    base_values = [pair_value(P, v) for v in X.rays]
    K = canonical_divisor(X)

    for coefficients in itertools.product(values, repeat=len(X.rays)):
        token.check()
        if any(d > 0 and z > 0 for d, z in zip(coefficients, base_values)):
            continue
        delta = TWeilDivisor.of(X.rays, coefficients)
        data = is_qcartier(K + delta)
        if data is None:
            continue
        slope = tuple(-x for x in data.slope)
        if all(pair(slope, w) == target for w, target in targets.items()):
            boundary = BoundarySpec(delta=delta, slope=slope, index=data.index)
            log_event('mult', 'boundary_found', details=str(list(coefficients)), importance='medium')
            return boundary
    log_event('mult', 'boundary_not_found', details=f"m={m}, bound={denominator_bound}", importance='medium')
    return None
