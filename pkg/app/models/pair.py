"""Pairs, boundaries and stabilization certificates."""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from app.models.divisor import MonomialFractionalIdeal, TWeilDivisor
from app.models.variety import AffineToricVariety
from app.utils import format_rational, format_vector

Body = Union[MonomialFractionalIdeal, TWeilDivisor]


@dataclass(frozen=True)
class PairTerm:
    """a·Z_k with a ≥ 0; the body is an ideal or a torus-invariant divisor."""
    coeff: Fraction
    body: Body
    name: str = ''

    @property
    def is_divisor(self) -> bool:
        return isinstance(self.body, TWeilDivisor)

    def to_dict(self) -> dict:
        return {'coeff': format_rational(self.coeff), 'body': self.name}


@dataclass(frozen=True)
class PairSpec:
    """(X, Z) with Z = Σ a_k·Z_k a formal nonnegative combination."""
    variety: AffineToricVariety
    terms: tuple[PairTerm, ...] = ()

    @classmethod
    def of(cls, variety: AffineToricVariety, terms: Iterable = ()) -> 'PairSpec':
        built = []
        for term in terms:
            if not isinstance(term, PairTerm):
                coeff, body = term[0], term[1]
                name = term[2] if len(term) > 2 else ''
                term = PairTerm(Fraction(coeff), body, name)
            if term.coeff < 0:
                raise ValueError('pair coefficients must be nonnegative')
            built.append(term)
        return cls(variety=variety, terms=tuple(built))

    @property
    def active_terms(self) -> tuple[PairTerm, ...]:
        return tuple(t for t in self.terms if t.coeff != 0)

    @property
    def is_trivial(self) -> bool:
        return not self.active_terms

    def scaled(self, t) -> 'PairSpec':
        """The pair (X, t·Z)."""
        t = Fraction(t)
        return PairSpec(
            variety=self.variety,
            terms=tuple(PairTerm(t * term.coeff, term.body, term.name) for term in self.terms),
        )

    def plus(self, other: 'PairSpec') -> 'PairSpec':
        return PairSpec(variety=self.variety, terms=self.terms + other.terms)


@dataclass(frozen=True)
class BoundarySpec:
    """Effective Δ with K_X + Δ ℚ-Cartier.

    ``slope`` is u_{KΔ}, the rational vector with ⟨u_{KΔ}, v_i⟩ = 1 − δ_i.
    """
    delta: TWeilDivisor
    slope: tuple[Fraction, ...]
    index: int

    def to_dict(self) -> dict:
        return {
            'coefficients': [format_rational(c) for c in self.delta.coefficients],
            'slope': format_vector(self.slope),
            'index': self.index,
        }


@dataclass(frozen=True)
class StabilizationCertificate:
    """m* = lcm of the vertex denominators of P₁ = {⟨u, v_i⟩ ≥ −1}."""
    m_star: int
    vertices: tuple[tuple[Fraction, ...], ...]
    denominators: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            'm_star': self.m_star,
            'vertices': [format_vector(v) for v in self.vertices],
            'denominators': list(self.denominators),
        }


@dataclass
class AdjointSequenceCheck:
    """Degreewise checks around 0 → J·O(−H) → adj_H → (restriction) → 0."""
    lower_inclusion: bool
    upper_inclusion: bool
    kernel_identity: bool
    degreewise_exact: bool
    restriction: dict = field(default_factory=dict)  # component ray -> generators with ⟨u, v⟩ = 0

    @property
    def passed(self) -> bool:
        return self.lower_inclusion and self.upper_inclusion and self.kernel_identity and self.degreewise_exact

    def to_dict(self) -> dict:
        return {
            'lower_inclusion': self.lower_inclusion,
            'upper_inclusion': self.upper_inclusion,
            'kernel_identity': self.kernel_identity,
            'degreewise_exact': self.degreewise_exact,
            'restriction': {
                ','.join(str(x) for x in ray): [list(g) for g in gens]
                for ray, gens in sorted(self.restriction.items())
            },
        }
