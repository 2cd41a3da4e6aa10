"""Torus-invariant divisors and monomial fractional ideals."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from app.models.cone import Vector
from app.models.variety import AffineToricVariety
from app.utils import ceil_fraction, floor_fraction, format_rational


@dataclass(frozen=True)
class TWeilDivisor:
    """Σ d_i·D_i with one rational coefficient per ray.

    ``rays`` is either the ray list of the base variety or of a refinement;
    coefficients are aligned with it.
    """
    rays: tuple[Vector, ...]
    coefficients: tuple[Fraction, ...]

    @classmethod
    def of(cls, rays: Iterable[Vector], coefficients: Iterable) -> 'TWeilDivisor':
        rays = tuple(tuple(r) for r in rays)
        coefficients = tuple(Fraction(c) for c in coefficients)
        if len(rays) != len(coefficients):
            raise ValueError(
                f"{len(coefficients)} coefficients given for {len(rays)} rays"
            )
        return cls(rays=rays, coefficients=coefficients)

    @classmethod
    def zero(cls, rays: Iterable[Vector]) -> 'TWeilDivisor':
        rays = tuple(tuple(r) for r in rays)
        return cls(rays=rays, coefficients=tuple(Fraction(0) for _ in rays))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    @property
    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coefficients)

    @property
    def support(self) -> tuple[Vector, ...]:
        return tuple(r for r, c in zip(self.rays, self.coefficients) if c != 0)

    def coefficient(self, ray: Vector) -> Fraction:
        return self.coefficients[self.rays.index(tuple(ray))]

    def as_dict(self) -> dict[Vector, Fraction]:
        return dict(zip(self.rays, self.coefficients))

    def _check_same(self, other: 'TWeilDivisor') -> None:
        if self.rays != other.rays:
            raise ValueError('divisors live on different ray lists')

    def __add__(self, other: 'TWeilDivisor') -> 'TWeilDivisor':
        self._check_same(other)
        return TWeilDivisor(self.rays, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: 'TWeilDivisor') -> 'TWeilDivisor':
        self._check_same(other)
        return TWeilDivisor(self.rays, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> 'TWeilDivisor':
        return TWeilDivisor(self.rays, tuple(-a for a in self.coefficients))

    def scaled(self, k) -> 'TWeilDivisor':
        k = Fraction(k)
        return TWeilDivisor(self.rays, tuple(k * a for a in self.coefficients))

    def ceil(self) -> 'TWeilDivisor':
        return TWeilDivisor(self.rays, tuple(Fraction(ceil_fraction(a)) for a in self.coefficients))

    def floor(self) -> 'TWeilDivisor':
        return TWeilDivisor(self.rays, tuple(Fraction(floor_fraction(a)) for a in self.coefficients))

    def dominated_by(self, other: 'TWeilDivisor') -> bool:
        """Componentwise self ≤ other."""
        self._check_same(other)
        return all(a <= b for a, b in zip(self.coefficients, other.coefficients))

    def to_dict(self) -> dict:
        return {
            'rays': [list(r) for r in self.rays],
            'coefficients': [format_rational(c) for c in self.coefficients],
        }


@dataclass(frozen=True)
class MonomialFractionalIdeal:
    """Module over σ^∨ ∩ M generated by finitely many exponents in M."""
    generators: tuple[Vector, ...]
    variety: AffineToricVariety

    @classmethod
    def of(cls, generators: Iterable[Iterable[int]], variety: AffineToricVariety) -> 'MonomialFractionalIdeal':
        gens = tuple(sorted({tuple(int(x) for x in g) for g in generators}))
        if not gens:
            raise ValueError('a fractional ideal needs at least one generator')
        for g in gens:
            if len(g) != variety.rank:
                raise ValueError(f"generator {g} has wrong length for rank {variety.rank}")
        return cls(generators=gens, variety=variety)

    @classmethod
    def unit(cls, variety: AffineToricVariety) -> 'MonomialFractionalIdeal':
        return cls(generators=(tuple(0 for _ in range(variety.rank)),), variety=variety)

    @property
    def is_unit(self) -> bool:
        return self.generators == (tuple(0 for _ in range(self.variety.rank)),)

    def to_list(self) -> list:
        return [list(g) for g in self.generators]


@dataclass(frozen=True)
class QCartierData:
    """Rational slope u with ⟨u, v_i⟩ = d_i; ``index`` is the least m with m·u integral."""
    slope: tuple[Fraction, ...]
    index: int

    def to_dict(self) -> dict:
        return {
            'slope': [format_rational(x) for x in self.slope],
            'index': self.index,
        }
