"""Affine toric varieties, fan refinements and divisorial valuations."""
from dataclasses import dataclass

from app.models.cone import RationalCone, Vector


@dataclass(frozen=True)
class AffineToricVariety:
    """X = Spec k[σ^∨ ∩ M] given by the primitive ray generators of σ.

    The ray order is the order of the input and fixes the coefficient order
    of every divisor on X.
    """
    rays: tuple[Vector, ...]
    rank: int

    @property
    def sigma(self) -> RationalCone:
        return RationalCone.of(self.rays, self.rank)

    def ray_index(self, ray: Vector) -> int:
        return self.rays.index(tuple(ray))

    def to_dict(self) -> dict:
        return {
            'lattice_rank': self.rank,
            'cone_rays': [list(r) for r in self.rays],
        }


@dataclass(frozen=True)
class FanRefinement:
    """A subdivision of σ into maximal full-dimensional cones.

    ``rays`` are sorted lexicographically; ``cones`` are sorted tuples of
    indices into ``rays``.
    """
    base: AffineToricVariety
    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]

    @property
    def exceptional_rays(self) -> tuple[Vector, ...]:
        base = set(self.base.rays)
        return tuple(r for r in self.rays if r not in base)

    def is_exceptional(self, ray: Vector) -> bool:
        return tuple(ray) not in set(self.base.rays)

    def cone(self, index: int) -> RationalCone:
        return RationalCone.of([self.rays[i] for i in self.cones[index]], self.base.rank)

    def cone_rays(self, index: int) -> tuple[Vector, ...]:
        return tuple(self.rays[i] for i in self.cones[index])

    def ray_index(self, ray: Vector) -> int:
        return self.rays.index(tuple(ray))

    def to_dict(self) -> dict:
        return {
            'rays': [list(r) for r in self.rays],
            'cones': [list(c) for c in self.cones],
            'exceptional_rays': [list(r) for r in self.exceptional_rays],
        }


@dataclass(frozen=True)
class DivisorialValuation:
    """v = q·val_F, F the divisor of the primitive w ∈ σ ∩ N."""
    w: Vector
    q: int = 1

    def to_dict(self) -> dict:
        return {'w': list(self.w), 'q': self.q}
