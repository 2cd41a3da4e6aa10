"""Cones and H-polyhedra in a lattice and its dual."""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

Vector = tuple[int, ...]


def _primitive(vector: Iterable[int]) -> Vector:
    vector = tuple(int(x) for x in vector)
    g = 0
    for x in vector:
        g = gcd(g, x)
    if g == 0:
        return vector
    return tuple(x // g for x in vector)


@dataclass(frozen=True)
class RationalCone:
    """Cone generated by primitive lattice vectors.

    Generators are kept primitive, deduplicated and in lexicographic order,
    so equal cones given by the same generators compare equal.
    """
    generators: tuple[Vector, ...]
    rank: int

    @classmethod
    def of(cls, generators: Iterable[Iterable[int]], rank: int = None) -> 'RationalCone':
        gens = [_primitive(g) for g in generators]
        gens = sorted({g for g in gens if any(g)})
        if rank is None:
            if not gens:
                raise ValueError('rank required for the zero cone')
            rank = len(gens[0])
        return cls(generators=tuple(gens), rank=rank)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def to_list(self) -> list:
        return [list(g) for g in self.generators]


@dataclass(frozen=True)
class HPolyhedron:
    """Polyhedron {u : ⟨u, normal⟩ ≥ rhs for every constraint} in M_Q."""
    constraints: tuple[tuple[Vector, Fraction], ...]
    rank: int

    @classmethod
    def of(cls, normals: Iterable[Iterable[int]], rhs: Iterable) -> 'HPolyhedron':
        normals = [tuple(int(x) for x in n) for n in normals]
        rhs = [Fraction(r) for r in rhs]
        if len(normals) != len(rhs):
            raise ValueError('normals and right-hand sides differ in length')
        if not normals:
            raise ValueError('at least one constraint is required')
        return cls(constraints=tuple(zip(normals, rhs)), rank=len(normals[0]))

    @property
    def normals(self) -> tuple[Vector, ...]:
        return tuple(n for n, _ in self.constraints)

    @property
    def rhs(self) -> tuple[Fraction, ...]:
        return tuple(r for _, r in self.constraints)

    def scaled(self, k) -> 'HPolyhedron':
        """k·P for k > 0."""
        k = Fraction(k)
        return HPolyhedron(
            constraints=tuple((n, r * k) for n, r in self.constraints),
            rank=self.rank,
        )

    def contains(self, u) -> bool:
        return all(sum(a * b for a, b in zip(u, n)) >= r for n, r in self.constraints)
