"""Singularity verdicts and surface intersection data."""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from app.models.cone import RationalCone, Vector
from app.utils import format_rational


class LogLevel(Enum):
    """Log terminal / log canonical ladder."""
    LOG_TERMINAL = 'LOG_TERMINAL'
    STRICTLY_LOG_CANONICAL = 'STRICTLY_LOG_CANONICAL'
    NOT_LOG_CANONICAL = 'NOT_LOG_CANONICAL'


class CanLevel(Enum):
    TERMINAL = 'TERMINAL'
    CANONICAL = 'CANONICAL'
    NEITHER = 'NEITHER'


class SurfaceLevel(Enum):
    NUM_LT = 'NUM_LT'
    NUM_LC_ONLY = 'NUM_LC_ONLY'
    NEITHER = 'NEITHER'


@dataclass(frozen=True)
class Witness:
    """A valuation together with the discrepancy value found there."""
    w: Vector
    value: Fraction
    kind: str = ''

    def to_dict(self) -> dict:
        return {'w': list(self.w), 'value': format_rational(self.value), 'kind': self.kind}


@dataclass(frozen=True)
class LcCenter:
    """Orbit closure V(face) of a face of σ on which a discrepancy vanishes."""
    face: RationalCone
    witness: Vector
    minimal: bool = False

    def to_dict(self) -> dict:
        return {
            'face': self.face.to_list(),
            'witness': list(self.witness),
            'minimal': self.minimal,
        }


@dataclass
class Classification:
    """Verdicts on the log ladder and on the canonical ladder."""
    log_level: Optional[LogLevel] = None
    can_level: Optional[CanLevel] = None
    log_witnesses: list = field(default_factory=list)  # list[Witness]
    can_witnesses: list = field(default_factory=list)  # list[Witness]
    centers: list = field(default_factory=list)  # list[LcCenter]

    def to_dict(self) -> dict:
        result = {}
        if self.log_level is not None:
            result['log_level'] = self.log_level.value
            result['log_witnesses'] = [w.to_dict() for w in self.log_witnesses]
        if self.can_level is not None:
            result['can_level'] = self.can_level.value
            result['can_witnesses'] = [w.to_dict() for w in self.can_witnesses]
        if self.centers:
            result['lc_centers'] = [c.to_dict() for c in self.centers]
        return result


@dataclass
class IntersectionData:
    """Exceptional curves of a surface resolution and their numerics.

    ``matrix[i][j]`` is E_i·E_j; ``discrepancies`` solve
    K_Y ≡_f Σ a_i·E_i.
    """
    curves: list  # list[Vector], in chain order
    self_intersections: list  # list[int], E_i² = −b_i
    matrix: list  # list[list[int]]
    discrepancies: list  # list[Fraction]

    def to_dict(self) -> dict:
        return {
            'curves': [list(c) for c in self.curves],
            'self_intersections': list(self.self_intersections),
            'matrix': [list(row) for row in self.matrix],
            'discrepancies': [format_rational(a) for a in self.discrepancies],
        }
