"""Problem and result documents of the command line."""
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class ProblemDocument:
    """Parsed problem file.

    All vectors have length ``lattice_rank``; divisor and boundary
    coefficient arrays are aligned to ``cone_rays``.
    """
    lattice_rank: int
    cone_rays: list  # list[Vector]
    divisors: dict = field(default_factory=dict)  # name -> tuple[Fraction, ...]
    ideals: dict = field(default_factory=dict)  # name -> tuple[Vector, ...]
    pairs: dict = field(default_factory=dict)  # name -> tuple[(Fraction, str), ...]
    boundaries: dict = field(default_factory=dict)  # name -> tuple[Fraction, ...]
    source: Optional[str] = None

    def body_names(self) -> set:
        return set(self.divisors) | set(self.ideals)


@dataclass
class ResultDocument:
    """Everything a command writes to standard output."""
    command: str
    arguments: dict
    result: dict
    timing: Optional[dict] = None

    def to_dict(self) -> dict:
        data = {
            'command': self.command,
            'arguments': self.arguments,
            'result': self.result,
        }
        if self.timing is not None:
            data['timing'] = self.timing
        return data
