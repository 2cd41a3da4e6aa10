"""Utility functions for torimult."""
import logging
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, TypeVar

from app.errors import ComputationCancelled

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = re.compile(r'^-?[0-9]+(/[1-9][0-9]*)?$')

T = TypeVar('T')
R = TypeVar('R')


def parse_rational(value) -> Fraction:
    """
    Parse an exact rational from a ``"p/q"`` string or an integer.

    Floats are rejected: every number in a problem document is exact.

    Args:
        value: String matching ``-?[0-9]+(/[1-9][0-9]*)?`` or an int

    Returns:
        Fraction in lowest terms

    Raises:
        ValueError: If the value is not an exact rational literal

    Examples:
        >>> parse_rational('5/6')
        Fraction(5, 6)
        >>> parse_rational('-4/2')
        Fraction(-2, 1)
        >>> parse_rational(3)
        Fraction(3, 1)
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str) or not RATIONAL_PATTERN.match(value):
        raise ValueError(f"Not a rational: {value!r}")
    return Fraction(value)


def format_rational(value) -> str:
    """
    Format a rational as ``"p"`` or ``"p/q"``.

    Examples:
        >>> format_rational(Fraction(1, 2))
        '1/2'
        >>> format_rational(Fraction(4, 2))
        '2'
        >>> format_rational(-3)
        '-3'
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_vector(vector: Iterable) -> list:
    """Integers stay integers, other rationals become strings."""
    result = []
    for entry in vector:
        entry = Fraction(entry)
        result.append(entry.numerator if entry.denominator == 1 else format_rational(entry))
    return result


def pair(u: Sequence, w: Sequence):
    """Pairing ⟨u, w⟩ between M and N."""
    return sum(a * b for a, b in zip(u, w))


def lcm_all(values: Iterable[int]) -> int:
    """
    Least common multiple of positive integers, 1 for an empty input.

    Examples:
        >>> lcm_all([2, 3, 4])
        12
        >>> lcm_all([])
        1
    """
    result = 1
    for value in values:
        result = math.lcm(result, abs(int(value)))
    return result or 1


def denominators(values: Iterable) -> list[int]:
    return [Fraction(v).denominator for v in values]


def ceil_fraction(value) -> int:
    value = Fraction(value)
    return -((-value.numerator) // value.denominator)


def floor_fraction(value) -> int:
    value = Fraction(value)
    return value.numerator // value.denominator


class CancellationToken:
    """Cooperative cancellation for long searches.

    A token fires either when ``cancel()`` was called or when its deadline
    has passed. Workers call ``check()`` between units of work.
    """

    def __init__(self, timeout_secs: Optional[float] = None):
        self._cancelled = False
        self._deadline = None
        if timeout_secs is not None:
            self._deadline = time.monotonic() + float(timeout_secs)

    def cancel(self) -> None:
        self._cancelled = True

    @property
    def cancelled(self) -> bool:
        if self._cancelled:
            return True
        return self._deadline is not None and time.monotonic() >= self._deadline

    def check(self) -> None:
        """Raise ComputationCancelled if the token has fired."""
        if self.cancelled:
            raise ComputationCancelled('Computation cancelled before completion')


def parallel_map(func: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Map ``func`` over ``items`` preserving order.

    With ``threads > 1`` the work is spread over a thread pool; the result is
    identical either way.
    """
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [func(item) for item in items]

    workers = min(threads, len(items))
    logger.debug("parallel_map: %d items on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
