from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from .chains import as_fraction

__all__ = ['Interval', 'Bound', 'format_value', 'parse_value']

Bound = Union[int, Fraction, str]


def format_value(value: Optional[Fraction]) -> str:
    if value is None:
        return '∞'
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f'{value.numerator}/{value.denominator}'


def parse_value(value: Union[Bound, None]) -> Optional[Fraction]:
    if value is None or value in ('inf', '∞'):
        return None
    return as_fraction(value)


@dataclass(frozen=True)
class Interval:
    """
    Closed interval ``[lo, hi]`` of non-negative rationals with ``hi = None`` standing for infinity.
    ``positive`` records the open lower end ``(0, hi]`` for quantities known to be strictly positive
    without a numeric lower bound.
    """

    lo: Fraction = Fraction(0)
    hi: Optional[Fraction] = None
    positive: bool = False

    def __post_init__(self):
        lo = as_fraction(self.lo)
        hi = None if self.hi is None else as_fraction(self.hi)
        if lo < 0:
            raise ValueError('Interval lower end must be non-negative')
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)
        if lo > 0:
            object.__setattr__(self, 'positive', True)

    @classmethod
    def exact(cls, value: Bound) -> 'Interval':
        value = as_fraction(value)
        return cls(value, value)

    @classmethod
    def zero(cls) -> 'Interval':
        return cls(0, 0)

    @classmethod
    def unknown(cls) -> 'Interval':
        return cls()

    @classmethod
    def strictly_positive(cls) -> 'Interval':
        return cls(0, None, True)

    @classmethod
    def at_most(cls, value: Bound) -> 'Interval':
        return cls(0, value)

    @classmethod
    def at_least(cls, value: Bound) -> 'Interval':
        return cls(value, None)

    @property
    def is_empty(self) -> bool:
        if self.hi is None:
            return False
        return self.hi < self.lo or (self.positive and self.hi == 0)

    @property
    def is_exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    @property
    def value(self) -> Optional[Fraction]:
        return self.lo if self.is_exact else None

    @property
    def is_positive(self) -> bool:
        return self.positive

    @property
    def is_unknown(self) -> bool:
        return self == Interval.unknown()

    def intersect(self, other: 'Interval') -> 'Interval':
        if self.hi is None:
            hi = other.hi
        elif other.hi is None:
            hi = self.hi
        else:
            hi = min(self.hi, other.hi)
        return Interval(max(self.lo, other.lo), hi, self.positive or other.positive)

    def __add__(self, other: 'Interval') -> 'Interval':
        hi = None if self.hi is None or other.hi is None else self.hi + other.hi
        return Interval(self.lo + other.lo, hi, self.positive or other.positive)

    def scale(self, factor: Bound) -> 'Interval':
        factor = as_fraction(factor)
        if factor < 0:
            raise ValueError('Interval scale factor must be non-negative')
        if factor == 0:
            return Interval.zero()
        return Interval(self.lo * factor, None if self.hi is None else self.hi * factor, self.positive)

    def multiply(self, other: 'Interval') -> 'Interval':
        if self.is_exact and self.lo == 0 or other.is_exact and other.lo == 0:
            return Interval.zero()
        hi = None if self.hi is None or other.hi is None else self.hi * other.hi
        return Interval(self.lo * other.lo, hi, self.positive and other.positive)

    def contains(self, value: Bound) -> bool:
        value = as_fraction(value)
        if value < self.lo or (self.hi is not None and value > self.hi):
            return False
        return not (self.positive and value == 0)

    def is_subset(self, other: 'Interval') -> bool:
        if self.is_empty:
            return True
        if self.lo < other.lo or (other.positive and not self.positive):
            return False
        if other.hi is None:
            return True
        return self.hi is not None and self.hi <= other.hi

    def __str__(self):
        if self.is_exact:
            return format_value(self.lo)
        left = '(' if self.positive and self.lo == 0 else '['
        return f'{left}{format_value(self.lo)}, {format_value(self.hi)}]'

    def to_dict(self) -> Dict[str, Any]:
        return {'lo': format_value(self.lo),
                'hi': None if self.hi is None else format_value(self.hi),
                'positive': self.positive,
                'text': str(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Interval':
        return cls(parse_value(data['lo']), parse_value(data.get('hi')), bool(data.get('positive', False)))
