from fractions import Fraction
from typing import (TYPE_CHECKING, Any, Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple,
                    Union)

from .base import ComplexError

if TYPE_CHECKING:
    from .complexes import Complex

__all__ = ['Simplex', 'Coefficient', 'Chain', 'permutation_sign', 'canonical_simplex', 'oriented_tuple',
           'as_fraction', 'boundary', 'l1_norm']

Simplex = Tuple[int, ...]
Coefficient = Union[int, Fraction, str]


def as_fraction(value: Coefficient) -> Fraction:
    if isinstance(value, float):
        raise TypeError('Floating point coefficients are not exact')
    return Fraction(value)


def permutation_sign(vertices: Sequence[int]) -> int:
    inversions = 0
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if vertices[i] > vertices[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def canonical_simplex(vertices: Iterable[int]) -> Tuple[Simplex, int]:
    """
    Ascending vertex tuple plus the parity of the given ordering.
    """
    vertices = tuple(int(v) for v in vertices)
    if len(set(vertices)) != len(vertices):
        raise ComplexError(f'Degenerate simplex {vertices}')
    return tuple(sorted(vertices)), permutation_sign(vertices)


def oriented_tuple(simplex: Sequence[int], sign: int) -> Simplex:
    simplex = tuple(simplex)
    if sign > 0 or len(simplex) < 2:
        return simplex
    return (simplex[1], simplex[0]) + simplex[2:]


class Chain:
    """
    Sparse simplicial chain with exact rational coefficients.

    Terms are kept in canonical form: ascending vertex tuples, the orientation sign absorbed into the
    coefficient and no zero coefficients.
    """

    __slots__ = ('degree', '_terms')

    def __init__(self, degree: int, terms: Mapping[Sequence[int], Coefficient] = None):
        if degree < 0:
            raise ValueError('Chain degree must be non-negative')
        self.degree = degree

        clean: Dict[Simplex, Fraction] = {}
        for vertices, coeff in (terms or {}).items():
            self._accumulate(clean, vertices, coeff)
        self._terms = {k: v for k, v in clean.items() if v != 0}

    def _accumulate(self, clean: Dict[Simplex, Fraction], vertices: Sequence[int], coeff: Coefficient):
        key, sign = canonical_simplex(vertices)
        if len(key) != self.degree + 1:
            raise ValueError(f'Simplex {tuple(vertices)} does not have degree {self.degree}')
        clean[key] = clean.get(key, Fraction(0)) + sign * as_fraction(coeff)

    @classmethod
    def from_terms(cls, degree: int, terms: Iterable[Tuple[Sequence[int], Coefficient]]) -> 'Chain':
        result = cls(degree)
        clean: Dict[Simplex, Fraction] = {}
        for vertices, coeff in terms:
            result._accumulate(clean, vertices, coeff)
        result._terms = {k: v for k, v in clean.items() if v != 0}
        return result

    @classmethod
    def from_simplex(cls, vertices: Sequence[int], coeff: Coefficient = 1) -> 'Chain':
        return cls.from_terms(len(vertices) - 1, [(vertices, coeff)])

    @classmethod
    def zero(cls, degree: int) -> 'Chain':
        return cls(degree)

    @property
    def terms(self) -> Dict[Simplex, Fraction]:
        return dict(self._terms)

    @property
    def support(self) -> Tuple[Simplex, ...]:
        return tuple(sorted(self._terms))

    def items(self) -> Iterator[Tuple[Simplex, Fraction]]:
        for key in sorted(self._terms):
            yield key, self._terms[key]

    def coefficient(self, vertices: Sequence[int]) -> Fraction:
        key, sign = canonical_simplex(vertices)
        return sign * self._terms.get(key, Fraction(0))

    @property
    def l1_norm(self) -> Fraction:
        return sum((abs(v) for v in self._terms.values()), Fraction(0))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def _check_degree(self, other: 'Chain'):
        if not isinstance(other, Chain):
            raise TypeError(f'Can not combine a chain with {type(other).__name__}')
        if other.degree != self.degree:
            raise ValueError(f'Degree mismatch: {self.degree} and {other.degree}')

    def __add__(self, other: 'Chain') -> 'Chain':
        self._check_degree(other)
        terms = dict(self._terms)
        for key, value in other._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + value
        return Chain(self.degree, terms)

    def __sub__(self, other: 'Chain') -> 'Chain':
        return self + (-other)

    def __neg__(self) -> 'Chain':
        return Chain(self.degree, {k: -v for k, v in self._terms.items()})

    def __mul__(self, scalar: Coefficient) -> 'Chain':
        scalar = as_fraction(scalar)
        return Chain(self.degree, {k: v * scalar for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.degree, frozenset(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(sorted(self._terms))

    def __repr__(self):
        if not self._terms:
            return f'Chain({self.degree}, 0)'
        body = ' + '.join(f'{v}*{k}' for k, v in self.items())
        return f'Chain({self.degree}, {body})'

    def map_vertices(self, mapping: Union[Mapping[int, int], Callable[[int], int]]) -> 'Chain':
        """
        Push the chain forward along a vertex map. Simplices that become degenerate are dropped.
        """
        func = mapping if callable(mapping) else mapping.__getitem__
        terms = []
        for key, value in self._terms.items():
            image = tuple(func(v) for v in key)
            if len(set(image)) != len(image):
                continue
            terms.append((image, value))
        return Chain.from_terms(self.degree, terms)

    def restrict(self, simplices: Iterable[Simplex]) -> 'Chain':
        keep = set(tuple(s) for s in simplices)
        return Chain(self.degree, {k: v for k, v in self._terms.items() if k in keep})

    def to_dict(self) -> Dict[str, Any]:
        return {'degree': self.degree,
                'terms': [{'simplex': list(k), 'coeff': str(v)} for k, v in self.items()]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'Chain':
        try:
            degree = int(data['degree'])
            terms = [(tuple(t['simplex']), Fraction(str(t['coeff']))) for t in data['terms']]
        except (KeyError, TypeError, ValueError) as ex:
            raise ComplexError(f'Malformed chain document: {ex}')
        for simplex, _ in terms:
            if list(simplex) != sorted(simplex):
                raise ComplexError(f'Chain simplex {simplex} is not in ascending order')
        return cls.from_terms(degree, terms)


def boundary(c: Chain, host: Optional['Complex'] = None) -> Chain:
    if c.degree < 1:
        raise ValueError('A 0-chain has no boundary')
    result: Dict[Simplex, Fraction] = {}
    for simplex, coeff in c.items():
        if host is not None and not host.contains(simplex):
            raise ComplexError(f'Simplex {simplex} is not in {host.name}')
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1:]
            value = coeff if i % 2 == 0 else -coeff
            result[face] = result.get(face, Fraction(0)) + value
    return Chain(c.degree - 1, result)


def l1_norm(c: Chain) -> Fraction:
    return c.l1_norm
