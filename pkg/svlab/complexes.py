from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .base import ComplexError
from .chains import Chain, Simplex
from .json import BaseFromJson, BaseToJson

__all__ = ['Complex', 'load_complex', 'load_complex_file', 'dump_complex', 'euler_characteristic']


@dataclass(frozen=True)
class Complex:
    """
    Finite pure simplicial complex given by ordered facet tuples.

    The order of a facet tuple carries its orientation by permutation parity.
    """

    name: str
    dim: int
    vertex_count: int
    facets: Tuple[Simplex, ...]

    def __post_init__(self):
        object.__setattr__(self, 'facets', tuple(tuple(int(v) for v in f) for f in self.facets))

        if self.dim < 0:
            raise ComplexError(f'{self.name}: negative dimension')
        if not self.facets:
            raise ComplexError(f'{self.name}: no facets')

        seen: Dict[FrozenSet[int], Simplex] = {}
        for facet in self.facets:
            if len(facet) != self.dim + 1:
                raise ComplexError(f'{self.name}: facet {facet} does not have dimension {self.dim}; '
                                   f'complex is not pure')
            if len(set(facet)) != len(facet):
                raise ComplexError(f'{self.name}: duplicate vertex in facet {facet}')
            for v in facet:
                if not 0 <= v < self.vertex_count:
                    raise ComplexError(f'{self.name}: vertex {v} of facet {facet} out of range')
            key = frozenset(facet)
            if key in seen:
                raise ComplexError(f'{self.name}: duplicate facet {facet}')
            seen[key] = facet

    @cached_property
    def _faces(self) -> Tuple[Tuple[Simplex, ...], ...]:
        faces = [set() for _ in range(self.dim + 1)]
        for facet in self.facets:
            ordered = tuple(sorted(facet))
            for k in range(self.dim + 1):
                faces[k].update(combinations(ordered, k + 1))
        return tuple(tuple(sorted(f)) for f in faces)

    @cached_property
    def _face_sets(self) -> Tuple[FrozenSet[Simplex], ...]:
        return tuple(frozenset(f) for f in self._faces)

    def simplices(self, k: int) -> Tuple[Simplex, ...]:
        if not 0 <= k <= self.dim:
            return ()
        return self._faces[k]

    def index(self, k: int) -> Dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.simplices(k))}

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(s[0] for s in self.simplices(0))

    @property
    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(f) for f in self._faces)

    def contains(self, simplex: Sequence[int]) -> bool:
        key = tuple(sorted(simplex))
        k = len(key) - 1
        if not 0 <= k <= self.dim:
            return False
        return key in self._face_sets[k]

    def facet_chain(self) -> Chain:
        return Chain.from_terms(self.dim, [(f, 1) for f in self.facets])

    def is_subcomplex_of(self, other: 'Complex') -> bool:
        return all(other.contains(f) for f in self.facets)

    def subcomplex(self, facets: Iterable[Sequence[int]], name: str = None) -> 'Complex':
        facets = tuple(tuple(f) for f in facets)
        for facet in facets:
            if not self.contains(facet):
                raise ComplexError(f'{self.name}: {facet} is not a simplex')
        dims = {len(f) - 1 for f in facets}
        if len(dims) != 1:
            raise ComplexError(f'{self.name}: subcomplex facets have mixed dimensions')
        return Complex(name or f'{self.name}.sub', dims.pop(), self.vertex_count, facets)

    def relabel(self, mapping: Mapping[int, int], name: str = None, vertex_count: int = None) -> 'Complex':
        if vertex_count is None:
            vertex_count = max(mapping.values()) + 1 if mapping else 0
        return Complex(name or self.name, self.dim, vertex_count,
                       tuple(tuple(mapping[v] for v in f) for f in self.facets))

    def renamed(self, name: str) -> 'Complex':
        return Complex(name, self.dim, self.vertex_count, self.facets)

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'dim': self.dim, 'vertices': self.vertex_count,
                'facets': [list(f) for f in self.facets]}


def euler_characteristic(k: Complex) -> int:
    return sum((-1) ** i * n for i, n in enumerate(k.f_vector))


def load_complex(document: Union[str, bytes, Mapping[str, Any]]) -> Complex:
    if isinstance(document, (str, bytes)):
        document = BaseFromJson(error_cls=ComplexError).from_json(document)

    if not isinstance(document, Mapping):
        raise ComplexError('Malformed triangulation document: expected an object')

    try:
        name = document['name']
        dim = document['dim']
        vertices = document['vertices']
        facets = document['facets']
    except KeyError as ex:
        raise ComplexError(f'Malformed triangulation document: missing {ex}')

    if not isinstance(name, str) or not isinstance(dim, int) or not isinstance(vertices, int) \
            or not isinstance(facets, list) \
            or not all(isinstance(f, list) and all(isinstance(v, int) for v in f) for f in facets):
        raise ComplexError('Malformed triangulation document: wrong field types')

    result = Complex(name, dim, vertices, tuple(tuple(f) for f in facets))

    unused = set(range(vertices)) - set(result.vertices)
    if unused:
        raise ComplexError(f'{name}: vertices {sorted(unused)} are in no facet; complex is not pure')
    return result


def load_complex_file(path: Union[str, Path]) -> Complex:
    return load_complex(Path(path).read_text())


def dump_complex(k: Complex, *, indent: Optional[int] = None) -> str:
    return BaseToJson(json_encoder_kwargs={'indent': indent}).to_json(k.to_dict())
