from typing import Dict, Sequence, Tuple

from .base import ComplexError
from .chains import Chain, Simplex, canonical_simplex, oriented_tuple
from .complexes import Complex

__all__ = ['SubdivisionMap', 'StellarMap', 'barycentric_subdivide', 'stellar_subdivide']


class SubdivisionMap:
    """
    Chain-level barycentric subdivision. The vertex of the subdivision for a simplex ``s`` of the source is
    ``vertex_of[s]``. Original vertices keep their labels; barycenters of higher simplices are numbered
    from the source vertex count upwards.
    """

    def __init__(self, source: Complex, target: Complex, vertex_of: Dict[Simplex, int]):
        self.source = source
        self.target = target
        self.vertex_of = vertex_of
        self.carrier = {v: s for s, v in vertex_of.items()}
        self._cache: Dict[Simplex, Chain] = {}

    def _subdivide(self, simplex: Simplex) -> Chain:
        cached = self._cache.get(simplex)
        if cached is not None:
            return cached
        apex = self.vertex_of[simplex]
        if len(simplex) == 1:
            result = Chain.from_simplex((apex,))
        else:
            terms = []
            for i in range(len(simplex)):
                face = simplex[:i] + simplex[i + 1:]
                sign = 1 if i % 2 == 0 else -1
                for s, c in self._subdivide(face).items():
                    terms.append(((apex,) + s, sign * c))
            result = Chain.from_terms(len(simplex) - 1, terms)
        self._cache[simplex] = result
        return result

    def apply(self, chain: Chain) -> Chain:
        terms = []
        for simplex, coeff in chain.items():
            if simplex not in self.vertex_of:
                raise ComplexError(f'Simplex {simplex} is not in {self.source.name}')
            terms.extend((s, coeff * c) for s, c in self._subdivide(simplex).items())
        return Chain.from_terms(chain.degree, terms)

    def transport(self, simplex: Sequence[int]) -> int:
        """
        Vertex of the subdivision sitting at the barycenter of ``simplex``.
        """
        key, _ = canonical_simplex(simplex)
        return self.vertex_of[key]


class StellarMap:
    """
    Chain map of a stellar subdivision at ``center`` with new vertex ``apex``.
    """

    def __init__(self, source: Complex, target: Complex, center: Simplex, apex: int):
        self.source = source
        self.target = target
        self.center = center
        self.apex = apex

    def _subdivide(self, simplex: Simplex) -> Tuple[Simplex, ...]:
        if not set(self.center) <= set(simplex):
            return (simplex,)
        return tuple(tuple(self.apex if u == v else u for u in simplex) for v in self.center)

    def apply(self, chain: Chain) -> Chain:
        terms = []
        for simplex, coeff in chain.items():
            for image in self._subdivide(simplex):
                terms.append((image, coeff))
        return Chain.from_terms(chain.degree, terms)


def barycentric_subdivide(k: Complex, *, name: str = None) -> Tuple[Complex, SubdivisionMap]:
    """
    First barycentric subdivision. Facet tuples of the result are oriented so that the subdivision of the
    facet chain of ``k`` is the facet chain of the result.
    """
    vertex_of: Dict[Simplex, int] = {(v,): v for v in k.vertices}
    for degree in range(1, k.dim + 1):
        for simplex in k.simplices(degree):
            vertex_of[simplex] = k.vertex_count + len(vertex_of) - len(k.vertices)

    target_name = name or f'sd({k.name})'
    vertex_count = max(vertex_of.values()) + 1

    mapping = SubdivisionMap(k, None, vertex_of)
    facets = []
    for simplex, coeff in mapping.apply(k.facet_chain()).items():
        facets.append(oriented_tuple(simplex, 1 if coeff > 0 else -1))
    target = Complex(target_name, k.dim, vertex_count, tuple(facets))
    mapping.target = target
    return target, mapping


def stellar_subdivide(k: Complex, simplex: Sequence[int], *, name: str = None) -> Tuple[Complex, StellarMap]:
    center, _ = canonical_simplex(simplex)
    if len(center) < 2:
        raise ComplexError('Stellar subdivision needs a simplex of dimension at least 1')
    if not k.contains(center):
        raise ComplexError(f'Simplex {center} is not in {k.name}')
    apex = k.vertex_count
    target_name = name or f'st({k.name})'
    mapping = StellarMap(k, None, center, apex)
    facets = []
    for facet in k.facets:
        facets.extend(mapping._subdivide(facet) if set(center) <= set(facet) else (facet,))
    target = Complex(target_name, k.dim, apex + 1, tuple(facets))
    mapping.target = target
    return target, mapping
