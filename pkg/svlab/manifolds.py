from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import networkx as nx

from .base import ManifoldError, NonOrientableError
from .chains import Chain, Simplex, boundary, canonical_simplex, oriented_tuple
from .complexes import Complex, euler_characteristic

__all__ = ['ManifoldComplex', 'manifold_check', 'fundamental_cycle']


@dataclass(frozen=True)
class ManifoldComplex:
    """
    Pseudomanifold triangulation with its boundary decomposition and, when orientable, a coherent
    orientation given as one sign per facet of ``complex``.

    Boundary components share the vertex labels of ``complex``. ``boundary_signs`` holds the sign of the
    induced orientation for each stored boundary facet tuple.
    """

    complex: Complex
    orientation: Optional[Tuple[int, ...]]
    boundary_components: Tuple[Complex, ...]
    boundary_signs: Tuple[Tuple[int, ...], ...]
    components: int

    @property
    def name(self) -> str:
        return self.complex.name

    @property
    def dim(self) -> int:
        return self.complex.dim

    @property
    def facet_count(self) -> int:
        return len(self.complex.facets)

    @property
    def is_closed(self) -> bool:
        return not self.boundary_components

    @property
    def is_orientable(self) -> bool:
        return self.orientation is not None

    @property
    def is_connected(self) -> bool:
        return self.components == 1

    @property
    def euler_characteristic(self) -> int:
        return euler_characteristic(self.complex)

    @cached_property
    def oriented_facets(self) -> Tuple[Simplex, ...]:
        if self.orientation is None:
            raise NonOrientableError(f'{self.name} is not orientable')
        return tuple(oriented_tuple(f, s) for f, s in zip(self.complex.facets, self.orientation))

    def oriented_complex(self) -> Complex:
        """
        Same complex with facet tuples rewritten so that every facet carries the orientation.
        """
        return Complex(self.name, self.dim, self.complex.vertex_count, self.oriented_facets)

    def fundamental_cycle(self) -> Chain:
        return Chain.from_terms(self.dim, [(f, s) for f, s in zip(self.complex.facets, self._orientation())])

    def _orientation(self) -> Tuple[int, ...]:
        if self.orientation is None:
            raise NonOrientableError(f'{self.name} is not orientable')
        return self.orientation

    def _component(self, i: int) -> Complex:
        if not 0 <= i < len(self.boundary_components):
            raise ManifoldError(f'{self.name}: boundary component {i} out of range')
        return self.boundary_components[i]

    def boundary_cycle(self, i: int) -> Chain:
        component = self._component(i)
        self._orientation()
        return Chain.from_terms(component.dim,
                                [(f, s) for f, s in zip(component.facets, self.boundary_signs[i])])

    def boundary_complex(self) -> Optional[Complex]:
        if self.is_closed:
            return None
        facets = tuple(f for c in self.boundary_components for f in c.facets)
        return Complex(f'{self.name}.boundary', self.dim - 1, self.complex.vertex_count, facets)

    def boundary_manifold(self, i: int = None) -> 'ManifoldComplex':
        """
        Closed manifold formed by boundary component ``i`` (or the whole boundary), with the induced
        orientation.
        """
        self._orientation()
        if i is None:
            if self.is_closed:
                raise ManifoldError(f'{self.name} is closed')
            k = self.boundary_complex()
            signs = tuple(s for signs in self.boundary_signs for s in signs)
            count = len(self.boundary_components)
        else:
            k = self._component(i)
            signs = self.boundary_signs[i]
            count = 1
        return ManifoldComplex(k, signs, (), (), count)


def _incidence(facet: Simplex, ridge: Simplex) -> int:
    """
    Coefficient of ``ridge`` in the boundary of the ordered ``facet``.
    """
    ordered, sign = canonical_simplex(facet)
    missing = next(v for v in ordered if v not in ridge)
    position = ordered.index(missing)
    return sign * (1 if position % 2 == 0 else -1)


def _ridges(facet: Simplex):
    ordered = tuple(sorted(facet))
    for i in range(len(ordered)):
        yield ordered[:i] + ordered[i + 1:]


def manifold_check(k: Complex, *, require_connected: bool = False,
                   require_orientable: bool = True) -> ManifoldComplex:
    if k.dim == 0:
        return ManifoldComplex(k, (1,) * len(k.facets), (), (), len(k.facets))

    ridge_facets: Dict[Simplex, List[int]] = defaultdict(list)
    for i, facet in enumerate(k.facets):
        for ridge in _ridges(facet):
            ridge_facets[ridge].append(i)

    graph = nx.Graph()
    graph.add_nodes_from(range(len(k.facets)))
    boundary_ridges = []
    for ridge, facets in sorted(ridge_facets.items()):
        if len(facets) > 2:
            raise ManifoldError(f'{k.name}: ridge {ridge} lies in {len(facets)} facets')
        if len(facets) == 2:
            graph.add_edge(facets[0], facets[1], ridge=ridge)
        else:
            boundary_ridges.append(ridge)

    components = [min(c) for c in nx.connected_components(graph)]
    if require_connected and len(components) > 1:
        raise ManifoldError(f'{k.name}: facet graph has {len(components)} components')

    orientation: Optional[Tuple[int, ...]] = None
    signs = {}
    for root in sorted(components):
        signs[root] = 1
        for u, v in nx.bfs_edges(graph, root):
            ridge = graph.edges[u, v]['ridge']
            signs[v] = -signs[u] * _incidence(k.facets[u], ridge) * _incidence(k.facets[v], ridge)
    coherent = all(signs[u] * _incidence(k.facets[u], ridge) + signs[v] * _incidence(k.facets[v], ridge) == 0
                   for u, v, ridge in graph.edges(data='ridge'))
    if coherent:
        orientation = tuple(signs[i] for i in range(len(k.facets)))
    elif require_orientable:
        raise NonOrientableError(f'{k.name}: orientation propagation found a contradiction')

    boundary_components, boundary_signs = _boundary_components(k, boundary_ridges, orientation)
    return ManifoldComplex(k, orientation, boundary_components, boundary_signs, len(components))


def _boundary_components(k: Complex, ridges: List[Simplex], orientation: Optional[Tuple[int, ...]]):
    if not ridges:
        return (), ()

    induced: Dict[Simplex, int] = {}
    if orientation is not None:
        cycle = Chain.from_terms(k.dim, [(f, s) for f, s in zip(k.facets, orientation)])
        induced = {s: int(c) for s, c in boundary(cycle).items()}

    graph = nx.Graph()
    graph.add_nodes_from(ridges)
    if k.dim >= 2:
        cofaces: Dict[Simplex, List[Simplex]] = defaultdict(list)
        for ridge in ridges:
            for face in _ridges(ridge):
                cofaces[face].append(ridge)
        for face, owners in cofaces.items():
            if len(owners) != 2:
                raise ManifoldError(f'{k.name}: boundary is not closed at {face}')
            graph.add_edge(*owners)

    groups = sorted(sorted(c) for c in nx.connected_components(graph))
    components = []
    signs = []
    for i, group in enumerate(groups):
        if k.dim >= 2:
            facets = tuple(oriented_tuple(r, induced.get(r, 1)) for r in group)
            component_signs = (1,) * len(group)
        else:
            facets = tuple(group)
            component_signs = tuple(induced.get(r, 1) for r in group)
        components.append(Complex(f'{k.name}.b{i}', k.dim - 1, k.vertex_count, facets))
        signs.append(component_signs)
    return tuple(components), tuple(signs)


def fundamental_cycle(m: ManifoldComplex) -> Chain:
    return m.fundamental_cycle()
