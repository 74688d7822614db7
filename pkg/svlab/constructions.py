from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .base import ComplexError, ConstructionError
from .chains import Chain, Simplex, canonical_simplex, oriented_tuple
from .complexes import Complex, euler_characteristic
from .manifolds import ManifoldComplex, manifold_check
from .subdivisions import SubdivisionMap, barycentric_subdivide

__all__ = ['GlueingSpec', 'CoverSpec', 'ReflectionMap', 'ShuffleMap', 'CoveringProjection', 'glue', 'double',
           'puncture', 'connected_sum', 'product', 'cyclic_cover', 'find_reversing_isomorphism',
           'MAX_REFINEMENTS']

MAX_REFINEMENTS = 2


@dataclass(frozen=True)
class GlueingSpec:
    """
    Glue boundary component ``left_component`` of ``left`` to boundary component ``right_component`` of
    ``right``. Without ``right`` both components belong to ``left`` (self-glueing). The bijection maps left
    vertex labels to right vertex labels; when omitted an orientation reversing isomorphism is searched.
    """

    left: ManifoldComplex
    left_component: int
    right: Optional[ManifoldComplex] = None
    right_component: int = 0
    vertex_bijection: Optional[Mapping[int, int]] = None

    @property
    def is_self_glueing(self) -> bool:
        return self.right is None

    def to_dict(self) -> Dict[str, Any]:
        return {'left': self.left.name,
                'left_component': self.left_component,
                'right': None if self.right is None else self.right.name,
                'right_component': self.right_component,
                'vertex_bijection': None if self.vertex_bijection is None
                else [[a, b] for a, b in sorted(self.vertex_bijection.items())]}


@dataclass(frozen=True)
class CoverSpec:
    """
    Cyclic cover of ``base`` given by a Z/degree valued edge cocycle. Edges missing from ``cocycle`` carry 0.
    """

    base: ManifoldComplex
    cocycle: Mapping[Tuple[int, int], int] = field(default_factory=dict)
    degree: int = 1

    def value(self, u: int, v: int) -> int:
        if u == v:
            return 0
        if (u, v) in self.cocycle:
            return self.cocycle[(u, v)] % self.degree
        if (v, u) in self.cocycle:
            return -self.cocycle[(v, u)] % self.degree
        return 0

    def validate(self):
        if self.degree < 1:
            raise ConstructionError('Cover degree must be at least 1')
        if not self.base.is_orientable:
            raise ConstructionError(f'{self.base.name} is not orientable')
        if not self.base.is_connected:
            raise ConstructionError(f'{self.base.name} is not connected')
        k = self.base.complex
        for (u, v), c in self.cocycle.items():
            if u == v or not k.contains((u, v)):
                raise ConstructionError(f'Cocycle edge {(u, v)} is not an edge of {k.name}')
            if (v, u) in self.cocycle and (c + self.cocycle[(v, u)]) % self.degree:
                raise ConstructionError(f'Cocycle is not antisymmetric on {(u, v)}')
        for u, v, w in k.simplices(2):
            if (self.value(u, v) + self.value(v, w) - self.value(u, w)) % self.degree:
                raise ConstructionError(f'Cocycle condition violated on {(u, v, w)}')

    def to_dict(self) -> Dict[str, Any]:
        return {'base': self.base.name, 'degree': self.degree,
                'cocycle': [[u, v, c] for (u, v), c in sorted(self.cocycle.items())]}


class ReflectionMap:
    """
    Chain map from the source manifold into its double: ``reflect(c)`` is the chain ``c`` plus its
    orientation reversed mirror image. ``source`` is the manifold the double was built from, which is a
    barycentric refinement of the input when its boundary was not a full subcomplex.
    """

    def __init__(self, source: ManifoldComplex, target: ManifoldComplex, inclusion: Mapping[int, int],
                 mirror: Mapping[int, int], subdivisions: Sequence[SubdivisionMap] = ()):
        self.source = source
        self.target = target
        self.inclusion = dict(inclusion)
        self.mirror = dict(mirror)
        self.subdivisions = tuple(subdivisions)

    @property
    def refined(self) -> bool:
        return bool(self.subdivisions)

    def lift(self, chain: Chain) -> Chain:
        for subdivision in self.subdivisions:
            chain = subdivision.apply(chain)
        return chain

    def reflect(self, chain: Chain) -> Chain:
        return chain.map_vertices(self.inclusion) - chain.map_vertices(self.mirror)


def _shuffles(p: int, q: int) -> List[Tuple[Tuple[Tuple[int, int], ...], int]]:
    result = []
    for positions in combinations(range(p + q), p):
        i = j = 0
        path = [(0, 0)]
        chosen = set(positions)
        for step in range(p + q):
            if step in chosen:
                i += 1
            else:
                j += 1
            path.append((i, j))
        exponent = sum(k - t for t, k in enumerate(positions))
        result.append((tuple(path), -1 if exponent % 2 else 1))
    return result


class ShuffleMap:
    """
    Staircase (shuffle) product of chains: the pair of vertices ``(a, b)`` is the vertex
    ``a * right.vertex_count + b`` of the product.
    """

    def __init__(self, left: Complex, right: Complex, target: Complex):
        self.left = left
        self.right = right
        self.target = target

    def vertex(self, a: int, b: int) -> int:
        return a * self.right.vertex_count + b

    def apply(self, x: Chain, y: Chain) -> Chain:
        paths = _shuffles(x.degree, y.degree)
        terms = []
        for sa, a in x.items():
            for tb, b in y.items():
                for path, sign in paths:
                    terms.append((tuple(self.vertex(sa[i], tb[j]) for i, j in path), sign * a * b))
        return Chain.from_terms(x.degree + y.degree, terms)


class CoveringProjection:

    def __init__(self, cover: ManifoldComplex, base: ManifoldComplex, degree: int):
        self.cover = cover
        self.base = base
        self.degree = degree

    def vertex(self, v: int) -> int:
        return v // self.degree

    def push_forward(self, chain: Chain) -> Chain:
        return chain.map_vertices(self.vertex)

    def fiber(self, facet: Sequence[int]) -> List[Simplex]:
        key = tuple(sorted(facet))
        return [tuple(sorted(f)) for f in self.cover.complex.facets
                if tuple(sorted(self.vertex(v) for v in f)) == key]

    def is_local_isomorphism(self) -> bool:
        counts: Dict[Simplex, int] = defaultdict(int)
        for facet in self.cover.complex.facets:
            image = tuple(sorted(self.vertex(v) for v in facet))
            if len(set(image)) != len(image) or not self.base.complex.contains(image):
                return False
            counts[image] += 1
        return all(counts[tuple(sorted(f))] == self.degree for f in self.base.complex.facets)


def _normalize(m: ManifoldComplex) -> ManifoldComplex:
    """
    Rewrite facet tuples so that every orientation sign is +1.
    """
    if m.orientation is None:
        raise ConstructionError(f'{m.name} is not orientable')
    if all(s == 1 for s in m.orientation):
        return m
    return manifold_check(m.oriented_complex())


def _refine(m: ManifoldComplex) -> Tuple[ManifoldComplex, SubdivisionMap]:
    k, subdivision = barycentric_subdivide(m.oriented_complex(), name=m.name)
    return manifold_check(k), subdivision


def _component_containing(m: ManifoldComplex, vertex: int) -> int:
    for i, component in enumerate(m.boundary_components):
        if vertex in component.vertices:
            return i
    raise ConstructionError(f'{m.name}: vertex {vertex} is on no boundary component')


def _padded(f_vector: Sequence[int], size: int) -> List[int]:
    return list(f_vector) + [0] * (size - len(f_vector))


def _relabel(facets: Sequence[Simplex]) -> Tuple[Dict[int, int], Tuple[Simplex, ...]]:
    used = sorted({v for f in facets for v in f})
    relabel = {v: i for i, v in enumerate(used)}
    return relabel, tuple(tuple(relabel[v] for v in f) for f in facets)


def _clean_complex(name: str, dim: int, facets: Sequence[Simplex],
                   expected: Sequence[int]) -> Optional[Tuple[Complex, Dict[int, int]]]:
    """
    Build the quotient complex, or None when the identification is not simplicial.
    """
    if any(len(set(f)) != len(f) for f in facets):
        return None
    relabel, facets = _relabel(facets)
    try:
        k = Complex(name, dim, len(relabel), facets)
    except ComplexError:
        return None
    if list(k.f_vector) != list(expected):
        return None
    return k, relabel


def _check_bijection(a: Complex, a_cycle: Chain, b: Complex, b_cycle: Chain, bijection: Mapping[int, int]):
    if set(bijection) != set(a.vertices) or set(bijection.values()) != set(b.vertices) \
            or len(set(bijection.values())) != len(bijection):
        raise ConstructionError('Vertex bijection does not match the boundary components')
    mapped = {frozenset(bijection[v] for v in f) for f in a.facets}
    if mapped != {frozenset(f) for f in b.facets}:
        raise ConstructionError('Vertex bijection is not simplicial')
    if a_cycle.map_vertices(bijection) != -b_cycle:
        raise ConstructionError('Vertex bijection is not orientation reversing')


def _extend_isomorphism(mapping: Dict[int, int], source: Sequence[Simplex],
                        source_ridges: Mapping[Simplex, List[Simplex]],
                        target_ridges: Mapping[Simplex, List[Simplex]],
                        target: set) -> Optional[Dict[int, int]]:
    if len(set(mapping.values())) != len(mapping):
        return None
    used = set(mapping.values())
    root = source[0]
    queue = deque([root])
    seen = {root}
    while queue:
        facet = queue.popleft()
        image = tuple(sorted(mapping[v] for v in facet))
        if image not in target:
            return None
        for i in range(len(facet)):
            ridge = facet[:i] + facet[i + 1:]
            neighbours = [g for g in source_ridges[ridge] if g != facet]
            if not neighbours or neighbours[0] in seen:
                continue
            other = neighbours[0]
            image_ridge = tuple(sorted(mapping[v] for v in ridge))
            candidates = [h for h in target_ridges.get(image_ridge, ()) if h != image]
            if len(candidates) != 1:
                return None
            new_v = next(v for v in other if v not in ridge)
            new_w = next(w for w in candidates[0] if w not in image_ridge)
            if new_v in mapping:
                if mapping[new_v] != new_w:
                    return None
            else:
                if new_w in used:
                    return None
                mapping[new_v] = new_w
                used.add(new_w)
            seen.add(other)
            queue.append(other)
    if len(seen) != len(source):
        return None
    if {tuple(sorted(mapping[v] for v in f)) for f in source} != target:
        return None
    return mapping


def find_reversing_isomorphism(source: Complex, source_cycle: Chain,
                               target: Complex, target_cycle: Chain) -> Optional[Dict[int, int]]:
    """
    Simplicial isomorphism between two connected closed pseudomanifolds carrying ``source_cycle`` to
    ``-target_cycle``, found by propagating a facet assignment across ridges.
    """
    if source.dim != target.dim or source.f_vector != target.f_vector:
        return None
    src = sorted(tuple(sorted(f)) for f in source.facets)
    tgt = {tuple(sorted(f)) for f in target.facets}

    if source.dim == 0:
        if len(src) != 1:
            return None
        mapping = {src[0][0]: next(iter(tgt))[0]}
        return mapping if source_cycle.map_vertices(mapping) == -target_cycle else None

    source_ridges: Dict[Simplex, List[Simplex]] = defaultdict(list)
    for f in src:
        for i in range(len(f)):
            source_ridges[f[:i] + f[i + 1:]].append(f)
    target_ridges: Dict[Simplex, List[Simplex]] = defaultdict(list)
    for f in tgt:
        for i in range(len(f)):
            target_ridges[f[:i] + f[i + 1:]].append(f)

    for candidate in sorted(tgt):
        for image in permutations(candidate):
            mapping = _extend_isomorphism(dict(zip(src[0], image)), src, source_ridges, target_ridges, tgt)
            if mapping is not None and source_cycle.map_vertices(mapping) == -target_cycle:
                return mapping
    return None


def _quotient(left: ManifoldComplex, right: ManifoldComplex, self_glueing: bool, a: Complex,
              bijection: Mapping[int, int], name: str) -> Optional[Complex]:
    offset = 0 if self_glueing else left.complex.vertex_count
    representative = {u: v + offset for u, v in bijection.items()}

    facets = [tuple(representative.get(v, v) for v in f) for f in left.oriented_facets]
    expected = _padded(left.complex.f_vector, left.dim + 1)
    if not self_glueing:
        facets += [tuple(v + offset for v in f) for f in right.oriented_facets]
        expected = [x + y for x, y in zip(expected, _padded(right.complex.f_vector, left.dim + 1))]
    expected = [x - y for x, y in zip(expected, _padded(a.f_vector, left.dim + 1))]

    built = _clean_complex(name, left.dim, facets, expected)
    return None if built is None else built[0]


def glue(spec: GlueingSpec, *, name: str = None) -> ManifoldComplex:
    left = spec.left
    right = spec.left if spec.is_self_glueing else spec.right
    for m, i in ((left, spec.left_component), (right, spec.right_component)):
        if not 0 <= i < len(m.boundary_components):
            raise ConstructionError(f'{m.name}: boundary component {i} out of range')
        if not m.is_orientable:
            raise ConstructionError(f'{m.name} is not orientable')
    if left.dim != right.dim:
        raise ConstructionError(f'Dimension mismatch: {left.dim} and {right.dim}')
    if spec.is_self_glueing and spec.left_component == spec.right_component:
        raise ConstructionError('A boundary component can not be glued to itself')

    left = _normalize(left)
    right = left if spec.is_self_glueing else _normalize(right)
    i, j = spec.left_component, spec.right_component
    a, b = left.boundary_components[i], right.boundary_components[j]
    a_cycle, b_cycle = left.boundary_cycle(i), right.boundary_cycle(j)

    if spec.vertex_bijection is None:
        bijection = find_reversing_isomorphism(a, a_cycle, b, b_cycle)
        if bijection is None:
            raise ConstructionError('No orientation reversing isomorphism between the boundary components')
    else:
        bijection = {int(u): int(v) for u, v in spec.vertex_bijection.items()}
        _check_bijection(a, a_cycle, b, b_cycle, bijection)

    chi = left.euler_characteristic - euler_characteristic(a)
    if not spec.is_self_glueing:
        chi += right.euler_characteristic
    name = name or f'glue({spec.left.name}.b{i}, {right.name}.b{j})'

    for attempt in range(MAX_REFINEMENTS + 1):
        k = _quotient(left, right, spec.is_self_glueing, a, bijection, name)
        if k is not None:
            break
        if attempt == MAX_REFINEMENTS:
            raise ConstructionError('Glueing quotient is not simplicial')
        left, right, i, j, a, bijection = _refine_pair(left, right, spec.is_self_glueing, i, a, bijection)

    result = manifold_check(k)
    if result.euler_characteristic != chi:
        raise ConstructionError(f'{name}: Euler characteristic {result.euler_characteristic} differs from {chi}')
    return result


def _refine_pair(left: ManifoldComplex, right: ManifoldComplex, self_glueing: bool, i: int, a: Complex,
                 bijection: Mapping[int, int]):
    refined_left, left_map = _refine(left)
    if self_glueing:
        refined_right, right_map = refined_left, left_map
    else:
        refined_right, right_map = _refine(right)

    transported = {}
    for degree in range(a.dim + 1):
        for simplex in a.simplices(degree):
            image = tuple(sorted(bijection[v] for v in simplex))
            transported[left_map.vertex_of[simplex]] = right_map.vertex_of[image]

    vertex = a.vertices[0]
    ni = _component_containing(refined_left, left_map.vertex_of[(vertex,)])
    nj = _component_containing(refined_right, right_map.vertex_of[(bijection[vertex],)])
    return (refined_left, refined_right, ni, nj, refined_left.boundary_components[ni], transported)


def _mirror(source: ManifoldComplex, name: str):
    k = source.complex
    boundary_vertices = set(source.boundary_complex().vertices)
    mirror = {v: (v if v in boundary_vertices else v + k.vertex_count) for v in k.vertices}
    facets = list(source.oriented_facets)
    facets += [oriented_tuple(tuple(mirror[v] for v in f), -1) for f in source.oriented_facets]

    expected = [2 * x - y for x, y in zip(_padded(k.f_vector, k.dim + 1),
                                          _padded(source.boundary_complex().f_vector, k.dim + 1))]
    built = _clean_complex(name, k.dim, facets, expected)
    if built is None:
        return None
    double_complex, relabel = built
    inclusion = {v: relabel[v] for v in k.vertices}
    return double_complex, inclusion, {v: relabel[mirror[v]] for v in k.vertices}


def double(m: ManifoldComplex, *, name: str = None) -> Tuple[ManifoldComplex, ReflectionMap]:
    if m.is_closed:
        raise ConstructionError(f'{m.name} is closed and has no double')
    source = _normalize(m)
    name = name or f'double({m.name})'
    subdivisions = []

    for attempt in range(MAX_REFINEMENTS + 1):
        built = _mirror(source, name)
        if built is not None:
            break
        if attempt == MAX_REFINEMENTS:
            raise ConstructionError(f'{name}: mirror quotient is not simplicial')
        source, subdivision = _refine(source)
        subdivisions.append(subdivision)

    k, inclusion, mirror = built
    result = manifold_check(k)
    chi = 2 * m.euler_characteristic - euler_characteristic(m.boundary_complex())
    if result.euler_characteristic != chi:
        raise ConstructionError(f'{name}: Euler characteristic {result.euler_characteristic} differs from {chi}')
    return result, ReflectionMap(source, result, inclusion, mirror, subdivisions)


def puncture(m: ManifoldComplex, facet: int = None, *, name: str = None) -> ManifoldComplex:
    if m.facet_count < 2:
        raise ConstructionError(f'{m.name} has a single facet')
    index = m.facet_count - 1 if facet is None else facet
    if not 0 <= index < m.facet_count:
        raise ConstructionError(f'{m.name}: facet index {index} out of range')
    facets = m.oriented_facets if m.is_orientable else m.complex.facets
    k = Complex(name or f'puncture({m.name})', m.dim, m.complex.vertex_count,
                facets[:index] + facets[index + 1:])
    return manifold_check(k, require_orientable=m.is_orientable)


def connected_sum(m: ManifoldComplex, n: ManifoldComplex, facet_m: int = None, facet_n: int = None, *,
                  name: str = None) -> ManifoldComplex:
    for x in (m, n):
        if not (x.is_closed and x.is_orientable and x.is_connected):
            raise ConstructionError(f'{x.name} is not a closed oriented connected manifold')
    if m.dim != n.dim:
        raise ConstructionError(f'Dimension mismatch: {m.dim} and {n.dim}')
    if m.dim < 2:
        raise ConstructionError('Connected sums need dimension at least 2')

    i = m.facet_count - 1 if facet_m is None else facet_m
    j = n.facet_count - 1 if facet_n is None else facet_n
    for x, index in ((m, i), (n, j)):
        if not 0 <= index < x.facet_count:
            raise ConstructionError(f'{x.name}: facet index {index} out of range')

    a = m.oriented_facets[i]
    b = n.oriented_facets[j]
    bijection = dict(zip(a, b))
    bijection[a[0]], bijection[a[1]] = b[1], b[0]

    result = glue(GlueingSpec(puncture(m, i), 0, puncture(n, j), 0, bijection),
                  name=name or f'{m.name}#{n.name}')

    chi = m.euler_characteristic + n.euler_characteristic - (1 + (-1) ** m.dim)
    if result.euler_characteristic != chi:
        raise ConstructionError(f'{result.name}: Euler characteristic {result.euler_characteristic} '
                                f'differs from {chi}')
    return result


def product(m: Union[Complex, ManifoldComplex], n: Union[Complex, ManifoldComplex], *,
            name: str = None) -> Tuple[Complex, ShuffleMap]:
    left = m.oriented_complex() if isinstance(m, ManifoldComplex) else m
    right = n.oriented_complex() if isinstance(n, ManifoldComplex) else n
    p, q = left.dim, right.dim
    width = right.vertex_count
    paths = _shuffles(p, q)

    facets = []
    for s in left.facets:
        sa, es = canonical_simplex(s)
        for t in right.facets:
            tb, et = canonical_simplex(t)
            for path, sign in paths:
                simplex = tuple(sa[i] * width + tb[j] for i, j in path)
                facets.append(oriented_tuple(simplex, es * et * sign))

    k = Complex(name or f'{left.name}x{right.name}', p + q, left.vertex_count * width, tuple(facets))

    if len(k.facets) != comb(p + q, p) * len(left.facets) * len(right.facets):
        raise ConstructionError(f'{k.name}: unexpected facet count {len(k.facets)}')
    chi = euler_characteristic(left) * euler_characteristic(right)
    if euler_characteristic(k) != chi:
        raise ConstructionError(f'{k.name}: Euler characteristic {euler_characteristic(k)} differs from {chi}')
    return k, ShuffleMap(left, right, k)


def cyclic_cover(spec: CoverSpec, *, name: str = None) -> Tuple[ManifoldComplex, CoveringProjection]:
    spec.validate()
    base = spec.base
    d = spec.degree

    facets = []
    for facet in base.oriented_facets:
        root = min(facet)
        for sheet in range(d):
            facets.append(tuple(v * d + (sheet + spec.value(root, v)) % d for v in facet))

    k = Complex(name or f'cover({base.name}, {d})', base.dim, base.complex.vertex_count * d, tuple(facets))
    cover = manifold_check(k)

    chi = d * base.euler_characteristic
    if cover.euler_characteristic != chi:
        raise ConstructionError(f'{k.name}: Euler characteristic {cover.euler_characteristic} differs from {chi}')
    return cover, CoveringProjection(cover, base, d)
