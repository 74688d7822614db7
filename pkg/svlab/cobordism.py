from collections import Counter
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from .base import BaseElement, CobordismError, InferenceError
from .descriptions import BoundaryRef, Invariant, ManifoldDescription
from .inference import Registry
from .intervals import Interval

__all__ = ['CobObject', 'Cobordism', 'CobordismCategory', 'ReinhartClass', 'reinhart_class', 'reverse_label',
           'disjoint_union', 'ObstructionWitness', 'extension_obstruction', 'connsum_monoid_eval']

# Relations to other labels; a reversed copy keeps only the intrinsic flags.
_RELATIONS = ('factors', 'summands', 'glued', 'along', 'glue_amenable', 'glue_pi1_injective', 'double_of',
              'cover_of', 'cover_degree', 'disjoint', 'triangulation', 'fiber', 'base', 'fiber_amcat', 'declared',
              'chi', 'chi_rel')


@dataclass(frozen=True)
class CobObject:
    dimension: int
    components: Tuple[str, ...] = ()

    def matches(self, other: 'CobObject') -> bool:
        return self.dimension == other.dimension and Counter(self.components) == Counter(other.components)

    def __add__(self, other: 'CobObject') -> 'CobObject':
        return CobObject(self.dimension, self.components + other.components)

    def __str__(self):
        return '[' + ', '.join(self.components) + ']'

    def to_dict(self) -> Dict[str, Any]:
        return {'dimension': self.dimension, 'components': list(self.components)}


@dataclass(frozen=True)
class Cobordism:
    name: str
    body: str
    incoming: CobObject
    outgoing: CobObject

    def __str__(self):
        return f'{self.name}: {self.incoming} -> {self.outgoing} via {self.body}'

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'body': self.body, 'incoming': self.incoming.to_dict(),
                'outgoing': self.outgoing.to_dict()}


def _chi(registry: Registry, name: str) -> Optional[int]:
    return registry.state(name).chi


def _sum_chi(registry: Registry, names: Iterable[str]) -> Optional[int]:
    values = [_chi(registry, n) for n in names]
    if any(v is None for v in values):
        return None
    return sum(values)


def reverse_label(registry: Registry, name: str, *, label: str = None) -> str:
    """
    Registers the orientation reversal of ``name`` (``-name`` unless ``label`` is given).
    """
    label = label or f'-{name}'
    if label in registry:
        return label
    source = registry.description(name)
    cleared = {f.name: () if isinstance(getattr(source, f.name), tuple) else None
               for f in fields(source) if f.name in _RELATIONS}
    signature = None if source.signature is None else -source.signature
    registry.add_manifold(replace(source, name=label, reverse_of=name, signature=signature, **cleared))
    return label


def disjoint_union(registry: Registry, names: Sequence[str], *, label: str = None) -> str:
    if not names:
        raise CobordismError('Empty disjoint union')
    label = label or '+'.join(names)
    if label in registry:
        return label
    parts = [registry.description(n) for n in names]
    dim = parts[0].dim
    if any(p.dim != dim for p in parts):
        raise CobordismError(f'{label}: parts of different dimension')
    signatures = [p.signature for p in parts]
    registry.add_manifold(ManifoldDescription(
        name=label,
        dim=dim,
        closed=True if all(p.is_closed for p in parts) else (False if any(p.has_boundary for p in parts) else None),
        oriented=True if all(p.oriented for p in parts) else None,
        connected=False if len(parts) > 1 else parts[0].connected,
        boundary=tuple(b for p in parts for b in p.boundary),
        signature=None if dim != 4 or any(s is None for s in signatures) else sum(signatures),
        chi=_sum_chi(registry, names),
        disjoint=tuple(names),
    ))
    return label


class CobordismCategory(BaseElement):
    """
    Oriented cobordisms of a fixed dimension between closed manifold labels of the registry. With
    ``amenable=True`` only amenable objects and cobordisms with pi1-injective boundary inclusions are admitted.
    """

    def __init__(self, *args, registry: Registry, dimension: int, amenable: bool = False, **kwargs):
        super(CobordismCategory, self).__init__(*args, **kwargs)
        if dimension < 1:
            raise CobordismError('Cobordism dimension must be at least 1')
        self.registry = registry
        self.dimension = dimension
        self.amenable = amenable
        self._morphisms: Dict[str, Cobordism] = {}

    def get(self, name: str) -> Cobordism:
        try:
            return self._morphisms[name]
        except KeyError:
            raise CobordismError(f'Unknown cobordism {name}')

    def object(self, components: Iterable[str] = ()) -> CobObject:
        components = tuple(components)
        for c in components:
            d = self.registry.description(c)
            if d.dim != self.dimension - 1:
                raise CobordismError(f'{c}: objects have dimension {self.dimension - 1}')
            if not d.is_closed or d.oriented is False:
                raise CobordismError(f'{c}: objects are closed oriented manifolds')
            if self.amenable and not d.flag('amenable'):
                raise CobordismError(f'{c}: objects of the amenable category have amenable fundamental group')
        return CobObject(self.dimension - 1, components)

    def _add(self, f: Cobordism) -> Cobordism:
        self._morphisms[f.name] = f
        self.log(f'Cobordism {f}')
        return f

    def morphism(self, body: str, incoming: Iterable[str], outgoing: Iterable[str], *,
                 name: str = None) -> Cobordism:
        d = self.registry.description(body)
        if d.dim != self.dimension:
            raise CobordismError(f'{body}: cobordisms have dimension {self.dimension}')
        source, target = self.object(incoming), self.object(outgoing)
        if Counter(source.components + target.components) != Counter(b.name for b in d.boundary):
            raise CobordismError(f'{body}: incoming and outgoing ends do not exhaust the boundary')
        f = Cobordism(name or body, body, source, target)
        if self.amenable and not self.is_member(f):
            raise CobordismError(f'{f.name} is not a morphism of the amenable category')
        return self._add(f)

    def _cylinder(self, obj: CobObject) -> str:
        label = f'cyl({", ".join(obj.components)})'
        if label in self.registry:
            return label
        self.registry.propagate()
        parts = [self.registry.description(c) for c in obj.components]
        amenable = True if all(p.flag('amenable') for p in parts) else None
        refs = tuple(BoundaryRef(p.name, True, p.aspherical) for p in parts) * 2
        self.registry.add_manifold(ManifoldDescription(
            name=label,
            dim=self.dimension,
            closed=not refs,
            oriented=True,
            boundary=refs,
            amenable=amenable,
            boundary_amenable=amenable,
            chi=_sum_chi(self.registry, obj.components),
        ))
        return label

    def identity(self, obj: CobObject) -> Cobordism:
        body = self._cylinder(obj)
        return self._add(Cobordism(f'id{obj}', body, obj, obj))

    def is_member(self, f: Cobordism) -> bool:
        d = self.registry.description(f.body)
        if not all(b.pi1_injective is True for b in d.boundary):
            return False
        return all(self.registry.description(c).flag('amenable')
                   for c in f.incoming.components + f.outgoing.components)

    def compose(self, f: Cobordism, g: Cobordism, *, name: str = None) -> Cobordism:
        """
        ``g`` after ``f``: glues the outgoing end of ``f`` to the incoming end of ``g``.
        """
        if not f.outgoing.matches(g.incoming):
            raise CobordismError(f'Cannot compose {f.name} with {g.name}: {f.outgoing} differs from {g.incoming}')
        if self.amenable and not (self.is_member(f) and self.is_member(g)):
            raise CobordismError(f'Composition of {f.name} and {g.name} leaves the amenable category')

        name = name or f'{f.name};{g.name}'
        label = f'glue({f.body}, {g.body})'
        if label not in self.registry:
            self._register_glued(label, f, g)
        self.registry.propagate()
        h = self._add(Cobordism(name, label, f.incoming, g.outgoing))
        self._check_functors(f, g, h)
        return h

    def _register_glued(self, label: str, f: Cobordism, g: Cobordism):
        middle = f.outgoing.components
        amenable_glueing = all(self.registry.description(c).flag('amenable') for c in middle)
        injective = self.is_member(f) and self.is_member(g)
        refs = []
        for c in f.incoming.components + g.outgoing.components:
            desc = self.registry.description(c)
            refs.append(BoundaryRef(c, True if injective else None, desc.aspherical))
        self.registry.add_manifold(ManifoldDescription(
            name=label,
            dim=self.dimension,
            closed=not refs,
            oriented=True,
            boundary=tuple(refs),
            glued=(f.body, g.body),
            along=middle,
            glue_amenable=True if amenable_glueing else None,
            glue_pi1_injective=True if injective else None,
        ))

    def _check_functors(self, f: Cobordism, g: Cobordism, h: Cobordism):
        try:
            a, b, c = self.chi_functor(f), self.chi_functor(g), self.chi_functor(h)
        except CobordismError:
            pass
        else:
            if c != a + b:
                raise CobordismError(f'{h.name}: Euler characteristic functor is not additive ({c} != {a} + {b})')
        if self.is_member(h) and self.is_member(f) and self.is_member(g):
            total = self.sv_functor(f) + self.sv_functor(g)
            if not self.sv_functor(h).is_subset(total):
                raise CobordismError(f'{h.name}: simplicial volume functor is not additive')

    def tensor(self, f: Cobordism, g: Cobordism, *, name: str = None) -> Cobordism:
        body = disjoint_union(self.registry, [f.body, g.body])
        self.registry.propagate()
        return self._add(Cobordism(name or f'{f.name}+{g.name}', body, f.incoming + g.incoming,
                                   f.outgoing + g.outgoing))

    def chi_functor(self, f: Cobordism) -> int:
        """
        chi(W, M) = chi(W) - chi(M) for a cobordism (W; M, N).
        """
        body = _chi(self.registry, f.body)
        incoming = _sum_chi(self.registry, f.incoming.components)
        if body is None or incoming is None:
            raise CobordismError(f'{f.name}: Euler characteristic unknown')
        return body - incoming

    def sv_functor(self, f: Cobordism) -> Interval:
        if not self.is_member(f):
            raise CobordismError(f'{f.name} is not a morphism of the amenable category')
        return self.registry.state(f.body).intervals[Invariant.SV_REL]


@dataclass(frozen=True)
class ReinhartClass:
    """
    Coordinates of a Reinhart bordism class in dimension at most 4: the signed point count (0), the component
    count mod 2 (1), chi / 2 (2), nothing (3) and the pair (chi, signature) (4).
    """

    dimension: int
    coordinates: Tuple[int, ...]

    def __add__(self, other: 'ReinhartClass') -> 'ReinhartClass':
        if self.dimension != other.dimension:
            raise CobordismError('Reinhart classes of different dimension')
        values = tuple(a + b for a, b in zip(self.coordinates, other.coordinates))
        if self.dimension == 1:
            values = (values[0] % 2,)
        return ReinhartClass(self.dimension, values)

    def reversed(self) -> 'ReinhartClass':
        if self.dimension == 0:
            return ReinhartClass(0, (-self.coordinates[0],))
        if self.dimension == 4:
            return ReinhartClass(4, (self.coordinates[0], -self.coordinates[1]))
        return self

    @property
    def chi(self) -> Optional[int]:
        if self.dimension == 2:
            return 2 * self.coordinates[0]
        if self.dimension == 4:
            return self.coordinates[0]
        return None

    def __str__(self):
        return '(' + ', '.join(str(c) for c in self.coordinates) + ')'

    def to_dict(self) -> Dict[str, Any]:
        return {'dimension': self.dimension, 'coordinates': list(self.coordinates)}


def reinhart_class(registry: Registry, name: str) -> ReinhartClass:
    d = registry.description(name)
    if not d.is_closed:
        raise CobordismError(f'{name}: Reinhart classes are defined for closed manifolds')
    if d.dim > 4:
        raise CobordismError(f'{name}: Reinhart classes are supported up to dimension 4')
    if d.disjoint:
        result = None
        for part in d.disjoint:
            value = reinhart_class(registry, part)
            result = value if result is None else result + value
        return result
    if d.reverse_of is not None:
        return reinhart_class(registry, d.reverse_of).reversed()

    chi = registry.state(name).chi
    if d.dim == 3:
        return ReinhartClass(3, ())
    if d.dim == 1:
        if d.connected is True:
            return ReinhartClass(1, (1,))
        data = registry.triangulation_data(name)
        if data is None:
            raise CobordismError(f'{name}: number of components unknown')
        return ReinhartClass(1, (data.betti[0] % 2,))
    if chi is None:
        raise CobordismError(f'{name}: Euler characteristic unknown')
    if d.dim == 0:
        return ReinhartClass(0, (chi,))
    if d.dim == 2:
        if chi % 2:
            raise CobordismError(f'{name}: odd Euler characteristic for a closed oriented surface')
        return ReinhartClass(2, (chi // 2,))
    if d.signature is None:
        raise CobordismError(f'{name}: signature not declared')
    if (chi - d.signature) % 2:
        raise CobordismError(f'{name}: Euler characteristic and signature differ in parity')
    return ReinhartClass(4, (chi, d.signature))


@dataclass(frozen=True)
class ObstructionWitness:
    target: str
    dimension: int
    sv: Interval
    doubled: Interval
    reinhart: Optional[ReinhartClass]
    trail: Tuple[str, ...]

    def __str__(self):
        return '\n'.join(self.trail)

    def to_dict(self) -> Dict[str, Any]:
        return {'target': self.target, 'dimension': self.dimension, 'sv': str(self.sv),
                'doubled': str(self.doubled),
                'reinhart': None if self.reinhart is None else self.reinhart.to_dict(),
                'trail': list(self.trail)}


def extension_obstruction(registry: Registry, name: str) -> ObstructionWitness:
    """
    Replays why simplicial volume on closed manifolds does not extend to a functor on all cobordisms, using a
    manifold of positive simplicial volume.
    """
    d = registry.description(name)
    if not d.is_closed or d.dim < 2:
        raise CobordismError(f'{name}: a closed manifold of dimension at least 2 is required')
    sv = registry.state(name).intervals[Invariant.SV]
    if not (sv.positive or sv.lo > 0):
        raise CobordismError(f'{name}: positivity of simplicial volume not established')

    doubled = sv.scale(2)
    trail = [f'sv({name}) = {sv}, strictly positive',
             'an extension F is invariant under Reinhart bordism',
             f'sv(S^{d.dim}) = 0, so F is invariant under oriented bordism',
             f'{name} + -{name} bounds {name} x [0, 1], so F({name} + -{name}) = 0',
             f'monoidality gives F({name} + -{name}) = 2 sv({name}) in {doubled}, which excludes 0']
    reinhart = None
    if d.dim <= 4:
        try:
            single = reinhart_class(registry, name)
        except CobordismError:
            pass
        else:
            reinhart = single + single.reversed()
            trail.append(f'Reinhart class of {name} + -{name}: {single} + {single.reversed()} = {reinhart}')
    trail.append('contradiction: no such extension exists')
    return ObstructionWitness(name, d.dim, sv, doubled, reinhart, tuple(trail))


def connsum_monoid_eval(registry: Registry, word: Sequence[str], n: int) -> Interval:
    """
    Simplicial volume as a monoid homomorphism on connected sums of closed n-manifolds, n >= 3. The empty word
    is the sphere.
    """
    if n < 3:
        raise CobordismError('Simplicial volume is additive under connected sums only from dimension 3 on')
    total = Interval.zero()
    for label in word:
        try:
            d = registry.description(label)
        except InferenceError as ex:
            raise CobordismError(str(ex))
        if d.dim != n or not d.is_closed or d.connected is False:
            raise CobordismError(f'{label}: expected a closed connected {n}-manifold')
        total = total + registry.state(label).intervals[Invariant.SV]
    return total
