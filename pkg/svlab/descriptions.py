from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Tuple

from .base import InferenceError
from .intervals import Interval

__all__ = ['Invariant', 'BoundaryRef', 'ManifoldDescription', 'ATTRIBUTES', 'CHI_QUANTITIES', 'QUANTITIES']


class Invariant(Enum):
    SV = 'sv'
    SV_Z = 'sv_z'
    SISV = 'sisv'
    SV_REL = 'sv_rel'
    SV_REL_Z = 'sv_rel_z'
    SISV_REL = 'sisv_rel'

    @property
    def is_relative(self) -> bool:
        return self in (Invariant.SV_REL, Invariant.SV_REL_Z, Invariant.SISV_REL)

    @property
    def absolute(self) -> 'Invariant':
        return {Invariant.SV_REL: Invariant.SV,
                Invariant.SV_REL_Z: Invariant.SV_Z,
                Invariant.SISV_REL: Invariant.SISV}.get(self, self)

    @property
    def relative(self) -> 'Invariant':
        return {Invariant.SV: Invariant.SV_REL,
                Invariant.SV_Z: Invariant.SV_REL_Z,
                Invariant.SISV: Invariant.SISV_REL}.get(self, self)


CHI_QUANTITIES = ('chi', 'chi_rel', 'chi_boundary')

QUANTITIES = tuple(i.value for i in Invariant) + CHI_QUANTITIES


@dataclass(frozen=True)
class BoundaryRef:
    name: str
    pi1_injective: Optional[bool] = None
    aspherical: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'pi1_injective': self.pi1_injective, 'aspherical': self.aspherical}


@dataclass(frozen=True)
class ManifoldDescription:
    """
    Declared facts about an oriented compact manifold. Flags are tri-state: ``True``, ``False`` or ``None``
    for unknown. Only ``True`` lets a rule fire.
    """

    name: str
    dim: int

    closed: Optional[bool] = None
    oriented: Optional[bool] = None
    connected: Optional[bool] = None
    aspherical: Optional[bool] = None
    boundary: Tuple[BoundaryRef, ...] = ()

    # fundamental group
    amenable: Optional[bool] = None
    boundary_amenable: Optional[bool] = None
    residually_finite: Optional[bool] = None
    hyperbolic_group: Optional[bool] = None
    lex: Optional[bool] = None
    boundary_pi1_surjective: Optional[bool] = None
    boundedly_acyclic: Optional[bool] = None
    amcat: Optional[int] = None
    self_map_degree: Optional[int] = None

    # geometry and structure
    hyperbolic: Optional[bool] = None
    negative_curvature: Optional[bool] = None
    locally_symmetric: Optional[bool] = None
    s1_action: Optional[bool] = None
    f_structure: Optional[bool] = None
    affine: Optional[bool] = None
    graph_manifold: Optional[bool] = None
    mapping_torus: Optional[bool] = None
    zero_minvol: Optional[bool] = None
    toroidal_boundary: Optional[bool] = None
    coamenable_subcomplex: Optional[bool] = None
    relative_amenable_cover: Optional[bool] = None
    fiber: Optional[str] = None
    base: Optional[str] = None
    fiber_amcat: Optional[int] = None

    # declared values
    signature: Optional[int] = None
    chi: Optional[int] = None
    chi_rel: Optional[int] = None
    declared: Tuple[Tuple['Invariant', Interval], ...] = ()

    # how the manifold was built from registered ones
    factors: Tuple[str, ...] = ()
    summands: Tuple[str, ...] = ()
    glued: Tuple[str, ...] = ()
    along: Tuple[str, ...] = ()
    glue_amenable: Optional[bool] = None
    glue_pi1_injective: Optional[bool] = None
    double_of: Optional[str] = None
    cover_of: Optional[str] = None
    cover_degree: Optional[int] = None
    reverse_of: Optional[str] = None
    disjoint: Tuple[str, ...] = ()
    triangulation: Optional[str] = None

    @property
    def is_closed(self) -> bool:
        return self.closed is True

    @property
    def has_boundary(self) -> bool:
        return self.closed is False or bool(self.boundary)

    def flag(self, key: str) -> bool:
        return getattr(self, key) is True

    def references(self) -> Tuple[str, ...]:
        """
        Names of the registered descriptions this one refers to.
        """
        result = [b.name for b in self.boundary]
        result += list(self.factors) + list(self.summands) + list(self.glued) + list(self.along)
        result += list(self.disjoint)
        result += [r for r in (self.double_of, self.cover_of, self.reverse_of, self.fiber, self.base) if r]
        return tuple(result)

    def validate(self):
        if self.dim < 0:
            raise InferenceError(f'{self.name}: dimension must be non-negative')
        if self.closed is True and self.boundary:
            raise InferenceError(f'{self.name}: a closed manifold has no boundary components')
        if self.signature is not None:
            if self.dim != 4:
                raise InferenceError(f'{self.name}: a signature is only declared in dimension 4')
            if self.chi is not None and self.is_closed and (self.signature - self.chi) % 2:
                raise InferenceError(f'{self.name}: signature and Euler characteristic differ in parity')
        if self.cover_of is not None and (self.cover_degree is None or self.cover_degree < 1):
            raise InferenceError(f'{self.name}: a cover needs a degree of at least 1')
        for key in ('amcat', 'fiber_amcat'):
            value = getattr(self, key)
            if value is not None and value < 0:
                raise InferenceError(f'{self.name}: {key} must be non-negative')

    def declared_interval(self, invariant: Invariant) -> Optional[Interval]:
        for key, value in self.declared:
            if key == invariant:
                return value
        return None

    @classmethod
    def from_mapping(cls, name: str, values: Mapping[str, Any]) -> 'ManifoldDescription':
        kwargs: Dict[str, Any] = {}
        declared = []
        for key, value in values.items():
            kind = ATTRIBUTES.get(key)
            if kind is None:
                raise InferenceError(f'{name}: unknown attribute {key}')
            if kind == 'interval':
                if not isinstance(value, Interval):
                    raise InferenceError(f'{name}: attribute {key} expects an interval or a number')
                declared.append((Invariant(key), value))
                continue
            kwargs[key] = _coerce(name, key, kind, value)
        if 'dim' not in kwargs:
            raise InferenceError(f'{name}: missing attribute dim')
        return cls(name=name, declared=tuple(declared), **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or value == ():
                continue
            if f.name == 'boundary':
                value = [b.to_dict() for b in value]
            elif f.name == 'declared':
                value = {k.value: str(v) for k, v in value}
            elif isinstance(value, tuple):
                value = list(value)
            result[f.name] = value
        return result


def _coerce(name: str, key: str, kind: str, value: Any) -> Any:
    if kind == 'flag':
        if value is not None and not isinstance(value, bool):
            raise InferenceError(f'{name}: attribute {key} expects true, false or unknown')
        return value
    if kind == 'int':
        if isinstance(value, bool) or not isinstance(value, int):
            raise InferenceError(f'{name}: attribute {key} expects an integer')
        return value
    if kind == 'name':
        if not isinstance(value, str):
            raise InferenceError(f'{name}: attribute {key} expects a manifold name')
        return value
    if kind == 'names':
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
            raise InferenceError(f'{name}: attribute {key} expects a list of manifold names')
        return tuple(value)
    if kind == 'boundary':
        if not isinstance(value, (list, tuple)):
            raise InferenceError(f'{name}: attribute {key} expects a list of boundary components')
        refs = []
        for item in value:
            if isinstance(item, BoundaryRef):
                refs.append(item)
            elif isinstance(item, str):
                refs.append(BoundaryRef(item))
            else:
                raise InferenceError(f'{name}: invalid boundary component {item!r}')
        return tuple(refs)
    raise InferenceError(f'{name}: unsupported attribute kind {kind}')


# DSL vocabulary: attribute name to value kind.
ATTRIBUTES: Dict[str, str] = {
    'dim': 'int',
    'closed': 'flag', 'oriented': 'flag', 'connected': 'flag', 'aspherical': 'flag',
    'boundary': 'boundary',
    'amenable': 'flag', 'boundary_amenable': 'flag', 'residually_finite': 'flag', 'hyperbolic_group': 'flag',
    'lex': 'flag', 'boundary_pi1_surjective': 'flag', 'boundedly_acyclic': 'flag',
    'amcat': 'int', 'self_map_degree': 'int',
    'hyperbolic': 'flag', 'negative_curvature': 'flag', 'locally_symmetric': 'flag', 's1_action': 'flag',
    'f_structure': 'flag', 'affine': 'flag', 'graph_manifold': 'flag', 'mapping_torus': 'flag',
    'zero_minvol': 'flag', 'toroidal_boundary': 'flag', 'coamenable_subcomplex': 'flag',
    'relative_amenable_cover': 'flag',
    'fiber': 'name', 'base': 'name', 'fiber_amcat': 'int',
    'signature': 'int', 'chi': 'int', 'chi_rel': 'int',
    'factors': 'names', 'summands': 'names', 'glued': 'names', 'along': 'names',
    'glue_amenable': 'flag', 'glue_pi1_injective': 'flag',
    'double_of': 'name', 'cover_of': 'name', 'cover_degree': 'int', 'reverse_of': 'name',
    'disjoint': 'names', 'triangulation': 'name',
}
ATTRIBUTES.update({i.value: 'interval' for i in Invariant})
