import os
import re
from dataclasses import dataclass, field
from enum import Enum
from logging import DEBUG
from threading import RLock
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple, Union

from .base import (BUS_MSG_INCONSISTENCY, BUS_MSG_RULE_FIRED, BaseElement, InconsistencyError, InferenceError,
                   ManifoldError)
from .certificates import Certificate
from .complexes import Complex, euler_characteristic
from .descriptions import CHI_QUANTITIES, QUANTITIES, Invariant, ManifoldDescription
from .homology import homology
from .intervals import Interval
from .ledger import Ledger
from .manifolds import ManifoldComplex, manifold_check
from .rules import CATALOG, Conclusion, Rule

__all__ = ['ProvenanceStep', 'InvariantState', 'TriangulationData', 'QueryResult', 'GromovStatus',
           'GromovReport', 'Registry', 'DEFAULT_MAX_PASSES']

DEFAULT_MAX_PASSES = 256

_REF = re.compile(r'^(?P<quantity>\w+)\((?P<target>.+)\)$')


@dataclass(frozen=True)
class ProvenanceStep:
    rule: str
    target: str
    quantity: str
    value: str
    inputs: Tuple[str, ...]
    citation: str

    def to_dict(self) -> Dict[str, Any]:
        return {'rule': self.rule, 'target': self.target, 'quantity': self.quantity, 'value': self.value,
                'inputs': list(self.inputs), 'citation': self.citation}


def _unknown_intervals() -> Dict[Invariant, Interval]:
    return {i: Interval.unknown() for i in Invariant}


@dataclass
class InvariantState:
    name: str
    dim: int
    intervals: Dict[Invariant, Interval] = field(default_factory=_unknown_intervals)
    chi: Optional[int] = None
    chi_rel: Optional[int] = None
    chi_boundary: Optional[int] = None
    betti: Optional[Tuple[int, ...]] = None
    provenance: Dict[str, List[ProvenanceStep]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def value(self, quantity: str) -> Union[Interval, int, Tuple[int, ...], None]:
        if quantity in CHI_QUANTITIES or quantity == 'betti':
            return getattr(self, quantity)
        return self.intervals[Invariant(quantity)]

    def values(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {i.value: str(v) for i, v in self.intervals.items()}
        for quantity in CHI_QUANTITIES:
            result[quantity] = getattr(self, quantity)
        result['betti'] = None if self.betti is None else list(self.betti)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name,
                'dim': self.dim,
                'values': self.values(),
                'provenance': {q: [s.to_dict() for s in steps] for q, steps in sorted(self.provenance.items())},
                'notes': list(self.notes)}


@dataclass(frozen=True)
class TriangulationData:
    """
    Exact data computed once from a triangulation attached to a description.
    """

    name: str
    closed: bool
    orientable: bool
    chi: int
    chi_rel: int
    chi_boundary: int
    betti: Tuple[int, ...]

    @classmethod
    def from_triangulation(cls, triangulation: Union[Complex, ManifoldComplex]) -> 'TriangulationData':
        if isinstance(triangulation, Complex):
            try:
                triangulation = manifold_check(triangulation, require_orientable=False)
            except ManifoldError as ex:
                raise InferenceError(f'{triangulation.name}: not a manifold triangulation: {ex}')
        m = triangulation
        chi = m.euler_characteristic
        chi_boundary = 0 if m.is_closed else euler_characteristic(m.boundary_complex())
        return cls(m.name, m.is_closed, m.is_orientable, chi, chi - chi_boundary, chi_boundary,
                   homology(m.complex).betti)


@dataclass(frozen=True)
class QueryResult:
    target: str
    quantity: str
    value: Union[Interval, int, Tuple[int, ...], None]
    provenance: Tuple[ProvenanceStep, ...]

    @property
    def text(self) -> str:
        if self.value is None:
            return 'unknown'
        if isinstance(self.value, tuple):
            return '(' + ', '.join(str(v) for v in self.value) + ')'
        return str(self.value)

    @property
    def citations(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(s.citation for s in self.provenance))

    def to_dict(self) -> Dict[str, Any]:
        return {'target': self.target, 'quantity': self.quantity, 'value': self.text,
                'provenance': [s.to_dict() for s in self.provenance]}


class GromovStatus(Enum):
    HOLDS = 'holds'
    VACUOUS = 'vacuous'
    CANDIDATE = 'candidate'
    NON_HYPOTHESIS = 'non_hypothesis'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class GromovReport:
    target: str
    status: GromovStatus
    relative: bool
    sv: Interval
    chi: Optional[int]
    failing: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'target': self.target, 'status': self.status.value, 'relative': self.relative,
                'sv': str(self.sv), 'chi': self.chi, 'failing': list(self.failing), 'notes': list(self.notes)}


class Registry(BaseElement):
    """
    Declared manifold descriptions and their invariant states. ``propagate`` runs the rule catalog until no
    interval narrows and no Euler characteristic is newly determined.
    """

    def __init__(self, *args, max_passes: int = None, catalog: Sequence[Rule] = None, **kwargs):
        super(Registry, self).__init__(*args, **kwargs)

        if max_passes is None:
            max_passes = int(os.environ.get('SVLAB_MAX_PASSES', DEFAULT_MAX_PASSES))
        self.max_passes = max_passes

        self.catalog: List[Rule] = list(CATALOG if catalog is None else catalog)

        self._descriptions: Dict[str, ManifoldDescription] = {}
        self._states: Dict[str, InvariantState] = {}
        self._triangulations: Dict[str, TriangulationData] = {}
        self._ledger: Optional[Ledger] = None
        self._lock = RLock()

    def __contains__(self, name: str) -> bool:
        return name in self._descriptions

    def add_manifold(self, d: ManifoldDescription, *,
                     triangulation: Union[Complex, ManifoldComplex] = None) -> str:
        d.validate()
        with self._lock:
            if d.name in self._descriptions:
                raise InferenceError(f'{d.name}: already registered')
            for ref in d.references():
                if ref not in self._descriptions:
                    raise InferenceError(f'{d.name}: unknown reference {ref}')
            self._check_dimensions(d)

            data = None
            if triangulation is not None:
                data = TriangulationData.from_triangulation(triangulation)
                if triangulation.dim != d.dim:
                    raise InferenceError(f'{d.name}: triangulation {data.name} has dimension {triangulation.dim}')
                if d.closed is not None and d.closed != data.closed:
                    raise InferenceError(f'{d.name}: triangulation {data.name} disagrees on the boundary')

            self._descriptions[d.name] = d
            self._states[d.name] = InvariantState(d.name, d.dim)
            if data is not None:
                self._triangulations[d.name] = data

        self.log(f'Registered {d.name} (dim {d.dim})')
        return d.name

    def _check_dimensions(self, d: ManifoldDescription):
        def dim_of(ref: str) -> int:
            return self._descriptions[ref].dim

        for b in d.boundary:
            if dim_of(b.name) != d.dim - 1:
                raise InferenceError(f'{d.name}: boundary component {b.name} must have dimension {d.dim - 1}')
        for ref in d.along:
            if dim_of(ref) != d.dim - 1:
                raise InferenceError(f'{d.name}: glueing locus {ref} must have dimension {d.dim - 1}')
        for ref in d.summands + d.glued + d.disjoint + tuple(
                r for r in (d.double_of, d.cover_of, d.reverse_of) if r):
            if dim_of(ref) != d.dim:
                raise InferenceError(f'{d.name}: {ref} must have dimension {d.dim}')
        if d.factors and sum(dim_of(f) for f in d.factors) != d.dim:
            raise InferenceError(f'{d.name}: factor dimensions do not add up to {d.dim}')
        if d.fiber and d.base and dim_of(d.fiber) + dim_of(d.base) != d.dim:
            raise InferenceError(f'{d.name}: fibre and base dimensions do not add up to {d.dim}')

    def attach_ledger(self, ledger: Ledger):
        self._ledger = ledger

    @property
    def ledger(self) -> Optional[Ledger]:
        return self._ledger

    def names(self) -> List[str]:
        return list(self._descriptions)

    def description(self, name: str) -> ManifoldDescription:
        try:
            return self._descriptions[name]
        except KeyError:
            raise InferenceError(f'Unknown manifold {name}')

    def state(self, name: str) -> InvariantState:
        try:
            return self._states[name]
        except KeyError:
            raise InferenceError(f'Unknown manifold {name}')

    def triangulation_data(self, name: str) -> Optional[TriangulationData]:
        return self._triangulations.get(name)

    def certificates(self, target: str) -> List[Certificate]:
        if self._ledger is None:
            return []
        return self._ledger.for_target(target)

    def propagate(self, order: Sequence[str] = None) -> Dict[str, Dict[str, Any]]:
        if order is None:
            rules = self.catalog
        else:
            by_id = {r.id: r for r in self.catalog}
            try:
                rules = [by_id[i] for i in order]
            except KeyError as ex:
                raise InferenceError(f'Unknown rule {ex.args[0]}')

        with self._lock:
            for passes in range(1, self.max_passes + 1):
                changed = False
                for name in list(self._descriptions):
                    d = self._descriptions[name]
                    for r in rules:
                        for conclusion in r(self, d):
                            changed = self._apply(r, conclusion) or changed
                if not changed:
                    self.log(f'Fixpoint reached after {passes} passes', lvl=DEBUG)
                    return self.snapshot()
        raise InferenceError(f'No fixpoint after {self.max_passes} passes')

    def _apply(self, r: Rule, c: Conclusion) -> bool:
        state = self.state(c.target)
        step = ProvenanceStep(r.id, c.target, c.quantity, _text(c.value), c.inputs, r.citation)

        if c.quantity == 'note':
            if c.value in state.notes:
                return False
            state.notes.append(c.value)
            return True

        if c.quantity in CHI_QUANTITIES or c.quantity == 'betti':
            current = getattr(state, c.quantity)
            if current == c.value:
                return False
            if current is not None:
                self._conflict(step)
            setattr(state, c.quantity, c.value)
        else:
            invariant = Invariant(c.quantity)
            current = state.intervals[invariant]
            narrowed = current.intersect(c.value)
            if narrowed == current:
                return False
            if narrowed.is_empty:
                self._conflict(step)
            state.intervals[invariant] = narrowed

        state.provenance.setdefault(c.quantity, []).append(step)
        self.log(f'{r.id}: {c.quantity}({c.target}) <- {step.value}', lvl=DEBUG)
        self._send_message(self._build_message(BUS_MSG_RULE_FIRED, rule=r.id, target=c.target,
                                               quantity=c.quantity, value=step.value))
        return True

    def _conflict(self, step: ProvenanceStep):
        first = self._chain(step.target, step.quantity, set())
        second = [step.to_dict()]
        seen = {(step.target, step.quantity)}
        for ref in step.inputs:
            parsed = self._parse_ref(ref)
            if parsed is not None:
                second += self._chain(parsed[1], parsed[0], seen)
        self._send_message(self._build_message(BUS_MSG_INCONSISTENCY, target=step.target, quantity=step.quantity,
                                               first=first, second=second))
        raise InconsistencyError(step.target, step.quantity, first, second)

    def _parse_ref(self, ref: str) -> Optional[Tuple[str, str]]:
        match = _REF.match(ref)
        if match is None:
            return None
        quantity, target = match.group('quantity'), match.group('target')
        if target not in self._states or (quantity not in QUANTITIES and quantity != 'betti'):
            return None
        return quantity, target

    def _chain(self, target: str, quantity: str, seen: Set[Tuple[str, str]]) -> List[Dict[str, Any]]:
        if (target, quantity) in seen:
            return []
        seen.add((target, quantity))
        result = []
        for step in self._states[target].provenance.get(quantity, ()):
            result.append(step.to_dict())
            for ref in step.inputs:
                parsed = self._parse_ref(ref)
                if parsed is not None:
                    result += self._chain(parsed[1], parsed[0], seen)
        return result

    def _check_quantity(self, quantity: Union[str, Invariant]) -> str:
        if isinstance(quantity, Invariant):
            return quantity.value
        if quantity not in QUANTITIES and quantity != 'betti':
            raise InferenceError(f'Unknown quantity {quantity}')
        return quantity

    def query(self, name: str, quantity: Union[str, Invariant]) -> QueryResult:
        quantity = self._check_quantity(quantity)
        state = self.state(name)
        steps = []
        for step in self._chain(name, quantity, set()):
            steps.append(ProvenanceStep(step['rule'], step['target'], step['quantity'], step['value'],
                                        tuple(step['inputs']), step['citation']))
        return QueryResult(name, quantity, state.value(quantity), tuple(steps))

    def explain(self, name: str, quantity: Union[str, Invariant]) -> str:
        quantity = self._check_quantity(quantity)
        lines = [f'{quantity}({name}) = {self.query(name, quantity).text}']
        self._explain_into(lines, name, quantity, 1, {(name, quantity)})
        return '\n'.join(lines)

    def _explain_into(self, lines: List[str], name: str, quantity: str, depth: int, seen: Set[Tuple[str, str]]):
        indent = '  ' * depth
        for step in self._states[name].provenance.get(quantity, ()):
            lines.append(f'{indent}{step.rule}: {step.value}  [{step.citation}]')
            for ref in step.inputs:
                parsed = self._parse_ref(ref)
                if parsed is None or parsed[::-1] in seen:
                    lines.append(f'{indent}  {ref}')
                    continue
                q, target = parsed
                seen.add((target, q))
                lines.append(f'{indent}  {ref} = {self.query(target, q).text}')
                self._explain_into(lines, target, q, depth + 2, seen)

    def explain_all(self) -> Dict[str, Dict[str, str]]:
        result = {}
        for name, state in self._states.items():
            result[name] = {q: self.explain(name, q) for q in sorted(state.provenance)}
        return result

    def snapshot(self) -> Dict[str, Dict[str, Any]]:
        return {name: state.values() for name, state in self._states.items()}

    def gromov_check(self, name: str) -> GromovReport:
        """
        Confronts the vanishing of (relative) simplicial volume with the (relative) Euler characteristic.
        """
        d = self.description(name)
        state = self.state(name)
        relative = d.has_boundary
        sv = state.intervals[Invariant.SV_REL if relative else Invariant.SV]
        chi = state.chi_rel if relative else state.chi

        hypotheses: Dict[str, Optional[bool]] = {'aspherical': d.aspherical}
        if relative:
            hypotheses['boundary'] = True if d.boundary else None
            for b in d.boundary:
                hypotheses[f'{b.name}.pi1_injective'] = b.pi1_injective
                hypotheses[f'{b.name}.aspherical'] = \
                    b.aspherical if b.aspherical is not None else self.description(b.name).aspherical
        else:
            hypotheses['closed'] = d.closed

        notes = [f'{"sv_rel" if relative else "sv"}({name}) = {sv}',
                 f'{"chi_rel" if relative else "chi"}({name}) = {"unknown" if chi is None else chi}']
        notes += state.notes
        failing: Tuple[str, ...] = ()

        if sv.lo > 0 or sv.positive:
            status = GromovStatus.VACUOUS
        elif sv.is_exact and sv.value == 0:
            if chi is None:
                status = GromovStatus.UNKNOWN
            elif chi == 0:
                status = GromovStatus.HOLDS
            else:
                failing = tuple(k for k, v in hypotheses.items() if v is False)
                if failing:
                    status = GromovStatus.NON_HYPOTHESIS
                elif all(v is True for v in hypotheses.values()):
                    status = GromovStatus.CANDIDATE
                else:
                    status = GromovStatus.UNKNOWN
        else:
            status = GromovStatus.UNKNOWN

        if status == GromovStatus.CANDIDATE:
            self.log(f'{name} is a counterexample candidate', failing=failing)
        return GromovReport(name, status, relative, sv, chi, failing, tuple(notes))

    def fill_chi(self, name: str, fillings: Sequence[str]) -> int:
        """
        Smallest absolute Euler characteristic among the declared aspherical fillings of ``name``.
        """
        self.description(name)
        if not fillings:
            raise InferenceError(f'{name}: no fillings declared')
        values = []
        for filling in fillings:
            w = self.description(filling)
            ref = next((b for b in w.boundary if b.name == name), None)
            if ref is None:
                raise InferenceError(f'{filling} does not have {name} as boundary')
            boundary_aspherical = ref.aspherical if ref.aspherical is not None else self.description(name).aspherical
            if not (w.flag('aspherical') and ref.pi1_injective is True and boundary_aspherical is True):
                raise InferenceError(f'{filling}: a filling must be aspherical with pi1-injective aspherical '
                                     f'boundary')
            chi = self.state(filling).chi
            if chi is None:
                raise InferenceError(f'{filling}: Euler characteristic unknown')
            values.append(abs(chi))
        return min(values)

    def to_dict(self) -> Dict[str, Any]:
        return {name: {'description': self._descriptions[name].to_dict(), 'state': state.to_dict()}
                for name, state in self._states.items()}


def _text(value: Any) -> str:
    if isinstance(value, tuple):
        return '(' + ', '.join(str(v) for v in value) + ')'
    return str(value)
