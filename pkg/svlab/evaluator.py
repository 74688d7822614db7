import re
from dataclasses import replace
from fractions import Fraction
from logging import ERROR, WARNING
from math import inf
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from .base import BUS_MSG_STATEMENT, BaseElement, EvaluationError, InconsistencyError, ManifoldError, SvlabError
from .certificates import (Certificate, boundary_bound, certify_cover, certify_from_triangulation,
                           cover_stable_bound, double_bound, product_bound, verify)
from .cobordism import (Cobordism, CobordismCategory, connsum_monoid_eval, extension_obstruction,
                        reinhart_class)
from .constructions import (CoveringProjection, CoverSpec, GlueingSpec, connected_sum, cyclic_cover, double, glue,
                            product, puncture)
from .datasets import Dataset, DatasetLibrary
from .descriptions import ATTRIBUTES, QUANTITIES, BoundaryRef, ManifoldDescription
from .dsl import (Assert, BoundaryItem, Bracket, Call, Certify, CobordismCompose, CobordismDecl, Flag, Infinity,
                  Let, ManifoldDecl, Number, OpenInterval, Pairs, Query, Ref, Script, Symbol, Vector, format_node,
                  parse)
from .inference import Registry
from .intervals import Interval, format_value
from .ledger import Ledger
from .manifolds import ManifoldComplex, manifold_check
from .report import Report
from .subdivisions import barycentric_subdivide

__all__ = ['Evaluator', 'evaluate']

_PROPERTIES = ('facets', 'components', 'boundary_components', 'orientable', 'closed')

_BOUNDARY_ATTR = re.compile(r'^b(?P<index>\d+)$')

_TERM_ARITY = {'fillchi': (2, inf), 'monoid': (1, inf)}

Provenance = List[Dict[str, Any]]


def _as_manifold(obj: Dataset) -> ManifoldComplex:
    if isinstance(obj, ManifoldComplex):
        return obj
    return manifold_check(obj, require_orientable=False)


def _renamed(obj: Dataset, name: str) -> Dataset:
    if isinstance(obj, ManifoldComplex):
        return replace(obj, complex=obj.complex.renamed(name))
    return obj.renamed(name)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def _text(value: Any) -> str:
    if value is None:
        return 'unknown'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return '(' + ', '.join(_text(v) for v in value) + ')'
    if _is_number(value):
        return format_value(value)
    return str(value)


def _bound(node: Any) -> Optional[Fraction]:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Infinity):
        return None
    raise EvaluationError(f'Expected a number or inf, got {format_node(node)}')


def _is_interval(node: Bracket) -> bool:
    return len(node.items) == 2 and all(isinstance(i, (Number, Infinity)) for i in node.items)


def _interval(node: Any) -> Interval:
    if isinstance(node, Number):
        return Interval.exact(node.value)
    if isinstance(node, Bracket) and _is_interval(node):
        lo, hi = node.items
        if isinstance(lo, Infinity):
            raise EvaluationError(f'Interval {format_node(node)} has an infinite lower end')
        return Interval(lo.value, _bound(hi))
    if isinstance(node, OpenInterval):
        return Interval(node.lo.value, _bound(node.hi), True)
    raise EvaluationError(f'Expected an interval, got {format_node(node)}')


def _expected(node: Any, *, sequence: bool = False) -> Any:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Flag):
        return node.value
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Vector):
        return node.values
    if isinstance(node, Bracket):
        if sequence or not _is_interval(node):
            return tuple(_expected(i, sequence=True) for i in node.items)
        return _interval(node)
    if isinstance(node, OpenInterval):
        return _interval(node)
    raise EvaluationError(f'Unsupported value {format_node(node)}')


def _equals(actual: Any, expected: Any) -> bool:
    if expected is None:
        return actual is None or actual == 'unknown' or (isinstance(actual, Interval) and actual.is_unknown)
    if isinstance(actual, Interval):
        if isinstance(expected, Interval):
            return actual == expected
        return _is_number(expected) and actual.is_exact and actual.value == expected
    if isinstance(actual, bool) or isinstance(expected, bool):
        return actual is expected
    if isinstance(actual, tuple):
        return isinstance(expected, tuple) and len(actual) == len(expected) and \
            all(_equals(a, e) for a, e in zip(actual, expected))
    if _is_number(actual):
        return _is_number(expected) and actual == expected
    return actual == expected


def _compare(actual: Any, op: str, node: Any) -> bool:
    """
    Intervals compare by their endpoints: ``<=`` and ``<`` need the upper end, ``>=`` and ``>`` the lower end.
    ``== v`` holds for an interval only when it is exactly ``v``.
    """
    expected = _expected(node, sequence=isinstance(actual, tuple))
    if op in ('==', '!='):
        return _equals(actual, expected) == (op == '==')

    if op == 'in':
        if not isinstance(expected, Interval):
            raise EvaluationError(f"'in' expects an interval, got {format_node(node)}")
        if isinstance(actual, Interval):
            return actual.is_subset(expected)
        if _is_number(actual):
            return expected.contains(actual)
        raise EvaluationError(f'Cannot test {_text(actual)} for membership')

    if not _is_number(expected):
        raise EvaluationError(f'{op} expects a number, got {format_node(node)}')
    if isinstance(actual, Interval):
        if op in ('<=', '<'):
            if actual.hi is None:
                return False
            return actual.hi <= expected if op == '<=' else actual.hi < expected
        if op == '>=':
            return actual.lo >= expected
        return actual.lo > expected or (expected == 0 and actual.positive)
    if _is_number(actual):
        return {'<=': actual <= expected, '<': actual < expected,
                '>=': actual >= expected, '>': actual > expected}[op]
    raise EvaluationError(f'Cannot compare {_text(actual)} with {op}')


def _name(node: Any) -> str:
    if isinstance(node, Ref) and not node.attrs:
        return node.base
    raise EvaluationError(f'Expected a name, got {format_node(node)}')


def _int(node: Any) -> int:
    if isinstance(node, Number) and node.value.denominator == 1:
        return int(node.value)
    raise EvaluationError(f'Expected an integer, got {format_node(node)}')


def _arity(call: Call, low: int, high: float = None):
    high = low if high is None else high
    if not low <= len(call.args) <= high:
        if high == inf:
            expected = f'at least {low}'
        elif low == high:
            expected = str(low)
        else:
            expected = f'{low} to {high}'
        raise EvaluationError(f'{call.func} takes {expected} arguments, got {len(call.args)}')


def _steps(*results) -> Provenance:
    return [s.to_dict() for r in results for s in r.provenance]


class Evaluator(BaseElement):
    """
    Executes scripts statement by statement against an inference registry, a certificate ledger and a dataset
    library. Bare names resolve to let-bindings first and to datasets second; a dataset is registered the
    first time a statement needs its invariants.
    """

    def __init__(self,
                 *args,
                 library: DatasetLibrary = None,
                 registry: Registry = None,
                 ledger: Ledger = None,
                 explain: bool = False,
                 **kwargs):
        super(Evaluator, self).__init__(*args, **kwargs)
        self.library = library or DatasetLibrary(bus=self.bus)
        self.registry = registry or Registry(bus=self.bus)
        if ledger is None:
            ledger = self.registry.ledger if self.registry.ledger is not None else Ledger(bus=self.bus)
        self.ledger = ledger
        self.registry.attach_ledger(self.ledger)
        self.explain = explain

        self._objects: Dict[str, Dataset] = {}
        self._origins: Dict[str, str] = {}
        self._projections: Dict[str, CoveringProjection] = {}
        self._certificates: Dict[str, Tuple[Certificate, ...]] = {}
        self._categories: Dict[int, CobordismCategory] = {}
        self._cobordisms: Dict[str, Tuple[CobordismCategory, Cobordism]] = {}
        self._report: Optional[Report] = None

    def evaluate(self, script: Script, *, source: str = None) -> Report:
        report = self._report = Report(source=source)
        for s in script.statements:
            report.statements += 1
            self._send_message(self._build_message(BUS_MSG_STATEMENT, line=s.line, statement=format_node(s)))
            if not self._guarded(s.line, format_node(s), lambda: self._execute(s)):
                break
        else:
            self._guarded(None, None, self.registry.propagate)

        report.invariants = self.registry.snapshot()
        report.ledger = {target: {kind.value: format_value(c.bound) for kind, c in
                                  self.ledger.bounds(target).items()}
                         for target in self.ledger.targets()}
        if self.explain:
            report.explain = self.registry.explain_all()
        self.log(f'Evaluated {report.statements} statements, exit code {report.exit_code}')
        return report

    def _guarded(self, line: Optional[int], statement: Optional[str], action: Callable[[], Any]) -> bool:
        try:
            action()
        except InconsistencyError as ex:
            self._report.inconsistency = {'line': line, 'statement': statement, 'target': ex.target,
                                          'quantity': ex.quantity, 'first': ex.first, 'second': ex.second}
            self.log(f'Inconsistency: {ex}', lvl=ERROR)
            return False
        except (SvlabError, ValueError) as ex:
            self._report_error(ex)
            self._report.errors.append({'line': line, 'statement': statement, 'message': str(ex)})
            self.log(str(EvaluationError(str(ex), line=line)), lvl=ERROR)
            return False
        return True

    def _execute(self, s):
        handler = {ManifoldDecl: self._declare,
                   Let: self._let,
                   Certify: self._certify,
                   CobordismDecl: self._declare_cobordism,
                   CobordismCompose: self._compose,
                   Assert: self._assert,
                   Query: self._query}[type(s)]
        handler(s)

    # names and objects

    def _object(self, name: str) -> Dataset:
        if name in self._objects:
            return self._objects[name]
        return self.library.dataset(name)

    def _origin(self, name: str) -> str:
        while name in self._origins:
            name = self._origins[name]
        return name

    def _resolve(self, node: Any) -> Dataset:
        if isinstance(node, Call):
            return self._construct(node, format_node(node))
        return self._object(_name(node))

    def _manifold(self, node: Any) -> ManifoldComplex:
        return _as_manifold(self._resolve(node))

    def _ensure_registered(self, name: str):
        if name not in self.registry:
            self._register_object(name, self._object(name))
            self.registry.propagate()

    def _register_object(self, name: str, obj: Dataset, relations: Dict[str, Any] = None):
        try:
            m = _as_manifold(obj)
        except ManifoldError as ex:
            self.log(f'{name} is a plain complex: {ex}', lvl=WARNING)
            return
        relations = relations or {}
        for value in relations.values():
            for ref in (value if isinstance(value, tuple) else (value,)):
                if isinstance(ref, str):
                    self._ensure_registered(ref)
        self.registry.add_manifold(ManifoldDescription(name=name, dim=m.dim, closed=m.is_closed,
                                                       oriented=m.is_orientable, connected=m.is_connected,
                                                       triangulation=name, **relations),
                                   triangulation=m)

    # manifold declarations

    def _declare(self, s: ManifoldDecl):
        values = {key: self._attribute(s.name, key, node) for key, node in s.attributes}
        triangulation = None
        if 'triangulation' in values:
            triangulation = self._object(values['triangulation'])
        d = ManifoldDescription.from_mapping(s.name, values)
        for ref in d.references():
            self._ensure_registered(ref)
        self.registry.add_manifold(d, triangulation=triangulation)

    def _attribute(self, name: str, key: str, node: Any) -> Any:
        kind = ATTRIBUTES[key]
        if kind == 'interval':
            return _interval(node)
        if kind == 'flag' and isinstance(node, Flag):
            return node.value
        if kind == 'int' and isinstance(node, Number) and node.value.denominator == 1:
            return int(node.value)
        if kind == 'name' and isinstance(node, Symbol):
            return node.name
        if kind == 'names' and isinstance(node, Bracket) and all(isinstance(i, Symbol) for i in node.items):
            return tuple(i.name for i in node.items)
        if kind == 'boundary' and isinstance(node, Bracket):
            refs = []
            for item in node.items:
                if isinstance(item, BoundaryItem):
                    refs.append(BoundaryRef(item.name, item.pi1_injective, item.aspherical))
                elif isinstance(item, Symbol):
                    refs.append(BoundaryRef(item.name))
                else:
                    break
            else:
                return tuple(refs)
        raise EvaluationError(f'{name}: invalid value {format_node(node)} for {key}')

    # constructions

    def _let(self, s: Let):
        obj = self._construct(s.expr, s.name)
        self._objects[s.name] = obj
        if isinstance(s.expr, Ref):
            self._origins[s.name] = self._origin(s.expr.base)
        self._register_object(s.name, obj, self._relations(s.expr))
        self.log(f'{s.name} = {format_node(s.expr)}')

    def _relations(self, expr: Any) -> Dict[str, Any]:
        if not isinstance(expr, Call):
            return {}
        names = tuple(a.base for a in expr.args if isinstance(a, Ref) and not a.attrs)
        if expr.func == 'double' and len(names) == len(expr.args) == 1:
            return {'double_of': names[0]}
        if expr.func == 'connsum' and len(names) == len(expr.args) == 2:
            return {'summands': names}
        if expr.func == 'product' and len(names) == len(expr.args) == 2:
            return {'factors': names}
        if expr.func == 'cover' and isinstance(expr.args[0], Ref) and not expr.args[0].attrs:
            return {'cover_of': names[0], 'cover_degree': _int(expr.args[2])}
        return {}

    def _construct(self, expr: Any, name: str) -> Dataset:
        if isinstance(expr, Ref):
            return _renamed(self._object(_name(expr)), name)
        if not isinstance(expr, Call):
            raise EvaluationError(f'Expected a construction, got {format_node(expr)}')

        func, args = expr.func, expr.args
        if func == 'double':
            _arity(expr, 1)
            return double(self._manifold(args[0]), name=name)[0]
        if func == 'connsum':
            _arity(expr, 2)
            return connected_sum(self._manifold(args[0]), self._manifold(args[1]), name=name)
        if func == 'product':
            _arity(expr, 2)
            k, _ = product(self._resolve(args[0]), self._resolve(args[1]), name=name)
            return _as_manifold(k)
        if func == 'glue':
            return self._glue(expr, name)
        if func == 'cover':
            return self._cover(expr, name)
        if func == 'subdivide':
            _arity(expr, 1)
            obj = self._resolve(args[0])
            k, _ = barycentric_subdivide(obj.complex if isinstance(obj, ManifoldComplex) else obj, name=name)
            return _as_manifold(k)
        if func == 'puncture':
            _arity(expr, 1, 2)
            facet = _int(args[1]) if len(args) == 2 else None
            return puncture(self._manifold(args[0]), facet, name=name)
        raise EvaluationError(f'Unknown construction {func}')

    def _boundary_side(self, node: Any) -> Tuple[str, ManifoldComplex, int]:
        match = _BOUNDARY_ATTR.match(node.attrs[0]) if isinstance(node, Ref) and len(node.attrs) == 1 else None
        if match is None:
            raise EvaluationError(f'Expected a boundary component like X.b0, got {format_node(node)}')
        return node.base, self._manifold(Ref(node.name, node.index)), int(match.group('index'))

    def _glue(self, expr: Call, name: str) -> ManifoldComplex:
        _arity(expr, 2, 3)
        args = list(expr.args)
        bijection = None
        if isinstance(args[-1], Pairs):
            bijection = {}
            for pair in args.pop().items:
                if len(pair.values) != 2 or any(v.denominator != 1 for v in pair.values):
                    raise EvaluationError(f'Glueing map entries are vertex pairs, got {format_node(pair)}')
                bijection[int(pair.values[0])] = int(pair.values[1])
        if len(args) != 2:
            raise EvaluationError('glue takes two boundary components')
        (left_name, left, i), (right_name, right, j) = (self._boundary_side(a) for a in args)
        if left_name == right_name:
            return glue(GlueingSpec(left, i, None, j, bijection), name=name)
        return glue(GlueingSpec(left, i, right, j, bijection), name=name)

    def _cover(self, expr: Call, name: str) -> ManifoldComplex:
        _arity(expr, 3)
        base_node, cocycle_node, degree_node = expr.args
        if not isinstance(cocycle_node, Ref) or len(cocycle_node.attrs) > 1:
            raise EvaluationError(f'Expected a cocycle name, got {format_node(cocycle_node)}')
        if cocycle_node.attrs:
            source, key = self._origin(cocycle_node.base), cocycle_node.attrs[0]
        else:
            source, key = self._origin(_name(base_node)), cocycle_node.base
        spec = CoverSpec(self._manifold(base_node), self.library.cocycle(source, key), _int(degree_node))
        cover, projection = cyclic_cover(spec, name=name)
        self._projections[name] = projection
        return cover

    # certificates

    def _certify(self, s: Certify):
        certs = self._certify_expr(s.expr)
        self.ledger.extend(certs)
        if s.alias is not None:
            self._certificates[s.alias] = tuple(certs)
        self._report.certificates.append({
            'line': s.line,
            'statement': format_node(s),
            'certificates': [{'target': c.target, 'kind': c.kind.value, 'bound': format_value(c.bound)}
                             for c in certs]})

    def _base_certificates(self, node: Any) -> List[Certificate]:
        name = _name(node)
        if name in self._certificates:
            return list(self._certificates[name])
        return list(certify_from_triangulation(self._manifold(node), target=name))

    def _certify_expr(self, expr: Any) -> List[Certificate]:
        if isinstance(expr, Ref):
            name = _name(expr)
            self._ensure_registered(name)
            return list(certify_from_triangulation(self._manifold(expr), target=name))
        if not isinstance(expr, Call):
            raise EvaluationError(f'Cannot certify {format_node(expr)}')

        func, args = expr.func, expr.args
        if func in ('boundary', 'double'):
            _arity(expr, 1)
            base = [c for c in self._base_certificates(args[0]) if c.relative]
            if not base:
                raise EvaluationError(f'{func} bounds need a relative certificate of {format_node(args[0])}')
            if func == 'boundary':
                return [boundary_bound(c) for c in base if c.is_explicit]
            return [double_bound(c) for c in base]
        if func == 'product':
            _arity(expr, 2)
            left, right = self._base_certificates(args[0]), self._base_certificates(args[1])
            return [product_bound(a, b, name=format_node(expr)) for a, b in zip(left, right)]
        if func == 'stable':
            if len(args) < 2:
                raise EvaluationError('stable takes a manifold and at least one cover')
            base = _name(args[0])
            entries = []
            for node in args[1:]:
                cover = _name(node)
                if cover not in self._projections:
                    raise EvaluationError(f'{cover} is not a cover built with cover(...)')
                entries.append(certify_cover(self._projections[cover], target=cover, library=self.library))
            return [cover_stable_bound(self._manifold(args[0]), entries, name=base)]
        raise EvaluationError(f'Unknown certificate command {func}')

    def _certificates_of(self, name: str) -> Sequence[Certificate]:
        certs = self._certificates.get(name) or self.ledger.for_target(name)
        if not certs:
            raise EvaluationError(f'No certificates for {name}')
        return certs

    # cobordisms

    def _category(self, dimension: int) -> CobordismCategory:
        if dimension not in self._categories:
            self._categories[dimension] = CobordismCategory(registry=self.registry, dimension=dimension,
                                                            bus=self.bus)
        return self._categories[dimension]

    def _morphism(self, name: str) -> Tuple[CobordismCategory, Cobordism]:
        try:
            return self._cobordisms[name]
        except KeyError:
            raise EvaluationError(f'Unknown cobordism {name}')

    def _declare_cobordism(self, s: CobordismDecl):
        for name in (s.body,) + s.incoming + s.outgoing:
            self._ensure_registered(name)
        self.registry.propagate()
        category = self._category(self.registry.description(s.body).dim)
        f = category.morphism(s.body, s.incoming, s.outgoing, name=s.name)
        self._cobordisms[s.name] = (category, f)
        self._report.cobordisms.append({'line': s.line, **f.to_dict()})

    def _compose(self, s: CobordismCompose):
        parts = [self._morphism(p) for p in s.parts]
        category = parts[0][0]
        if any(c is not category for c, _ in parts):
            raise EvaluationError(f'{s.name}: cobordisms of different dimensions')
        h = parts[0][1]
        for position, (_, g) in enumerate(parts[1:], start=2):
            h = category.compose(h, g, name=s.name if position == len(parts) else None)
        self._cobordisms[s.name] = (category, h)
        self._report.cobordisms.append({'line': s.line, **h.to_dict()})

    # assertions and queries

    def _assert(self, s: Assert):
        self.registry.propagate()
        value, provenance = self._term(s.term)
        passed = _compare(value, s.op, s.value)
        self._report.assertions.append({'line': s.line, 'statement': format_node(s), 'passed': passed,
                                        'value': _text(value), 'provenance': provenance})
        if not passed:
            self.log(f'line {s.line}: assertion failed: {format_node(s)} (value {_text(value)})', lvl=WARNING)

    def _query(self, s: Query):
        self.registry.propagate()
        value, provenance = self._term(s.term)
        self._report.queries.append({'line': s.line, 'statement': format_node(s), 'value': _text(value),
                                     'provenance': provenance})

    def _term(self, expr: Any) -> Tuple[Any, Provenance]:
        if isinstance(expr, Ref):
            if not expr.attrs:
                raise EvaluationError(f'{expr.base} is not a term; ask for a quantity such as chi({expr.base})')
            func, args = expr.attrs[-1], (Ref(expr.name, expr.index, expr.attrs[:-1]),)
        else:
            func, args = expr.func, expr.args
        if not args:
            raise EvaluationError(f'{func} needs an argument')

        if func in QUANTITIES or func == 'betti':
            name = _name(args[0])
            self._ensure_registered(name)
            result = self.registry.query(name, func)
            return result.value, _steps(result)
        if func in _PROPERTIES:
            m = self._manifold(args[0])
            if isinstance(args[0], Ref) and not args[0].attrs:
                self._ensure_registered(_name(args[0]))
            return {'facets': m.facet_count,
                    'components': m.components,
                    'boundary_components': len(m.boundary_components),
                    'orientable': m.is_orientable,
                    'closed': m.is_closed}[func], []
        handler = getattr(self, f'_term_{func}', None)
        if handler is None:
            raise EvaluationError(f'Unknown term {func}')
        _arity(Call(func, tuple(args)), *_TERM_ARITY.get(func, (1, 1)))
        return handler(*args)

    def _certificate_steps(self, certs: Sequence[Certificate]) -> Provenance:
        return [{'target': c.target, 'kind': c.kind.value, 'bound': format_value(c.bound)} for c in certs]

    def _term_norm(self, node: Any) -> Tuple[Any, Provenance]:
        certs = self._certificates_of(_name(node))
        return min(c.bound for c in certs), self._certificate_steps(certs)

    def _term_cert(self, node: Any) -> Tuple[Any, Provenance]:
        certs = self._certificates_of(_name(node))
        return tuple(c.kind.value for c in certs), self._certificate_steps(certs)

    def _term_verified(self, node: Any) -> Tuple[Any, Provenance]:
        certs = self._certificates_of(_name(node))
        reports = [verify(c) for c in certs]
        return all(r.passed for r in reports), [r.to_dict() for r in reports]

    def _term_gromov(self, node: Any) -> Tuple[Any, Provenance]:
        name = _name(node)
        self._ensure_registered(name)
        report = self.registry.gromov_check(name)
        self._report.gromov.append(report.to_dict())
        sv = self.registry.query(name, 'sv_rel' if report.relative else 'sv')
        chi = self.registry.query(name, 'chi_rel' if report.relative else 'chi')
        return report.status.value, _steps(sv, chi)

    def _term_fillchi(self, node: Any, *fillings: Any) -> Tuple[Any, Provenance]:
        names = [_name(f) for f in fillings]
        value = self.registry.fill_chi(_name(node), names)
        return value, _steps(*(self.registry.query(n, 'chi') for n in names))

    def _term_chi_functor(self, node: Any) -> Tuple[Any, Provenance]:
        category, f = self._morphism(_name(node))
        return category.chi_functor(f), _steps(self.registry.query(f.body, 'chi'))

    def _term_sv_functor(self, node: Any) -> Tuple[Any, Provenance]:
        category, f = self._morphism(_name(node))
        return category.sv_functor(f), _steps(self.registry.query(f.body, 'sv_rel'))

    def _term_reinhart(self, node: Any) -> Tuple[Any, Provenance]:
        name = _name(node)
        self._ensure_registered(name)
        return reinhart_class(self.registry, name).coordinates, _steps(self.registry.query(name, 'chi'))

    def _term_obstruction(self, node: Any) -> Tuple[Any, Provenance]:
        """
        Value is the interval monoidality forces on F(M + -M). Bordism invariance gives 0 there, so the
        obstruction holds exactly when the interval excludes 0.
        """
        name = _name(node)
        self._ensure_registered(name)
        witness = extension_obstruction(self.registry, name)
        self._report.obstructions.append(witness.to_dict())
        return witness.doubled, _steps(self.registry.query(name, 'sv'))

    def _term_monoid(self, dimension: Any, *words: Any) -> Tuple[Any, Provenance]:
        names = [_name(w) for w in words]
        for name in names:
            self._ensure_registered(name)
        value = connsum_monoid_eval(self.registry, names, _int(dimension))
        return value, _steps(*(self.registry.query(n, 'sv') for n in names))


def evaluate(script: Union[Script, str], *, source: str = None, **kwargs) -> Report:
    if isinstance(script, str):
        script = parse(script)
    return Evaluator(**kwargs).evaluate(script, source=source)
