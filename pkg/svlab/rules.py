from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import TYPE_CHECKING, Any, Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .certificates import CertificateKind
from .descriptions import Invariant, ManifoldDescription
from .intervals import Interval

if TYPE_CHECKING:
    from .inference import Registry

__all__ = ['Conclusion', 'Rule', 'CATALOG', 'rule', 'rule_by_id', 'rules_for', 'quantity_ref']

SV, SV_Z, SISV = Invariant.SV, Invariant.SV_Z, Invariant.SISV
SV_REL, SV_REL_Z, SISV_REL = Invariant.SV_REL, Invariant.SV_REL_Z, Invariant.SISV_REL

Value = Union[Interval, int, Tuple[int, ...], str]


@dataclass(frozen=True)
class Conclusion:
    """
    One narrowing proposed by a rule. ``quantity`` is an invariant name, a chi quantity, ``betti`` or
    ``note``.
    """

    target: str
    quantity: str
    value: Value
    inputs: Tuple[str, ...] = ()


RuleFunc = Callable[['Registry', ManifoldDescription], Iterable[Conclusion]]


@dataclass(frozen=True)
class Rule:
    id: str
    citation: str
    apply: RuleFunc

    def __call__(self, ctx: 'Registry', d: ManifoldDescription) -> List[Conclusion]:
        return list(self.apply(ctx, d))


CATALOG: List[Rule] = []


def rule(rule_id: str, citation: str) -> Callable[[RuleFunc], Rule]:
    def inner(func: RuleFunc) -> Rule:
        result = Rule(rule_id, citation, func)
        CATALOG.append(result)
        return result

    return inner


def rule_by_id(rule_id: str) -> Rule:
    for r in CATALOG:
        if r.id == rule_id:
            return r
    raise KeyError(rule_id)


def quantity_ref(quantity: Union[Invariant, str], target: str) -> str:
    if isinstance(quantity, Invariant):
        quantity = quantity.value
    return f'{quantity}({target})'


def _flag_ref(key: str, target: str) -> str:
    return f'flag {key}({target})'


def _narrow(target: str, invariant: Invariant, value: Interval, *inputs: str) -> Conclusion:
    return Conclusion(target, invariant.value, value, tuple(inputs))


def _set(target: str, quantity: str, value: Any, *inputs: str) -> Conclusion:
    return Conclusion(target, quantity, value, tuple(inputs))


def _interval(ctx: 'Registry', target: str, invariant: Invariant) -> Interval:
    return ctx.state(target).intervals[invariant]


def _chi(ctx: 'Registry', target: str, quantity: str = 'chi') -> Optional[int]:
    return getattr(ctx.state(target), quantity)


def _volume_slot(d: ManifoldDescription) -> Optional[Invariant]:
    if d.is_closed:
        return SV
    if d.has_boundary:
        return SV_REL
    return None


def _vanish(d: ManifoldDescription, *flags: str) -> List[Conclusion]:
    slot = _volume_slot(d)
    if slot is None:
        return []
    return [_narrow(d.name, slot, Interval.zero(), *(_flag_ref(f, d.name) for f in flags))]


def _at_most(value: Interval, factor: Union[int, Fraction]) -> Optional[Interval]:
    if value.hi is None:
        return None
    return Interval.at_most(value.hi * factor)


# declared and computed data

@rule('R-declared', 'Declared values are taken as given.')
def _declared(ctx, d):
    if d.chi is not None:
        yield _set(d.name, 'chi', d.chi, 'declared')
    if d.chi_rel is not None:
        yield _set(d.name, 'chi_rel', d.chi_rel, 'declared')
    for invariant, value in d.declared:
        yield _narrow(d.name, invariant, value, 'declared')


@rule('R-triangulation', 'The Euler characteristic and Betti numbers of a triangulation are computed exactly.')
def _triangulation(ctx, d):
    data = ctx.triangulation_data(d.name)
    if data is None:
        return
    source = f'triangulation {data.name}'
    yield _set(d.name, 'chi', data.chi, source)
    yield _set(d.name, 'chi_rel', data.chi_rel, source)
    yield _set(d.name, 'chi_boundary', data.chi_boundary, source)
    yield _set(d.name, 'betti', data.betti, source)


@rule('R-certificate', 'A verified fundamental cycle bounds the corresponding norm from above by its norm.')
def _certificate(ctx, d):
    targets = [d.name] + ([d.triangulation] if d.triangulation and d.triangulation != d.name else [])
    for target in targets:
        for cert in ctx.certificates(target):
            if cert.kind == CertificateKind.STABLE_INTEGRAL:
                slot = SISV_REL if cert.relative else SISV
            else:
                slot = {CertificateKind.REAL: SV, CertificateKind.INTEGRAL: SV_Z,
                        CertificateKind.RELATIVE_REAL: SV_REL, CertificateKind.RELATIVE_INTEGRAL: SV_REL_Z}[cert.kind]
            yield _narrow(d.name, slot, Interval.at_most(cert.bound),
                          f'certificate {cert.kind.value}({cert.target}) <= {cert.bound}')


# vanishing results

@rule('R-closed-rel', 'For closed manifolds the relative and absolute norms agree and the boundary is empty.')
def _closed_rel(ctx, d):
    if not d.is_closed:
        return
    for invariant in (SV, SV_Z, SISV):
        relative = invariant.relative
        yield _narrow(d.name, invariant, _interval(ctx, d.name, relative), quantity_ref(relative, d.name))
        yield _narrow(d.name, relative, _interval(ctx, d.name, invariant), quantity_ref(invariant, d.name))
    yield _set(d.name, 'chi_boundary', 0, _flag_ref('closed', d.name))
    chi, chi_rel = _chi(ctx, d.name), _chi(ctx, d.name, 'chi_rel')
    if chi is not None:
        yield _set(d.name, 'chi_rel', chi, quantity_ref('chi', d.name))
    if chi_rel is not None:
        yield _set(d.name, 'chi', chi_rel, quantity_ref('chi_rel', d.name))


@rule('R-amenable', 'Closed manifolds of positive dimension with amenable (or boundedly acyclic) fundamental '
                    'group have vanishing simplicial volume.')
def _amenable(ctx, d):
    if d.is_closed and d.dim > 0:
        for key in ('amenable', 'boundedly_acyclic'):
            if d.flag(key):
                yield _narrow(d.name, SV, Interval.zero(), _flag_ref(key, d.name))


@rule('R-bdry-amenable', 'If the fundamental groups of a manifold and of all its boundary components are '
                         'amenable, the relative simplicial volume vanishes.')
def _boundary_amenable(ctx, d):
    if d.has_boundary and d.flag('amenable') and d.flag('boundary_amenable'):
        yield _narrow(d.name, SV_REL, Interval.zero(), _flag_ref('amenable', d.name),
                      _flag_ref('boundary_amenable', d.name))


@rule('R-lex', 'A manifold whose fundamental group lies in the lex class, with surjective boundary inclusion on '
               'fundamental groups and boundary components of vanishing volume, has vanishing relative volume.')
def _lex(ctx, d):
    if not (d.has_boundary and d.boundary and d.flag('lex') and d.flag('boundary_pi1_surjective')):
        return
    if all(_interval(ctx, b.name, SV).is_exact and _interval(ctx, b.name, SV).value == 0 for b in d.boundary):
        yield _narrow(d.name, SV_REL, Interval.zero(), _flag_ref('lex', d.name),
                      _flag_ref('boundary_pi1_surjective', d.name),
                      *(quantity_ref(SV, b.name) for b in d.boundary))


@rule('R-selfmap', 'A self-map of degree other than 0, 1 and -1 forces the simplicial volume to vanish.')
def _self_map(ctx, d):
    if d.self_map_degree is not None and abs(d.self_map_degree) >= 2:
        yield from _vanish(d, 'self_map_degree')


@rule('R-S1/F-structure', 'Closed manifolds with a non-trivial smooth circle action or a polarized '
                          'F-structure have vanishing simplicial volume.')
def _circle_action(ctx, d):
    if d.is_closed:
        for key in ('s1_action', 'f_structure'):
            if d.flag(key):
                yield _narrow(d.name, SV, Interval.zero(), _flag_ref(key, d.name))


@rule('R-affine', 'Closed affine manifolds whose holonomy contains a non-trivial translation have vanishing '
                  'simplicial volume.')
def _affine(ctx, d):
    if d.is_closed and d.flag('affine'):
        yield _narrow(d.name, SV, Interval.zero(), _flag_ref('affine', d.name))


@rule('R-graph3', 'Graph 3-manifolds have vanishing simplicial volume.')
def _graph3(ctx, d):
    if d.dim == 3 and d.flag('graph_manifold'):
        yield from _vanish(d, 'graph_manifold')


@rule('R-mapping-torus-3', 'Mapping tori of self-homeomorphisms of closed 3-manifolds have vanishing simplicial '
                           'volume.')
def _mapping_torus(ctx, d):
    if d.is_closed and d.dim == 4 and d.flag('mapping_torus'):
        yield _narrow(d.name, SV, Interval.zero(), _flag_ref('mapping_torus', d.name))


@rule('R-minvol', 'Closed manifolds of zero minimal volume have vanishing simplicial volume.')
def _minvol(ctx, d):
    if d.is_closed and d.flag('zero_minvol'):
        yield _narrow(d.name, SV, Interval.zero(), _flag_ref('zero_minvol', d.name))


@rule('R-amcat-sv', 'A closed n-manifold with amenable category at most n has vanishing simplicial volume.')
def _amcat_sv(ctx, d):
    if d.is_closed and d.amcat is not None and d.amcat <= d.dim:
        yield _narrow(d.name, SV, Interval.zero(), _flag_ref('amcat', d.name))


@rule('R-amcat-chi', 'A closed aspherical n-manifold with amenable category at most n has vanishing Euler '
                     'characteristic.')
def _amcat_chi(ctx, d):
    if d.is_closed and d.flag('aspherical') and d.amcat is not None and d.amcat <= d.dim:
        yield _set(d.name, 'chi', 0, _flag_ref('amcat', d.name), _flag_ref('aspherical', d.name))


@rule('R-fibre', 'A bundle whose fibre has amenable category at most dim(total space)/(dim(base)+1) has '
                 'vanishing simplicial volume, and vanishing Euler characteristic when aspherical; Euler '
                 'characteristics multiply in bundles.')
def _fibre(ctx, d):
    if d.fiber is None or d.base is None:
        return
    fiber, base = ctx.description(d.fiber), ctx.description(d.base)
    fiber_amcat = d.fiber_amcat if d.fiber_amcat is not None else fiber.amcat
    if d.is_closed and fiber_amcat is not None and fiber_amcat * (base.dim + 1) <= d.dim:
        inputs = (_flag_ref('amcat', fiber.name), f'dim({base.name}) = {base.dim}')
        yield _narrow(d.name, SV, Interval.zero(), *inputs)
        if d.flag('aspherical'):
            yield _set(d.name, 'chi', 0, *inputs, _flag_ref('aspherical', d.name))
    chi_f, chi_b = _chi(ctx, fiber.name), _chi(ctx, base.name)
    if chi_f is not None and chi_b is not None:
        yield _set(d.name, 'chi', chi_f * chi_b, quantity_ref('chi', fiber.name), quantity_ref('chi', base.name))


@rule('R-relvan', 'A manifold with an amenable open cover of multiplicity at most n that is amenable relative '
                  'to the boundary has vanishing relative simplicial volume.')
def _relative_cover(ctx, d):
    if d.has_boundary and d.flag('relative_amenable_cover'):
        yield _narrow(d.name, SV_REL, Interval.zero(), _flag_ref('relative_amenable_cover', d.name))


@rule('R-coamenable', 'A manifold admitting a locally co-amenable subcomplex has vanishing relative simplicial '
                      'volume.')
def _coamenable(ctx, d):
    if d.has_boundary and d.flag('coamenable_subcomplex'):
        yield _narrow(d.name, SV_REL, Interval.zero(), _flag_ref('coamenable_subcomplex', d.name))


@rule('R-triple-product', 'Products of at least three compact manifolds with non-empty boundary have vanishing '
                          'relative simplicial volume.')
def _triple_product(ctx, d):
    if len(d.factors) >= 3 and all(ctx.description(f).has_boundary for f in d.factors):
        yield _narrow(d.name, SV_REL, Interval.zero(), *(_flag_ref('boundary', f) for f in d.factors))


# products, sums and glueings

@rule('R-product-bounds', 'For M closed of dimension m and N compact of dimension n, '
                          '|M| |N, dN| <= |M x N, d(M x N)| <= C(n+m, m) |M| |N, dN|.')
def _product_bounds(ctx, d):
    if len(d.factors) != 2:
        return
    first, second = (ctx.description(f) for f in d.factors)
    if first.is_closed:
        m, n = first, second
    elif second.is_closed:
        m, n = second, first
    else:
        return
    a, b = _interval(ctx, m.name, SV), _interval(ctx, n.name, SV_REL)
    product = a.multiply(b)
    hi = None if product.hi is None else comb(m.dim + n.dim, m.dim) * product.hi
    yield _narrow(d.name, SV_REL, Interval(product.lo, hi, product.positive),
                  quantity_ref(SV, m.name), quantity_ref(SV_REL, n.name))


@rule('R-product-chi', 'The Euler characteristic and the relative Euler characteristic are multiplicative.')
def _product_chi(ctx, d):
    if len(d.factors) < 2:
        return
    for quantity in ('chi', 'chi_rel'):
        values = [_chi(ctx, f, quantity) for f in d.factors]
        if all(v is not None for v in values):
            yield _set(d.name, quantity, prod(values), *(quantity_ref(quantity, f) for f in d.factors))


@rule('R-parity-products', 'Products of two manifolds with boundary whose dimensions have different parity feed '
                           'the relative question through their boundary.')
def _parity_products(ctx, d):
    if len(d.factors) != 2:
        return
    first, second = (ctx.description(f) for f in d.factors)
    if first.has_boundary and second.has_boundary and (first.dim - second.dim) % 2:
        yield _set(d.name, 'note', f'boundary of {d.name} is a candidate for the vanishing question')


@rule('R-connsum', 'chi(M # N) = chi(M) + chi(N) - chi(S^n), and in dimension at least 3 simplicial volume is '
                   'additive under connected sums.')
def _connected_sum(ctx, d):
    if len(d.summands) < 2:
        return
    values = [_chi(ctx, s) for s in d.summands]
    if all(v is not None for v in values):
        yield _set(d.name, 'chi', sum(values) - (len(values) - 1) * (1 + (-1) ** d.dim),
                   *(quantity_ref('chi', s) for s in d.summands))
    if d.dim >= 3:
        total = Interval.zero()
        for s in d.summands:
            total = total + _interval(ctx, s, SV)
        yield _narrow(d.name, SV, total, *(quantity_ref(SV, s) for s in d.summands))


def _glued_total(ctx, d) -> Interval:
    total = Interval.zero()
    for piece in d.glued:
        total = total + _interval(ctx, piece, SV_REL)
    return total


@rule('R-glue-subadd', 'Glueing along boundary components with amenable fundamental groups is subadditive for '
                       'relative simplicial volume.')
def _glue_subadditive(ctx, d):
    if d.glued and d.flag('glue_amenable'):
        total = _glued_total(ctx, d)
        if total.hi is not None:
            yield _narrow(d.name, SV_REL, Interval.at_most(total.hi), _flag_ref('glue_amenable', d.name),
                          *(quantity_ref(SV_REL, p) for p in d.glued))


@rule('R-glue-add', 'If moreover all glued boundary components are pi1-injective, relative simplicial volume is '
                    'additive.')
def _glue_additive(ctx, d):
    if d.glued and d.flag('glue_amenable') and d.flag('glue_pi1_injective'):
        yield _narrow(d.name, SV_REL, _glued_total(ctx, d), _flag_ref('glue_amenable', d.name),
                      _flag_ref('glue_pi1_injective', d.name), *(quantity_ref(SV_REL, p) for p in d.glued))


@rule('R-glue-chi', 'The Euler characteristic of a glued manifold is the sum over the pieces minus the sum over '
                    'the glued boundary components.')
def _glue_chi(ctx, d):
    if not d.glued:
        return
    pieces = [_chi(ctx, p) for p in d.glued]
    along = [_chi(ctx, a) for a in d.along]
    if all(v is not None for v in pieces + along):
        yield _set(d.name, 'chi', sum(pieces) - sum(along), *(quantity_ref('chi', p) for p in d.glued),
                   *(quantity_ref('chi', a) for a in d.along))


@rule('R-double', 'chi(D(M)) = 2 chi(M) - chi(dM), and reflecting a relative fundamental cycle gives '
                  '|D(M)| <= 2 |M, dM|, also with integral coefficients.')
def _double(ctx, d):
    if d.double_of is None:
        return
    source = d.double_of
    chi, chi_boundary = _chi(ctx, source), _chi(ctx, source, 'chi_boundary')
    if chi is not None and chi_boundary is not None:
        yield _set(d.name, 'chi', 2 * chi - chi_boundary, quantity_ref('chi', source),
                   quantity_ref('chi_boundary', source))
    for absolute, relative in ((SV, SV_REL), (SV_Z, SV_REL_Z)):
        bound = _at_most(_interval(ctx, source, relative), 2)
        if bound is not None:
            yield _narrow(d.name, absolute, bound, quantity_ref(relative, source))


@rule('R-stable-double', 'The stable integral simplicial volume of a double is at most twice the relative stable '
                         'integral simplicial volume.')
def _stable_double(ctx, d):
    if d.double_of is None:
        return
    bound = _at_most(_interval(ctx, d.double_of, SISV_REL), 2)
    if bound is not None:
        yield _narrow(d.name, SISV, bound, quantity_ref(SISV_REL, d.double_of))


# boundary estimates

@rule('R-bounding', 'The boundary of a relative fundamental cycle is a fundamental cycle of the boundary, so '
                    '|dW| <= (n+1) |W, dW|.')
def _bounding(ctx, d):
    if not d.boundary:
        return
    for relative, absolute in ((SV_REL, SV), (SV_REL_Z, SV_Z)):
        bound = _at_most(_interval(ctx, d.name, relative), d.dim + 1)
        if bound is not None:
            for b in d.boundary:
                yield _narrow(b.name, absolute, bound, quantity_ref(relative, d.name))
    if len(d.boundary) == 1:
        bound = _at_most(_interval(ctx, d.name, SISV_REL), d.dim + 1)
        if bound is not None:
            yield _narrow(d.boundary[0].name, SISV, bound, quantity_ref(SISV_REL, d.name))


@rule('R-bdry-est', '|M, dM| >= |dM| / (n+1) for the real and integral norms; for the stable integral norm some '
                    'boundary component satisfies the same estimate.')
def _boundary_estimate(ctx, d):
    if not d.boundary:
        return
    for relative, absolute in ((SV_REL, SV), (SV_REL_Z, SV_Z)):
        values = [_interval(ctx, b.name, absolute) for b in d.boundary]
        lower = sum(v.lo for v in values) / (d.dim + 1)
        yield _narrow(d.name, relative, Interval(lower, None, any(v.positive for v in values)),
                      *(quantity_ref(absolute, b.name) for b in d.boundary))
    values = [_interval(ctx, b.name, SISV) for b in d.boundary]
    lower = min(v.lo for v in values) / (d.dim + 1)
    yield _narrow(d.name, SISV_REL, Interval(lower, None, all(v.positive for v in values)),
                  *(quantity_ref(SISV, b.name) for b in d.boundary))


# Betti numbers and Euler characteristic

@rule('R-betti', 'Betti numbers are bounded by the integral simplicial volume: b_k(M) <= |M, dM|_Z.')
def _betti(ctx, d):
    data = ctx.triangulation_data(d.name)
    if data is None or not data.betti or not data.orientable:
        return
    largest = max(data.betti)
    if largest:
        yield _narrow(d.name, SV_Z if data.closed else SV_REL_Z, Interval.at_least(largest),
                      quantity_ref('betti', d.name))


@rule('R-chi-stable', '|chi(M, dM)| <= (n+1) times the relative stable integral simplicial volume.')
def _chi_stable(ctx, d):
    chi_rel = _chi(ctx, d.name, 'chi_rel')
    if chi_rel is None:
        return
    yield _narrow(d.name, SISV_REL, Interval(Fraction(abs(chi_rel), d.dim + 1), None, chi_rel != 0),
                  quantity_ref('chi_rel', d.name))


@rule('R-odd-chi', 'Closed odd-dimensional manifolds have vanishing Euler characteristic.')
def _odd_chi(ctx, d):
    if d.is_closed and d.dim % 2:
        yield _set(d.name, 'chi', 0, _flag_ref('closed', d.name), f'dim({d.name}) = {d.dim}')


@rule('R-chi-rel', 'chi(M, dM) = chi(M) - chi(dM).')
def _chi_rel(ctx, d):
    state = ctx.state(d.name)
    chi, chi_rel, chi_boundary = state.chi, state.chi_rel, state.chi_boundary
    if chi is not None and chi_boundary is not None:
        yield _set(d.name, 'chi_rel', chi - chi_boundary, quantity_ref('chi', d.name),
                   quantity_ref('chi_boundary', d.name))
    if chi_rel is not None and chi_boundary is not None:
        yield _set(d.name, 'chi', chi_rel + chi_boundary, quantity_ref('chi_rel', d.name),
                   quantity_ref('chi_boundary', d.name))
    if chi is not None and chi_rel is not None:
        yield _set(d.name, 'chi_boundary', chi - chi_rel, quantity_ref('chi', d.name),
                   quantity_ref('chi_rel', d.name))


@rule('R-duality', 'Poincare-Lefschetz duality gives chi(M, dM) = (-1)^n chi(M).')
def _duality(ctx, d):
    state = ctx.state(d.name)
    sign = -1 if d.dim % 2 else 1
    if state.chi is not None:
        yield _set(d.name, 'chi_rel', sign * state.chi, quantity_ref('chi', d.name))
    if state.chi_rel is not None:
        yield _set(d.name, 'chi', sign * state.chi_rel, quantity_ref('chi_rel', d.name))


@rule('R-bdry-sum', 'The Euler characteristic of the boundary is the sum over its components.')
def _boundary_sum(ctx, d):
    if not d.boundary:
        return
    values = [_chi(ctx, b.name) for b in d.boundary]
    if all(v is not None for v in values):
        yield _set(d.name, 'chi_boundary', sum(values), *(quantity_ref('chi', b.name) for b in d.boundary))


@rule('R-bdry-parity', 'For odd n, chi(dM) = 2 chi(M); for even n the closed odd-dimensional boundary has '
                       'vanishing Euler characteristic.')
def _boundary_parity(ctx, d):
    if not d.has_boundary:
        return
    if d.dim % 2 == 0:
        yield _set(d.name, 'chi_boundary', 0, f'dim({d.name}) = {d.dim}')
        return
    state = ctx.state(d.name)
    if state.chi is not None:
        yield _set(d.name, 'chi_boundary', 2 * state.chi, quantity_ref('chi', d.name))
    if state.chi_boundary is not None and state.chi_boundary % 2 == 0:
        yield _set(d.name, 'chi', state.chi_boundary // 2, quantity_ref('chi_boundary', d.name))


# comparison of norms

@rule('R-integral-ge-real', 'The real norm is at most the stable integral norm, which is at most the integral '
                            'norm.')
def _integral_ge_real(ctx, d):
    for real, stable, integral in ((SV, SISV, SV_Z), (SV_REL, SISV_REL, SV_REL_Z)):
        a, b, c = (_interval(ctx, d.name, i) for i in (real, stable, integral))
        yield _narrow(d.name, stable, Interval(a.lo, None, a.positive), quantity_ref(real, d.name))
        yield _narrow(d.name, integral, Interval(b.lo, None, b.positive), quantity_ref(stable, d.name))
        if c.hi is not None:
            yield _narrow(d.name, stable, Interval.at_most(c.hi), quantity_ref(integral, d.name))
        if b.hi is not None:
            yield _narrow(d.name, real, Interval.at_most(b.hi), quantity_ref(stable, d.name))


def _identify(ctx, d, real: Invariant, stable: Invariant, *inputs: str):
    yield _narrow(d.name, stable, _interval(ctx, d.name, real), quantity_ref(real, d.name), *inputs)
    yield _narrow(d.name, real, _interval(ctx, d.name, stable), quantity_ref(stable, d.name), *inputs)


@rule('R-sisv-equal', 'Stable integral and real simplicial volume agree for aspherical surfaces, aspherical '
                      '3-manifolds with empty or toroidal boundary, and aspherical manifolds with residually finite '
                      'fundamental group that are graph manifolds, carry a circle action or an F-structure, or have '
                      'amenable category at most their dimension.')
def _sisv_equal(ctx, d):
    if not d.flag('aspherical'):
        return
    reasons = []
    if d.dim == 2:
        reasons.append(f'dim({d.name}) = 2')
    if d.dim == 3 and (d.is_closed or d.flag('toroidal_boundary')):
        reasons.append(_flag_ref('closed' if d.is_closed else 'toroidal_boundary', d.name))
    if d.flag('residually_finite'):
        for key in ('s1_action', 'f_structure'):
            if d.flag(key):
                reasons.append(_flag_ref(key, d.name))
        if d.is_closed and d.flag('graph_manifold'):
            reasons.append(_flag_ref('graph_manifold', d.name))
        if d.is_closed and d.amcat is not None and d.amcat <= d.dim:
            reasons.append(_flag_ref('amcat', d.name))
    if not reasons:
        return
    reasons.append(_flag_ref('aspherical', d.name))
    if d.is_closed:
        yield from _identify(ctx, d, SV, SISV, reasons[0], reasons[-1])
    elif d.has_boundary:
        yield from _identify(ctx, d, SV_REL, SISV_REL, reasons[0], reasons[-1])


@rule('R-sisv-amenable', 'Closed aspherical manifolds with residually finite amenable fundamental group have '
                         'vanishing stable integral simplicial volume.')
def _sisv_amenable(ctx, d):
    if d.is_closed and d.dim > 0 and d.flag('aspherical') and d.flag('amenable') and d.flag('residually_finite'):
        yield _narrow(d.name, SISV, Interval.zero(), _flag_ref('aspherical', d.name),
                      _flag_ref('amenable', d.name), _flag_ref('residually_finite', d.name))


@rule('R-positive', 'Closed hyperbolic, negatively curved or locally symmetric manifolds of non-compact type, and '
                    'aspherical manifolds with non-elementary hyperbolic fundamental group, have positive '
                    'simplicial volume; so do compact hyperbolic manifolds with boundary relative to it.')
def _positive(ctx, d):
    if d.dim < 2:
        return
    if d.is_closed:
        for key in ('hyperbolic', 'negative_curvature', 'locally_symmetric'):
            if d.flag(key):
                yield _narrow(d.name, SV, Interval.strictly_positive(), _flag_ref(key, d.name))
        if d.flag('hyperbolic_group') and d.flag('aspherical'):
            yield _narrow(d.name, SV, Interval.strictly_positive(), _flag_ref('hyperbolic_group', d.name),
                          _flag_ref('aspherical', d.name))
    elif d.has_boundary and d.flag('hyperbolic'):
        yield _narrow(d.name, SV_REL, Interval.strictly_positive(), _flag_ref('hyperbolic', d.name))


# covers and identities

@rule('R-cover', 'A degree d covering multiplies simplicial volume and Euler characteristic by d, and the stable '
                 'integral volume of the base is at most that of the cover divided by d.')
def _cover(ctx, d):
    if d.cover_of is None:
        return
    base, degree = d.cover_of, d.cover_degree
    for invariant in (SV, SV_REL):
        yield _narrow(d.name, invariant, _interval(ctx, base, invariant).scale(degree), quantity_ref(invariant, base))
        yield _narrow(base, invariant, _interval(ctx, d.name, invariant).scale(Fraction(1, degree)),
                      quantity_ref(invariant, d.name))
    for invariant in (SV_Z, SV_REL_Z):
        bound = _at_most(_interval(ctx, base, invariant), degree)
        if bound is not None:
            yield _narrow(d.name, invariant, bound, quantity_ref(invariant, base))
    for invariant in (SISV, SISV_REL):
        bound = _at_most(_interval(ctx, d.name, invariant), Fraction(1, degree))
        if bound is not None:
            yield _narrow(base, invariant, bound, quantity_ref(invariant, d.name))
    for quantity in ('chi', 'chi_rel'):
        value = _chi(ctx, base, quantity)
        if value is not None:
            yield _set(d.name, quantity, degree * value, quantity_ref(quantity, base))
        value = _chi(ctx, d.name, quantity)
        if value is not None and value % degree == 0:
            yield _set(base, quantity, value // degree, quantity_ref(quantity, d.name))


@rule('R-disjoint', 'Simplicial volume and Euler characteristic are additive over disjoint unions.')
def _disjoint(ctx, d):
    if not d.disjoint:
        return
    for invariant in (SV, SV_Z, SV_REL, SV_REL_Z):
        total = Interval.zero()
        for part in d.disjoint:
            total = total + _interval(ctx, part, invariant)
        yield _narrow(d.name, invariant, total, *(quantity_ref(invariant, p) for p in d.disjoint))
    for quantity in ('chi', 'chi_rel'):
        values = [_chi(ctx, p, quantity) for p in d.disjoint]
        if all(v is not None for v in values):
            yield _set(d.name, quantity, sum(values), *(quantity_ref(quantity, p) for p in d.disjoint))


@rule('R-reversed', 'Reversing the orientation changes none of the norms or Euler characteristics.')
def _reversed(ctx, d):
    if d.reverse_of is None:
        return
    source = d.reverse_of
    for invariant in Invariant:
        yield _narrow(d.name, invariant, _interval(ctx, source, invariant), quantity_ref(invariant, source))
        yield _narrow(source, invariant, _interval(ctx, d.name, invariant), quantity_ref(invariant, d.name))
    for quantity in ('chi', 'chi_rel', 'chi_boundary'):
        value = _chi(ctx, source, quantity)
        if value is not None:
            yield _set(d.name, quantity, value, quantity_ref(quantity, source))
        value = _chi(ctx, d.name, quantity)
        if value is not None:
            yield _set(source, quantity, value, quantity_ref(quantity, d.name))


def rules_for(ids: Sequence[str] = None) -> List[Rule]:
    if ids is None:
        return list(CATALOG)
    return [rule_by_id(i) for i in ids]
