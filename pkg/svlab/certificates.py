from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

from .base import CertificateError, ComplexError
from .chains import Chain, as_fraction, boundary
from .complexes import Complex
from .constructions import CoveringProjection, product
from .datasets import DatasetLibrary, dataset, recognize_surface
from .homology import boundary_matrix
from .manifolds import ManifoldComplex, manifold_check
from .snf import in_rational_span

__all__ = ['CertificateKind', 'ExplicitWitness', 'DerivedWitness', 'CoverEntry', 'Certificate',
           'VerificationReport', 'certify_from_triangulation', 'boundary_bound', 'double_bound', 'certify_cover',
           'cover_stable_bound', 'product_bound', 'verify']


class CertificateKind(Enum):
    REAL = 'real'
    INTEGRAL = 'integral'
    RELATIVE_REAL = 'relative-real'
    RELATIVE_INTEGRAL = 'relative-integral'
    STABLE_INTEGRAL = 'stable-integral'

    @property
    def is_integral(self) -> bool:
        return self in (CertificateKind.INTEGRAL, CertificateKind.RELATIVE_INTEGRAL, CertificateKind.STABLE_INTEGRAL)

    @property
    def is_relative(self) -> bool:
        return self in (CertificateKind.RELATIVE_REAL, CertificateKind.RELATIVE_INTEGRAL)

    @classmethod
    def for_cycle(cls, *, integral: bool, relative: bool) -> 'CertificateKind':
        if relative:
            return cls.RELATIVE_INTEGRAL if integral else cls.RELATIVE_REAL
        return cls.INTEGRAL if integral else cls.REAL

    def absolute(self) -> 'CertificateKind':
        return {CertificateKind.RELATIVE_REAL: CertificateKind.REAL,
                CertificateKind.RELATIVE_INTEGRAL: CertificateKind.INTEGRAL}.get(self, self)


def _manifold_to_dict(m: ManifoldComplex) -> Dict[str, Any]:
    result = (m.oriented_complex() if m.dim > 0 else m.complex).to_dict()
    if m.dim == 0:
        result['orientation'] = list(m.orientation)
    return result


def _manifold_from_dict(data: Mapping[str, Any]) -> ManifoldComplex:
    try:
        k = Complex(data['name'], data['dim'], data['vertices'], tuple(tuple(f) for f in data['facets']))
        if k.dim == 0:
            orientation = tuple(data.get('orientation') or (1,) * len(k.facets))
            return ManifoldComplex(k, orientation, (), (), len(k.facets))
        return manifold_check(k)
    except (KeyError, TypeError, ComplexError) as ex:
        raise CertificateError(f'Malformed witness complex: {ex}')


@dataclass(frozen=True)
class ExplicitWitness:
    chain: Chain
    manifold: ManifoldComplex

    def to_dict(self) -> Dict[str, Any]:
        return {'type': 'explicit', 'complex': _manifold_to_dict(self.manifold), 'chain': self.chain.to_dict()}


@dataclass(frozen=True)
class CoverEntry:
    """
    Integral certificate for a connected cover of some degree. When the cover was recognized as a library
    surface, ``model`` names it and ``certificate`` is the model's certificate. ``cover`` and ``base`` keep the
    covering projection so that verification can replay it.
    """

    certificate: 'Certificate'
    degree: int
    cover: Optional[ManifoldComplex] = None
    model: Optional[str] = None
    base: Optional[ManifoldComplex] = None

    @property
    def normalized_bound(self) -> Fraction:
        return self.certificate.bound / self.degree

    def to_dict(self) -> Dict[str, Any]:
        return {'certificate': self.certificate.to_dict(),
                'degree': self.degree,
                'cover': None if self.cover is None else _manifold_to_dict(self.cover),
                'model': self.model,
                'base': None if self.base is None else _manifold_to_dict(self.base)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'CoverEntry':
        cover, base = data.get('cover'), data.get('base')
        return cls(Certificate.from_dict(data['certificate']), int(data['degree']),
                   None if cover is None else _manifold_from_dict(cover), data.get('model'),
                   None if base is None else _manifold_from_dict(base))


@dataclass(frozen=True)
class DerivedWitness:
    rule: str
    inputs: Tuple['Certificate', ...] = ()
    covers: Tuple[CoverEntry, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'type': 'derived', 'rule': self.rule,
                'inputs': [c.to_dict() for c in self.inputs],
                'covers': [e.to_dict() for e in self.covers]}


Witness = Union[ExplicitWitness, DerivedWitness]


@dataclass(frozen=True)
class Certificate:
    target: str
    kind: CertificateKind
    bound: Fraction
    witness: Witness
    dimension: int
    relative: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'bound', as_fraction(self.bound))
        if self.bound < 0:
            raise CertificateError('Certificate bound must be non-negative')

    @property
    def is_explicit(self) -> bool:
        return isinstance(self.witness, ExplicitWitness)

    def to_dict(self) -> Dict[str, Any]:
        return {'target': self.target,
                'kind': self.kind.value,
                'bound': str(self.bound),
                'dimension': self.dimension,
                'relative': self.relative,
                'witness': self.witness.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'Certificate':
        try:
            witness_data = data['witness']
            if witness_data['type'] == 'explicit':
                witness = ExplicitWitness(Chain.from_dict(witness_data['chain']),
                                          _manifold_from_dict(witness_data['complex']))
            elif witness_data['type'] == 'derived':
                witness = DerivedWitness(witness_data['rule'],
                                         tuple(cls.from_dict(c) for c in witness_data.get('inputs', ())),
                                         tuple(CoverEntry.from_dict(e) for e in witness_data.get('covers', ())))
            else:
                raise CertificateError(f'Unknown witness type {witness_data["type"]}')
            return cls(data['target'], CertificateKind(data['kind']), as_fraction(data['bound']), witness,
                       int(data['dimension']), bool(data.get('relative', False)))
        except (KeyError, TypeError, ValueError, ComplexError) as ex:
            if isinstance(ex, CertificateError):
                raise
            raise CertificateError(f'Malformed certificate: {ex}')


@dataclass(frozen=True)
class VerificationReport:
    target: str
    kind: CertificateKind
    passed: bool
    reason: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {'target': self.target, 'kind': self.kind.value, 'passed': self.passed, 'reason': self.reason}


def certify_from_triangulation(m: ManifoldComplex, *, target: str = None) -> Tuple[Certificate, Certificate]:
    """
    The coherently oriented facet sum as an integral (relative) fundamental cycle, plus the real
    certificate with the same bound.
    """
    if not m.is_connected:
        raise CertificateError(f'{m.name} is not connected')
    chain = m.fundamental_cycle()
    witness = ExplicitWitness(chain, m)
    relative = not m.is_closed
    target = target or m.name
    integral = Certificate(target, CertificateKind.for_cycle(integral=True, relative=relative),
                           chain.l1_norm, witness, m.dim, relative)
    real = Certificate(target, CertificateKind.for_cycle(integral=False, relative=relative),
                       chain.l1_norm, witness, m.dim, relative)
    return integral, real


def boundary_bound(cert: Certificate) -> Certificate:
    if not cert.relative or not cert.kind.is_relative:
        raise CertificateError(f'{cert.target} is closed; boundary bounds need a relative certificate')
    if not cert.is_explicit:
        raise CertificateError('Boundary bounds need an explicit witness')

    chain = boundary(cert.witness.chain)
    m = cert.witness.manifold.boundary_manifold()
    result = Certificate(f'{cert.target}.boundary', cert.kind.absolute(), chain.l1_norm,
                         ExplicitWitness(chain, m), cert.dimension - 1, False)
    if result.bound > (cert.dimension + 1) * cert.bound:
        raise CertificateError(f'{result.target}: boundary norm exceeds the dimension bound')
    return result


def double_bound(cert: Certificate) -> Certificate:
    if not cert.relative or not cert.kind.is_relative:
        raise CertificateError(f'{cert.target} is closed and has no double')
    return Certificate(f'double({cert.target})', cert.kind.absolute(), 2 * cert.bound,
                       DerivedWitness('double', (cert,)), cert.dimension, False)


def certify_cover(projection: CoveringProjection, *, target: str = None,
                  library: DatasetLibrary = None) -> CoverEntry:
    cover = projection.cover
    if not cover.is_connected:
        raise CertificateError(f'{cover.name} is not connected')
    model = recognize_surface(cover)
    if model is not None:
        source = library.dataset(model) if library is not None else dataset(model)
        certificate, _ = certify_from_triangulation(source)
    else:
        certificate, _ = certify_from_triangulation(cover, target=target)
    return CoverEntry(certificate, projection.degree, cover, model, projection.base)


def _facet_set(m: ManifoldComplex):
    return frozenset(tuple(sorted(f)) for f in m.complex.facets)


def _cover_defect(entry: CoverEntry, base: Optional[ManifoldComplex], dimension: Optional[int]) -> Optional[str]:
    """
    Replay the covering projection stored in ``entry`` and return the first defect found, if any.
    """
    if not entry.certificate.kind.is_integral:
        return 'cover certificate is not integral'
    if entry.degree < 1:
        return 'cover degree must be at least 1'
    if entry.cover is None or entry.base is None:
        return 'no covering projection'
    if base is not None and _facet_set(entry.base) != _facet_set(base):
        return 'cover of a different base'
    if dimension is not None and (entry.base.dim != dimension or entry.certificate.dimension != dimension):
        return 'dimension mismatch'
    if len(entry.cover.complex.facets) != entry.degree * len(entry.base.complex.facets):
        return 'facet count differs from degree times base facets'
    if not CoveringProjection(entry.cover, entry.base, entry.degree).is_local_isomorphism():
        return 'projection is not simplicial of the stated degree'
    if not entry.cover.is_connected:
        return 'disconnected cover'
    if entry.model is not None:
        if recognize_surface(entry.cover) != entry.model or entry.certificate.target != entry.model:
            return 'cover recognition mismatch'
    elif not entry.certificate.is_explicit \
            or _facet_set(entry.certificate.witness.manifold) != _facet_set(entry.cover):
        return 'certificate is not for the cover'
    return None


def cover_stable_bound(base: Union[str, ManifoldComplex], covers: Sequence[CoverEntry], *,
                       dimension: int = None, name: str = None) -> Certificate:
    if not covers:
        raise CertificateError('Stable bounds need at least one cover')

    if isinstance(base, ManifoldComplex):
        name, dimension, triangulation = name or base.name, base.dim, base
    else:
        name, triangulation = name or base, covers[0].base
        dimension = covers[0].certificate.dimension if dimension is None else dimension
    for entry in covers:
        defect = _cover_defect(entry, triangulation, dimension)
        if defect is not None:
            raise CertificateError(f'{entry.certificate.target}: {defect}')

    bound = min(entry.normalized_bound for entry in covers)
    return Certificate(name, CertificateKind.STABLE_INTEGRAL, bound, DerivedWitness('stable-cover', (), tuple(covers)),
                       dimension, any(entry.certificate.relative for entry in covers))


def product_bound(cm: Certificate, cn: Certificate, *, name: str = None) -> Certificate:
    if not cm.is_explicit or not cn.is_explicit:
        raise CertificateError('Product bounds need explicit witnesses')
    k, shuffle = product(cm.witness.manifold, cn.witness.manifold,
                         name=name or f'product({cm.target}, {cn.target})')
    m = manifold_check(k)
    chain = shuffle.apply(cm.witness.chain, cn.witness.chain)
    integral = cm.kind.is_integral and cn.kind.is_integral
    relative = not m.is_closed
    result = Certificate(k.name, CertificateKind.for_cycle(integral=integral, relative=relative), chain.l1_norm,
                         ExplicitWitness(chain, m), m.dim, relative)
    expected = comb(m.dim, cm.dimension) * cm.bound * cn.bound
    if result.bound != expected:
        raise CertificateError(f'{k.name}: shuffle norm {result.bound} differs from {expected}')
    return result


def _fail(cert: Certificate, reason: str, **details) -> VerificationReport:
    return VerificationReport(cert.target, cert.kind, False, reason, details)


def _verify_explicit(cert: Certificate) -> VerificationReport:
    chain = cert.witness.chain
    m = cert.witness.manifold
    k = m.complex

    if cert.kind.is_integral and not chain.is_integral():
        return _fail(cert, 'non-integral coefficients')
    if chain.degree != m.dim or cert.dimension != m.dim:
        return _fail(cert, 'degree mismatch', degree=chain.degree, dimension=m.dim)
    missing = [s for s in chain.support if not k.contains(s)]
    if missing:
        return _fail(cert, 'simplex not in complex', simplex=list(missing[0]))
    if cert.relative != (not m.is_closed) or cert.kind.is_relative != cert.relative:
        return _fail(cert, 'kind mismatch')

    edge = boundary(chain) if chain.degree > 0 else Chain.zero(0)
    if m.is_closed:
        if chain.degree > 0 and not edge.is_zero():
            return _fail(cert, 'nonzero boundary')
        relative_to = None
    else:
        relative_to = m.boundary_complex()
        if any(not relative_to.contains(s) for s in edge.support):
            return _fail(cert, 'boundary not on the boundary complex')

    try:
        reference = m.fundamental_cycle()
    except ComplexError as ex:
        return _fail(cert, f'no fundamental cycle: {ex}')
    difference = chain - reference
    if relative_to is not None:
        difference = difference.restrict(s for s in difference.support if not relative_to.contains(s))
    entries, shape = boundary_matrix(k, m.dim + 1, relative_to)
    rows = {s: i for i, s in enumerate(s for s in k.simplices(m.dim)
                                       if relative_to is None or not relative_to.contains(s))}
    vector = {rows[s]: c for s, c in difference.items()}
    if not in_rational_span(entries, (len(rows), shape[1]), vector):
        return _fail(cert, 'not a fundamental cycle')

    if chain.l1_norm != cert.bound:
        return _fail(cert, 'norm mismatch', norm=str(chain.l1_norm), bound=str(cert.bound))
    return VerificationReport(cert.target, cert.kind, True)


def _verify_derived(cert: Certificate) -> VerificationReport:
    witness = cert.witness
    for inner in witness.inputs:
        report = verify(inner)
        if not report.passed:
            return _fail(cert, f'input {inner.target} failed: {report.reason}')

    if witness.rule == 'double':
        if len(witness.inputs) != 1:
            return _fail(cert, 'derivation replay mismatch')
        source = witness.inputs[0]
        if not source.relative or cert.kind != source.kind.absolute() \
                or cert.target != f'double({source.target})' or cert.dimension != source.dimension:
            return _fail(cert, 'derivation replay mismatch')
        if cert.bound != 2 * source.bound:
            return _fail(cert, 'norm mismatch', bound=str(cert.bound), expected=str(2 * source.bound))
        return VerificationReport(cert.target, cert.kind, True)

    if witness.rule == 'stable-cover':
        if not witness.covers or cert.kind != CertificateKind.STABLE_INTEGRAL:
            return _fail(cert, 'derivation replay mismatch')
        for entry in witness.covers:
            report = verify(entry.certificate)
            if not report.passed:
                return _fail(cert, f'cover {entry.certificate.target} failed: {report.reason}')
            defect = _cover_defect(entry, witness.covers[0].base, cert.dimension)
            if defect is not None:
                return _fail(cert, defect, cover=entry.certificate.target)
        expected = min(entry.normalized_bound for entry in witness.covers)
        if cert.bound != expected:
            return _fail(cert, 'norm mismatch', bound=str(cert.bound), expected=str(expected))
        return VerificationReport(cert.target, cert.kind, True)

    return _fail(cert, f'unknown derivation rule {witness.rule}')


def verify(cert: Certificate) -> VerificationReport:
    """
    Re-check a certificate from scratch. Defects are reported, never raised.
    """
    if isinstance(cert.witness, ExplicitWitness):
        return _verify_explicit(cert)
    return _verify_derived(cert)
