from random import Random
from unittest import TestCase, mock

from svlab.base import BUS_MSG_INCONSISTENCY, BUS_MSG_RULE_FIRED, Bus, InconsistencyError, InferenceError
from svlab.certificates import certify_from_triangulation
from svlab.complexes import Complex
from svlab.datasets import dataset
from svlab.descriptions import BoundaryRef, Invariant, ManifoldDescription
from svlab.inference import GromovStatus, Registry, TriangulationData
from svlab.intervals import Interval
from svlab.ledger import Ledger
from svlab.rules import CATALOG, rules_for


class TriangulationDataTestCase(TestCase):

    def test_success_relative(self):
        data = TriangulationData.from_triangulation(dataset('PuncturedTorus'))

        self.assertFalse(data.closed)
        self.assertTrue(data.orientable)
        self.assertEqual((data.chi, data.chi_rel, data.chi_boundary), (-1, -1, 0))
        self.assertEqual(data.betti, (1, 2, 0))

    def test_success_non_orientable(self):
        data = TriangulationData.from_triangulation(dataset('RP2_6'))

        self.assertTrue(data.closed)
        self.assertFalse(data.orientable)
        self.assertEqual(data.chi, 1)

    def test_error_not_a_manifold(self):
        book = Complex('book', 2, 5, [(0, 1, 2), (0, 1, 3), (0, 1, 4)])

        with self.assertRaises(InferenceError):
            TriangulationData.from_triangulation(book)


class RegistryTestCase(TestCase):

    def setUp(self):
        self.registry = Registry()

    def test_success_register(self):
        self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))

        self.assertIn('B', self.registry)
        self.assertEqual(self.registry.names(), ['B'])
        self.assertEqual(self.registry.state('B').intervals[Invariant.SV], Interval.unknown())

    def test_error_duplicate(self):
        self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))

        with self.assertRaises(InferenceError):
            self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))

    def test_error_unknown_reference(self):
        with self.assertRaises(InferenceError):
            self.registry.add_manifold(ManifoldDescription('P', 2, boundary=(BoundaryRef('B'),)))

    def test_error_boundary_dimension(self):
        self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))

        with self.assertRaises(InferenceError):
            self.registry.add_manifold(ManifoldDescription('W', 3, boundary=(BoundaryRef('B'),)))

    def test_error_factor_dimensions(self):
        self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))

        with self.assertRaises(InferenceError):
            self.registry.add_manifold(ManifoldDescription('BxB', 3, factors=('B', 'B')))

    def test_error_triangulation_dimension(self):
        with self.assertRaises(InferenceError):
            self.registry.add_manifold(ManifoldDescription('M', 3, closed=True), triangulation=dataset('Torus7'))

    def test_error_triangulation_boundary(self):
        with self.assertRaises(InferenceError):
            self.registry.add_manifold(ManifoldDescription('M', 2, closed=True),
                                       triangulation=dataset('PuncturedTorus'))

    def test_error_unknown_manifold(self):
        with self.assertRaises(InferenceError):
            self.registry.state('nope')

    def test_error_unknown_quantity(self):
        self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))

        with self.assertRaises(InferenceError):
            self.registry.query('B', 'volume')


class DoubleTestCase(TestCase):

    def setUp(self):
        self.bus = Bus()
        self.fired = []
        self.bus.add_handler(lambda m: self.fired.append(m.params['rule']), msg_types=[BUS_MSG_RULE_FIRED])

        ledger = Ledger()
        ledger.extend(certify_from_triangulation(dataset('PuncturedTorus')))

        self.registry = Registry(bus=self.bus)
        self.registry.attach_ledger(ledger)
        self.registry.add_manifold(ManifoldDescription('B', 1, closed=True))
        self.registry.add_manifold(ManifoldDescription('P', 2, closed=False, boundary=(BoundaryRef('B'),),
                                                       triangulation='PuncturedTorus'),
                                   triangulation=dataset('PuncturedTorus'))
        self.registry.add_manifold(ManifoldDescription('D', 2, closed=True, double_of='P'))
        self.registry.propagate()

    def test_success_chi(self):
        result = self.registry.query('D', 'chi')

        self.assertEqual(result.value, -2)
        self.assertEqual(result.text, '-2')
        self.assertEqual(result.provenance[0].rule, 'R-double')
        self.assertIn('R-double', self.fired)

    def test_success_volume(self):
        self.assertEqual(self.registry.state('P').intervals[Invariant.SV_REL].hi, 13)
        self.assertEqual(self.registry.state('D').intervals[Invariant.SV].hi, 26)
        self.assertEqual(self.registry.state('D').intervals[Invariant.SISV].hi, 26)
        self.assertEqual(self.registry.state('B').intervals[Invariant.SV].hi, 39)
        self.assertEqual(self.registry.state('P').intervals[Invariant.SV_REL_Z].lo, 2)

    def test_success_explain(self):
        text = self.registry.explain('D', 'chi')

        self.assertTrue(text.startswith('chi(D) = -2'))
        self.assertIn('R-double', text)
        self.assertIn('chi(P) = -1', text)

    def test_success_snapshot(self):
        values = self.registry.snapshot()['D']

        self.assertEqual(values['chi'], -2)
        self.assertEqual(values['chi_boundary'], 0)
        self.assertEqual(self.registry.to_dict()['P']['description']['triangulation'], 'PuncturedTorus')

    def test_success_idempotent(self):
        before = self.registry.snapshot()
        self.fired.clear()

        self.assertEqual(self.registry.propagate(), before)
        self.assertEqual(self.fired, [])


class PropagateTestCase(TestCase):

    def test_success_order(self):
        registry = Registry()
        registry.add_manifold(ManifoldDescription('M', 3, closed=True))

        registry.propagate(order=['R-odd-chi'])

        self.assertEqual(registry.state('M').chi, 0)
        self.assertIsNone(registry.state('M').chi_rel)

    def test_success_catalog(self):
        registry = Registry(catalog=rules_for(['R-declared']))
        registry.add_manifold(ManifoldDescription('M', 3, closed=True, amenable=True))

        registry.propagate()

        self.assertEqual(registry.state('M').intervals[Invariant.SV], Interval.unknown())

    def test_success_confluence(self):
        certificates = certify_from_triangulation(dataset('PuncturedTorus'))

        def build() -> Registry:
            ledger = Ledger()
            ledger.extend(certificates)
            registry = Registry()
            registry.attach_ledger(ledger)
            registry.add_manifold(ManifoldDescription('B', 1, closed=True))
            registry.add_manifold(ManifoldDescription('P', 2, closed=False, boundary=(BoundaryRef('B'),),
                                                      triangulation='PuncturedTorus'),
                                  triangulation=dataset('PuncturedTorus'))
            registry.add_manifold(ManifoldDescription('D', 2, closed=True, double_of='P'))
            registry.add_manifold(ManifoldDescription('C', 2, closed=True, cover_of='D', cover_degree=3))
            registry.add_manifold(ManifoldDescription('DxP', 4, closed=False, factors=('D', 'P')))
            return registry

        expected = build().propagate()
        ids = [r.id for r in CATALOG]
        rng = Random(100)

        for _ in range(100):
            order = rng.sample(ids, len(ids))

            self.assertEqual(build().propagate(order=order), expected, order)

    def test_error_order(self):
        with self.assertRaises(InferenceError):
            Registry().propagate(order=['R-nope'])

    def test_error_max_passes(self):
        registry = Registry(max_passes=1)
        registry.add_manifold(ManifoldDescription('M', 3, closed=True))

        with self.assertRaises(InferenceError) as ctx:
            registry.propagate()
        self.assertIn('No fixpoint after 1 passes', str(ctx.exception))

    def test_success_max_passes_environment(self):
        with mock.patch.dict('os.environ', {'SVLAB_MAX_PASSES': '7'}):
            self.assertEqual(Registry().max_passes, 7)
        self.assertEqual(Registry(max_passes=3).max_passes, 3)


class InconsistencyTestCase(TestCase):

    def setUp(self):
        self.bus = Bus()
        self.messages = []
        self.bus.add_handler(self.messages.append, msg_types=[BUS_MSG_INCONSISTENCY])
        self.registry = Registry(bus=self.bus)

    def test_error_volume(self):
        self.registry.add_manifold(ManifoldDescription('X', 3, closed=True, amenable=True,
                                                       declared=((Invariant.SV, Interval(1, 2)),)))

        with self.assertRaises(InconsistencyError) as ctx:
            self.registry.propagate()

        self.assertEqual((ctx.exception.target, ctx.exception.quantity), ('X', 'sv'))
        self.assertEqual(ctx.exception.first[0]['rule'], 'R-declared')
        self.assertEqual(ctx.exception.second[0]['rule'], 'R-amenable')
        self.assertEqual(len(self.messages), 1)
        self.assertEqual(self.messages[0].params['quantity'], 'sv')

    def test_error_euler_characteristic(self):
        self.registry.add_manifold(ManifoldDescription('X', 3, closed=True, chi=2))

        with self.assertRaises(InconsistencyError) as ctx:
            self.registry.propagate()

        self.assertEqual(ctx.exception.target, 'X')
        self.assertIn(ctx.exception.quantity, ('chi', 'chi_rel'))


class GromovTestCase(TestCase):

    def setUp(self):
        self.registry = Registry()

    def check(self, d: ManifoldDescription):
        self.registry.add_manifold(d)
        self.registry.propagate()
        return self.registry.gromov_check(d.name)

    def test_success_holds(self):
        report = self.check(ManifoldDescription('T', 2, closed=True, aspherical=True, amenable=True,
                                                residually_finite=True, chi=0))

        self.assertEqual(report.status, GromovStatus.HOLDS)
        self.assertFalse(report.relative)

    def test_success_vacuous(self):
        report = self.check(ManifoldDescription('S', 2, closed=True, aspherical=True, hyperbolic=True))

        self.assertEqual(report.status, GromovStatus.VACUOUS)

    def test_success_candidate(self):
        report = self.check(ManifoldDescription('M', 4, closed=True, aspherical=True, chi=2,
                                                declared=((Invariant.SV, Interval.zero()),)))

        self.assertEqual(report.status, GromovStatus.CANDIDATE)
        self.assertEqual(report.to_dict()['status'], 'candidate')

    def test_success_non_hypothesis(self):
        report = self.check(ManifoldDescription('S2', 2, closed=True, aspherical=False, amenable=True, chi=2))

        self.assertEqual(report.status, GromovStatus.NON_HYPOTHESIS)
        self.assertEqual(report.failing, ('aspherical',))

    def test_success_unknown(self):
        report = self.check(ManifoldDescription('M', 3, closed=True))

        self.assertEqual(report.status, GromovStatus.UNKNOWN)
        self.assertEqual(report.chi, 0)


class FillChiTestCase(TestCase):

    def setUp(self):
        self.registry = Registry()
        self.registry.add_manifold(ManifoldDescription('C', 1, closed=True, aspherical=True))
        for name, chi in (('W1', -1), ('W2', -3)):
            self.registry.add_manifold(ManifoldDescription(name, 2, closed=False, aspherical=True, chi=chi,
                                                           boundary=(BoundaryRef('C', True, True),)))
        self.registry.add_manifold(ManifoldDescription('V', 2, closed=False, chi=-1,
                                                       boundary=(BoundaryRef('C'),)))
        self.registry.propagate()

    def test_success(self):
        self.assertEqual(self.registry.fill_chi('C', ['W1', 'W2']), 1)
        self.assertEqual(self.registry.fill_chi('C', ['W2']), 3)

    def test_error_no_fillings(self):
        with self.assertRaises(InferenceError):
            self.registry.fill_chi('C', [])

    def test_error_not_aspherical(self):
        with self.assertRaises(InferenceError):
            self.registry.fill_chi('C', ['V'])

    def test_error_not_a_filling(self):
        with self.assertRaises(InferenceError):
            self.registry.fill_chi('W1', ['W2'])
