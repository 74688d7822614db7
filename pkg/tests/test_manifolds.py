from unittest import TestCase

from svlab.base import ManifoldError, NonOrientableError
from svlab.chains import Chain, boundary
from svlab.complexes import Complex
from svlab.datasets import dataset
from svlab.manifolds import fundamental_cycle, manifold_check


class ManifoldCheckTestCase(TestCase):

    def test_success_torus(self):
        m = manifold_check(dataset('Torus7').complex, require_connected=True)

        self.assertTrue(m.is_closed)
        self.assertTrue(m.is_orientable)
        self.assertTrue(m.is_connected)
        self.assertEqual(m.facet_count, 14)
        self.assertEqual(m.euler_characteristic, 0)
        self.assertTrue(boundary(fundamental_cycle(m)).is_zero())

    def test_success_reoriented_facets(self):
        k = Complex('sphere', 2, 4, ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))

        m = manifold_check(k)

        self.assertEqual(len(set(m.orientation)), 2)
        self.assertTrue(boundary(m.fundamental_cycle()).is_zero())
        self.assertTrue(boundary(m.oriented_complex().facet_chain()).is_zero())

    def test_success_punctured_torus(self):
        m = dataset('PuncturedTorus')

        self.assertFalse(m.is_closed)
        self.assertEqual(len(m.boundary_components), 1)
        self.assertEqual(m.boundary_components[0].name, 'PuncturedTorus.b0')
        self.assertEqual(boundary(m.fundamental_cycle()), m.boundary_cycle(0))
        self.assertEqual(m.boundary_cycle(0).l1_norm, 3)

    def test_success_annulus(self):
        m = dataset('Annulus')

        self.assertEqual([len(c.facets) for c in m.boundary_components], [3, 3])
        self.assertEqual(boundary(m.fundamental_cycle()), m.boundary_cycle(0) + m.boundary_cycle(1))

        b = m.boundary_manifold()

        self.assertTrue(b.is_closed)
        self.assertEqual(b.dim, 1)
        self.assertEqual(b.components, 2)

    def test_success_interval(self):
        m = dataset('Interval')

        self.assertEqual(len(m.boundary_components), 2)
        self.assertEqual(m.boundary_cycle(0), Chain.from_simplex((0,), -1))
        self.assertEqual(m.boundary_cycle(1), Chain.from_simplex((1,)))

    def test_success_disconnected(self):
        k = Complex('two', 1, 6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)))

        m = manifold_check(k)

        self.assertEqual(m.components, 2)
        self.assertFalse(m.is_connected)

    def test_error_disconnected(self):
        k = Complex('two', 1, 6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)))

        with self.assertRaises(ManifoldError):
            manifold_check(k, require_connected=True)

    def test_success_mobius(self):
        m = manifold_check(dataset('Mobius'), require_orientable=False)

        self.assertIsNone(m.orientation)
        self.assertEqual(len(m.boundary_components), 1)
        self.assertEqual(len(m.boundary_components[0].facets), 5)

    def test_error_mobius(self):
        with self.assertRaises(NonOrientableError):
            manifold_check(dataset('Mobius'))

    def test_error_not_orientable_cycle(self):
        m = manifold_check(dataset('RP2-6'), require_orientable=False)

        with self.assertRaises(NonOrientableError):
            m.fundamental_cycle()

    def test_error_branching(self):
        with self.assertRaises(ManifoldError):
            manifold_check(Complex('book', 2, 5, ((0, 1, 2), (0, 1, 3), (0, 1, 4))))

    def test_error_pinched_boundary(self):
        with self.assertRaises(ManifoldError):
            manifold_check(Complex('bowtie', 2, 5, ((0, 1, 2), (0, 3, 4))))

    def test_error_component_range(self):
        with self.assertRaises(ManifoldError):
            dataset('PuncturedTorus').boundary_cycle(1)
