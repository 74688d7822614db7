from random import Random
from unittest import TestCase

from svlab.base import ComplexError
from svlab.chains import boundary
from svlab.complexes import Complex, euler_characteristic
from svlab.datasets import dataset
from svlab.manifolds import manifold_check
from svlab.subdivisions import barycentric_subdivide, stellar_subdivide


class BarycentricTestCase(TestCase):

    def test_success_triangle(self):
        k = Complex('triangle', 2, 3, ((0, 1, 2),))

        target, mapping = barycentric_subdivide(k)

        self.assertEqual(target.name, 'sd(triangle)')
        self.assertEqual(len(target.facets), 6)
        self.assertEqual(target.vertex_count, 7)
        self.assertEqual(mapping.apply(k.facet_chain()), target.facet_chain())
        self.assertEqual(mapping.transport((0,)), 0)
        self.assertGreaterEqual(mapping.transport((1, 0)), 3)

    def test_success_torus(self):
        k = dataset('Torus7').complex

        target, mapping = barycentric_subdivide(k, name='sdT')

        self.assertEqual(len(target.facets), 84)
        self.assertEqual(euler_characteristic(target), 0)
        self.assertTrue(boundary(target.facet_chain()).is_zero())
        self.assertTrue(manifold_check(target).is_closed)

    def test_error_foreign_simplex(self):
        k = Complex('triangle', 2, 3, ((0, 1, 2),))
        _, mapping = barycentric_subdivide(k)

        with self.assertRaises(ComplexError):
            mapping.apply(Complex('other', 2, 4, ((1, 2, 3),)).facet_chain())


class StellarTestCase(TestCase):

    def test_success_edge(self):
        k = dataset('Torus7').complex

        target, mapping = stellar_subdivide(k, (0, 1))

        self.assertEqual(len(target.facets), 16)
        self.assertEqual(target.vertex_count, 8)
        self.assertEqual(euler_characteristic(target), 0)
        self.assertEqual(mapping.apply(k.facet_chain()), target.facet_chain())
        self.assertTrue(manifold_check(target).is_orientable)

    def test_error_vertex(self):
        with self.assertRaises(ComplexError):
            stellar_subdivide(dataset('Torus7').complex, (0,))

    def test_error_missing(self):
        with self.assertRaises(ComplexError):
            stellar_subdivide(Complex('triangle', 2, 4, ((0, 1, 2), (1, 2, 3))), (0, 3))


class RandomStellarTestCase(TestCase):

    def test_success_bounded(self):
        rng = Random(7)

        for name in ('Interval', 'Delta[2]', 'Delta[3]', 'Annulus', 'PuncturedTorus'):
            m = dataset(name)
            for _ in range(20):
                k, chain = m.complex, m.fundamental_cycle()
                for _ in range(rng.randint(1, 3)):
                    center = rng.choice(k.simplices(rng.randint(1, k.dim)))
                    k, mapping = stellar_subdivide(k, center)
                    chain = mapping.apply(chain)
                subdivided = manifold_check(k)

                edge = boundary(chain)

                self.assertEqual(chain.l1_norm, len(k.facets), name)
                self.assertLessEqual(edge.l1_norm, (k.dim + 1) * chain.l1_norm)
                self.assertEqual(subdivided.euler_characteristic, m.euler_characteristic)
                self.assertTrue(all(subdivided.boundary_complex().contains(s) for s in edge.support), name)
