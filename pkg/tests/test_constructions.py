from unittest import TestCase

from svlab.base import ConstructionError
from svlab.chains import boundary
from svlab.constructions import (CoverSpec, GlueingSpec, connected_sum, cyclic_cover, double, glue, product,
                                 puncture)
from svlab.datasets import cocycle, dataset
from svlab.homology import homology
from svlab.manifolds import manifold_check


class DoubleTestCase(TestCase):

    def test_success_punctured_torus(self):
        m = dataset('PuncturedTorus')

        result, reflection = double(m)

        self.assertEqual(result.name, 'double(PuncturedTorus)')
        self.assertEqual(result.facet_count, 26)
        self.assertEqual(result.euler_characteristic, -2)
        self.assertTrue(result.is_closed)
        self.assertFalse(reflection.refined)

        cycle = reflection.reflect(reflection.lift(m.fundamental_cycle()))

        self.assertTrue(boundary(cycle).is_zero())
        self.assertEqual(cycle.l1_norm, 26)

    def test_success_refined(self):
        result, reflection = double(dataset('Annulus'), name='DA')

        self.assertTrue(reflection.refined)
        self.assertTrue(result.is_closed)
        self.assertEqual(result.euler_characteristic, 0)
        self.assertEqual(homology(result.complex).betti, (1, 2, 1))

    def test_error_closed(self):
        with self.assertRaises(ConstructionError):
            double(dataset('Torus7'))


class PunctureTestCase(TestCase):

    def test_success(self):
        result = puncture(dataset('Torus7'))

        self.assertEqual(result.name, 'puncture(Torus7)')
        self.assertEqual(result.facet_count, 13)
        self.assertEqual(result.euler_characteristic, -1)
        self.assertEqual(len(result.boundary_components), 1)

    def test_error_index(self):
        with self.assertRaises(ConstructionError):
            puncture(dataset('Torus7'), 14)

    def test_error_single_facet(self):
        with self.assertRaises(ConstructionError):
            puncture(dataset('Delta[2]'))


class GlueTestCase(TestCase):

    def test_success_search(self):
        m = dataset('PuncturedTorus')

        result = glue(GlueingSpec(m, 0, m, 0), name='TT')

        self.assertEqual(result.facet_count, 26)
        self.assertEqual(result.euler_characteristic, -2)
        self.assertTrue(result.is_closed)

    def test_success_bijection(self):
        m = dataset('PuncturedTorus')

        result = glue(GlueingSpec(m, 0, m, 0, {0: 1, 1: 0, 3: 3}))

        self.assertEqual(result.name, 'glue(PuncturedTorus.b0, PuncturedTorus.b0)')
        self.assertEqual(result.euler_characteristic, -2)

    def test_error_orientation_preserving(self):
        m = dataset('PuncturedTorus')

        with self.assertRaises(ConstructionError):
            glue(GlueingSpec(m, 0, m, 0, {0: 0, 1: 1, 3: 3}))

    def test_error_bijection_vertices(self):
        m = dataset('PuncturedTorus')

        with self.assertRaises(ConstructionError):
            glue(GlueingSpec(m, 0, m, 0, {0: 1, 1: 0, 3: 4}))

    def test_success_self_glueing(self):
        result = glue(GlueingSpec(dataset('Annulus'), 0, None, 1))

        self.assertTrue(result.is_closed)
        self.assertTrue(result.is_orientable)
        self.assertEqual(result.euler_characteristic, 0)

    def test_error_same_component(self):
        with self.assertRaises(ConstructionError):
            glue(GlueingSpec(dataset('Annulus'), 0, None, 0))

    def test_error_component_range(self):
        m = dataset('PuncturedTorus')

        with self.assertRaises(ConstructionError):
            glue(GlueingSpec(m, 1, m, 0))


class ConnectedSumTestCase(TestCase):

    def test_success(self):
        torus = dataset('Torus7')

        result = connected_sum(torus, torus)

        self.assertEqual(result.name, 'Torus7#Torus7')
        self.assertEqual(result.euler_characteristic, -2)
        self.assertEqual(homology(result.complex).betti, (1, 4, 1))

    def test_error_boundary(self):
        with self.assertRaises(ConstructionError):
            connected_sum(dataset('PuncturedTorus'), dataset('Torus7'))

    def test_error_dimension(self):
        with self.assertRaises(ConstructionError):
            connected_sum(dataset('Torus7'), dataset('Sphere[3]'))

    def test_error_curves(self):
        with self.assertRaises(ConstructionError):
            connected_sum(dataset('Circle[3]'), dataset('Circle[4]'))


class ProductTestCase(TestCase):

    def test_success_torus(self):
        circle = dataset('Circle[3]')

        k, shuffle = product(circle, circle)

        self.assertEqual(len(k.facets), 18)
        self.assertEqual(k.vertex_count, 9)

        cycle = shuffle.apply(circle.fundamental_cycle(), circle.fundamental_cycle())

        self.assertTrue(boundary(cycle).is_zero())
        self.assertEqual(cycle.l1_norm, 18)
        self.assertTrue(manifold_check(k).is_closed)

    def test_success_cylinder(self):
        k, _ = product(dataset('Interval'), dataset('Circle[3]'))

        m = manifold_check(k)

        self.assertEqual(len(k.facets), 6)
        self.assertEqual(len(m.boundary_components), 2)
        self.assertEqual(m.euler_characteristic, 0)

    def test_success_three_dimensional(self):
        k, _ = product(dataset('Torus7'), dataset('Circle[3]'), name='TxC')

        self.assertEqual(k.name, 'TxC')
        self.assertEqual(k.dim, 3)
        self.assertEqual(len(k.facets), 126)


class CyclicCoverTestCase(TestCase):

    def test_success_torus(self):
        base = dataset('Torus7')

        cover, projection = cyclic_cover(CoverSpec(base, cocycle('Torus7', 'meridian'), 3))

        self.assertEqual(cover.facet_count, 42)
        self.assertEqual(cover.euler_characteristic, 0)
        self.assertTrue(cover.is_connected)
        self.assertTrue(projection.is_local_isomorphism())
        self.assertEqual(len(projection.fiber((0, 1, 3))), 3)
        self.assertEqual(projection.push_forward(cover.fundamental_cycle()), 3 * base.fundamental_cycle())

    def test_success_disconnected(self):
        cover, _ = cyclic_cover(CoverSpec(dataset('Torus7'), {}, 2))

        self.assertEqual(cover.components, 2)

    def test_success_annulus(self):
        cover, _ = cyclic_cover(CoverSpec(dataset('Annulus'), cocycle('Annulus', 'winding'), 2))

        self.assertTrue(cover.is_connected)
        self.assertEqual(cover.facet_count, 12)
        self.assertEqual(len(cover.boundary_components), 2)

    def test_error_cocycle_condition(self):
        with self.assertRaises(ConstructionError):
            cyclic_cover(CoverSpec(dataset('Torus7'), {(0, 1): 1}, 2))

    def test_error_not_an_edge(self):
        with self.assertRaises(ConstructionError):
            CoverSpec(dataset('Annulus'), {(0, 4): 1}, 2).validate()

    def test_error_degree(self):
        with self.assertRaises(ConstructionError):
            CoverSpec(dataset('Torus7'), {}, 0).validate()
