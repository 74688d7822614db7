from dataclasses import replace
from fractions import Fraction
from unittest import TestCase

from svlab.base import CertificateError
from svlab.certificates import (Certificate, CertificateKind, CoverEntry, DerivedWitness, ExplicitWitness,
                                boundary_bound, certify_cover, certify_from_triangulation, cover_stable_bound,
                                double_bound, product_bound, verify)
from svlab.constructions import CoverSpec, cyclic_cover
from svlab.datasets import cocycle, dataset


class CertifyTestCase(TestCase):

    def test_success_closed(self):
        integral, real = certify_from_triangulation(dataset('Torus7'))

        self.assertEqual(integral.kind, CertificateKind.INTEGRAL)
        self.assertEqual(real.kind, CertificateKind.REAL)
        self.assertEqual(integral.bound, 14)
        self.assertFalse(integral.relative)
        self.assertTrue(verify(integral))
        self.assertTrue(verify(real))

    def test_success_relative(self):
        integral, real = certify_from_triangulation(dataset('PuncturedTorus'), target='P')

        self.assertEqual(integral.target, 'P')
        self.assertEqual(integral.kind, CertificateKind.RELATIVE_INTEGRAL)
        self.assertEqual(real.kind, CertificateKind.RELATIVE_REAL)
        self.assertEqual(integral.bound, 13)
        self.assertTrue(integral.relative)
        self.assertTrue(verify(integral).passed)

    def test_error_disconnected(self):
        cover, _ = cyclic_cover(CoverSpec(dataset('Torus7'), {}, 2))

        with self.assertRaises(CertificateError):
            certify_from_triangulation(cover)

    def test_error_negative_bound(self):
        integral, _ = certify_from_triangulation(dataset('Torus7'))

        with self.assertRaises(CertificateError):
            replace(integral, bound=-1)


class DerivedBoundTestCase(TestCase):

    def test_success_boundary(self):
        integral, _ = certify_from_triangulation(dataset('Annulus'))

        result = boundary_bound(integral)

        self.assertEqual(result.target, 'Annulus.boundary')
        self.assertEqual(result.kind, CertificateKind.INTEGRAL)
        self.assertEqual(result.bound, 6)
        self.assertEqual(result.dimension, 1)
        self.assertLessEqual(result.bound, 3 * integral.bound)
        self.assertTrue(verify(result))

    def test_success_punctured_boundary(self):
        _, real = certify_from_triangulation(dataset('PuncturedTorus'))

        result = boundary_bound(real)

        self.assertEqual(result.kind, CertificateKind.REAL)
        self.assertEqual(result.bound, 3)

    def test_error_boundary_closed(self):
        integral, _ = certify_from_triangulation(dataset('Torus7'))

        with self.assertRaises(CertificateError):
            boundary_bound(integral)

    def test_success_double(self):
        integral, _ = certify_from_triangulation(dataset('PuncturedTorus'))

        result = double_bound(integral)

        self.assertEqual(result.target, 'double(PuncturedTorus)')
        self.assertEqual(result.kind, CertificateKind.INTEGRAL)
        self.assertEqual(result.bound, 26)
        self.assertFalse(result.is_explicit)
        self.assertTrue(verify(result))

    def test_error_double_closed(self):
        integral, _ = certify_from_triangulation(dataset('Torus7'))

        with self.assertRaises(CertificateError):
            double_bound(integral)

    def test_success_product(self):
        circle, _ = certify_from_triangulation(dataset('Circle[3]'))

        result = product_bound(circle, circle)

        self.assertEqual(result.target, 'product(Circle[3], Circle[3])')
        self.assertEqual(result.kind, CertificateKind.INTEGRAL)
        self.assertEqual(result.bound, 18)
        self.assertEqual(result.dimension, 2)
        self.assertTrue(verify(result))

    def test_success_relative_product(self):
        interval, _ = certify_from_triangulation(dataset('Interval'))
        _, circle = certify_from_triangulation(dataset('Circle[3]'))

        result = product_bound(interval, circle, name='cylinder')

        self.assertEqual(result.kind, CertificateKind.RELATIVE_REAL)
        self.assertEqual(result.bound, 6)
        self.assertTrue(verify(result))

    def test_error_product_derived(self):
        integral, _ = certify_from_triangulation(dataset('PuncturedTorus'))

        with self.assertRaises(CertificateError):
            product_bound(double_bound(integral), integral)


class StableBoundTestCase(TestCase):

    def _entry(self, degree: int):
        _, projection = cyclic_cover(CoverSpec(dataset('Torus7'), cocycle('Torus7', 'meridian'), degree))
        return certify_cover(projection)

    def test_success_recognized(self):
        entry = self._entry(3)

        self.assertEqual(entry.model, 'Torus7')
        self.assertEqual(entry.certificate.bound, 14)
        self.assertEqual(entry.normalized_bound, Fraction(14, 3))

    def test_success_minimum(self):
        result = cover_stable_bound(dataset('Torus7'), [self._entry(2), self._entry(3), self._entry(5)])

        self.assertEqual(result.kind, CertificateKind.STABLE_INTEGRAL)
        self.assertEqual(result.bound, Fraction(14, 5))
        self.assertEqual(result.target, 'Torus7')
        self.assertTrue(verify(result))

    def test_error_no_covers(self):
        with self.assertRaises(CertificateError):
            cover_stable_bound('Torus7', [])

    def test_error_real_cover(self):
        _, real = certify_from_triangulation(dataset('Torus7'))
        entry = replace(self._entry(2), certificate=real)

        with self.assertRaises(CertificateError):
            cover_stable_bound('Torus7', [entry])

    def test_error_disconnected_cover(self):
        _, projection = cyclic_cover(CoverSpec(dataset('Torus7'), {}, 2))

        with self.assertRaises(CertificateError):
            certify_cover(projection)

    def test_error_forged_bound(self):
        result = cover_stable_bound('Torus7', [self._entry(2)])

        report = verify(replace(result, bound=1))

        self.assertFalse(report.passed)
        self.assertEqual(report.reason, 'norm mismatch')

    def test_error_entry_without_cover(self):
        sphere, _ = certify_from_triangulation(dataset('Sphere[2]'))
        entry = CoverEntry(sphere, 1000)

        with self.assertRaises(CertificateError):
            cover_stable_bound('Sphere[2]', [entry])

        forged = Certificate('Sphere[2]', CertificateKind.STABLE_INTEGRAL, entry.normalized_bound,
                             DerivedWitness('stable-cover', (), (entry,)), 2, False)
        report = verify(forged)

        self.assertFalse(report.passed)
        self.assertEqual(report.reason, 'no covering projection')

    def test_error_wrong_degree(self):
        entry = replace(self._entry(2), degree=1000)

        with self.assertRaises(CertificateError):
            cover_stable_bound(dataset('Torus7'), [entry])

        forged = replace(cover_stable_bound('Torus7', [self._entry(2)]), bound=entry.normalized_bound,
                         witness=DerivedWitness('stable-cover', (), (entry,)))
        report = verify(forged)

        self.assertFalse(report.passed)
        self.assertEqual(report.reason, 'facet count differs from degree times base facets')

    def test_error_different_base(self):
        with self.assertRaises(CertificateError):
            cover_stable_bound(dataset('Sphere[2]'), [self._entry(2)])

    def test_error_certificate_for_other_manifold(self):
        sphere, _ = certify_from_triangulation(dataset('Sphere[2]'))
        entry = replace(self._entry(2), certificate=sphere, model=None)

        with self.assertRaises(CertificateError):
            cover_stable_bound('Torus7', [entry])

    def test_success_entry_dict(self):
        entry = self._entry(2)

        restored = CoverEntry.from_dict(entry.to_dict())

        self.assertEqual(restored.degree, 2)
        self.assertEqual(restored.model, 'Torus7')
        self.assertEqual(len(restored.base.complex.facets), 14)
        self.assertTrue(verify(cover_stable_bound('Torus7', [restored])))


class VerifyTestCase(TestCase):

    def setUp(self):
        self.integral, self.real = certify_from_triangulation(dataset('Torus7'))

    def test_error_norm(self):
        report = verify(replace(self.integral, bound=13))

        self.assertFalse(report)
        self.assertEqual(report.reason, 'norm mismatch')

    def test_error_not_fundamental(self):
        witness = ExplicitWitness(2 * self.integral.witness.chain, self.integral.witness.manifold)

        report = verify(replace(self.integral, witness=witness, bound=28))

        self.assertEqual(report.reason, 'not a fundamental cycle')

    def test_error_nonzero_boundary(self):
        chain = self.integral.witness.chain.restrict(self.integral.witness.chain.support[1:])
        witness = ExplicitWitness(chain, self.integral.witness.manifold)

        report = verify(replace(self.integral, witness=witness, bound=13))

        self.assertEqual(report.reason, 'nonzero boundary')

    def test_error_non_integral(self):
        witness = ExplicitWitness(Fraction(1, 2) * self.integral.witness.chain, self.integral.witness.manifold)

        report = verify(replace(self.integral, witness=witness, bound=7))

        self.assertEqual(report.reason, 'non-integral coefficients')

    def test_error_kind(self):
        report = verify(replace(self.integral, kind=CertificateKind.RELATIVE_INTEGRAL))

        self.assertEqual(report.reason, 'kind mismatch')

    def test_success_dict(self):
        loaded = Certificate.from_dict(self.integral.to_dict())

        self.assertEqual(loaded.bound, 14)
        self.assertEqual(loaded.kind, CertificateKind.INTEGRAL)
        self.assertTrue(verify(loaded))

    def test_error_dict(self):
        data = self.integral.to_dict()
        data['witness'] = {'type': 'guess'}

        with self.assertRaises(CertificateError):
            Certificate.from_dict(data)

        with self.assertRaises(CertificateError):
            Certificate.from_dict({'target': 'T'})
