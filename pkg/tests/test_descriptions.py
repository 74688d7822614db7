from unittest import TestCase

from svlab.base import InferenceError
from svlab.descriptions import ATTRIBUTES, QUANTITIES, BoundaryRef, Invariant, ManifoldDescription
from svlab.intervals import Interval


class InvariantTestCase(TestCase):

    def test_success(self):
        self.assertTrue(Invariant.SISV_REL.is_relative)
        self.assertEqual(Invariant.SV_REL_Z.absolute, Invariant.SV_Z)
        self.assertEqual(Invariant.SV.relative, Invariant.SV_REL)
        self.assertEqual(Invariant.SV_REL.relative, Invariant.SV_REL)
        self.assertIn('chi_boundary', QUANTITIES)
        self.assertEqual(ATTRIBUTES['sisv'], 'interval')


class FromMappingTestCase(TestCase):

    def test_success(self):
        d = ManifoldDescription.from_mapping('W', {'dim': 3, 'closed': False, 'aspherical': None,
                                                   'boundary': ['B', BoundaryRef('C', True)],
                                                   'sv_rel': Interval.strictly_positive()})

        self.assertEqual(d.boundary, (BoundaryRef('B'), BoundaryRef('C', True)))
        self.assertTrue(d.has_boundary)
        self.assertFalse(d.is_closed)
        self.assertIsNone(d.aspherical)
        self.assertEqual(d.declared_interval(Invariant.SV_REL), Interval.strictly_positive())
        self.assertIsNone(d.declared_interval(Invariant.SV))
        self.assertEqual(d.references(), ('B', 'C'))

    def test_error_unknown_attribute(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription.from_mapping('M', {'dim': 2, 'colour': True})

    def test_error_missing_dim(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription.from_mapping('M', {'closed': True})

    def test_error_flag(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription.from_mapping('M', {'dim': 2, 'closed': 1})

    def test_error_int(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription.from_mapping('M', {'dim': True})

    def test_error_interval(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription.from_mapping('M', {'dim': 2, 'sv': 3})

    def test_error_names(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription.from_mapping('M', {'dim': 2, 'summands': 'A'})

    def test_success_dict(self):
        d = ManifoldDescription('S', 2, closed=True, summands=('A', 'B'),
                                declared=((Invariant.SV, Interval.zero()),))

        self.assertEqual(d.to_dict(), {'name': 'S', 'dim': 2, 'closed': True, 'summands': ['A', 'B'],
                                       'declared': {'sv': '0'}})


class ValidateTestCase(TestCase):

    def test_success(self):
        ManifoldDescription('M', 4, closed=True, signature=0, chi=2).validate()

    def test_error_closed_with_boundary(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription('M', 2, closed=True, boundary=(BoundaryRef('B'),)).validate()

    def test_error_signature_dimension(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription('M', 3, signature=1).validate()

    def test_error_signature_parity(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription('M', 4, closed=True, signature=1, chi=2).validate()

    def test_error_cover_degree(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription('M', 2, cover_of='N').validate()

    def test_error_amcat(self):
        with self.assertRaises(InferenceError):
            ManifoldDescription('M', 2, amcat=-1).validate()
