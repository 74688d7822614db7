import json
from fractions import Fraction
from unittest import TestCase

from svlab.base import BUS_MSG_STATEMENT, Bus
from svlab.dsl import parse
from svlab.evaluator import Evaluator, evaluate
from svlab.report import EXIT_ASSERTION, EXIT_ERROR, EXIT_INCONSISTENCY, EXIT_OK

DOUBLE = '''
let D = double(PuncturedTorus)
certify PuncturedTorus as C
certify double(PuncturedTorus) as DC
assert chi(D) == -2
assert D.chi == -2
assert norm(C) == 13
assert norm(DC) == 26
query cert(C)
assert verified(C) == true
assert facets(D) == 26
assert closed(D) == true
assert sv(D) <= 26
query betti(D)
'''

COBORDISMS = '''
manifold A {dim: 1, closed: true, oriented: true, connected: true, amenable: true, aspherical: true}
manifold B {dim: 1, closed: true, oriented: true, connected: true, amenable: true, aspherical: true}
manifold W {dim: 2, closed: false, amenable: true, boundary_amenable: true, chi: 0,
            boundary: [A(true, true), B(true, true)]}
manifold V {dim: 2, closed: false, amenable: true, boundary_amenable: true, chi: 0,
            boundary: [B(true, true), A(true, true)]}
cobordism F : [A] -> [B] via W
cobordism G : [B] -> [A] via V
cobordism H = F ; G
assert chi_functor(F) == 0
assert sv_functor(F) == 0
assert chi_functor(H) == 0
'''


class EvaluatorTestCase(TestCase):

    def test_success_double(self):
        report = evaluate(DOUBLE, source='double.svl')

        self.assertEqual(report.errors, [])
        self.assertEqual([a['statement'] for a in report.failed_assertions], [])
        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual(report.statements, 13)
        self.assertEqual(report.queries[0]['value'], '(relative-integral, relative-real)')
        self.assertEqual(report.queries[1]['value'], '(1, 4, 1)')
        self.assertEqual(report.ledger['PuncturedTorus']['relative-integral'], '13')
        self.assertEqual(report.ledger['double(PuncturedTorus)']['integral'], '26')
        self.assertEqual(report.invariants['D']['chi'], -2)

    def test_success_provenance(self):
        report = evaluate('let D = double(PuncturedTorus)\ncertify PuncturedTorus\nassert sv(D) <= 26\n')
        rules = {step['rule'] for step in report.assertions[0]['provenance']}

        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertIn('R-double', rules)

    def test_success_declared(self):
        report = evaluate('manifold S {dim: 2, closed: true, aspherical: true, hyperbolic: true}\n'
                          'assert sv(S) > 0\n'
                          'assert sv(S) in (0, inf]\n'
                          'query gromov(S)\n')

        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual(report.queries[0]['value'], 'vacuous')
        self.assertEqual(report.gromov[0]['status'], 'vacuous')

    def test_success_stable(self):
        report = evaluate('let C3 = cover(Torus7, meridian, 3)\n'
                          'certify stable(Torus7, C3) as S\n'
                          'assert norm(S) == 14/3\n'
                          'assert sisv(Torus7) <= 14/3\n'
                          'assert chi(C3) == 0\n')

        self.assertEqual(report.errors, [])
        self.assertEqual(report.exit_code, EXIT_OK)

    def test_success_cobordisms(self):
        report = evaluate(COBORDISMS)

        self.assertEqual(report.errors, [])
        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual([c['name'] for c in report.cobordisms], ['F', 'G', 'H'])

    def test_success_bordism_terms(self):
        report = evaluate('manifold S {dim: 2, closed: true, aspherical: true, hyperbolic: true, chi: -2}\n'
                          'manifold M {dim: 3, closed: true, connected: true, sv: 1}\n'
                          'query reinhart(S)\n'
                          'assert obstruction(S) > 0\n'
                          'assert monoid(3, M, M) == 2\n'
                          'query obstruction(M)\n')

        self.assertEqual(report.errors, [])
        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual(report.queries[0]['value'], '(-1)')
        self.assertEqual(report.assertions[0]['value'], '(0, ∞]')
        self.assertEqual(report.queries[1]['value'], '2')
        self.assertEqual([o['target'] for o in report.obstructions], ['S', 'M'])

    def test_error_obstruction_vanishing(self):
        report = evaluate('manifold T {dim: 2, closed: true, amenable: true, chi: 0}\nquery obstruction(T)\n')

        self.assertEqual(report.exit_code, EXIT_ERROR)
        self.assertIn('positivity', report.errors[0]['message'])

    def test_success_fillchi(self):
        report = evaluate('manifold C {dim: 1, closed: true, aspherical: true}\n'
                          'manifold W1 {dim: 2, closed: false, aspherical: true, chi: -1, boundary: [C(true, true)]}\n'
                          'manifold W2 {dim: 2, closed: false, aspherical: true, chi: -3, boundary: [C(true, true)]}\n'
                          'assert fillchi(C, W1, W2) == 1\n')

        self.assertEqual(report.exit_code, EXIT_OK)

    def test_success_failed_assertion(self):
        report = evaluate('assert chi(Torus7) == 1\nassert sv(Torus7) <= 3\nassert facets(Torus7) == 14\n')

        self.assertEqual(report.exit_code, EXIT_ASSERTION)
        self.assertEqual([a['line'] for a in report.failed_assertions], [1, 2])
        self.assertEqual(report.assertions[0]['value'], '0')

    def test_success_dataset_first(self):
        report = evaluate('assert chi(Torus7) == 0\nquery betti(Torus7)\n')

        self.assertEqual(report.errors, [])
        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual(report.assertions[0]['value'], '0')
        self.assertEqual(report.queries[0]['value'], '(1, 2, 1)')

    def test_success_inconsistency(self):
        report = evaluate('manifold X {dim: 3, closed: true, amenable: true, sv: [1, 2]}\n'
                          'assert sv(X) > 0\n'
                          'assert chi(X) == 0\n')

        self.assertEqual(report.exit_code, EXIT_INCONSISTENCY)
        self.assertEqual(report.inconsistency['line'], 2)
        self.assertEqual(report.inconsistency['quantity'], 'sv')
        self.assertEqual(report.statements, 2)

    def test_success_explain(self):
        report = evaluate('let D = double(PuncturedTorus)\nassert chi(D) == -2\n', explain=True)

        self.assertTrue(report.explain['D']['chi'].startswith('chi(D) = -2'))

    def test_success_report_json(self):
        report = evaluate('assert facets(Torus7) == 14\n', source='t.svl')
        data = json.loads(report.to_json())

        self.assertEqual(data['schema'], 1)
        self.assertEqual(data['exit_code'], EXIT_OK)
        self.assertEqual(data['source'], 't.svl')
        self.assertIn({'target': 'Torus7', 'quantity': 'chi', 'value': 0}, report.invariant_rows())

    def test_success_messages(self):
        bus = Bus()
        lines = []
        bus.add_handler(lambda m: lines.append(m.params['line']), msg_types=[BUS_MSG_STATEMENT])

        Evaluator(bus=bus).evaluate(parse('let D = Torus7\n\nassert chi(D) == 0\n'))

        self.assertEqual(lines, [1, 3])

    def test_error_construction(self):
        report = evaluate('let Y = frobnicate(Torus7)\nassert chi(Torus7) == 0\n')

        self.assertEqual(report.exit_code, EXIT_ERROR)
        self.assertEqual(report.errors[0]['line'], 1)
        self.assertIn('frobnicate', report.errors[0]['message'])
        self.assertEqual(report.assertions, [])

    def test_error_unknown_dataset(self):
        report = evaluate('assert chi(Nowhere) == 0\n')

        self.assertEqual(report.exit_code, EXIT_ERROR)

    def test_error_terms(self):
        for text in ('query frob(Torus7)\n', 'assert Torus7 == 0\n', 'assert norm(Torus7) == 14\n',
                     'assert chi(Torus7) in 3\n', 'let P = puncture(Torus7, 1, 2)\n'):
            report = evaluate(text)

            self.assertEqual(report.exit_code, EXIT_ERROR, text)

    def test_error_glue_map(self):
        report = evaluate('let G = glue(PuncturedTorus.b0, PuncturedTorus.b0, [(0, 1/2)])\n')

        self.assertEqual(report.exit_code, EXIT_ERROR)


class CompareTestCase(TestCase):

    def test_success_fraction(self):
        report = evaluate('manifold M {dim: 3, closed: true, sv: [1/2, 3]}\n'
                          'assert sv(M) >= 1/2\n'
                          'assert sv(M) < 4\n'
                          'assert sv(M) != 1\n'
                          'assert sv(M) in [0, 3]\n')

        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual(Fraction(report.invariants['M']['sv'].strip('[]').split(', ')[0]), Fraction(1, 2))
