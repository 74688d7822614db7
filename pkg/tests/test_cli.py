import json
from pathlib import Path
from unittest import TestCase

from click.testing import CliRunner

from svlab.__version__ import __version__
from svlab.cli import cli

DOUBLE = '''let D = double(PuncturedTorus)
certify PuncturedTorus as C
assert chi(D) == -2
assert norm(C) == 13
query betti(D)
'''


class CliTestCase(TestCase):

    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, *args, script: str = None):
        if script is not None:
            Path('script.svl').write_text(script, encoding='utf-8')
        return self.runner.invoke(cli, list(args))

    def test_success_run(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('run', 'script.svl', '--report', 'report.json', '--ledger', 'ledger.json',
                                 '--csv', 'invariants.csv', script=DOUBLE)

            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('PASS line 3: assert chi(D) == -2', result.output)
            self.assertIn('line 5: query betti(D) = (1, 2, 1)', result.output)

            report = json.loads(Path('report.json').read_text(encoding='utf-8'))
            self.assertEqual(report['exit_code'], 0)
            self.assertEqual(report['source'], 'script.svl')
            self.assertEqual(len(json.loads(Path('ledger.json').read_text(encoding='utf-8'))['certificates']), 2)
            self.assertTrue(Path('invariants.csv').read_text(encoding='utf-8').startswith('target,quantity,value'))

    def test_success_explain(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('run', 'script.svl', '--explain', script=DOUBLE)

            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('chi(D) = -2', result.output)
            self.assertIn('R-double', result.output)

    def test_success_failed_assertion(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('run', 'script.svl', script='assert chi(Torus7) == 1\n')

            self.assertEqual(result.exit_code, 1)
            self.assertIn('FAIL line 1', result.output)

    def test_success_inconsistency(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('run', 'script.svl',
                                 script='manifold X {dim: 3, closed: true, amenable: true, sv: [1, 2]}\n'
                                        'assert sv(X) > 0\n')

            self.assertEqual(result.exit_code, 2)

    def test_error_parse(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('run', 'script.svl', script='let = 3\n')

            self.assertEqual(result.exit_code, 3)

    def test_error_evaluation(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('run', 'script.svl', script='let Y = frobnicate(Torus7)\n')

            self.assertEqual(result.exit_code, 3)

    def test_error_missing_script(self):
        result = self.runner.invoke(cli, ['run', 'does-not-exist.svl'])

        self.assertEqual(result.exit_code, 3)

    def test_error_unknown_command(self):
        result = self.runner.invoke(cli, ['frobnicate'])

        self.assertEqual(result.exit_code, 3)

    def test_success_verify(self):
        with self.runner.isolated_filesystem():
            self.invoke('run', 'script.svl', '--ledger', 'ledger.json', script=DOUBLE)

            result = self.invoke('verify', 'ledger.json')

            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('ok   PuncturedTorus relative-integral <= 13', result.output)

    def test_error_verify_malformed(self):
        with self.runner.isolated_filesystem():
            Path('ledger.json').write_text('{"schema": 1', encoding='utf-8')

            result = self.invoke('verify', 'ledger.json')

            self.assertEqual(result.exit_code, 3)

    def test_success_fmt(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('fmt', 'script.svl', script='assert  chi(Torus7)==0')

            self.assertEqual(result.exit_code, 0)
            self.assertEqual(result.output, 'assert chi(Torus7) == 0\n')

    def test_success_fmt_check(self):
        with self.runner.isolated_filesystem():
            self.assertEqual(self.invoke('fmt', 'script.svl', '--check', script='assert  chi(Torus7)==0').exit_code, 1)
            self.assertEqual(self.invoke('fmt', 'script.svl', '--check', script='assert chi(Torus7) == 0\n').exit_code,
                             0)

    def test_success_datasets(self):
        result = self.runner.invoke(cli, ['datasets'])

        self.assertEqual(result.exit_code, 0)
        self.assertIn('Torus7', result.output.split())

    def test_success_version(self):
        result = self.runner.invoke(cli, ['--version'])

        self.assertEqual(result.exit_code, 0)
        self.assertIn(__version__, result.output)
