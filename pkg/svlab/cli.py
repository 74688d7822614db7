import sys
from logging import DEBUG, INFO, WARNING, getLevelName
from pathlib import Path

import click

from .__version__ import __version__
from .base import BUS_MSG_LOG, Bus, Message, ScriptError, SvlabError
from .certificates import verify
from .csv import invariant_table
from .datasets import DatasetLibrary
from .dsl import format_script, parse_file
from .evaluator import Evaluator
from .ledger import Ledger
from .report import EXIT_ASSERTION, EXIT_ERROR, EXIT_OK

__all__ = ['cli']

_LEVELS = {0: WARNING, 1: INFO}


def _bus(verbose: int) -> Bus:
    bus = Bus()

    @bus.add_handler(msg_types=[BUS_MSG_LOG], min_level=_LEVELS.get(verbose, DEBUG))
    def echo_log(message: Message):
        click.echo(f'[{getLevelName(message.params["level"])}] {message.sender}: {message.params["message"]}',
                   err=True)

    return bus


def _library(bus: Bus, datasets: str = None) -> DatasetLibrary:
    return DatasetLibrary(name='svlab-datasets', bus=bus, paths=[datasets] if datasets else ())


class SvlabGroup(click.Group):
    """
    Usage errors exit with status 3 instead of click's 2, which is taken by inconsistencies.
    """

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            code = super(SvlabGroup, self).main(*args, **kwargs)
        except click.UsageError as ex:
            ex.show()
            sys.exit(EXIT_ERROR)
        except click.ClickException as ex:
            ex.show()
            sys.exit(ex.exit_code)
        except click.Abort:
            click.echo('Aborted!', err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(code if isinstance(code, int) else EXIT_OK)


@click.group(cls=SvlabGroup)
@click.version_option(__version__, prog_name='svlab')
def cli():
    """
    Exact lab for simplicial volume and Euler characteristic.
    """


@cli.command()
@click.argument('script', type=click.Path(exists=True, dir_okay=False))
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), help='Write the JSON report here')
@click.option('--explain', is_flag=True, help='Include provenance trees in the report and print them')
@click.option('--datasets', type=click.Path(exists=True, file_okay=False), envvar='SVLAB_DATASETS',
              help='Extra directory of triangulation files')
@click.option('--ledger', 'ledger_path', type=click.Path(dir_okay=False), help='Export the certificate ledger')
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), help='Write the invariant table as CSV')
@click.option('-v', '--verbose', count=True, help='Log to stderr (-v info, -vv debug)')
@click.pass_context
def run(ctx, script, report_path, explain, datasets, ledger_path, csv_path, verbose):
    """
    Evaluate SCRIPT. Exit status: 0 ok, 1 failed assertion, 2 inconsistency, 3 usage or evaluation error.
    """
    bus = _bus(verbose)
    try:
        parsed = parse_file(script)
    except ScriptError as ex:
        click.echo(f'{script}: {ex}', err=True)
        ctx.exit(EXIT_ERROR)

    evaluator = Evaluator(name='svlab-run', bus=bus, library=_library(bus, datasets), explain=explain)
    report = evaluator.evaluate(parsed, source=Path(script).name)

    for entry in report.assertions:
        status = 'PASS' if entry['passed'] else 'FAIL'
        click.echo(f'{status} line {entry["line"]}: {entry["statement"]}  (value {entry["value"]})')
        if not entry['passed']:
            for step in entry['provenance']:
                click.echo(f'    {step["rule"]}: {step["quantity"]}({step["target"]}) = {step["value"]}  '
                           f'[{step["citation"]}]')
    for entry in report.queries:
        click.echo(f'line {entry["line"]}: {entry["statement"]} = {entry["value"]}')
    if report.inconsistency is not None:
        i = report.inconsistency
        where = '' if i["line"] is None else f' at line {i["line"]}'
        click.echo(f'INCONSISTENT {i["quantity"]}({i["target"]}){where}', err=True)
    for error in report.errors:
        line = '' if error['line'] is None else f'line {error["line"]}: '
        click.echo(f'ERROR {line}{error["message"]}', err=True)
    if explain and report.explain:
        for target, trees in report.explain.items():
            for tree in trees.values():
                click.echo(tree)

    if report_path:
        report.dump(report_path)
    if ledger_path:
        evaluator.ledger.export(ledger_path)
    if csv_path:
        invariant_table(bus=bus).dump(report.invariant_rows(), csv_path)
    ctx.exit(report.exit_code)


@cli.command(name='verify')
@click.argument('ledger', type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def verify_ledger(ctx, ledger):
    """
    Re-verify every certificate of an exported LEDGER.
    """
    try:
        loaded = Ledger.load(ledger, verify_entries=False)
    except SvlabError as ex:
        click.echo(f'{ledger}: {ex}', err=True)
        ctx.exit(EXIT_ERROR)

    failed = 0
    for cert in loaded:
        result = verify(cert)
        if result.passed:
            click.echo(f'ok   {cert.target} {cert.kind.value} <= {cert.bound}')
        else:
            failed += 1
            click.echo(f'FAIL {cert.target} {cert.kind.value} <= {cert.bound}: {result.reason}')
    if not loaded.kind_order_holds():
        failed += 1
        click.echo('FAIL a real bound exceeds the integral bound of its target')
    ctx.exit(EXIT_ASSERTION if failed else EXIT_OK)


@cli.command()
@click.argument('script', type=click.Path(exists=True, dir_okay=False))
@click.option('--check', is_flag=True, help='Only report whether SCRIPT is already formatted')
@click.pass_context
def fmt(ctx, script, check):
    """
    Print SCRIPT in canonical form.
    """
    try:
        formatted = format_script(parse_file(script))
    except ScriptError as ex:
        click.echo(f'{script}: {ex}', err=True)
        ctx.exit(EXIT_ERROR)

    if not check:
        click.echo(formatted, nl=False)
        return
    if Path(script).read_text(encoding='utf-8') != formatted:
        click.echo(f'{script} is not formatted')
        ctx.exit(EXIT_ASSERTION)


@cli.command()
@click.option('--datasets', type=click.Path(exists=True, file_okay=False), envvar='SVLAB_DATASETS',
              help='Extra directory of triangulation files')
def datasets(datasets):
    """
    List the dataset names and families.
    """
    for name in _library(None, datasets).dataset_names():
        click.echo(name)
