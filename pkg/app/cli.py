"""Command line: `torimult <command> --input problem.json ...`.

Every command builds one ResultDocument and writes it once, to stdout or
atomically to ``--output``. Exit codes: 0 success, 1 problem file could not
be parsed, 2 a precondition failed.
"""
import logging
import time
from pathlib import Path
from typing import Callable, Optional

import click
from flask import current_app
from flask.cli import with_appcontext

from app.errors import GeometryError, ProblemParseError, TorimultError
from app.models import DivisorialValuation, ResultDocument
from app.services import (
    ReportExporter, adjoint_ideal, adjoint_sequence_check, asymptotic_mult_ideal,
    build_boundary, build_divisor, build_ideal, build_pair, build_variety,
    canonical_divisor, classify, classify_log_pair, compatible_boundary_search,
    cone_contains, divisor_table, fan_to_dict, gallery_names, gallery_text,
    jumping_numbers, lc_centers, lct, limit_val, limiting_relcan, log_event, log_lct,
    log_mult_ideal, log_relcan, log_resolution, mult_ideal, mult_ideal_m, nat_pullback,
    nat_val, parse_problem, pullback, relcan, relcan_minus, render_result, resolve,
    section_polyhedron, stabilization_certificate, surface_minimal_resolution,
    surface_numerical_classify, trivial_fan, uniform_polyhedron, val_ideal, working_resolution,
    write_atomic,
)
from app.utils import CancellationToken, format_rational, parse_rational

logger = logging.getLogger(__name__)

EXIT_PARSE_ERROR = 1
EXIT_PRECONDITION = 2


def _parse_w(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(int(x) for x in value.split(','))
    except ValueError:
        raise click.BadParameter('expected comma separated integers, e.g. 1,1')


def _parse_t(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_rational(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


input_option = click.option(
    '--input', 'input_path', required=True, type=click.Path(exists=True, dir_okay=False),
    help='Problem document (JSON)',
)
output_option = click.option(
    '--output', 'output_path', type=click.Path(dir_okay=False), default=None,
    help='Write the result here instead of stdout',
)
timing_option = click.option('--timing', is_flag=True, help='Add elapsed time to the result')


def _load(input_path: str):
    text = Path(input_path).read_text(encoding='utf-8')
    doc = parse_problem(text, source=input_path)
    return doc, build_variety(doc)


def _emit(command: str, arguments: dict, compute: Callable[[], dict], output_path: Optional[str], timing: bool) -> None:
    """Run ``compute`` and write its result document, mapping errors to exit codes."""
    ctx = click.get_current_context()
    started = time.perf_counter()
    try:
        result = compute()
    except ProblemParseError as e:
        click.echo(str(e), err=True)
        ctx.exit(EXIT_PARSE_ERROR)
    except TorimultError as e:
        log_event('cli', 'precondition_failed', details=f"{command}: {e.code}", importance='medium')
        click.echo(f"{e.code}: {e.message}", err=True)
        ctx.exit(EXIT_PRECONDITION)

    elapsed = None
    if timing:
        elapsed = {'elapsed_ms': int((time.perf_counter() - started) * 1000)}
    doc = ResultDocument(
        command=command,
        arguments={k: v for k, v in arguments.items() if v is not None and v is not False},
        result=result,
        timing=elapsed,
    )
    text = render_result(doc)
    if output_path:
        write_atomic(Path(output_path), text)
    else:
        click.echo(text, nl=False)
    log_event('cli', 'command_finished', details=command)


def _threads() -> int:
    return current_app.config.get('THREADS', 1)


def _export_xlsx(xlsx_path: Optional[str], command: str, arguments: dict, tables: list) -> None:
    if not xlsx_path:
        return
    result = ReportExporter().export_tables(command, arguments, tables, Path(xlsx_path))
    if not result.success:
        for error in result.errors:
            click.echo(error, err=True)


def _check_w(X, w):
    if not cone_contains(X.sigma, w):
        raise GeometryError(f"{w} is outside σ", code='OUTSIDE_SUPPORT')


@click.command('val')
@input_option
@click.option('--w', 'w', required=True, callback=_parse_w, help='Valuation vector, e.g. 1,1')
@click.option('--q', 'q', type=click.IntRange(min=1), default=1, help='Valuation multiplier')
@click.option('--divisor', default=None, help='Divisor name')
@click.option('--ideal', default=None, help='Ideal name')
@click.option('--mode', type=click.Choice(['natural', 'limit']), default='natural')
@output_option
@timing_option
@with_appcontext
def val_command(input_path, w, q, divisor, ideal, mode, output_path, timing):
    """Valuation of a divisor or ideal along w."""
    if (divisor is None) == (ideal is None):
        raise click.UsageError('give exactly one of --divisor and --ideal')

    def compute():
        doc, X = _load(input_path)
        _check_w(X, w)
        v = DivisorialValuation(w, q)
        if ideal is not None:
            return {'value': val_ideal(v, build_ideal(doc, ideal, X))}
        D = build_divisor(doc, divisor, X)
        value = nat_val(v, D) if mode == 'natural' else limit_val(v, D)
        return {'value': value}

    arguments = {'input': input_path, 'w': list(w), 'q': q, 'divisor': divisor, 'ideal': ideal, 'mode': mode}
    _emit('val', arguments, compute, output_path, timing)


@click.command('pullback')
@input_option
@click.option('--divisor', required=True, help='Divisor name')
@click.option('--mode', type=click.Choice(['natural', 'limit']), default='limit')
@click.option('--xlsx', 'xlsx_path', type=click.Path(dir_okay=False), default=None, help='Also write an XLSX table')
@output_option
@timing_option
@with_appcontext
def pullback_command(input_path, divisor, mode, xlsx_path, output_path, timing):
    """Per-ray pullback of a divisor to a log resolution of its section module."""
    arguments = {'input': input_path, 'divisor': divisor, 'mode': mode}

    def compute():
        doc, X = _load(input_path)
        D = build_divisor(doc, divisor, X)
        fan = log_resolution(X, polys=[section_polyhedron(D)])
        pulled = nat_pullback(fan, D, threads=_threads()) if mode == 'natural' else pullback(fan, D, threads=_threads())
        _export_xlsx(xlsx_path, 'pullback', arguments, [divisor_table(f"{mode} pullback", fan, pulled)])
        return {'fan': fan_to_dict(fan, smooth=True), 'table': _ray_table(fan, pulled)}

    _emit('pullback', arguments, compute, output_path, timing)


def _ray_table(fan, divisor) -> list:
    return [
        {'ray': list(r), 'exceptional': fan.is_exceptional(r), 'value': c}
        for r, c in zip(divisor.rays, divisor.coefficients)
    ]


@click.command('relcan')
@input_option
@click.option('--kind', type=click.Choice(['m', 'plus', 'minus', 'delta']), default='m')
@click.option('--m', 'm', type=click.IntRange(min=1), default=1)
@click.option('--boundary', default=None, help='Boundary name (kind delta)')
@click.option('--xlsx', 'xlsx_path', type=click.Path(dir_okay=False), default=None, help='Also write an XLSX table')
@output_option
@timing_option
@with_appcontext
def relcan_command(input_path, kind, m, boundary, xlsx_path, output_path, timing):
    """Relative canonical divisor K_{m,Y/X}, K_{Y/X}, K⁻_{Y/X} or K^Δ_{Y/X}."""
    if kind == 'delta' and boundary is None:
        raise click.UsageError('--kind delta needs --boundary')
    arguments = {'input': input_path, 'kind': kind, 'm': m if kind == 'm' else None, 'boundary': boundary}

    def compute():
        doc, X = _load(input_path)
        if kind == 'm':
            fan = log_resolution(X, polys=[uniform_polyhedron(X, -m)])
            divisor = limiting_relcan(fan, m, threads=_threads())
        elif kind == 'delta':
            B = build_boundary(doc, boundary, X)
            fan = log_resolution(X)
            divisor = log_relcan(fan, B)
        else:
            fan = log_resolution(X, polys=[uniform_polyhedron(X, -1), uniform_polyhedron(X, 1)])
            divisor = relcan(fan, threads=_threads()) if kind == 'plus' else relcan_minus(fan, threads=_threads())
        _export_xlsx(xlsx_path, 'relcan', arguments, [divisor_table(f"relcan {kind}", fan, divisor)])
        return {'fan': fan_to_dict(fan, smooth=True), 'table': _ray_table(fan, divisor)}

    _emit('relcan', arguments, compute, output_path, timing)


@click.command('mult')
@input_option
@click.option('--pair', 'pair_name', required=True, help='Pair name')
@click.option('--m', 'm', type=click.IntRange(min=1), default=None, help='Compute J_m instead of J')
@click.option('--boundary', default=None, help='Boundary name for J((X, Δ); Z)')
@click.option('--find-boundary', is_flag=True, help='Search an m-compatible boundary')
@output_option
@timing_option
@with_appcontext
def mult_command(input_path, pair_name, m, boundary, find_boundary, output_path, timing):
    """Multiplier ideal with its stabilization certificate."""
    arguments = {'input': input_path, 'pair': pair_name, 'm': m, 'boundary': boundary, 'find_boundary': find_boundary}

    def compute():
        doc, X = _load(input_path)
        P = build_pair(doc, pair_name, X)
        certificate = stabilization_certificate(X)
        if boundary is not None:
            ideal = log_mult_ideal(build_boundary(doc, boundary, X), P)
            return {'ideal': ideal.to_list()}
        level = m or certificate.m_star
        ideal = mult_ideal_m(P, level, threads=_threads()) if m else mult_ideal(P, threads=_threads())[0]
        result = {
            'ideal': ideal.to_list(),
            'm': level,
            'certificate': certificate.to_dict(),
            'resolution': [list(r) for r in working_resolution(P, level).rays],
        }
        if find_boundary:
            found = None
            if level >= 2:
                token = CancellationToken(current_app.config.get('TIMEOUT_SECS'))
                bound = current_app.config.get('BOUNDARY_DENOMINATOR_BOUND', 4)
                found = compatible_boundary_search(P, level, denominator_bound=bound, token=token)
            result['boundary'] = found.to_dict() if found else None
        return result

    _emit('mult', arguments, compute, output_path, timing)


@click.command('lct')
@input_option
@click.option('--pair', 'pair_name', required=True, help='Pair name')
@click.option('--boundary', default=None, help='Boundary name for the log pair threshold')
@output_option
@timing_option
@with_appcontext
def lct_command(input_path, pair_name, boundary, output_path, timing):
    """Log canonical threshold; null when Z is trivial."""
    def compute():
        doc, X = _load(input_path)
        P = build_pair(doc, pair_name, X)
        if boundary is not None:
            return {'lct': log_lct(build_boundary(doc, boundary, X), P)}
        return {'lct': lct(P)}

    _emit('lct', {'input': input_path, 'pair': pair_name, 'boundary': boundary}, compute, output_path, timing)


@click.command('jumping')
@input_option
@click.option('--pair', 'pair_name', required=True, help='Pair name')
@click.option('--t-max', 't_max', required=True, callback=_parse_t, help='Upper end of (0, t_max], e.g. 2')
@output_option
@timing_option
@with_appcontext
def jumping_command(input_path, pair_name, t_max, output_path, timing):
    """Jumping numbers of J(X, t·Z) in (0, t_max]."""
    def compute():
        doc, X = _load(input_path)
        P = build_pair(doc, pair_name, X)
        return {'jumping_numbers': jumping_numbers(P, t_max, threads=_threads())}

    arguments = {'input': input_path, 'pair': pair_name, 't_max': format_rational(t_max)}
    _emit('jumping', arguments, compute, output_path, timing)


@click.command('asym')
@input_option
@click.option('--divisor', required=True, help='Divisor name')
@click.option('--c', 'c', required=True, callback=_parse_t, help='Positive rational coefficient')
@output_option
@timing_option
@with_appcontext
def asym_command(input_path, divisor, c, output_path, timing):
    """Asymptotic multiplier ideal J(X, c·‖D‖)."""
    def compute():
        doc, X = _load(input_path)
        D = build_divisor(doc, divisor, X)
        return {'ideal': asymptotic_mult_ideal(X, D, c).to_list()}

    _emit('asym', {'input': input_path, 'divisor': divisor, 'c': format_rational(c)}, compute, output_path, timing)


@click.command('adjoint')
@input_option
@click.option('--pair', 'pair_name', required=True, help='Pair name')
@click.option('--h', 'h_name', required=True, help='Name of a reduced Cartier divisor H')
@click.option('--check', is_flag=True, help='Also check the adjoint exact sequence degreewise')
@output_option
@timing_option
@with_appcontext
def adjoint_command(input_path, pair_name, h_name, check, output_path, timing):
    """Adjoint ideal adj_H(X, Z)."""
    def compute():
        doc, X = _load(input_path)
        P = build_pair(doc, pair_name, X)
        H = build_divisor(doc, h_name, X)
        result = {'ideal': adjoint_ideal(P, H, threads=_threads()).to_list()}
        if check:
            report = adjoint_sequence_check(P, H)
            result['sequence'] = report.to_dict()
            result['sequence']['passed'] = report.passed
        return result

    arguments = {'input': input_path, 'pair': pair_name, 'h': h_name, 'check': check}
    _emit('adjoint', arguments, compute, output_path, timing)


@click.command('classify')
@input_option
@click.option('--pair', 'pair_name', required=True, help='Pair name')
@click.option('--boundary', default=None, help='Boundary name; classifies ((X, Δ); Z) on the log ladder')
@output_option
@timing_option
@with_appcontext
def classify_command(input_path, pair_name, boundary, output_path, timing):
    """Log ladder and canonical ladder verdicts with witnesses."""
    def compute():
        doc, X = _load(input_path)
        P = build_pair(doc, pair_name, X)
        if boundary is not None:
            return classify_log_pair(build_boundary(doc, boundary, X), P).to_dict()
        return classify(P).to_dict()

    _emit('classify', {'input': input_path, 'pair': pair_name, 'boundary': boundary}, compute, output_path, timing)


@click.command('lc-centers')
@input_option
@click.option('--pair', 'pair_name', required=True, help='Pair name')
@output_option
@timing_option
@with_appcontext
def lc_centers_command(input_path, pair_name, output_path, timing):
    """Log canonical centers of a strictly log canonical pair."""
    def compute():
        doc, X = _load(input_path)
        return {'lc_centers': [c.to_dict() for c in lc_centers(build_pair(doc, pair_name, X))]}

    _emit('lc-centers', {'input': input_path, 'pair': pair_name}, compute, output_path, timing)


@click.command('resolve')
@input_option
@click.option('--pair', 'pair_name', default=None, help='Resolve the pair instead of X alone')
@click.option('--m', 'm', type=click.IntRange(min=1), default=None, help='Also make O_X(mK_X) principal')
@output_option
@timing_option
@with_appcontext
def resolve_command(input_path, pair_name, m, output_path, timing):
    """Smooth (log) resolution as a fan."""
    def compute():
        doc, X = _load(input_path)
        if pair_name is not None:
            P = build_pair(doc, pair_name, X)
            fan = working_resolution(P, m or stabilization_certificate(X).m_star)
        elif m is not None:
            fan = log_resolution(X, polys=[uniform_polyhedron(X, -m)])
        else:
            fan = resolve(trivial_fan(X))
        return {'fan': fan_to_dict(fan, smooth=True), 'canonical': canonical_divisor(fan).to_dict()}

    _emit('resolve', {'input': input_path, 'pair': pair_name, 'm': m}, compute, output_path, timing)


@click.command('surface')
@input_option
@output_option
@timing_option
@with_appcontext
def surface_command(input_path, output_path, timing):
    """Minimal resolution, intersection matrix and numerical class of a toric surface."""
    def compute():
        _, X = _load(input_path)
        fan, data = surface_minimal_resolution(X)
        return {
            'fan': fan_to_dict(fan, smooth=True),
            'intersection': data.to_dict(),
            'numerical_class': surface_numerical_classify(X).value,
        }

    _emit('surface', {'input': input_path}, compute, output_path, timing)


@click.command('examples')
@click.argument('name', required=False)
@output_option
@with_appcontext
def examples_command(name, output_path):
    """List the example gallery, or print one example as a problem file."""
    ctx = click.get_current_context()
    if name is None:
        _emit('examples', {}, lambda: {'examples': gallery_names()}, output_path, False)
        return
    try:
        text = gallery_text(name)
    except TorimultError as e:
        click.echo(f"{e.code}: {e.message}", err=True)
        ctx.exit(EXIT_PRECONDITION)
    if output_path:
        write_atomic(Path(output_path), text)
    else:
        click.echo(text, nl=False)


COMMANDS = (
    val_command, pullback_command, relcan_command, mult_command, lct_command,
    jumping_command, asym_command, adjoint_command, classify_command,
    lc_centers_command, resolve_command, surface_command, examples_command,
)


def register_cli_commands(app):
    """Register CLI commands."""
    for command in COMMANDS:
        app.cli.add_command(command)
