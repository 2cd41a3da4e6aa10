"""Tests for the XLSX report exporter."""
from fractions import Fraction

from openpyxl import load_workbook

from app.models import TWeilDivisor
from app.services.divisors import pullback
from app.services.report_exporter import (
    RayTable, ReportExporter, divisor_table, generate_report_filename,
)
from app.services.toric import resolve, trivial_fan


def test_divisor_table(quadric):
    fan = resolve(trivial_fan(quadric))
    table = divisor_table('limit pullback', fan, pullback(fan, TWeilDivisor.of(quadric.rays, [1, 0])))
    assert table.headers == ['Ray', 'Exceptional', 'Coefficient']
    assert table.rows[1] == [(1, 1), 'yes', Fraction(1, 2)]


def test_export_writes_exact_values(tmp_path, quadric):
    fan = resolve(trivial_fan(quadric))
    table = divisor_table('limit pullback', fan, pullback(fan, TWeilDivisor.of(quadric.rays, [1, 0])))
    result = ReportExporter().export_tables('pullback', {'divisor': 'L'}, [table], tmp_path / 'report.xlsx')

    assert result.success
    assert result.sheets_created == 2
    assert result.rows_written == 3

    wb = load_workbook(result.output_path)
    ws = wb['limit pullback']
    assert [c.value for c in ws[1]] == ['Ray', 'Exceptional', 'Coefficient']
    assert [c.value for c in ws[3]] == ['(1, 1)', 'yes', '1/2']
    assert ws['C2'].value == 1
    assert wb['Summary']['A1'].value == 'torimult pullback'


def test_long_titles_are_truncated(tmp_path):
    table = RayTable(title='x' * 40, headers=['Ray'], rows=[[(1, 0)]])
    result = ReportExporter().export_tables('relcan', {}, [table], tmp_path / 'long.xlsx')
    assert load_workbook(result.output_path).sheetnames == ['Summary', 'x' * 31]


def test_export_failure_is_reported(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('not a directory', encoding='utf-8')
    result = ReportExporter().export_tables('relcan', {}, [], blocker / 'report.xlsx')
    assert not result.success
    assert result.errors and result.errors[0].startswith('XLSX export failed')


def test_generate_report_filename():
    name = generate_report_filename('relcan')
    assert name.startswith('relcan_')
    assert name.endswith('.xlsx')
