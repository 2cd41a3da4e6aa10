"""XLSX Report Exporter Service.

Writes per-ray tables (pullbacks, relative canonical divisors,
discrepancies) to an Excel workbook with a summary sheet.
"""
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from app.models import FanRefinement, TWeilDivisor
from app.services.logging_service import log_event
from app.utils import format_rational


@dataclass
class ReportExportResult:
    """Result of an XLSX report export."""
    success: bool
    output_path: Optional[Path] = None
    sheets_created: int = 0
    rows_written: int = 0
    errors: list = None

    def __post_init__(self):
        if self.errors is None:
            self.errors = []


@dataclass
class RayTable:
    """One sheet: a header row and one row per ray."""
    title: str
    headers: list
    rows: list


def _cell(value):
    # Exact rationals stay strings so nothing is rounded to a float
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else format_rational(value)
    if isinstance(value, (tuple, list)):
        return '(' + ', '.join(str(x) for x in value) + ')'
    return value


def divisor_table(title: str, fan: FanRefinement, divisor: TWeilDivisor, column: str = 'Coefficient') -> RayTable:
    """Ray / Exceptional / coefficient rows for a divisor on a refinement."""
    rows = [
        [ray, 'yes' if fan.is_exceptional(ray) else 'no', coeff]
        for ray, coeff in zip(divisor.rays, divisor.coefficients)
    ]
    return RayTable(title=title, headers=['Ray', 'Exceptional', column], rows=rows)


class ReportExporter:
    """Exports per-ray tables to XLSX format."""

    def __init__(self):
        self.header_font = Font(bold=True, color='FFFFFF')
        self.header_fill = PatternFill(start_color='4472C4', end_color='4472C4', fill_type='solid')
        self.header_alignment = Alignment(horizontal='center', vertical='center')
        self.border = Border(
            left=Side(style='thin'),
            right=Side(style='thin'),
            top=Side(style='thin'),
            bottom=Side(style='thin')
        )

    def _style_header_row(self, ws, num_columns: int) -> None:
        for col in range(1, num_columns + 1):
            cell = ws.cell(row=1, column=col)
            cell.font = self.header_font
            cell.fill = self.header_fill
            cell.alignment = self.header_alignment
            cell.border = self.border

    def _auto_column_width(self, ws) -> None:
        for column in ws.columns:
            column_letter = get_column_letter(column[0].column)
            max_length = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
            ws.column_dimensions[column_letter].width = max(min(max_length + 2, 50), 10)

    def _add_summary_sheet(self, wb: Workbook, command: str, arguments: dict, tables: Sequence[RayTable]) -> None:
        ws = wb.active
        ws.title = 'Summary'

        ws['A1'] = f"torimult {command}"
        ws['A1'].font = Font(bold=True, size=14)
        ws.merge_cells('A1:C1')

        ws['A3'] = 'Export date:'
        ws['B3'] = datetime.now().strftime('%Y-%m-%d %H:%M:%S')

        row = 5
        ws[f'A{row}'] = 'Arguments'
        ws[f'A{row}'].font = Font(bold=True)
        for key in sorted(arguments):
            row += 1
            ws[f'A{row}'] = f"{key}:"
            ws[f'A{row}'].font = Font(bold=True)
            ws[f'B{row}'] = str(arguments[key])

        row += 2
        ws[f'A{row}'] = 'Tables'
        ws[f'A{row}'].font = Font(bold=True)
        for table in tables:
            row += 1
            ws[f'A{row}'] = f"{table.title}:"
            ws[f'B{row}'] = len(table.rows)

        self._auto_column_width(ws)

    def _add_table_sheet(self, wb: Workbook, table: RayTable) -> int:
        # Sheet titles are limited to 31 characters
        ws = wb.create_sheet(table.title[:31])
        ws.append(list(table.headers))
        self._style_header_row(ws, len(table.headers))
        for row in table.rows:
            ws.append([_cell(value) for value in row])
        self._auto_column_width(ws)
        return len(table.rows)

    def export_tables(
        self,
        command: str,
        arguments: dict,
        tables: Sequence[RayTable],
        output_path: Path,
    ) -> ReportExportResult:
        """
        Export per-ray tables to an XLSX file.

        Args:
            command: Command that produced the tables
            arguments: Command arguments, shown on the summary sheet
            tables: One RayTable per sheet
            output_path: Path for output XLSX file

        Returns:
            ReportExportResult with success status
        """
        result = ReportExportResult(success=False)
        output_path = Path(output_path)

        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)

            wb = Workbook()
            self._add_summary_sheet(wb, command, arguments, tables)
            result.sheets_created += 1

            for table in tables:
                result.rows_written += self._add_table_sheet(wb, table)
                result.sheets_created += 1

            wb.save(output_path)

            result.success = True
            result.output_path = output_path
            log_event('cli', 'report_exported', details=f"{output_path} ({result.sheets_created} sheets)")

        except Exception as e:
            result.errors.append(f"XLSX export failed: {str(e)}")

        return result


def generate_report_filename(command: str) -> str:
    """
    Generate a report filename.

    Returns:
        Filename like 'relcan_20250103_143052.xlsx'
    """
    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    return f"{command}_{timestamp}.xlsx"
