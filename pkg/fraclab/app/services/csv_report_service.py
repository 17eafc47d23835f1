"""CSV Report Service
Writes estimate reports, grids and sampled fields as CSV with a fixed column order and float format
"""

import csv
import logging
import math
import os

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '.17g'


def format_cell(value):
	"""Render one cell; floats use 17 significant digits so re-runs are byte-identical."""
	if value is None:
		return ''
	if isinstance(value, bool):
		return 'true' if value else 'false'
	if isinstance(value, float):
		if math.isinf(value):
			return 'inf' if value > 0 else '-inf'
		return format(value, FLOAT_FORMAT)
	return str(value)


class CSVReportService:
	"""Emit EstimateReport rows to report.csv"""

	@staticmethod
	def collect_columns(rows):
		"""
		Union of row keys in first-seen order

		Args:
			rows: List of dicts

		Returns:
			list: Column names
		"""
		columns = []
		seen = set()
		for row in rows:
			for key in row:
				if key not in seen:
					seen.add(key)
					columns.append(key)
		return columns

	@staticmethod
	def write_rows(rows, out_dir, filename='report.csv'):
		"""
		Write rows as comma-separated values with a header and LF line endings

		Args:
			rows: List of dicts (EstimateReport.to_row() plus run columns)
			out_dir: Output directory, created if missing
			filename: File name inside out_dir

		Returns:
			str: Path of the written file
		"""
		os.makedirs(out_dir, exist_ok=True)
		filepath = os.path.join(out_dir, filename)
		columns = CSVReportService.collect_columns(rows)

		with open(filepath, 'w', newline='', encoding='utf-8') as csvfile:
			writer = csv.writer(csvfile, lineterminator='\n')
			writer.writerow(columns)
			for row in rows:
				writer.writerow([format_cell(row.get(column)) for column in columns])

		logger.info(f"Wrote {len(rows)} rows to {filepath}")
		return filepath

	@staticmethod
	def report_rows(reports, **run_columns):
		"""
		Flatten reports, prefixing each row with run-level columns

		Args:
			reports: Iterable of EstimateReport
			**run_columns: Columns shared by every row (experiment name, level, ...)

		Returns:
			list: Row dicts
		"""
		rows = []
		for report in reports:
			row = dict(run_columns)
			row.update(report.to_row())
			rows.append(row)
		return rows

	@staticmethod
	def axis_columns(dimension):
		"""Coordinate column names: x for 1D, x1 and x2 for 2D."""
		if dimension == 1:
			return ['x']
		return [f'x{axis + 1}' for axis in range(dimension)]

	@staticmethod
	def write_table(header, records, out_dir, filename):
		"""
		Write positional records under a fixed header

		Args:
			header: Column names
			records: Iterable of tuples, one value per column
			out_dir: Output directory, created if missing
			filename: File name inside out_dir

		Returns:
			str: Path of the written file
		"""
		os.makedirs(out_dir, exist_ok=True)
		filepath = os.path.join(out_dir, filename)
		count = 0
		with open(filepath, 'w', newline='', encoding='utf-8') as csvfile:
			writer = csv.writer(csvfile, lineterminator='\n')
			writer.writerow(header)
			for record in records:
				writer.writerow([format_cell(value) for value in record])
				count += 1

		logger.info(f"Wrote {count} records to {filepath}")
		return filepath

	@staticmethod
	def write_grid(grid, out_dir, filename='grid.csv'):
		header = CSVReportService.axis_columns(grid.dimension) + ['weight']
		return CSVReportService.write_table(header, grid.rows(), out_dir, filename)

	@staticmethod
	def write_grid_function(function, out_dir, filename):
		header = CSVReportService.axis_columns(function.grid.dimension) + ['value']
		return CSVReportService.write_table(header, function.rows(), out_dir, filename)

	@staticmethod
	def write_field(field, out_dir, filename):
		"""Extension field as (x..., y, value) rows, x-node major."""
		header = CSVReportService.axis_columns(field.xgrid.dimension) + ['y', 'value']
		return CSVReportService.write_table(header, field.rows(), out_dir, filename)
