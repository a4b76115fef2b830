"""Output encoders (CSV)."""

from molcomm_atv.formats.csv_table import CsvEncoder

__all__ = ["CsvEncoder"]
