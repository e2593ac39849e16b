"""Phase-diagram curves, their CSV/SVG output and the verification suite."""

from .curves import COLUMNS, CurveTable, RunConfig, a_star_ckn, curve_scan, load_config, parse_config_text
from .emit import CSV_HEADER, EmitError, csv_text, emit_csv, emit_svg, svg_text
from .verify import Check, Report, verify_all

__all__ = [
    "COLUMNS", "CSV_HEADER", "Check", "CurveTable", "EmitError", "Report", "RunConfig",
    "a_star_ckn", "csv_text", "curve_scan", "emit_csv", "emit_svg", "load_config",
    "parse_config_text", "svg_text", "verify_all",
]
