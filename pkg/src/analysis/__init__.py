"""Post-search analysis and report emission."""

from .med import MEDReport, med, med_report, extremal_groups, compare_med_reports
from .reports import emit_report, read_med_report, search_result_frame, write_med_report

__all__ = [
    'MEDReport',
    'med',
    'med_report',
    'extremal_groups',
    'compare_med_reports',
    'emit_report',
    'read_med_report',
    'write_med_report',
    'search_result_frame',
]
