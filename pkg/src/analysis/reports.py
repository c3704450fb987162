"""Report emission: table text, comma-separated columns, structured records."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd
from tabulate import tabulate

from .med import MEDReport
from ..augment.distribution import PARAMETER_NAMES, distribution_to_dict
from ..selector.report import search_result_records
from ..selector.search import SearchResult
from ..utils.exceptions import ConfigurationError, DataError, ReportError
from ..utils.logger import get_logger
from ..utils.validators import validate_report_format, validate_writable_path

logger = get_logger(__name__)

MED_FORMAT_VERSION = 'augsel-med/1'


def med_report_records(report: MEDReport, run_config: Optional[Dict[str, Any]] = None):
    header = {
        'record': 'header',
        'format': MED_FORMAT_VERSION,
        'k': report.k,
        'provenance': report.provenance,
        'candidate_count': report.candidate_count,
    }
    if run_config is not None:
        header['run_config'] = run_config
    yield header
    for name, value, sign in report.series():
        yield {'record': 'med', 'parameter': name, 'med': value, 'sign': sign}


def write_med_report(report: MEDReport, path: Union[str, Path],
                     run_config: Optional[Dict[str, Any]] = None) -> Path:
    """Lossless line-delimited form, readable by read_med_report."""
    return emit_report(report, 'jsonl', path, run_config)


def read_med_report(path: Union[str, Path]) -> MEDReport:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            records = [json.loads(line) for line in f if line.strip()]
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DataError(f"{path}: cannot read MED report ({e})")
    if not all(isinstance(r, dict) for r in records):
        raise DataError(f"{path}: every line must be a JSON object")
    if not records or records[0].get('format') != MED_FORMAT_VERSION:
        raise DataError(f"{path}: missing or unsupported MED header")
    header = records[0]
    try:
        values = {str(r['parameter']): float(r['med']) for r in records[1:] if r.get('record') == 'med'}
        return MEDReport(k=int(header['k']), values=values, provenance=header['provenance'],
                         candidate_count=header.get('candidate_count', 0))
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"{path}: malformed MED record ({e})")


def _config_lines(run_config: Optional[Dict[str, Any]]) -> str:
    if not run_config:
        return ''
    rows = [[key, json.dumps(value)] for key, value in run_config.items()]
    return tabulate(rows, headers=['Setting', 'Value'], tablefmt='grid') + '\n\n'


def _med_table_text(report: MEDReport, run_config: Optional[Dict[str, Any]]) -> str:
    rows = [[name, f"{value:+.6f}", '+' if sign > 0 else '-' if sign < 0 else '0']
            for name, value, sign in report.series()]
    title = (f"Mean Extremal Difference (k={report.k}, {report.candidate_count} candidates, "
             f"source {report.provenance})\n")
    return _config_lines(run_config) + title + tabulate(rows, headers=['Parameter', 'MED', 'Sign'], tablefmt='grid') + '\n'


def search_result_frame(result: SearchResult) -> pd.DataFrame:
    rows = []
    for rank, c in enumerate(result.candidates, start=1):
        row = {'rank': rank, 'index': c.index, 'seed': c.seed, 'score': c.score.value}
        row.update(distribution_to_dict(c.distribution))
        rows.append(row)
    return pd.DataFrame(rows, columns=['rank', 'index', 'seed', 'score', *PARAMETER_NAMES])


def _search_table_text(result: SearchResult, run_config: Optional[Dict[str, Any]]) -> str:
    frame = search_result_frame(result)
    title = f"Search result {result.identifier}: {len(result)} candidates, selected index {result.best().index}\n"
    return _config_lines(run_config) + title + tabulate(frame, headers='keys', tablefmt='grid',
                                                        showindex=False, floatfmt='.6g') + '\n'


def emit_report(report: Union[MEDReport, SearchResult], format: str, path: Union[str, Path],
                run_config: Optional[Dict[str, Any]] = None) -> Path:
    """Write a MED report or search result as 'table', 'csv' or 'jsonl'."""
    if not validate_report_format(format):
        raise ConfigurationError(f"unknown report format '{format}'; expected table, csv or jsonl")
    if not isinstance(report, (MEDReport, SearchResult)):
        raise ConfigurationError(f"cannot emit {type(report).__name__}")
    path = Path(path)
    if not validate_writable_path(path):
        raise ReportError("cannot write report here", str(path))
    fmt = format.lower()

    try:
        if fmt == 'csv':
            if isinstance(report, MEDReport):
                frame = report.to_frame()[['parameter', 'med']]
            else:
                frame = search_result_frame(report)
            frame.to_csv(path, index=False, float_format='%.17g')
        elif fmt == 'jsonl':
            if isinstance(report, MEDReport):
                records = list(med_report_records(report, run_config))
            else:
                records = search_result_records(report)
                if run_config is not None:
                    records[0]['run_config'] = run_config
            with open(path, 'w', encoding='utf-8') as f:
                for record in records:
                    f.write(json.dumps(record) + '\n')
        else:
            if isinstance(report, MEDReport):
                text = _med_table_text(report, run_config)
            else:
                text = _search_table_text(report, run_config)
            with open(path, 'w', encoding='utf-8') as f:
                f.write(text)
    except OSError as e:
        logger.error(f"Failed to write {fmt} report to {path}: {e}")
        raise ReportError(f"cannot write {fmt} report ({e})", str(path))

    logger.debug(f"Wrote {fmt} report {path}")
    return path
