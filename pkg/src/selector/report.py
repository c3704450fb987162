"""Line-delimited search result files: header, one record per candidate, selected block."""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

from .search import ScoredCandidate, SearchResult
from ..augment.distribution import distribution_from_dict, distribution_to_dict
from ..kernelstats.dependence import DependenceScore
from ..utils.exceptions import DataError, ReportError

FORMAT_VERSION = 'augsel-search/1'


def _candidate_record(kind: str, rank: int, c: ScoredCandidate) -> Dict[str, Any]:
    return {
        'record': kind,
        'rank': rank,
        'index': c.index,
        'seed': c.seed,
        'score': c.score.value,
        'n': c.score.n,
        'epsilon': c.score.epsilon,
        'distribution': distribution_to_dict(c.distribution),
    }


def search_result_records(result: SearchResult) -> List[Dict[str, Any]]:
    records: List[Dict[str, Any]] = [{
        'record': 'header',
        'format': FORMAT_VERSION,
        'identifier': result.identifier,
        'n_candidates': len(result),
        'config': result.config,
    }]
    records.extend(_candidate_record('candidate', rank, c) for rank, c in enumerate(result.candidates, start=1))
    records.append(_candidate_record('selected', 1, result.best()))
    return records


def write_search_result(result: SearchResult, path: Union[str, Path]) -> Path:
    """Write the result; identical results give byte-identical files."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            for record in search_result_records(result):
                f.write(json.dumps(record) + '\n')
    except OSError as e:
        raise ReportError(f"cannot write search result ({e})", str(path))
    return path


def _parse_candidate(record: Dict[str, Any]) -> ScoredCandidate:
    return ScoredCandidate(
        index=int(record['index']),
        distribution=distribution_from_dict(record['distribution']),
        score=DependenceScore(float(record['score']), int(record['n']), float(record['epsilon'])),
        seed=int(record['seed']),
    )


def read_search_result(path: Union[str, Path]) -> SearchResult:
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            records = [json.loads(line) for line in f if line.strip()]
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DataError(f"{path}: cannot read search result ({e})")
    if not all(isinstance(r, dict) for r in records):
        raise DataError(f"{path}: every line must be a JSON object")

    if not records or records[0].get('record') != 'header' or records[0].get('format') != FORMAT_VERSION:
        raise DataError(f"{path}: missing or unsupported header record")
    header = records[0]

    try:
        candidates = [_parse_candidate(r) for r in records[1:] if r.get('record') == 'candidate']
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"{path}: malformed candidate record ({e})")
    if len(candidates) != header.get('n_candidates'):
        raise DataError(f"{path}: header announces {header.get('n_candidates')} candidates, found {len(candidates)}")

    return SearchResult(tuple(candidates), header.get('config', {}))
