"""Augmentation distribution scoring and random search."""

from .views import ScoringConfig, ViewSet, generate_views
from .search import (
    ScoredCandidate,
    SearchResult,
    derive_seed,
    subsample_origins,
    score_distribution,
    score_candidates,
    random_search,
)
from .report import write_search_result, read_search_result, search_result_records

__all__ = [
    'ScoringConfig',
    'ViewSet',
    'generate_views',
    'ScoredCandidate',
    'SearchResult',
    'derive_seed',
    'subsample_origins',
    'score_distribution',
    'score_candidates',
    'random_search',
    'write_search_result',
    'read_search_result',
    'search_result_records',
]
