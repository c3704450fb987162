"""Kernel Gram matrices and dependence scores."""

from .gram import GramMatrix, gaussian_gram, delta_gram, center_gram, median_heuristic
from .dependence import (
    DependenceScore,
    hsic_biased,
    hsic_unbiased,
    conditional_dependence,
    permutation_pvalue,
)

__all__ = [
    'GramMatrix',
    'gaussian_gram',
    'delta_gram',
    'center_gram',
    'median_heuristic',
    'DependenceScore',
    'hsic_biased',
    'hsic_unbiased',
    'conditional_dependence',
    'permutation_pvalue',
]
