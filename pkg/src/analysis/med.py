"""Mean Extremal Difference between the best and worst scored distributions.

MED(p) = (1/k) * sum over i = 1..k of (best_i(p) - worst_i(p)), where best
means lowest dependence score. Exactly k terms are summed.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

import numpy as np
import pandas as pd

from ..augment.distribution import PARAMETER_NAMES
from ..selector.search import SearchResult
from ..utils.exceptions import ConfigurationError, DataError


@dataclass(frozen=True)
class MEDReport:
    k: int
    values: Dict[str, float]
    provenance: str
    candidate_count: int = 0

    def __post_init__(self):
        if set(self.values) != set(PARAMETER_NAMES):
            raise DataError(f"MED report must cover all {len(PARAMETER_NAMES)} parameters")
        ordered = {name: float(self.values[name]) for name in PARAMETER_NAMES}
        object.__setattr__(self, 'values', ordered)

    def series(self) -> List[Tuple[str, float, int]]:
        """Plot-ready (parameter, value, sign) rows."""
        return [(name, value, int(np.sign(value))) for name, value in self.values.items()]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{'parameter': name, 'med': value, 'sign': sign} for name, value, sign in self.series()]
        )


def _check_k(result: SearchResult, k: int):
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ConfigurationError(f"k must be a positive integer, got {k}")
    if 2 * k > len(result):
        raise ConfigurationError(
            f"k={k} is too large for {len(result)} candidates (need 2k <= candidate count)"
        )


def extremal_groups(result: SearchResult, k: int):
    """The k best (lowest score) and k worst candidates, each ordered best-first / worst-first."""
    _check_k(result, k)
    candidates = result.candidates
    return candidates[:k], candidates[::-1][:k]


def med(result: SearchResult, k: int, param: str) -> float:
    if param not in PARAMETER_NAMES:
        raise ConfigurationError(f"unknown parameter '{param}'; expected one of {', '.join(PARAMETER_NAMES)}")
    best, worst = extremal_groups(result, k)
    total = sum(b.distribution.value(param) - w.distribution.value(param) for b, w in zip(best, worst))
    return total / k


def med_report(result: SearchResult, k: int) -> MEDReport:
    values = {name: med(result, k, name) for name in PARAMETER_NAMES}
    return MEDReport(k=int(k), values=values, provenance=result.identifier, candidate_count=len(result))


def compare_med_reports(reports: Mapping[str, MEDReport]) -> pd.DataFrame:
    """Parameter x task table of MED values for several downstream tasks."""
    if not reports:
        raise ConfigurationError("no reports to compare")
    frame = pd.DataFrame({task: pd.Series(report.values) for task, report in reports.items()})
    frame.index.name = 'parameter'
    return frame.loc[list(PARAMETER_NAMES)]
