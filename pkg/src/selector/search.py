"""Candidate scoring and random search over augmentation distributions."""

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .views import ScoringConfig, generate_views
from ..augment.distribution import AugDistribution, distribution_to_dict, sample_distribution
from ..corpus.audio import Waveform
from ..corpus.manifest import Dataset, load_dataset_audio
from ..kernelstats.dependence import DependenceScore, conditional_dependence
from ..kernelstats.gram import delta_gram, gaussian_gram, median_heuristic
from ..utils.exceptions import AugSelError, CandidateScoringError, ConfigurationError, DataError
from ..utils.logger import get_logger
from ..utils.validators import validate_positive_count

logger = get_logger(__name__)


@dataclass(frozen=True)
class ScoredCandidate:
    index: int
    distribution: AugDistribution
    score: DependenceScore
    seed: int


@dataclass(frozen=True)
class SearchResult:
    """Candidates sorted ascending by score; ties keep sampling order."""

    candidates: Tuple[ScoredCandidate, ...]
    config: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        ordered = tuple(sorted(self.candidates, key=lambda c: (c.score.value, c.index)))
        object.__setattr__(self, 'candidates', ordered)

    def __len__(self) -> int:
        return len(self.candidates)

    def best(self) -> ScoredCandidate:
        if not self.candidates:
            raise DataError("search result has no candidates")
        return self.candidates[0]

    @property
    def scores(self) -> List[float]:
        return [c.score.value for c in self.candidates]

    @property
    def identifier(self) -> str:
        """Content hash of config and candidates."""
        payload = {
            'config': self.config,
            'candidates': [
                [c.index, c.seed, c.score.value, distribution_to_dict(c.distribution)]
                for c in self.candidates
            ],
        }
        digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode('utf-8'))
        return digest.hexdigest()[:16]


def derive_seed(master_seed: int, index: int) -> int:
    """Per-candidate seed, independent of scheduling order."""
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1)[0])


def sampling_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 0])


def scoring_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 1])


def subsample_origins(ds: Dataset, cfg: ScoringConfig) -> Dataset:
    """Keep at most cfg.max_origins samples, chosen with cfg.subsample_seed."""
    if len(ds) <= cfg.max_origins:
        return ds
    rng = np.random.default_rng(cfg.subsample_seed)
    keep = rng.choice(len(ds), size=cfg.max_origins, replace=False)
    return ds.subset(ds.entries[i].id for i in sorted(keep))


def score_distribution(ds: Dataset, d: AugDistribution, cfg: ScoringConfig,
                       rng: np.random.Generator,
                       audio: Optional[Mapping[str, Waveform]] = None) -> DependenceScore:
    """Conditional dependence of augmented views and origin ids given labels."""
    if len(ds) < 2 or len(ds.label_vocabulary) < 2:
        raise DataError(
            f"scoring needs at least 2 samples and 2 labels, got {len(ds)} samples "
            f"and {len(ds.label_vocabulary)} label(s)"
        )
    used = subsample_origins(ds, cfg)
    if len(used.label_vocabulary) < 2:
        raise DataError("origin subsample has a single label; raise max_origins or change subsample_seed")
    if audio is None:
        audio = load_dataset_audio(used)

    views = generate_views(used, d, cfg.n_views, rng, audio, cfg.segment_seconds)
    sigma = median_heuristic(views.features)
    gx = gaussian_gram(views.features, sigma)
    gz = delta_gram(views.origin_ids)
    gy = delta_gram(views.downstream_labels)
    return conditional_dependence(gx, gz, gy, cfg.epsilon)


def _score_one(index: int, distribution: AugDistribution, seed: int, ds: Dataset,
               cfg: ScoringConfig, audio: Mapping[str, Waveform]) -> ScoredCandidate:
    score = score_distribution(ds, distribution, cfg, scoring_rng(seed), audio)
    logger.debug(f"Candidate {index} (seed {seed}): score {score.value:.6g}")
    return ScoredCandidate(index=index, distribution=distribution, score=score, seed=seed)


def score_candidates(ds: Dataset, distributions: Sequence[AugDistribution], cfg: ScoringConfig,
                     master_seed: int, workers: int = 1,
                     audio: Optional[Mapping[str, Waveform]] = None,
                     extra_config: Optional[Dict[str, Any]] = None) -> SearchResult:
    """Score every distribution; the first failing candidate aborts the whole run."""
    if not distributions:
        raise ConfigurationError("no candidate distributions to score")
    if audio is None:
        audio = load_dataset_audio(subsample_origins(ds, cfg), workers=workers)

    seeds = [derive_seed(master_seed, i) for i in range(len(distributions))]
    scored: List[ScoredCandidate] = []

    if workers <= 1:
        for i, (d, seed) in enumerate(zip(distributions, seeds)):
            try:
                scored.append(_score_one(i, d, seed, ds, cfg, audio))
            except AugSelError as e:
                logger.error(f"Candidate {i} failed: {e}")
                raise CandidateScoringError(i, e)
            except (ValueError, ArithmeticError) as e:
                logger.error(f"Candidate {i} failed: {e}")
                raise CandidateScoringError(i, e)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_index = {
                executor.submit(_score_one, i, d, seed, ds, cfg, audio): i
                for i, (d, seed) in enumerate(zip(distributions, seeds))
            }
            for future in as_completed(future_to_index):
                i = future_to_index[future]
                try:
                    scored.append(future.result())
                except Exception as e:
                    logger.error(f"Candidate {i} failed: {e}")
                    for pending in future_to_index:
                        pending.cancel()
                    raise CandidateScoringError(i, e)

    config = {'scoring': cfg.to_dict(), 'master_seed': int(master_seed), 'n_candidates': len(distributions)}
    config.update(extra_config or {})
    result = SearchResult(tuple(scored), config)
    logger.info(f"Scored {len(result)} candidates; best is candidate {result.best().index} "
                f"with score {result.best().score.value:.6g}")
    return result


def random_search(ds: Dataset, n_candidates: int, cfg: ScoringConfig, master_seed: int,
                  workers: int = 1, audio: Optional[Mapping[str, Waveform]] = None,
                  extra_config: Optional[Dict[str, Any]] = None) -> SearchResult:
    """Sample n_candidates distributions, score each, and rank them ascending."""
    if not validate_positive_count(n_candidates):
        raise ConfigurationError(f"n_candidates must be a positive integer, got {n_candidates}")

    distributions = [
        sample_distribution(sampling_rng(derive_seed(master_seed, i))) for i in range(n_candidates)
    ]
    logger.info(f"Random search: {n_candidates} candidates, {cfg.n_views} views per sample, "
                f"epsilon {cfg.epsilon}, master seed {master_seed}")
    return score_candidates(ds, distributions, cfg, master_seed, workers, audio, extra_config)
