"""Desk-scale contrastive training, utterance embedding and checkpoints."""

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .encoder import EncoderParams, encode, encode_features, fit_input_normalization, init_params
from .objective import SegmentPair, loss_and_gradients, pair_features
from ..augment.chain import apply_chain, sample_chain
from ..augment.distribution import AugDistribution
from ..corpus.audio import Waveform, cut_random_segment
from ..corpus.manifest import Dataset
from ..features.mel import pooled_features
from ..utils.exceptions import ConfigurationError, DataError, NumericalError, ReportError
from ..utils.logger import get_logger
from ..utils.validators import validate_finite_array, validate_positive_count, validate_positive_float

logger = get_logger(__name__)

SEGMENT_SECONDS = 1.0
EMBED_HOP_SECONDS = 0.2
CHECKPOINT_FORMAT = 'augsel-checkpoint/1'


@dataclass(frozen=True)
class TrainingConfig:
    steps: int = 200
    batch_size: int = 8
    learning_rate: float = 1e-2
    hidden_dim: int = 64
    embedding_dim: int = 64
    projection_dim: int = 32
    init_scale: float = 0.5

    def __post_init__(self):
        for name in ('steps', 'batch_size', 'hidden_dim', 'embedding_dim', 'projection_dim'):
            if not validate_positive_count(getattr(self, name)):
                raise ConfigurationError(f"{name} must be a positive integer, got {getattr(self, name)}")
        if self.learning_rate < 0 or not np.isfinite(self.learning_rate):
            raise ConfigurationError(f"learning_rate must be finite and >= 0, got {self.learning_rate}")
        if not validate_positive_float(self.init_scale):
            raise ConfigurationError(f"init_scale must be positive, got {self.init_scale}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: Mapping[str, Any]) -> 'TrainingConfig':
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in record.items() if k in names})


def make_training_pair(w: Waveform, d: AugDistribution, rng: np.random.Generator,
                       origin_id: str = '') -> SegmentPair:
    """Two independent 1 s cuts, each altered by its own sampled chain."""
    segment_a = cut_random_segment(w, SEGMENT_SECONDS, rng)
    segment_b = cut_random_segment(w, SEGMENT_SECONDS, rng)
    chain_a = sample_chain(d, rng)
    chain_b = sample_chain(d, rng)
    return SegmentPair(apply_chain(chain_a, segment_a), apply_chain(chain_b, segment_b), origin_id)


def _sgd_step(params: EncoderParams, feats_a: np.ndarray, feats_b: np.ndarray,
              learning_rate: float) -> Tuple[EncoderParams, float]:
    loss, grads = loss_and_gradients(params, feats_a, feats_b)
    grad_norm = float(np.sqrt(sum(np.sum(g ** 2) for g in grads.values())))
    if not validate_finite_array([loss, grad_norm]):
        raise NumericalError(
            f"non-finite training loss ({loss})",
            {'loss': loss, 'grad_norm': grad_norm, 'learning_rate': learning_rate},
        )
    return params.updated(grads, learning_rate), loss


def train_step(params: EncoderParams, pairs: Sequence[SegmentPair],
               learning_rate: float) -> Tuple[EncoderParams, float]:
    """One gradient-descent update of every trainable array; returns the pre-update loss."""
    feats_a, feats_b = pair_features(pairs)
    return _sgd_step(params, feats_a, feats_b, learning_rate)


def segment_offsets(num_samples: int, sample_rate: int) -> List[int]:
    """1 s windows every 200 ms; the last window is anchored to the end."""
    seg = int(round(SEGMENT_SECONDS * sample_rate))
    hop = int(round(EMBED_HOP_SECONDS * sample_rate))
    if num_samples <= seg:
        return [0]
    offsets = list(range(0, num_samples - seg + 1, hop))
    if offsets[-1] + seg < num_samples:
        offsets.append(num_samples - seg)
    return offsets


def embed_utterance(params: EncoderParams, w: Waveform) -> np.ndarray:
    """Mean encoder embedding over overlapping 1 s segments of an utterance."""
    if len(w) == 0:
        raise DataError("cannot embed an empty waveform")
    seg = int(round(SEGMENT_SECONDS * w.sample_rate))
    if len(w) < seg:
        padded = np.zeros(seg)
        padded[seg - len(w):] = w.samples
        w = w.with_samples(padded)

    embeddings = [encode(params, w.with_samples(w.samples[o:o + seg]))
                  for o in segment_offsets(len(w), w.sample_rate)]
    return np.mean(embeddings, axis=0)


def save_checkpoint(params: EncoderParams, path: Union[str, Path], step: int = 0,
                    metadata: Optional[Dict[str, Any]] = None) -> Path:
    """Write all parameter arrays with their names to a versioned .npz file."""
    path = Path(path)
    meta = {'format': CHECKPOINT_FORMAT, 'step': int(step), 'metadata': metadata or {}}
    arrays = {f"param_{name}": value for name, value in params.arrays().items()}
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'wb') as f:
            np.savez(f, __meta__=np.array(json.dumps(meta)), **arrays)
    except OSError as e:
        raise ReportError(f"cannot write checkpoint ({e})", str(path))
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[EncoderParams, Dict[str, Any]]:
    try:
        with np.load(path, allow_pickle=False) as data:
            meta = json.loads(str(data['__meta__']))
            arrays = {key[len('param_'):]: data[key].copy() for key in data.files if key.startswith('param_')}
    except (OSError, KeyError, ValueError) as e:
        raise DataError(f"{path}: cannot read checkpoint ({e})")
    if meta.get('format') != CHECKPOINT_FORMAT:
        raise DataError(f"{path}: unsupported checkpoint format {meta.get('format')!r}")
    try:
        return EncoderParams(**arrays), meta
    except (TypeError, ValueError) as e:
        raise DataError(f"{path}: inconsistent checkpoint arrays ({e})")


class ToyTrainer:
    """Contrastive training loop over a labeled corpus.

    Batch contents depend only on (seed, step), so a run resumed from a
    checkpoint at step t reproduces step t of the uninterrupted run.
    """

    def __init__(self, ds: Dataset, audio: Mapping[str, Waveform], distribution: AugDistribution,
                 config: TrainingConfig, seed: int = 0):
        if config.batch_size > len(ds):
            raise ConfigurationError(
                f"batch_size {config.batch_size} exceeds the {len(ds)} samples in the dataset"
            )
        self.ds = ds
        self.audio = audio
        self.distribution = distribution
        self.config = config
        self.seed = int(seed)

    def initial_params(self) -> EncoderParams:
        rng = np.random.default_rng([self.seed, 0])
        params = init_params(rng, hidden_dim=self.config.hidden_dim, embedding_dim=self.config.embedding_dim,
                             projection_dim=self.config.projection_dim, init_scale=self.config.init_scale)
        calibration = np.vstack([
            pooled_features(cut_random_segment(self.audio[e.id], SEGMENT_SECONDS, rng)) for e in self.ds.entries
        ])
        return fit_input_normalization(params, calibration)

    def batch(self, step: int) -> List[SegmentPair]:
        rng = np.random.default_rng([self.seed, step + 1])
        chosen = rng.choice(len(self.ds), size=self.config.batch_size, replace=False)
        pairs = []
        for i in sorted(chosen):
            entry = self.ds.entries[i]
            pairs.append(make_training_pair(self.audio[entry.id], self.distribution, rng, entry.id))
        return pairs

    def run(self, steps: Optional[int] = None, params: Optional[EncoderParams] = None, start_step: int = 0,
            on_step: Optional[Callable[[int, float], None]] = None) -> Tuple[EncoderParams, List[float]]:
        steps = self.config.steps if steps is None else steps
        params = self.initial_params() if params is None else params
        losses: List[float] = []

        for step in range(start_step, start_step + steps):
            params, loss = train_step(params, self.batch(step), self.config.learning_rate)
            losses.append(loss)
            if on_step is not None:
                on_step(step, loss)
            if step % 20 == 0:
                logger.debug(f"Step {step}: loss {loss:.6f}")

        if losses:
            logger.info(f"Trained steps {start_step}..{start_step + steps - 1}: "
                        f"loss {losses[0]:.4f} -> {losses[-1]:.4f}")
        return params, losses
