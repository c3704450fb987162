"""Feed-forward encoder, projection head and bilinear similarity.

Shapes (B = batch, D = 64 Mel bands):
    x  (B, D) --dense+relu--> a1 (B, hidden) --dense+relu--> h (B, embedding)
    h --dense--> z (B, projection) --normalize, gain/offset--> y --tanh--> v
    s(v1, v2) = v1^T W v2
"""

from dataclasses import dataclass, field, fields
from typing import Dict, Tuple

import numpy as np

from ..corpus.audio import Waveform
from ..features.mel import N_MELS, pooled_features
from ..utils.validators import validate_finite_array

STD_FLOOR = 1e-5

TRAINABLE = ('w1', 'b1', 'w2', 'b2', 'wp', 'bp', 'gain', 'offset', 'bilinear')


@dataclass
class EncoderParams:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    wp: np.ndarray
    bp: np.ndarray
    gain: np.ndarray
    offset: np.ndarray
    bilinear: np.ndarray
    input_shift: np.ndarray = field(default_factory=lambda: np.zeros(N_MELS))
    input_scale: np.ndarray = field(default_factory=lambda: np.ones(N_MELS))

    def __post_init__(self):
        for f in fields(self):
            setattr(self, f.name, np.asarray(getattr(self, f.name), dtype=np.float64))
        self.check()

    def check(self):
        hidden, input_dim = self.w1.shape
        embedding = self.w2.shape[0]
        projection = self.wp.shape[0]
        expected = {
            'b1': (hidden,), 'w2': (embedding, hidden), 'b2': (embedding,),
            'wp': (projection, embedding), 'bp': (projection,), 'gain': (projection,),
            'offset': (projection,), 'bilinear': (projection, projection),
            'input_shift': (input_dim,), 'input_scale': (input_dim,),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        for f in fields(self):
            if not validate_finite_array(getattr(self, f.name)):
                raise ValueError(f"{f.name} contains non-finite entries")
        if np.any(self.input_scale <= 0):
            raise ValueError("input_scale must be positive")

    @property
    def embedding_dim(self) -> int:
        return self.w2.shape[0]

    @property
    def projection_dim(self) -> int:
        return self.wp.shape[0]

    def arrays(self) -> Dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def copy(self) -> 'EncoderParams':
        return EncoderParams(**{name: value.copy() for name, value in self.arrays().items()})

    def updated(self, grads: Dict[str, np.ndarray], learning_rate: float) -> 'EncoderParams':
        """New parameters after one gradient-descent step on the trainable arrays."""
        values = {name: value.copy() for name, value in self.arrays().items()}
        for name in TRAINABLE:
            values[name] = values[name] - learning_rate * grads[name]
        return EncoderParams(**values)


def init_params(rng: np.random.Generator, input_dim: int = N_MELS, hidden_dim: int = 64,
                embedding_dim: int = 64, projection_dim: int = 32, init_scale: float = 0.5) -> EncoderParams:
    """He-scaled dense layers, unit gain, and a small random bilinear matrix."""
    return EncoderParams(
        w1=rng.standard_normal((hidden_dim, input_dim)) * np.sqrt(2.0 / input_dim),
        b1=np.zeros(hidden_dim),
        w2=rng.standard_normal((embedding_dim, hidden_dim)) * np.sqrt(2.0 / hidden_dim),
        b2=np.zeros(embedding_dim),
        wp=rng.standard_normal((projection_dim, embedding_dim)) * np.sqrt(1.0 / embedding_dim),
        bp=np.zeros(projection_dim),
        gain=np.ones(projection_dim),
        offset=np.zeros(projection_dim),
        bilinear=rng.standard_normal((projection_dim, projection_dim)) * init_scale / projection_dim,
        input_shift=np.zeros(input_dim),
        input_scale=np.ones(input_dim),
    )


def fit_input_normalization(params: EncoderParams, features: np.ndarray) -> EncoderParams:
    """Set the fixed per-band shift/scale of the encoder input from pooled features."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    values = params.copy().arrays()
    values['input_shift'] = features.mean(axis=0)
    std = features.std(axis=0)
    values['input_scale'] = np.where(std > 1e-6, std, 1.0)
    return EncoderParams(**values)


def encode_features(params: EncoderParams, x: np.ndarray) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """Encoder forward pass on pooled features; returns h and the backprop cache."""
    x = np.atleast_2d(x)
    xn = (x - params.input_shift) / params.input_scale
    pre1 = xn @ params.w1.T + params.b1
    a1 = np.maximum(pre1, 0.0)
    pre2 = a1 @ params.w2.T + params.b2
    h = np.maximum(pre2, 0.0)
    return h, {'xn': xn, 'pre1': pre1, 'a1': a1, 'pre2': pre2, 'h': h}


def project_embeddings(params: EncoderParams, h: np.ndarray) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """Dense map, per-vector normalization with gain/offset, then tanh."""
    h = np.atleast_2d(h)
    z = h @ params.wp.T + params.bp
    zc = z - z.mean(axis=1, keepdims=True)
    std_raw = np.sqrt(np.mean(zc ** 2, axis=1, keepdims=True))
    std = np.maximum(std_raw, STD_FLOOR)
    u = zc / std
    v = np.tanh(params.gain * u + params.offset)
    return v, {'u': u, 'std': std, 'floored': std_raw < STD_FLOOR, 'v': v}


def encode(params: EncoderParams, segment: Waveform) -> np.ndarray:
    """Embedding h of one segment: log-Mel, time pooling, two dense ReLU layers."""
    h, _ = encode_features(params, pooled_features(segment)[None, :])
    return h[0]


def project(params: EncoderParams, h: np.ndarray) -> np.ndarray:
    v, _ = project_embeddings(params, np.asarray(h, dtype=np.float64)[None, :])
    return v[0]


def bilinear_similarity(v1: np.ndarray, v2: np.ndarray, W: np.ndarray) -> float:
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2 or v1.shape != (W.shape[0],) or v2.shape != (W.shape[1],):
        raise ValueError(f"dimension mismatch: v1 {v1.shape}, W {W.shape}, v2 {v2.shape}")
    return float(v1 @ W @ v2)
