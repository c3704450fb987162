"""Contrastive loss over bilinear similarities, its gradients, and a gradient check."""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from .encoder import STD_FLOOR, TRAINABLE, EncoderParams, encode_features, project_embeddings
from ..corpus.audio import Waveform
from ..features.mel import pooled_features
from ..utils.exceptions import DataError

FD_STEP = 1e-4
GRAD_ATOL = 1e-8


@dataclass(frozen=True)
class SegmentPair:
    """Two augmented segments cut from the same origin sample."""

    view_a: Waveform
    view_b: Waveform
    origin_id: str = ''

    def __post_init__(self):
        if len(self.view_a) != len(self.view_b):
            raise ValueError(f"views differ in length: {len(self.view_a)} vs {len(self.view_b)}")


def pair_features(pairs: Sequence[SegmentPair]) -> Tuple[np.ndarray, np.ndarray]:
    """Pooled log-Mel features of both views; rejects repeated origins."""
    if len(pairs) == 0:
        raise DataError("batch must contain at least one pair")
    origins = [p.origin_id for p in pairs]
    named = [o for o in origins if o]
    if len(set(named)) != len(named):
        duplicates = sorted({o for o in named if named.count(o) > 1})
        raise DataError(f"duplicate origin ids in batch: {', '.join(duplicates)}")
    feats_a = np.vstack([pooled_features(p.view_a) for p in pairs])
    feats_b = np.vstack([pooled_features(p.view_b) for p in pairs])
    return feats_a, feats_b


def loss_from_similarities(S: np.ndarray) -> float:
    """Mean over rows of logsumexp_j S[i, j] - S[i, i]."""
    loss, _ = _cross_entropy(np.asarray(S, dtype=np.float64))
    return loss


def _cross_entropy(S: np.ndarray) -> Tuple[float, np.ndarray]:
    B = S.shape[0]
    row_max = S.max(axis=1, keepdims=True)
    log_norm = row_max + np.log(np.sum(np.exp(S - row_max), axis=1, keepdims=True))
    loss = float(np.mean(log_norm[:, 0] - np.diag(S)))
    probs = np.exp(S - log_norm)
    return loss, (probs - np.eye(B)) / B


def similarity_matrix_from_features(params: EncoderParams, feats_a: np.ndarray,
                                    feats_b: np.ndarray) -> np.ndarray:
    va, _ = project_embeddings(params, encode_features(params, feats_a)[0])
    vb, _ = project_embeddings(params, encode_features(params, feats_b)[0])
    return va @ params.bilinear @ vb.T


def similarity_matrix(params: EncoderParams, pairs: Sequence[SegmentPair]) -> np.ndarray:
    """S[i, j] = s(view_a of pair i, view_b of pair j)."""
    return similarity_matrix_from_features(params, *pair_features(pairs))


def loss_from_features(params: EncoderParams, feats_a: np.ndarray, feats_b: np.ndarray) -> float:
    return loss_from_similarities(similarity_matrix_from_features(params, feats_a, feats_b))


def contrastive_batch_loss(params: EncoderParams, pairs: Sequence[SegmentPair]) -> float:
    return loss_from_features(params, *pair_features(pairs))


def _backward_view(params: EncoderParams, dv: np.ndarray, enc_cache: Dict[str, np.ndarray],
                   proj_cache: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]):
    v, u, std = proj_cache['v'], proj_cache['u'], proj_cache['std']
    dy = dv * (1.0 - v ** 2)
    grads['gain'] += np.sum(dy * u, axis=0)
    grads['offset'] += np.sum(dy, axis=0)

    du = dy * params.gain
    du_mean = du.mean(axis=1, keepdims=True)
    dz_normalized = (du - du_mean - u * np.mean(du * u, axis=1, keepdims=True)) / std
    dz_floored = (du - du_mean) / STD_FLOOR
    dz = np.where(proj_cache['floored'], dz_floored, dz_normalized)

    h = enc_cache['h']
    grads['wp'] += dz.T @ h
    grads['bp'] += dz.sum(axis=0)
    dh = dz @ params.wp

    dpre2 = dh * (enc_cache['pre2'] > 0)
    grads['w2'] += dpre2.T @ enc_cache['a1']
    grads['b2'] += dpre2.sum(axis=0)
    da1 = dpre2 @ params.w2

    dpre1 = da1 * (enc_cache['pre1'] > 0)
    grads['w1'] += dpre1.T @ enc_cache['xn']
    grads['b1'] += dpre1.sum(axis=0)


def loss_and_gradients(params: EncoderParams, feats_a: np.ndarray,
                       feats_b: np.ndarray) -> Tuple[float, Dict[str, np.ndarray]]:
    """Loss and analytic gradients for every trainable array."""
    ha, enc_a = encode_features(params, feats_a)
    hb, enc_b = encode_features(params, feats_b)
    va, proj_a = project_embeddings(params, ha)
    vb, proj_b = project_embeddings(params, hb)

    W = params.bilinear
    S = va @ W @ vb.T
    loss, dS = _cross_entropy(S)

    grads = {name: np.zeros_like(getattr(params, name)) for name in TRAINABLE}
    grads['bilinear'] = va.T @ dS @ vb
    _backward_view(params, dS @ vb @ W.T, enc_a, proj_a, grads)
    _backward_view(params, dS.T @ va @ W, enc_b, proj_b, grads)
    return loss, grads


def numerical_gradients(params: EncoderParams, feats_a: np.ndarray, feats_b: np.ndarray,
                        step: float = FD_STEP) -> Dict[str, np.ndarray]:
    """Central finite differences of the loss for every trainable entry."""
    grads = {}
    for name in TRAINABLE:
        base = getattr(params, name)
        grad = np.zeros_like(base)
        for idx in np.ndindex(base.shape):
            original = base[idx]
            base[idx] = original + step
            plus = loss_from_features(params, feats_a, feats_b)
            base[idx] = original - step
            minus = loss_from_features(params, feats_a, feats_b)
            base[idx] = original
            grad[idx] = (plus - minus) / (2.0 * step)
        grads[name] = grad
    return grads


def relative_errors(analytic: np.ndarray, numeric: np.ndarray, atol: float = GRAD_ATOL) -> np.ndarray:
    diff = np.abs(analytic - numeric)
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    return np.where(diff <= atol, 0.0, diff / np.where(scale > 0, scale, 1.0))


def grad_check(params: EncoderParams, pairs: Sequence[SegmentPair], step: float = FD_STEP) -> float:
    """Max relative error between analytic and finite-difference gradients.

    Entries whose absolute disagreement is within 1e-8 count as exact.
    """
    feats_a, feats_b = pair_features(pairs)
    return grad_check_features(params, feats_a, feats_b, step)


def grad_check_features(params: EncoderParams, feats_a: np.ndarray, feats_b: np.ndarray,
                        step: float = FD_STEP) -> float:
    trial = params.copy()
    _, analytic = loss_and_gradients(trial, feats_a, feats_b)
    numeric = numerical_gradients(trial, feats_a, feats_b, step)
    return max(float(np.max(relative_errors(analytic[name], numeric[name]))) for name in TRAINABLE)
