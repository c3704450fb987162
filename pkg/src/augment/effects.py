"""Waveform effects: time drop, pitch shift, reverb, band reject, clip.

Every effect keeps sample count and sample rate. Effects that can ring or
overshoot (pitch shift, band reject) are limited to the input peak, so an
input inside [-1, 1] never leaves it.
"""

from typing import Optional

import numpy as np
from scipy import signal

from ..corpus.audio import Waveform

MAX_SHIFT_CENTS = 1200.0
SINC_ZERO_CROSSINGS = 8
KAISER_BETA = 8.6
STRETCH_FRAME = 512
STRETCH_HOP = 256
STRETCH_TOLERANCE = 128
BAND_CENTER_RANGE_HZ = (100.0, 7600.0)
RT60_DECAY = np.log(1000.0)


def _limit_peak(samples: np.ndarray, reference_peak: float) -> np.ndarray:
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak > reference_peak and peak > 0.0:
        samples = samples * (reference_peak / peak)
    return samples


def apply_time_drop(w: Waveform, drop_length_ms: float, rng: np.random.Generator) -> Waveform:
    """Zero one contiguous interval of round(drop_length_ms * rate / 1000) samples."""
    if drop_length_ms < 0:
        raise ValueError(f"drop_length_ms must be non-negative, got {drop_length_ms}")
    if len(w) == 0:
        raise ValueError("cannot drop time from an empty waveform")

    n_drop = int(round(drop_length_ms / 1000.0 * w.sample_rate))
    if n_drop == 0:
        return w
    n_drop = min(n_drop, len(w))

    start = int(rng.integers(0, len(w) - n_drop + 1))
    out = w.samples.copy()
    out[start:start + n_drop] = 0.0
    return w.with_samples(out)


def _resample_linear(x: np.ndarray, ratio: float) -> np.ndarray:
    m = int(round(len(x) / ratio))
    t = np.arange(m) * ratio
    return np.interp(t, np.arange(len(x)), x, right=0.0)


def _kaiser(d: np.ndarray, half_width: float) -> np.ndarray:
    arg = np.clip(1.0 - (d / half_width) ** 2, 0.0, None)
    return np.i0(KAISER_BETA * np.sqrt(arg)) / np.i0(KAISER_BETA)


def _resample_sinc(x: np.ndarray, ratio: float) -> np.ndarray:
    """Read x at positions n * ratio with a Kaiser-windowed sinc interpolator.

    The kernel keeps SINC_ZERO_CROSSINGS lobes on each side and lowers its
    cutoff to 1/ratio when reading faster than the source rate.
    """
    m = int(round(len(x) / ratio))
    t = np.arange(m) * ratio
    cutoff = min(1.0, 1.0 / ratio)
    half = int(np.ceil(SINC_ZERO_CROSSINGS / cutoff))

    base = np.floor(t).astype(np.int64)
    offsets = np.arange(-half + 1, half + 1)
    idx = base[:, None] + offsets[None, :]
    d = t[:, None] - idx
    kernel = cutoff * np.sinc(cutoff * d) * _kaiser(d, half)

    valid = (idx >= 0) & (idx < len(x))
    taps = np.where(valid, x[np.clip(idx, 0, len(x) - 1)], 0.0)
    return np.sum(taps * kernel, axis=1)


def _time_stretch(x: np.ndarray, out_len: int) -> np.ndarray:
    """Waveform-similarity overlap-add stretch of x to exactly out_len samples.

    Output samples are window-weighted averages of input samples, so the
    output peak never exceeds the input peak.
    """
    if out_len == 0 or len(x) == 0:
        return np.zeros(out_len)

    frame, hop, tol = STRETCH_FRAME, STRETCH_HOP, STRETCH_TOLERANCE
    alpha = len(x) / out_len
    window = signal.get_window('hann', frame)
    n_frames = int(np.ceil(out_len / hop)) + 1

    right_pad = 2 * frame + 4 * tol + int(np.ceil(2 * hop * alpha)) + hop
    xp = np.concatenate([np.zeros(tol), x, np.zeros(right_pad)])

    y = np.zeros(n_frames * hop + frame)
    wsum = np.zeros_like(y)
    prev = 0
    for k in range(n_frames):
        nominal = int(round(k * hop * alpha))
        if k == 0:
            pos = 0
        else:
            template = xp[prev + tol + hop: prev + tol + hop + frame]
            region = xp[nominal: nominal + 2 * tol + frame]
            if np.any(template) and np.any(region):
                corr = np.correlate(region, template, mode='valid')
                pos = nominal - tol + int(np.argmax(corr))
            else:
                pos = nominal
        segment = xp[pos + tol: pos + tol + frame]
        y[k * hop: k * hop + frame] += segment * window
        wsum[k * hop: k * hop + frame] += window
        prev = pos

    y = y[:out_len]
    wsum = wsum[:out_len]
    return np.where(wsum > 1e-8, y / np.where(wsum > 1e-8, wsum, 1.0), 0.0)


def apply_pitch_shift(w: Waveform, shift_cents: float, quick: bool = False) -> Waveform:
    """Shift pitch by 2**(shift_cents/1200) keeping the duration.

    The signal is resampled by the pitch factor (linear interpolation when
    ``quick``, windowed sinc otherwise) and then stretched back to its
    original length.
    """
    if abs(shift_cents) > MAX_SHIFT_CENTS:
        raise ValueError(f"|shift_cents| must be <= {MAX_SHIFT_CENTS}, got {shift_cents}")
    if shift_cents == 0 or len(w) == 0:
        return w

    ratio = 2.0 ** (shift_cents / 1200.0)
    resampled = _resample_linear(w.samples, ratio) if quick else _resample_sinc(w.samples, ratio)
    shifted = _time_stretch(resampled, len(w))
    return w.with_samples(_limit_peak(shifted, w.peak()))


def synthetic_rir(room_scale: float, sample_rate: int, seed: int = 0) -> np.ndarray:
    """Exponentially decaying white noise with RT60 = room_scale / 100 seconds.

    The first tap is the direct path (1.0); RT60 = 0 gives a unit delta.
    """
    rt60 = room_scale / 100.0
    n_taps = max(1, int(round(rt60 * sample_rate)))
    if n_taps == 1:
        return np.ones(1)
    t = np.arange(n_taps) / sample_rate
    rir = np.random.default_rng(seed).standard_normal(n_taps) * np.exp(-RT60_DECAY * t / rt60)
    rir[0] = 1.0
    return rir


def apply_reverb(w: Waveform, room_scale: float, seed: int = 0) -> Waveform:
    """Convolve with a synthetic room response, truncate, and restore the input peak."""
    if not 0.0 <= room_scale <= 100.0:
        raise ValueError(f"room_scale must be in [0, 100], got {room_scale}")

    rir = synthetic_rir(room_scale, w.sample_rate, seed)
    peak_in = w.peak()
    if rir.size == 1 or peak_in == 0.0:
        return w

    wet = signal.fftconvolve(w.samples, rir)[:len(w)]
    peak_out = float(np.max(np.abs(wet)))
    if peak_out > 0.0:
        wet = wet * (peak_in / peak_out)
    return w.with_samples(wet)


def apply_clip(w: Waveform, clip_factor: float) -> Waveform:
    """Clamp every sample to +-clip_factor times the input peak, without rescaling."""
    if not 0.0 < clip_factor <= 1.0:
        raise ValueError(f"clip_factor must be in (0, 1], got {clip_factor}")
    peak = w.peak()
    if peak == 0.0 or clip_factor == 1.0:
        return w
    bound = clip_factor * peak
    return w.with_samples(np.clip(w.samples, -bound, bound))


def apply_band_reject(w: Waveform, band_scaler: float, rng: Optional[np.random.Generator] = None,
                      center_hz: Optional[float] = None) -> Waveform:
    """Notch out band_scaler * f0 Hz around f0 with two cascaded notch biquads.

    f0 is drawn uniformly from BAND_CENTER_RANGE_HZ unless ``center_hz`` is
    given.
    """
    if not 0.0 <= band_scaler <= 1.0:
        raise ValueError(f"band_scaler must be in [0, 1], got {band_scaler}")
    if band_scaler == 0.0 or len(w) == 0:
        return w

    if center_hz is None:
        if rng is None:
            raise ValueError("either rng or center_hz is required")
        center_hz = float(rng.uniform(*BAND_CENTER_RANGE_HZ))
    center_hz = min(center_hz, 0.475 * w.sample_rate)

    b, a = signal.iirnotch(center_hz, 1.0 / band_scaler, fs=w.sample_rate)
    filtered = signal.lfilter(b, a, signal.lfilter(b, a, w.samples))
    return w.with_samples(_limit_peak(filtered, w.peak()))
