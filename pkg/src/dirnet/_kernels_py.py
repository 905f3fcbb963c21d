"""Numpy implementation of the Monte Carlo kernels.

Point data for a block of trials is stored flat; trial ``j`` owns the slice
``offsets[j]:offsets[j + 1]``. Sums run sequentially in point order (via
``bincount``), matching the compiled kernels term for term.
"""
import numpy as np


def _trial_ids(offsets):
    counts = np.diff(offsets)
    return np.repeat(np.arange(len(counts)), counts)


def _received(dist, angle, orient, fade, eta, eps, d_tx, n_tx, d_rx, n_rx):
    g = 1.0 / (dist ** eta + eps)
    tx = 1.0 + d_tx * np.cos(n_tx * (angle + np.pi - orient))
    rx = 1.0 + d_rx * np.cos(n_rx * angle)
    return fade * g * tx * rx


def interference(offsets, dist, angle, orient, fade, eta, eps, d_tx, n_tx, d_rx, n_rx):
    """Per-trial sum of fading x path loss x transmit gain x receive gain."""
    offsets = np.asarray(offsets, dtype=np.int64)
    terms = _received(dist, angle, orient, fade, eta, eps, d_tx, n_tx, d_rx, n_rx)
    return np.bincount(_trial_ids(offsets), weights=terms, minlength=len(offsets) - 1)


def degree_counts(offsets, dist, angle, orient, fade, eta, eps, d_tx, n_tx, d_rx, n_rx,
                  power, noise, gamma, threshold):
    """Per-trial number of transmitters whose SINR at the origin reaches ``threshold``."""
    offsets = np.asarray(offsets, dtype=np.int64)
    ids = _trial_ids(offsets)
    terms = _received(dist, angle, orient, fade, eta, eps, d_tx, n_tx, d_rx, n_rx)
    totals = np.bincount(ids, weights=terms, minlength=len(offsets) - 1)
    signal = power * terms
    others = power * (totals[ids] - terms)
    sinr = signal / (noise + gamma * others)
    return np.bincount(ids, weights=(sinr >= threshold), minlength=len(offsets) - 1).astype(np.int64)
