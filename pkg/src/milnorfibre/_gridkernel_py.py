"""Pure-numpy sign classification, used when the compiled kernel is unavailable."""
import numpy as np


def classify(coeffs, ex, ey, xs, ys, threshold, rel_err):
    X = np.asarray(xs)[:, None]
    Y = np.asarray(ys)[None, :]
    value = np.full((len(xs), len(ys)), -threshold, dtype=np.float64)
    mag = np.full_like(value, abs(threshold))
    for c, i, j in zip(coeffs, ex, ey):
        term = c * X ** int(i) * Y ** int(j)
        value += term
        mag += np.abs(term)
    err = mag * rel_err
    out = np.full(value.shape, 2, dtype=np.int8)
    out[value > err] = 1
    out[value < -err] = -1
    return out
