"""Pure-numpy implementations of the segment kernels.

Same contracts as the compiled module in ``_fast.pyx``; this is the
backend used when the extension is unavailable (or forced via
SETPOOL_KERNELS=fallback). Segments are contiguous row blocks described
by an offsets array of length B+1; every segment is nonempty.
"""

import numpy as np

NAME = "fallback"


def seg_sum(rows, offsets):
    return np.add.reduceat(rows, offsets[:-1], axis=0)


def seg_mean(rows, offsets):
    sizes = np.diff(offsets).astype(np.float64)
    return np.add.reduceat(rows, offsets[:-1], axis=0) / sizes[:, None]


def seg_max(rows, offsets):
    """Per-segment column maxima and the global row index attaining each.

    Ties resolve to the lowest row index (argmax of the slice is
    first-occurrence, matching the compiled kernel's strict-greater scan).
    """
    n_seg = len(offsets) - 1
    vals = np.empty((n_seg, rows.shape[1]), dtype=np.float64)
    arg = np.empty((n_seg, rows.shape[1]), dtype=np.int64)
    for s in range(n_seg):
        lo, hi = offsets[s], offsets[s + 1]
        block = rows[lo:hi]
        local = block.argmax(axis=0)
        arg[s] = local + lo
        vals[s] = block[local, np.arange(rows.shape[1])]
    return vals, arg


def seg_broadcast(per_seg, seg_ids):
    return per_seg[seg_ids]


def seg_max_backward(dout, arg, n_rows):
    dx = np.zeros((n_rows, dout.shape[1]), dtype=np.float64)
    cols = np.broadcast_to(np.arange(dout.shape[1]), arg.shape)
    np.add.at(dx, (arg.ravel(), cols.ravel()), dout.ravel())
    return dx


def scatter_add_rows(src, idx, n_rows):
    out = np.zeros((n_rows, src.shape[1]), dtype=np.float64)
    np.add.at(out, idx, src)
    return out
