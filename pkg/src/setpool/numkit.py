"""Dense float64 matrix helpers, a reproducible counter-based RNG, and a
central-difference gradient checker.

Everything downstream works in double precision: the invariance and
gradient tolerances used by the verification suites are not reachable in
float32. All functions here are pure; ``Rng`` is the one stateful object
and is meant to be owned by a single thread of work.
"""

import numpy as np

__all__ = [
    "as_matrix",
    "matmul",
    "reduce",
    "grad_check",
    "Rng",
]


def as_matrix(values):
    """Coerce to a C-contiguous 2-D float64 array."""
    a = np.ascontiguousarray(values, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {a.shape}")
    return a


def matmul(a, b):
    """Matrix product with an explicit conformance check.

    Raises ValueError naming both shapes on a mismatch instead of numpy's
    generic error.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError(f"matmul needs 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} x {b.shape}")
    return a @ b


def reduce(a, axis="col", mode="sum"):
    """Per-axis reduction of a nonempty matrix.

    axis="col" reduces down each column (one value per column),
    axis="row" reduces across each row. mode is sum, mean or max;
    mean is computed as sum / count.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"reduce needs a nonempty 2-D matrix, got shape {a.shape}")
    if axis not in ("row", "col"):
        raise ValueError(f"axis must be 'row' or 'col', got {axis!r}")
    np_axis = 0 if axis == "col" else 1
    if mode == "sum":
        return np.sum(a, axis=np_axis)
    if mode == "mean":
        return np.sum(a, axis=np_axis) / a.shape[np_axis]
    if mode == "max":
        return np.max(a, axis=np_axis)
    raise ValueError(f"mode must be 'sum', 'mean' or 'max', got {mode!r}")


def grad_check(f, analytic_grad, point, step=1e-5):
    """Max relative error between ``analytic_grad`` and central differences.

    ``f`` is a scalar-valued function of a 1-D parameter vector. Each
    coordinate error is |cd - ag| / max(1, |cd|, |ag|) where cd is the
    central-difference estimate (f(x+h) - f(x-h)) / 2h. Central rather than
    forward differences: the O(step^2) truncation error is what makes the
    1e-4 layer gates attainable at step 1e-5.
    """
    point = np.asarray(point, dtype=np.float64).ravel()
    analytic_grad = np.asarray(analytic_grad, dtype=np.float64).ravel()
    if analytic_grad.shape != point.shape:
        raise ValueError(
            f"gradient shape {analytic_grad.shape} != point shape {point.shape}"
        )
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    worst = 0.0
    probe = point.copy()
    for i in range(point.size):
        saved = probe[i]
        probe[i] = saved + step
        f_plus = float(f(probe))
        probe[i] = saved - step
        f_minus = float(f(probe))
        probe[i] = saved
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise FloatingPointError(
                f"non-finite probe value at coordinate {i}: f+={f_plus}, f-={f_minus}"
            )
        cd = (f_plus - f_minus) / (2.0 * step)
        ag = analytic_grad[i]
        err = abs(cd - ag) / max(1.0, abs(cd), abs(ag))
        if err > worst:
            worst = err
    return worst


# Counter-based generator: draw i of a stream is a bijective 64-bit mix of
# (key, i), so arbitrary blocks can be produced with vectorised uint64
# arithmetic and the stream is identical on every platform. The mix is the
# standard splitmix64 finaliser.

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64
_INV_2_53 = 1.0 / float(1 << 53)


def _mix64(x):
    z = x
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


class Rng:
    """Deterministic random stream: uniforms, normals, permutations.

    Identical seeds give identical draw sequences. One instance per thread
    of work; never share an instance across concurrent consumers.
    """

    def __init__(self, seed):
        with np.errstate(over="ignore"):
            self._key = _mix64(_U64(int(seed) & 0xFFFFFFFFFFFFFFFF) + _GOLDEN)
        self._counter = 0

    @property
    def seed_key(self):
        return int(self._key)

    def split(self, *tags):
        """Derive an independent child stream from integer tags.

        Used to give every training run, epoch or noise source its own
        stream without coordinating counters.
        """
        key = self._key
        with np.errstate(over="ignore"):
            for t in tags:
                key = _mix64(key ^ _mix64(_U64(int(t) & 0xFFFFFFFFFFFFFFFF) * _GOLDEN + _U64(1)))
        child = object.__new__(Rng)
        child._key = key
        child._counter = 0
        return child

    def _raw(self, n):
        idx = np.arange(self._counter, self._counter + n, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            return _mix64(self._key + (idx + _U64(1)) * _GOLDEN)

    def uniform(self, size=None):
        """Uniform draws in [0, 1) with 53-bit resolution."""
        n = 1 if size is None else int(np.prod(size))
        u = (self._raw(n) >> _U64(11)).astype(np.float64) * _INV_2_53
        if size is None:
            return float(u[0])
        return u.reshape(size)

    def normal(self, size=None, mean=0.0, std=1.0):
        """Standard normal draws via the Box-Muller transform."""
        n = 1 if size is None else int(np.prod(size))
        half = (n + 1) // 2
        bits = self._raw(2 * half)
        # u1 in (0, 1] so log() is finite; u2 in [0, 1).
        u1 = ((bits[:half] >> _U64(11)).astype(np.float64) + 1.0) * _INV_2_53
        u2 = (bits[half:] >> _U64(11)).astype(np.float64) * _INV_2_53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]
        z = mean + std * z
        if size is None:
            return float(z[0])
        return z.reshape(size)

    def integers(self, bound, size=None):
        """Uniform integers in [0, bound). Bias is below bound / 2^53."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        n = 1 if size is None else int(np.prod(size))
        u = (self._raw(n) >> _U64(11)).astype(np.float64) * _INV_2_53
        out = np.minimum((u * bound).astype(np.int64), bound - 1)
        if size is None:
            return int(out[0])
        return out.reshape(size)

    def permutation(self, n):
        """Uniform random permutation of range(n)."""
        keys = self.uniform(n) if n else np.empty(0)
        return np.argsort(keys, kind="stable")

    def shuffle(self, arr):
        """Return a shuffled copy of a 1-D array or list."""
        a = np.asarray(arr)
        return a[self.permutation(len(a))]

    def sample_without_replacement(self, n, k):
        """k distinct indices drawn uniformly from range(n)."""
        if k > n:
            raise ValueError(f"cannot sample {k} from {n} without replacement")
        return self.permutation(n)[:k]
