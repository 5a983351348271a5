"""Cross-edge law of a uniform perfect matching and the derived g-tables.

For m points with a marked k-subset, X(k, m) counts matched pairs joining the
subset to its complement. The scalar weight g_beta(k, m) = E[exp(-2*beta*X)]
is what averaging over the pairing model attaches to a spin split, and the
per-size table values[j] = log g_beta(dj, dn) feeds every finite-size
quantity. Laws are exact; only `sample_cross_count` is stochastic.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .kernels import gtable_values

__all__ = [
    "LogG",
    "brute_force_law",
    "cross_count_law",
    "sample_cross_count",
    "sample_cross_counts",
    "log_g_table",
    "cache_path",
]

_LN2 = math.log(2.0)
CACHE_ENV = "ANNEALED_ISING_CACHE"
_FORMAT = "gtable v1"


@dataclass(frozen=True)
class LogG:
    """Log matching-transform table: values[j] = log g_beta(dj, dn), j = 0..n."""

    d: int
    n: int
    beta: float
    values: np.ndarray


# ---------------------------------------------------------------------------
# exact laws


def brute_force_law(k: int, m: int) -> dict[int, float]:
    """Exact law of X(k, m) by enumerating all (m-1)!! perfect matchings.

    Deliberately naive; this is the oracle everything else is checked against.
    """
    _check_km(k, m)
    if m > 14:
        raise ValueError(f"m={m} too large to enumerate ((m-1)!! growth, cap m=14)")
    if m == 0:
        return {0: 1.0}
    counts: dict[int, int] = {}
    _enumerate(list(range(m)), k, 0, counts)
    total = sum(counts.values())
    return {x: c / total for x, c in sorted(counts.items())}


def _enumerate(points: list[int], k: int, crossings: int, counts: dict[int, int]) -> None:
    if not points:
        counts[crossings] = counts.get(crossings, 0) + 1
        return
    first = points[0]
    rest = points[1:]
    for i, second in enumerate(rest):
        cross = (first < k) != (second < k)
        _enumerate(rest[:i] + rest[i + 1 :], k, crossings + cross, counts)


def cross_count_law(k: int, m: int) -> dict[int, float]:
    """Closed-form law of X(k, m), evaluated in log space.

    P(X=x) = C(k,x) C(m-k,x) x! (k-x-1)!! (m-k-x-1)!! / (m-1)!!
    over the support x = k mod 2, ..., min(k, m-k) in steps of 2, with the
    convention (-1)!! = 1 covering the boundary terms.
    """
    _check_km(k, m)
    return {x: math.exp(_log_prob(k, m, x)) for x in range(k & 1, min(k, m - k) + 1, 2)}


def _log_prob(k: int, m: int, x: int) -> float:
    return (
        _lchoose(k, x)
        + _lchoose(m - k, x)
        + math.lgamma(x + 1.0)
        + _ldfact(k - x - 1)
        + _ldfact(m - k - x - 1)
        - _ldfact(m - 1)
    )


def _lchoose(a: int, b: int) -> float:
    return math.lgamma(a + 1.0) - math.lgamma(b + 1.0) - math.lgamma(a - b + 1.0)


def _ldfact(o: int) -> float:
    """log o!! for odd o >= -1, via log(2q-1)!! = lgamma(2q+1) - q log2 - lgamma(q+1)."""
    q = (o + 1) // 2
    return math.lgamma(2 * q + 1.0) - q * _LN2 - math.lgamma(q + 1.0)


def _check_km(k: int, m: int) -> None:
    if m % 2:
        raise ValueError(f"m={m}: perfect matching needs an even point count")
    if not 0 <= k <= m:
        raise ValueError(f"k={k} outside 0..{m}")


# ---------------------------------------------------------------------------
# sampling


def sample_cross_count(k: int, m: int, rng=None) -> int:
    """One draw of X(k, m) from a sequential uniform pairing.

    Only the unmatched counts on each side matter: repeatedly take an
    unmatched point and match it to a uniform choice among the others, which
    is distributionally the uniform perfect matching.
    """
    return int(sample_cross_counts(k, m, 1, rng)[0])


def sample_cross_counts(k: int, m: int, size: int, rng=None) -> np.ndarray:
    """Vectorized draws of X(k, m); `rng` is a seed or numpy Generator."""
    _check_km(k, m)
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    a = np.full(size, k, dtype=np.int64)  # unmatched marked points
    b = np.full(size, m - k, dtype=np.int64)
    x = np.zeros(size, dtype=np.int64)
    for _ in range(m // 2):
        pick_marked = a > 0
        # partner of the chosen point is uniform among the a+b-1 others
        u = gen.random(size)
        cross = pick_marked & (u * (a + b - 1) < b)
        within_marked = pick_marked & ~cross
        ci = cross.astype(np.int64)
        a -= ci + 2 * within_marked.astype(np.int64)
        b -= ci + 2 * (~pick_marked).astype(np.int64)
        x += ci
    return x


# ---------------------------------------------------------------------------
# tables and their disk cache


def log_g_table(
    d: int,
    n: int,
    beta: float,
    cache_dir: str | os.PathLike | None = None,
    backend: str | None = None,
) -> LogG:
    """Table of log g_beta(dj, dn) for j = 0..n, optionally cached on disk.

    The cache directory comes from `cache_dir` or the ANNEALED_ISING_CACHE
    environment variable; with neither set, nothing touches the filesystem.
    Callers sharing a cache directory across processes must serialize access.
    """
    if d < 1 or n < 1:
        raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    if (d * n) % 2:
        raise ValueError(f"d*n = {d * n} odd: a perfect matching needs an even half-edge count")
    if beta < 0:
        raise ValueError(f"beta={beta} negative")
    beta = float(beta)
    path = cache_path(cache_dir, d, n, beta)
    if path is not None and path.exists():
        values = _read_cache(path, d, n)
        if values is not None:
            return LogG(d, n, beta, values)
    values = gtable_values(d, n, beta, backend=backend)
    if path is not None:
        _write_cache(path, d, n, beta, values)
    return LogG(d, n, beta, values)


def cache_path(cache_dir, d: int, n: int, beta: float) -> Path | None:
    """File the (d, n, beta) table lives at, keyed by beta to 12 significant digits."""
    root = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    if root is None:
        return None
    return Path(root).expanduser() / f"gtable_d{d}_n{n}_b{float(beta):.11e}.txt"


def _read_cache(path: Path, d: int, n: int) -> np.ndarray | None:
    """Parse a cache file; any mismatch or corruption means 'recompute'."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().split()
            if header[:2] != _FORMAT.split() or header[2] != f"d={d}" or header[3] != f"n={n}":
                return None
            values = np.empty(n + 1)
            for j in range(n + 1):
                idx, val = fh.readline().split()
                if int(idx) != j:
                    return None
                values[j] = float(val)
        return values
    except (OSError, ValueError, IndexError):
        return None


def _write_cache(path: Path, d: int, n: int, beta: float, values: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(f"{_FORMAT} d={d} n={n} beta={beta:.17g}\n")
            for j, v in enumerate(values):
                fh.write(f"{j} {v:.17g}\n")
        os.replace(tmp, path)  # atomic on POSIX
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
