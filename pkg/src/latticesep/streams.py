"""Deterministic, replayable random streams for the Monte Carlo engines.

Every stochastic routine in this package draws from a counter-based Philox
generator keyed by an explicit integer path, so a result is a pure function
of ``(seed, path)`` and never of thread count, platform, or call order.

Two conventions make runs reproducible down to the byte:

* **Stream identity.**  ``stream(seed, *path)`` keys a fresh Philox
  generator with ``numpy.random.SeedSequence([seed, *path])``.  Components
  of the path identify the consumer (a grid index, a shard index, a facet
  class); two draws with the same seed and path always yield the same
  values, and distinct paths yield statistically independent streams.

* **Fixed draw order.**  Normal variates are produced by an explicit
  Box-Muller transform (:func:`standard_normals`) rather than the
  generator's built-in ziggurat sampler, whose output stream is an
  implementation detail of numpy.  Uniform symbol draws use plain
  ``Generator.random`` scaled and floored (:func:`uniform_symbols`).

Work is split into shards of :data:`SHARD_SIZE` trials.  Each shard owns a
private stream, so shards can be evaluated in any order -- or in parallel
-- and accumulated in shard order to produce an identical result.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SHARD_SIZE",
    "derive_seed",
    "standard_normals",
    "stream",
    "uniform_symbols",
]

SHARD_SIZE = 1 << 16
"""Number of trials drawn from a single shard stream."""

_MAX_SEED = 1 << 64


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < _MAX_SEED:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the Philox generator identified by ``(seed, *path)``.

    Parameters
    ----------
    seed : int
        Root seed in ``[0, 2**64)``.
    *path : int
        Non-negative integers naming the consumer of the stream, e.g.
        ``stream(seed, grid_index, shard_index)``.

    Returns
    -------
    numpy.random.Generator
        A generator whose output depends only on ``seed`` and ``path``.
    """
    seed = _check_seed(seed)
    parts = [seed]
    for part in path:
        if not isinstance(part, (int, np.integer)) or int(part) < 0:
            raise ValueError(f"stream path components must be non-negative integers, got {part!r}")
        parts.append(int(part))
    sequence = np.random.SeedSequence(parts)
    return np.random.Generator(np.random.Philox(seed=sequence))


def derive_seed(seed: int, *path: int) -> int:
    """Derive a child seed from ``(seed, *path)``.

    Used to hand an independent root seed to a sub-computation (for
    example, one facet class of a larger estimate) while keeping the
    whole computation a function of the original seed.
    """
    seed = _check_seed(seed)
    parts = [seed] + [int(p) for p in path]
    return int(np.random.SeedSequence(parts).generate_state(1, np.uint64)[0])


def standard_normals(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw ``count`` standard normal variates by Box-Muller.

    The transform consumes exactly ``2 * ceil(count / 2)`` uniforms from
    ``rng``: first all radial uniforms ``u1``, then all angular uniforms
    ``u2``.  With ``r = sqrt(-2 log(1 - u1))`` the output block is
    ``concat(r cos(2 pi u2), r sin(2 pi u2))`` truncated to ``count``.
    ``log(1 - u1)`` is evaluated as ``log1p(-u1)``, which is finite for
    every value ``Generator.random`` can return.

    Parameters
    ----------
    rng : numpy.random.Generator
        Source of uniforms, normally obtained from :func:`stream`.
    count : int
        Number of variates to produce, ``count >= 0``.

    Returns
    -------
    numpy.ndarray
        Shape ``(count,)`` array of independent ``N(0, 1)`` samples.
    """
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    if count == 0:
        return np.empty(0)
    pairs = (count + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = (2.0 * np.pi) * u2
    block = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return block[:count]


def uniform_symbols(rng: np.random.Generator, count: int, levels: int) -> np.ndarray:
    """Draw ``count`` symbols uniformly from ``{0, ..., levels - 1}``.

    Each symbol is ``floor(levels * u)`` for one uniform ``u``, clipped to
    ``levels - 1`` to guard against the (unreachable in practice) case
    ``u == 1.0`` after rounding.

    Returns
    -------
    numpy.ndarray
        Shape ``(count,)`` array of dtype ``int64``.
    """
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    if levels < 1:
        raise ValueError(f"levels must be positive, got {levels}")
    u = rng.random(count)
    return np.minimum((u * levels).astype(np.int64), levels - 1)
