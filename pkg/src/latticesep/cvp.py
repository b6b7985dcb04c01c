"""Closest-point search and bounded enumeration on lattice generators.

A lattice is ``{G @ z : z integer}`` with the columns of ``G`` as basis
vectors.  Everything here works on the QR-triangularized system: with
``G = Q R`` (R upper triangular, positive diagonal) and ``yt = Q.T @ y``,
``||G z - y|| == ||R z - yt||``, and the triangular structure admits a
depth-first search over integer coordinates, last coordinate first, where
each level contributes ``(R[i, i] * (z[i] - c[i]))**2`` to the squared
distance and candidate values are visited nearest-center first.
"""

from __future__ import annotations

import enum
import itertools
import math

import numpy as np

from .exceptions import BudgetError

# Two squared distances closer than this are a tie; ties resolve to the
# lexicographically smallest coefficient vector so results are reproducible.
TIE_TOL = 1e-12

# Unconstrained searches on nearly singular generators are numerically
# meaningless and potentially unbounded; refuse them.
_MAX_CONDITION = 1e8

_ENUM_MAX_NODES = 1 << 26


class Decoder(enum.Enum):
    """Search strategy for the closest constellation point."""

    BRUTE_FORCE = "brute_force"
    SPHERE_DECODER = "sphere_decoder"


def triangularize(generator: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR-factor ``generator`` into ``q, r`` with positive diagonal in r.

    Raises ``ValueError`` if the matrix is not square, not finite, or
    rank-deficient.
    """
    g = np.asarray(generator, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"generator must be square, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("generator has non-finite entries")
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    scale = np.max(np.abs(g))
    if scale == 0.0 or np.min(np.abs(diag)) < 1e-12 * scale:
        raise ValueError("generator is singular or numerically rank-deficient")
    signs = np.sign(diag)
    return q * signs, r * signs[:, None]


def _babai_rounding(r_rows, yt, lo, hi):
    # Greedy nearest-plane rounding, optionally clipped to [lo, hi]; returns
    # the rounded coefficients and their exact squared distance.
    k = len(yt)
    z = [0] * k
    dist = 0.0
    for i in range(k - 1, -1, -1):
        row = r_rows[i]
        t = yt[i]
        for j in range(i + 1, k):
            t -= row[j] * z[j]
        c = t / row[i]
        zi = int(round(c))
        if lo is not None:
            zi = min(max(zi, lo), hi)
        z[i] = zi
        dist += (row[i] * (zi - c)) ** 2
    return z, dist


def _level_candidates(c, rii, budget, lo, hi):
    # Integer values v with (rii * (v - c))**2 <= budget, intersected with
    # [lo, hi], ordered nearest-center first (ties toward the smaller value).
    if budget < 0.0:
        return []
    halfwidth = math.sqrt(budget) / rii
    first = math.ceil(c - halfwidth)
    last = math.floor(c + halfwidth)
    if lo is not None:
        first = max(first, lo)
        last = min(last, hi)
    if first > last:
        return []
    return sorted(range(first, last + 1), key=lambda v: (abs(v - c), v))


def _sphere_search(r_rows, yt, lo, hi):
    # Depth-first search with radius initialized from the Babai rounding
    # candidate and shrunk on every improvement.  Returns the tie-resolved
    # best coefficient vector and its squared distance.
    k = len(yt)
    best_z, best_dist = _babai_rounding(r_rows, yt, lo, hi)
    best_z = list(best_z)

    z = [0] * k
    acc = [0.0] * k  # acc[i]: cost contributed by levels above i
    centers = [0.0] * k
    cands: list[list[int]] = [[] for _ in range(k)]
    pos = [0] * k

    def enter(i):
        row = r_rows[i]
        t = yt[i]
        for j in range(i + 1, k):
            t -= row[j] * z[j]
        c = t / row[i]
        centers[i] = c
        cands[i] = _level_candidates(c, row[i], best_dist + TIE_TOL - acc[i], lo, hi)
        pos[i] = 0

    i = k - 1
    enter(i)
    while True:
        if pos[i] >= len(cands[i]):
            i += 1
            if i == k:
                break
            continue
        v = cands[i][pos[i]]
        pos[i] += 1
        cost = (r_rows[i][i] * (v - centers[i])) ** 2
        if acc[i] + cost > best_dist + TIE_TOL:
            # Candidates are nearest-first, so the rest of this level is worse.
            i += 1
            if i == k:
                break
            continue
        if i == 0:
            total = acc[0] + cost
            z[0] = v
            if total < best_dist - TIE_TOL:
                best_dist = total
                best_z = z.copy()
            else:
                # Within the tie window of the current best.
                if total < best_dist:
                    best_dist = total
                if z < best_z:
                    best_z = z.copy()
            continue
        z[i] = v
        acc[i - 1] = acc[i] + cost
        i -= 1
        enter(i)
    return best_z, best_dist


def closest_point(
    generator: np.ndarray,
    y: np.ndarray,
    box: int | None = None,
    method: Decoder = Decoder.SPHERE_DECODER,
) -> np.ndarray:
    """Coefficients of the lattice point closest to ``y``.

    Solves ``argmin_z ||generator @ z - y||`` over all integer vectors, or
    over ``{0, ..., box-1}**k`` when ``box`` is given (the finite
    constellation case).  Distance ties within ``1e-12`` resolve to the
    lexicographically smallest coefficient vector.

    Parameters
    ----------
    generator : ndarray, shape (k, k)
        Full-rank generator with basis vectors as columns.
    y : ndarray, shape (k,)
        Target point.
    box : int or None
        Side of the coefficient box; ``None`` searches the infinite lattice,
        which is rejected for condition numbers above 1e8.
    method : Decoder
        ``SPHERE_DECODER`` (default) or the ``BRUTE_FORCE`` reference, which
        requires ``box`` and materializes all ``box**k`` points.

    Returns
    -------
    ndarray of int64, shape (k,)
    """
    g = np.asarray(generator, dtype=float)
    yv = np.asarray(y, dtype=float).reshape(-1)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] != yv.shape[0]:
        raise ValueError(f"generator {g.shape} and target {yv.shape} are inconsistent")
    if not np.all(np.isfinite(yv)):
        raise ValueError("target has non-finite entries")
    if box is not None:
        box = int(box)
        if box < 1:
            raise ValueError(f"box must be a positive integer, got {box}")
    if method is Decoder.BRUTE_FORCE:
        if box is None:
            raise ValueError("brute-force search requires a box")
        return _closest_point_brute(g, yv, box)
    if box is None and np.linalg.cond(g) > _MAX_CONDITION:
        raise ValueError("unbounded search rejected: generator condition number exceeds 1e8")
    q, r = triangularize(g)
    yt = [float(t) for t in q.T @ yv]
    r_rows = [[float(r[i, j]) for j in range(r.shape[0])] for i in range(r.shape[0])]
    lo, hi = (0, box - 1) if box is not None else (None, None)
    best_z, _ = _sphere_search(r_rows, yt, lo, hi)
    return np.array(best_z, dtype=np.int64)


def _closest_point_brute(g, y, box):
    k = g.shape[0]
    total = box**k
    if total > 1 << 24:
        raise BudgetError(f"brute-force search over {total} points exceeds the 2**24 budget")
    coeffs = np.array(list(itertools.product(range(box), repeat=k)), dtype=np.int64)
    points = coeffs @ g.T
    dist = np.sum((points - y) ** 2, axis=1)
    best = dist.min()
    # First index within the tie window; coeffs are in lexicographic order.
    idx = int(np.argmax(dist <= best + TIE_TOL))
    return coeffs[idx]


def enumerate_within_radius(
    generator: np.ndarray,
    radius: float,
    center: np.ndarray | None = None,
    max_nodes: int = _ENUM_MAX_NODES,
) -> list[tuple[tuple[int, ...], float]]:
    """All integer vectors z with ``||generator @ z - center|| <= radius``.

    The search is complete: the per-level window ``|R[i,i] * (z[i] - c[i])|
    <= remaining budget`` provably contains every solution, so no vector
    inside the radius is missed.  Returns ``(z, squared_distance)`` pairs in
    depth-first order.  Raises :class:`BudgetError` if the tree exceeds
    ``max_nodes`` visited candidates.
    """
    g = np.asarray(generator, dtype=float)
    q, r = triangularize(g)
    k = g.shape[0]
    if radius < 0.0 or not math.isfinite(radius):
        raise ValueError(f"radius must be finite and non-negative, got {radius!r}")
    if center is None:
        yt = [0.0] * k
    else:
        cv = np.asarray(center, dtype=float).reshape(-1)
        if cv.shape[0] != k:
            raise ValueError(f"center shape {cv.shape} does not match dimension {k}")
        yt = [float(t) for t in q.T @ cv]
    r_rows = [[float(r[i, j]) for j in range(k)] for i in range(k)]
    budget_total = radius * radius + TIE_TOL

    out: list[tuple[tuple[int, ...], float]] = []
    z = [0] * k
    acc = [0.0] * k
    centers = [0.0] * k
    cands: list[list[int]] = [[] for _ in range(k)]
    pos = [0] * k
    nodes = 0

    def enter(i):
        row = r_rows[i]
        t = yt[i]
        for j in range(i + 1, k):
            t -= row[j] * z[j]
        c = t / row[i]
        centers[i] = c
        cands[i] = _level_candidates(c, row[i], budget_total - acc[i], None, None)
        pos[i] = 0

    i = k - 1
    enter(i)
    while True:
        if pos[i] >= len(cands[i]):
            i += 1
            if i == k:
                break
            continue
        nodes += 1
        if nodes > max_nodes:
            raise BudgetError(f"radius enumeration exceeded {max_nodes} nodes")
        v = cands[i][pos[i]]
        pos[i] += 1
        cost = (r_rows[i][i] * (v - centers[i])) ** 2
        if acc[i] + cost > budget_total:
            i += 1
            if i == k:
                break
            continue
        if i == 0:
            z[0] = v
            out.append((tuple(z), acc[0] + cost))
            continue
        z[i] = v
        acc[i - 1] = acc[i] + cost
        i -= 1
        enter(i)
    return out


def shortest_vector_norm(generator: np.ndarray) -> float:
    """Length of the shortest nonzero lattice vector.

    Complete enumeration inside radius ``min_i ||column_i||``, which always
    contains a nonzero vector (the shortest basis column itself).
    """
    g = np.asarray(generator, dtype=float)
    basis_min = float(np.min(np.linalg.norm(g, axis=0)))
    found = enumerate_within_radius(g, basis_min * (1.0 + 1e-12))
    best = math.inf
    for z, dist_sq in found:
        if any(z) and dist_sq < best:
            best = dist_sq
    return math.sqrt(min(best, basis_min * basis_min))


class BatchDecoder:
    """Repeated box-constrained closest-point queries on one generator.

    Precomputes whatever the chosen strategy can reuse across calls: the
    full point table for ``BRUTE_FORCE``, the triangularization for the
    ``SPHERE_DECODER`` -- or, when the generator is exactly diagonal (the
    cubic lattices), nothing at all, because rounding each coordinate is
    then an exact closest-point rule.

    The brute-force path scores points by ``||x||**2 - 2 y.x``, which
    orders them identically to the squared distance (the ``||y||**2``
    shift is constant per query), and picks the first point within
    ``TIE_TOL`` of the row minimum -- the lexicographically smallest
    coefficient vector, as in :func:`closest_point`.  The diagonal path
    breaks exact half-way ties toward the smaller coefficient for the
    same reason.
    """

    def __init__(self, generator: np.ndarray, box: int, method: Decoder = Decoder.SPHERE_DECODER):
        g = np.asarray(generator, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"generator must be square, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("generator has non-finite entries")
        box = int(box)
        if box < 1:
            raise ValueError(f"box must be a positive integer, got {box}")
        self._g = g
        self._k = g.shape[0]
        self._box = box
        self.method = method
        self._diag = None
        self._coeffs = None
        if method is Decoder.BRUTE_FORCE:
            total = box**self._k
            if total > 1 << 24:
                raise BudgetError(f"brute-force table of {total} points exceeds the 2**24 budget")
            coeffs = np.array(list(itertools.product(range(box), repeat=self._k)), dtype=np.int64)
            self._coeffs = coeffs
            self._points = coeffs @ g.T
            self._norms = np.sum(self._points**2, axis=1)
        elif method is Decoder.SPHERE_DECODER:
            diagonal = np.diagonal(g)
            if np.array_equal(g, np.diag(diagonal)) and np.all(diagonal != 0.0):
                self._diag = diagonal.copy()
            else:
                q, r = triangularize(g)
                self._qt = q.T.copy()
                self._r_rows = [[float(r[i, j]) for j in range(self._k)] for i in range(self._k)]
        else:
            raise ValueError(f"unknown decoder method: {method!r}")

    def decode(self, targets: np.ndarray) -> np.ndarray:
        """Closest coefficient vectors for a batch of targets.

        Parameters
        ----------
        targets : ndarray, shape (m, k)
            Received points, one per row.

        Returns
        -------
        ndarray of int64, shape (m, k)
            Coefficient vectors in ``{0, ..., box-1}**k``.
        """
        y = np.atleast_2d(np.asarray(targets, dtype=float))
        if y.ndim != 2 or y.shape[1] != self._k:
            raise ValueError(f"targets must have shape (m, {self._k}), got {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ValueError("targets have non-finite entries")
        if self._coeffs is not None:
            return self._coeffs[self.decode_indices(y)]
        if self._diag is not None:
            # Exact for diagonal generators: coordinates decouple, and
            # ceil(c - 1/2) rounds half-way cases down to the smaller value.
            c = y / self._diag
            u = np.ceil(c - 0.5).astype(np.int64)
            return np.clip(u, 0, self._box - 1)
        out = np.empty((y.shape[0], self._k), dtype=np.int64)
        for i in range(y.shape[0]):
            yt = [float(t) for t in self._qt @ y[i]]
            z, _ = _sphere_search(self._r_rows, yt, 0, self._box - 1)
            out[i] = z
        return out

    def decode_indices(self, targets: np.ndarray) -> np.ndarray:
        """Row indices into the brute-force point table (``BRUTE_FORCE`` only).

        The index of a coefficient vector ``u`` is its rank in row-major
        (lexicographic) order, ``sum(u[i] * box**(k-1-i))``.
        """
        if self._coeffs is None:
            raise ValueError("decode_indices requires the BRUTE_FORCE point table")
        y = np.atleast_2d(np.asarray(targets, dtype=float))
        if y.ndim != 2 or y.shape[1] != self._k:
            raise ValueError(f"targets must have shape (m, {self._k}), got {y.shape}")
        if not np.all(np.isfinite(y)):
            raise ValueError("targets have non-finite entries")
        total = self._points.shape[0]
        chunk = max(1, (1 << 22) // total)
        out = np.empty(y.shape[0], dtype=np.int64)
        for start in range(0, y.shape[0], chunk):
            block = y[start : start + chunk]
            scores = self._norms - 2.0 * (block @ self._points.T)
            best = scores.min(axis=1, keepdims=True)
            out[start : start + block.shape[0]] = np.argmax(scores <= best + TIE_TOL, axis=1)
        return out


def voronoi_test_vectors(generator: np.ndarray) -> np.ndarray:
    """Lattice vectors sufficient to decide Voronoi-cell membership exactly.

    For each of the ``2**k - 1`` nonzero cosets of twice the lattice, collects
    every shortest coset vector.  The union is a superset of the
    Voronoi-relevant vectors and a subset of the lattice, so
    ``x . v <= ||v||**2 / 2`` for all returned ``v`` holds if and only if the
    origin is a closest lattice point to ``x``.

    Returns the vectors as rows, shape ``(m, k)``.
    """
    g = np.asarray(generator, dtype=float)
    q, r = triangularize(g)
    k = g.shape[0]
    vectors = []
    for c in itertools.product((0, 1), repeat=k):
        if not any(c):
            continue
        half = g @ (np.array(c, dtype=float) / 2.0)
        target = -half
        z0 = closest_point(g, target, box=None)
        d0 = float(np.linalg.norm(g @ z0 - target))
        hits = enumerate_within_radius(g, d0 * (1.0 + 1e-12) + 1e-12, center=target)
        d_best = min(dist_sq for _, dist_sq in hits)
        for z, dist_sq in hits:
            if dist_sq <= d_best * (1.0 + 1e-9) + 1e-12:
                vectors.append(g @ (np.array(c, dtype=float) + 2.0 * np.array(z, dtype=float)))
    return np.array(vectors)
