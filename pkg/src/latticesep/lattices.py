"""Lattice construction: the built-in catalog, user matrices, sublattices.

Generators are square matrices whose *columns* are the basis vectors, scaled
to unit fundamental volume (``|det| == 1``) so that the SNR convention
``rho = 1 / sigma**2`` is comparable across lattices.  ``W`` denotes the mean
basis-vector norm and ``d_min`` the minimum distance between lattice points.
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cvp import shortest_vector_norm, triangularize
from .exceptions import BudgetError, InternalCheckError

_MAX_ZN_DIM = 16
_ENUMERATE_MAX_DIM = 12
_UNIT_DET_TOL = 1e-9
_GRAM_TOL = 1e-10


class DminMethod(enum.Enum):
    """How ``minimum_distance`` obtains its value."""

    BASIS_MIN = "basis_min"
    ENUMERATE = "enumerate"


@dataclass(frozen=True, eq=False)
class Lattice:
    """A unit-volume lattice with cached geometric parameters.

    Attributes
    ----------
    name : str
        Catalog name or user-supplied label.
    dimension : int
        Ambient (and lattice) dimension N.
    generator : ndarray, shape (N, N)
        Basis vectors as columns; ``|det| == 1`` within 1e-9.
    basis_norms : ndarray, shape (N,)
        Euclidean norms of the basis vectors.
    mean_norm : float
        W, the mean of ``basis_norms``.
    d_min : float
        Minimum distance; equals ``basis_norms.min()`` unless enumeration
        found a shorter vector.
    """

    name: str
    dimension: int
    generator: np.ndarray
    basis_norms: np.ndarray
    mean_norm: float
    d_min: float

    def __post_init__(self):
        self.generator.setflags(write=False)
        self.basis_norms.setflags(write=False)


def _build_lattice(name: str, matrix: np.ndarray, d_min: float | None = None) -> Lattice:
    det = abs(float(np.linalg.det(matrix)))
    if abs(det - 1.0) > _UNIT_DET_TOL:
        raise InternalCheckError(
            f"lattice {name!r}: |det| = {det!r} deviates from 1 beyond 1e-9"
        )
    norms = np.linalg.norm(matrix, axis=0)
    basis_min = float(norms.min())
    if d_min is None:
        d_min = basis_min
    if d_min > basis_min * (1.0 + 1e-12):
        raise InternalCheckError(f"lattice {name!r}: d_min {d_min} exceeds shortest basis vector")
    return Lattice(
        name=name,
        dimension=matrix.shape[0],
        generator=matrix,
        basis_norms=norms,
        mean_norm=float(norms.mean()),
        d_min=float(d_min),
    )


def _a2_matrix() -> np.ndarray:
    # Hexagonal lattice scaled to unit cell area: both basis vectors have
    # norm sqrt(2/sqrt(3)) and meet at 60 degrees.
    s = math.sqrt(3.0)
    return np.array(
        [
            [math.sqrt(2.0 / s), math.sqrt(1.0 / (2.0 * s))],
            [0.0, math.sqrt(3.0 / (2.0 * s))],
        ]
    )


def _e4_matrix() -> np.ndarray:
    # Checkerboard-type packing in 4 dimensions at unit volume: the column
    # (1,1,1,1)/8^(1/4) plus doubled unit vectors; all basis norms 2/8^(1/4).
    scale = 8.0 ** -0.25
    m = np.array(
        [
            [1.0, 2.0, 0.0, 0.0],
            [1.0, 0.0, 2.0, 0.0],
            [1.0, 0.0, 0.0, 2.0],
            [1.0, 0.0, 0.0, 0.0],
        ]
    )
    return scale * m


def _e8_matrix() -> np.ndarray:
    # Unit-volume even packing in 8 dimensions: upper triangular, diagonal
    # (2, 1, 1, 1, 1, 1, 1, 1/2), superdiagonal -1, last column all 1/2.
    m = np.zeros((8, 8))
    m[0, 0] = 2.0
    for i in range(1, 7):
        m[i, i] = 1.0
    m[7, 7] = 0.5
    for i in range(6):
        m[i, i + 1] = -1.0
    m[:, 7] = 0.5
    return m


_ZN_RE = re.compile(r"^Z_?([0-9]+)$", re.IGNORECASE)


def catalog_names() -> tuple[str, ...]:
    """Representative names of the built-in lattices (Z_N accepts N = 1..16)."""
    return ("Z2", "A2", "E4", "E8")


def catalog_lattice(name: str) -> Lattice:
    """One of the built-in lattices: ``Z1``..``Z16``, ``A2``, ``E4``, ``E8``.

    All catalog generators have unit determinant without rescaling; a
    deviation beyond 1e-9 raises :class:`InternalCheckError`.
    """
    key = str(name).strip().upper()
    match = _ZN_RE.match(key)
    if match:
        n = int(match.group(1))
        if not 1 <= n <= _MAX_ZN_DIM:
            raise ValueError(f"Z_N is available for 1 <= N <= {_MAX_ZN_DIM}, got N={n}")
        return _build_lattice(f"Z{n}", np.eye(n))
    if key == "A2":
        return _build_lattice("A2", _a2_matrix())
    if key == "E4":
        return _build_lattice("E4", _e4_matrix())
    if key == "E8":
        return _build_lattice("E8", _e8_matrix(), d_min=math.sqrt(2.0))
    raise ValueError(f"unknown catalog lattice {name!r}; available: Z1..Z16, A2, E4, E8")


def load_lattice(matrix, name: str = "user", normalize: bool = True) -> Lattice:
    """Build a :class:`Lattice` from a square generator matrix.

    Parameters
    ----------
    matrix : array_like, shape (N, N)
        Basis vectors as columns.
    name : str
        Label carried through results and CSV output.
    normalize : bool
        Scale by ``|det|**(-1/N)`` to unit fundamental volume.  With
        ``normalize=False`` the matrix must already have ``|det| == 1``
        within 1e-9.  ``mean_norm`` and ``d_min`` always describe the stored
        (normalized) basis.
    """
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"generator must be square, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("generator must be at least 1x1")
    if not np.all(np.isfinite(m)):
        raise ValueError("generator has non-finite entries")
    det = abs(float(np.linalg.det(m)))
    if det < 1e-12:
        raise ValueError("generator is singular (|det| < 1e-12)")
    if normalize:
        m = m * det ** (-1.0 / m.shape[0])
    elif abs(det - 1.0) > _UNIT_DET_TOL:
        raise ValueError(
            f"|det| = {det!r} is not 1; pass normalize=True to rescale to unit volume"
        )
    try:
        return _build_lattice(name, m)
    except InternalCheckError as exc:
        raise ValueError(str(exc)) from None


def minimum_distance(lattice: Lattice, method: DminMethod = DminMethod.BASIS_MIN) -> float:
    """Minimum distance of the lattice.

    ``BASIS_MIN`` returns the shortest basis-vector norm, an upper bound that
    is exact for every catalog lattice.  ``ENUMERATE`` runs a complete
    shortest-vector search (all coefficient vectors inside the BASIS_MIN
    radius) and is limited to dimension 12.
    """
    if method is DminMethod.BASIS_MIN:
        return float(lattice.basis_norms.min())
    if method is DminMethod.ENUMERATE:
        if lattice.dimension > _ENUMERATE_MAX_DIM:
            raise BudgetError(
                f"shortest-vector enumeration supports N <= {_ENUMERATE_MAX_DIM}, "
                f"got N={lattice.dimension}"
            )
        return shortest_vector_norm(lattice.generator)
    raise ValueError(f"unknown minimum-distance method {method!r}")


@dataclass(frozen=True, eq=False)
class SublatticeSelector:
    """A ``k``-face sublattice: ``subset`` holds 1-based basis indices.

    ``subset`` must be strictly increasing with values in ``[1, N]``.
    """

    lattice: Lattice
    subset: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(int(i) for i in self.subset))
        n = self.lattice.dimension
        if len(self.subset) < 1:
            raise ValueError("subset must contain at least one basis index")
        if any(i < 1 or i > n for i in self.subset):
            raise ValueError(f"subset indices must lie in [1, {n}], got {self.subset}")
        if any(a >= b for a, b in zip(self.subset, self.subset[1:])):
            raise ValueError(f"subset must be strictly increasing, got {self.subset}")

    @property
    def k(self) -> int:
        return len(self.subset)


def sublattice_generator(sel: SublatticeSelector) -> np.ndarray:
    """Square generator of the sublattice spanned by the selected columns.

    The selected ``N x k`` columns are rotated into their own span by
    orthogonal-triangular factorization; the returned ``k x k`` upper
    triangular matrix (positive diagonal) has exactly the same Gram matrix,
    checked to 1e-10.
    """
    lat = sel.lattice
    cols = lat.generator[:, [i - 1 for i in sel.subset]]
    _, r = np.linalg.qr(cols, mode="reduced")
    signs = np.sign(np.diagonal(r))
    if np.any(signs == 0.0):
        raise InternalCheckError("sublattice columns are numerically rank-deficient")
    r = r * signs[:, None]
    gram_in = cols.T @ cols
    gram_out = r.T @ r
    if np.max(np.abs(gram_in - gram_out)) > _GRAM_TOL:
        raise InternalCheckError("sublattice triangularization failed the Gram check")
    return r


def write_lattice_file(lattice: Lattice, path) -> None:
    """Serialize a lattice to JSON: name, dimension, row-major generator.

    Floats are written with ``repr`` round-trip precision, so reading the
    file back reproduces the generator bit for bit.
    """
    payload = {
        "name": lattice.name,
        "dimension": lattice.dimension,
        "generator": [[float(v) for v in row] for row in lattice.generator],
        "normalize": False,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_lattice_file(path) -> Lattice:
    """Read a lattice JSON file written by :func:`write_lattice_file`.

    The ``normalize`` field applies :func:`load_lattice` semantics: files
    carrying ``normalize: true`` are rescaled to unit volume on load.
    """
    text = Path(path).read_text()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    for field in ("name", "dimension", "generator"):
        if field not in payload:
            raise ValueError(f"{path}: missing required field {field!r}")
    matrix = np.array(payload["generator"], dtype=float)
    if matrix.ndim != 2 or matrix.shape != (payload["dimension"], payload["dimension"]):
        raise ValueError(
            f"{path}: generator shape {matrix.shape} does not match dimension "
            f"{payload['dimension']}"
        )
    return load_lattice(
        matrix, name=str(payload["name"]), normalize=bool(payload.get("normalize", False))
    )


def is_integer_orthonormal(lattice: Lattice) -> bool:
    """True when the generator is exactly the identity (the Z^N case)."""
    return bool(np.array_equal(lattice.generator, np.eye(lattice.dimension)))


__all__ = [
    "DminMethod",
    "Lattice",
    "SublatticeSelector",
    "catalog_lattice",
    "catalog_names",
    "is_integer_orthonormal",
    "load_lattice",
    "minimum_distance",
    "read_lattice_file",
    "sublattice_generator",
    "triangularize",
]
