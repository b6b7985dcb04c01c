"""Symbol-error probability of finite lattice constellations in Gaussian noise.

Two independent routes to the same quantity:

* **Facet decomposition** (:func:`exact_sep_theorem1`).  Conditioning on
  the facet class of the transmitted point, the error probability of a
  K-PAM carving is exactly

  ``P(rho) = 1 - (1/K**N) * sum_k (K-1)**k * sum_p J[k, p](rho)``

  where ``J[k, p]`` is the Gaussian probability mass of the Voronoi cell
  of the rank-k sublattice spanned by basis subset ``(k, p)`` and
  ``J[0] = 1``.  For cubic lattices every cell is a unit cube, the mass
  factorizes per coordinate, and the decomposition collapses to a closed
  form; for general lattices each ``J`` is estimated by Monte Carlo with
  an exact cell-membership test.

* **Direct simulation** (:func:`simulate_sep`).  Draw equiprobable
  symbols, add white Gaussian noise, decode with a box-constrained
  closest-point search, and count symbol errors.

Both routes draw from the deterministic streams of
:mod:`latticesep.streams`, so every estimate is a pure function of its
seed and is independent of thread count.

SNR convention: ``rho = 1 / sigma**2`` where ``sigma**2`` is the noise
variance per coordinate; decibel values are ``10 * log10(rho)``.
"""

from __future__ import annotations

import concurrent.futures
import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import SnrGrid, format_sig
from .constellation import FacetClass, FiniteConstellation, subset_rank
from .cvp import TIE_TOL, BatchDecoder, Decoder, closest_point, voronoi_test_vectors
from .lattices import SublatticeSelector, is_integer_orthonormal, sublattice_generator
from .special import q_function
from .streams import SHARD_SIZE, derive_seed, standard_normals, stream, uniform_symbols

__all__ = [
    "JEstimate",
    "JSource",
    "SepEstimate",
    "SepMethod",
    "SimPlan",
    "closest_point",
    "exact_sep_theorem1",
    "j_integral_mc",
    "j_integral_zn",
    "sep_csv_rows",
    "simulate_sep",
    "write_sep_csv",
]

_MIN_J_TRIALS = 10**4
_MIN_MAX_TRIALS = 10**4
_MIN_TARGET_ERRORS = 50
_MAX_SIM_DIMENSION = 8
_RELIABLE_ERRORS = 20
_CI_FACTOR = 1.96  # two-sided 95% normal quantile


class JSource(enum.Enum):
    """How a Voronoi-cell mass ``J[k, p]`` is evaluated."""

    ANALYTIC_ZN = "analytic_zn"
    MC_VORONOI = "mc_voronoi"


class SepMethod(enum.Enum):
    """Provenance of a symbol-error-probability estimate."""

    THEOREM1 = "theorem1"
    DIRECT_MC = "direct_mc"
    CLOSED_FORM_ZN = "closed_form_zn"


@dataclass(frozen=True)
class JEstimate:
    """Gaussian mass of one sublattice Voronoi cell at one SNR."""

    facet_class: FacetClass
    rho: float
    mean: float
    std_err: float
    method: JSource
    trials: int


@dataclass(frozen=True)
class SepEstimate:
    """Symbol-error probability at one SNR point.

    ``ci_half_width`` is the 95% normal-approximation half width; for
    ``DIRECT_MC`` it is meaningful only when ``reliable`` is true, i.e.
    at least 20 errors were observed.
    """

    snr_db: float
    rho: float
    mean: float
    ci_half_width: float
    trials: int
    errors_observed: int
    method: SepMethod
    reliable: bool


@dataclass(frozen=True, eq=False)
class SimPlan:
    """Everything that determines a simulation run.

    Two runs with equal plans produce identical estimates, whatever the
    thread count.
    """

    constellation: FiniteConstellation
    grid: SnrGrid
    seed: int
    max_trials: int = 10**7
    target_errors: int = 100
    decoder: Decoder = Decoder.BRUTE_FORCE

    def __post_init__(self):
        if self.constellation.dimension > _MAX_SIM_DIMENSION:
            raise ValueError(
                f"simulation supports dimensions up to {_MAX_SIM_DIMENSION}, "
                f"got {self.constellation.dimension}"
            )
        if not isinstance(self.seed, int) or not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if self.max_trials < _MIN_MAX_TRIALS:
            raise ValueError(f"max_trials must be at least {_MIN_MAX_TRIALS}, got {self.max_trials}")
        if self.target_errors < _MIN_TARGET_ERRORS:
            raise ValueError(
                f"target_errors must be at least {_MIN_TARGET_ERRORS}, got {self.target_errors}"
            )
        if not isinstance(self.decoder, Decoder):
            raise ValueError(f"decoder must be a Decoder, got {self.decoder!r}")


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not math.isfinite(rho) or rho <= 0.0:
        raise ValueError(f"rho must be a positive finite SNR, got {rho}")
    return rho


def j_integral_zn(k: int, rho: float) -> JEstimate:
    """Voronoi-cell mass for a rank-k cubic sublattice, in closed form.

    The cell is the unit cube, so the Gaussian mass factorizes into
    ``(1 - 2 Q(sqrt(rho)/2))**k``; ``k = 0`` gives 1 by convention.
    """
    if not isinstance(k, int) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    rho = _check_rho(rho)
    edge = 1.0 - 2.0 * q_function(math.sqrt(rho) / 2.0)
    facet_class = FacetClass(k=k, p=1, subset=tuple(range(1, k + 1)))
    return JEstimate(
        facet_class=facet_class,
        rho=rho,
        mean=edge**k,
        std_err=0.0,
        method=JSource.ANALYTIC_ZN,
        trials=0,
    )


def _membership_halfspaces(generator: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Half-space form of the Voronoi cell around the origin: x belongs iff
    # x . v <= ||v||**2 / 2 for every test vector v (ties inside).
    vectors = voronoi_test_vectors(generator)
    half_norms = 0.5 * np.sum(vectors**2, axis=1)
    return vectors.T.copy(), half_norms


def _cell_mass_mc(
    vt: np.ndarray, half_norms: np.ndarray, k: int, rho: float, trials: int, seed: int
) -> tuple[float, float]:
    # Fraction of N(0, I/rho) samples inside the cell, with standard error.
    # Shard s draws from stream(seed, s); boundary ties count as inside.
    sigma = 1.0 / math.sqrt(rho)
    inside = 0
    shards = (trials + SHARD_SIZE - 1) // SHARD_SIZE
    for s in range(shards):
        m = min(SHARD_SIZE, trials - s * SHARD_SIZE)
        rng = stream(seed, s)
        w = standard_normals(rng, m * k).reshape(m, k) * sigma
        inside += int(np.count_nonzero(np.all(w @ vt <= half_norms + TIE_TOL, axis=1)))
    mean = inside / trials
    std_err = math.sqrt(mean * (1.0 - mean) / trials)
    return mean, std_err


def j_integral_mc(sel: SublatticeSelector, rho: float, trials: int, seed: int) -> JEstimate:
    """Voronoi-cell mass for a general sublattice, by Monte Carlo.

    Draws ``trials`` Gaussian vectors with per-coordinate variance
    ``1/rho`` in the sublattice's own span frame and counts the fraction
    for which the origin is a closest sublattice point.  Membership is
    decided exactly by the half-space test of
    :func:`latticesep.cvp.voronoi_test_vectors`; samples tied with a
    boundary (within 1e-12) count as inside.

    Sampling is sharded: shard ``s`` draws from ``stream(seed, s)``, so
    the estimate is deterministic for a fixed seed.
    """
    n = sel.lattice.dimension
    if n > _MAX_SIM_DIMENSION:
        raise ValueError(f"Monte Carlo cell masses support dimensions up to {_MAX_SIM_DIMENSION}")
    rho = _check_rho(rho)
    if trials < _MIN_J_TRIALS:
        raise ValueError(f"trials must be at least {_MIN_J_TRIALS}, got {trials}")
    generator = sublattice_generator(sel)
    vt, half_norms = _membership_halfspaces(generator)
    mean, std_err = _cell_mass_mc(vt, half_norms, sel.k, rho, trials, seed)
    facet_class = FacetClass(k=sel.k, p=subset_rank(n, sel.subset), subset=sel.subset)
    return JEstimate(
        facet_class=facet_class,
        rho=rho,
        mean=mean,
        std_err=std_err,
        method=JSource.MC_VORONOI,
        trials=trials,
    )


def _subset_weight(n: int, big_k: int, k: int) -> float:
    # (K-1)**k / K**N as a correctly rounded float, valid for any K.
    return float(Fraction((big_k - 1) ** k, big_k**n))


def _clip_probability(p: float) -> float:
    return min(1.0, max(0.0, p))


def exact_sep_theorem1(
    c: FiniteConstellation,
    grid: SnrGrid,
    j_source: JSource,
    trials_per_j: int = 10**5,
    seed: int = 0,
) -> list[SepEstimate]:
    """Symbol-error probability from the facet decomposition.

    Evaluates ``P = 1 - (1/K**N) sum_k (K-1)**k sum_p J[k, p]`` at every
    grid point.

    With ``j_source = ANALYTIC_ZN`` (cubic lattices only) every ``J`` is
    closed-form, all subsets of one size are equal, and the result is
    exact (method ``CLOSED_FORM_ZN``, zero CI).

    With ``MC_VORONOI`` each distinct sublattice geometry is estimated by
    :func:`j_integral_mc`-style sampling with ``trials_per_j`` samples;
    subsets are shared only when their Gram matrices are bit-identical
    (the cubic shortcut), otherwise all ``C(N, k)`` estimates are
    computed.  Each shared estimate contributes its multiplicity to both
    the mean and the propagated variance; distinct estimates use disjoint
    streams (child seed from ``(seed, k, p)``) and combine in quadrature.
    The reported ``trials`` is the per-J sample budget.
    """
    n = c.dimension
    big_k = c.K
    if not isinstance(j_source, JSource):
        raise ValueError(f"j_source must be a JSource, got {j_source!r}")
    weights = [_subset_weight(n, big_k, k) for k in range(n + 1)]

    if j_source is JSource.ANALYTIC_ZN:
        if not is_integer_orthonormal(c.lattice):
            raise ValueError("ANALYTIC_ZN applies only to the identity-generator cubic lattices")
        estimates = []
        for db, rho in zip(grid.db, grid.rho):
            total = weights[0]
            for k in range(1, n + 1):
                total += weights[k] * math.comb(n, k) * j_integral_zn(k, float(rho)).mean
            estimates.append(
                SepEstimate(
                    snr_db=float(db),
                    rho=float(rho),
                    mean=_clip_probability(1.0 - total),
                    ci_half_width=0.0,
                    trials=0,
                    errors_observed=0,
                    method=SepMethod.CLOSED_FORM_ZN,
                    reliable=True,
                )
            )
        return estimates

    if n > _MAX_SIM_DIMENSION:
        raise ValueError(f"MC_VORONOI supports dimensions up to {_MAX_SIM_DIMENSION}")
    if trials_per_j < _MIN_J_TRIALS:
        raise ValueError(f"trials_per_j must be at least {_MIN_J_TRIALS}, got {trials_per_j}")

    # Group subsets with bit-identical sublattice Gram matrices; each group
    # is estimated once from the stream of its first (lexicographic) member.
    groups: dict[tuple[int, bytes], dict] = {}
    for k in range(1, n + 1):
        for p, subset in enumerate(itertools.combinations(range(1, n + 1), k), start=1):
            sel = SublatticeSelector(lattice=c.lattice, subset=subset)
            generator = sublattice_generator(sel)
            gram = generator.T @ generator
            key = (k, gram.tobytes())
            if key in groups:
                groups[key]["multiplicity"] += 1
            else:
                vt, half_norms = _membership_halfspaces(generator)
                groups[key] = {
                    "k": k,
                    "seed": derive_seed(seed, k, p),
                    "vt": vt,
                    "half_norms": half_norms,
                    "multiplicity": 1,
                }

    estimates = []
    for db, rho in zip(grid.db, grid.rho):
        total = weights[0]
        variance = 0.0
        for group in groups.values():
            k = group["k"]
            mean, std_err = _cell_mass_mc(
                group["vt"], group["half_norms"], k, float(rho), trials_per_j, group["seed"]
            )
            scale = weights[k] * group["multiplicity"]
            total += scale * mean
            variance += (scale * std_err) ** 2
        estimates.append(
            SepEstimate(
                snr_db=float(db),
                rho=float(rho),
                mean=_clip_probability(1.0 - total),
                ci_half_width=_CI_FACTOR * math.sqrt(variance),
                trials=trials_per_j,
                errors_observed=0,
                method=SepMethod.THEOREM1,
                reliable=True,
            )
        )
    return estimates


def _simulate_point(
    plan: SimPlan,
    decoder: BatchDecoder,
    grid_index: int,
    rho: float,
    threads: int,
) -> tuple[int, int]:
    # Returns (trials, errors) accumulated in shard order with early
    # stopping at a shard boundary, so the result is independent of how
    # many shards ran concurrently.
    c = plan.constellation
    n = c.dimension
    big_k = c.K
    g = c.lattice.generator
    sigma = 1.0 / math.sqrt(rho)
    use_indices = decoder.method is Decoder.BRUTE_FORCE
    if use_indices:
        index_weights = big_k ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def run_shard(s: int) -> tuple[int, int]:
        m = min(SHARD_SIZE, plan.max_trials - s * SHARD_SIZE)
        rng = stream(plan.seed, grid_index, s)
        u = uniform_symbols(rng, m * n, big_k).reshape(m, n)
        w = standard_normals(rng, m * n).reshape(m, n)
        y = u @ g.T + sigma * w
        if use_indices:
            errors = int(np.count_nonzero(decoder.decode_indices(y) != u @ index_weights))
        else:
            errors = int(np.count_nonzero(np.any(decoder.decode(y) != u, axis=1)))
        return m, errors

    total_trials = 0
    total_errors = 0
    shard_count = (plan.max_trials + SHARD_SIZE - 1) // SHARD_SIZE

    def stop() -> bool:
        return total_errors >= plan.target_errors or total_trials >= plan.max_trials

    if threads == 1:
        for s in range(shard_count):
            m, e = run_shard(s)
            total_trials += m
            total_errors += e
            if stop():
                break
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            for wave_start in range(0, shard_count, threads):
                wave = range(wave_start, min(wave_start + threads, shard_count))
                for m, e in pool.map(run_shard, wave):
                    total_trials += m
                    total_errors += e
                    if stop():
                        break
                if stop():
                    break
    return total_trials, total_errors


def simulate_sep(plan: SimPlan, threads: int = 1) -> list[SepEstimate]:
    """Direct maximum-likelihood Monte Carlo estimate of the SEP.

    Per grid point: draw symbols uniformly over ``{0..K-1}**N``, transmit
    ``x = M u``, receive ``y = x + w`` with ``w ~ N(0, I/rho)``, decode
    with the plan's box-constrained closest-point search, and count rows
    where the decoded coordinates differ from the transmitted ones.
    Stops at the first shard boundary where ``target_errors`` errors have
    accumulated, or at ``max_trials``.

    Shard ``s`` of grid point ``i`` draws all its symbols, then all its
    noise, from ``stream(seed, i, s)``; shards are accumulated in shard
    order whatever the thread count, so the output is byte-stable for a
    fixed plan.

    A point with zero observed errors reports mean 0 with
    ``reliable=False`` (so does any point with fewer than 20 errors);
    such estimates carry no confidence statement.
    """
    if not isinstance(plan, SimPlan):
        raise ValueError(f"plan must be a SimPlan, got {plan!r}")
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"threads must be a positive integer, got {threads}")
    decoder = BatchDecoder(plan.constellation.lattice.generator, plan.constellation.K, plan.decoder)
    estimates = []
    for i, (db, rho) in enumerate(zip(plan.grid.db, plan.grid.rho)):
        trials, errors = _simulate_point(plan, decoder, i, float(rho), threads)
        mean = errors / trials
        estimates.append(
            SepEstimate(
                snr_db=float(db),
                rho=float(rho),
                mean=mean,
                ci_half_width=_CI_FACTOR * math.sqrt(mean * (1.0 - mean) / trials),
                trials=trials,
                errors_observed=errors,
                method=SepMethod.DIRECT_MC,
                reliable=errors >= _RELIABLE_ERRORS,
            )
        )
    return estimates


def sep_csv_rows(
    estimates: list[SepEstimate], lattice_name: str, big_k: int, seed: int | None
) -> list[str]:
    """CSV lines for SEP estimates, one row per grid point.

    Header ``snr_db,sep,ci_low,ci_high,trials,errors,method,lattice,K,seed``;
    numbers carry 12 significant digits; the CI columns are the clipped
    interval ``[mean - h, mean + h]``; ``seed`` is empty for closed-form
    results (pass None).
    """
    rows = ["snr_db,sep,ci_low,ci_high,trials,errors,method,lattice,K,seed"]
    seed_text = "" if seed is None else str(int(seed))
    for est in estimates:
        ci_low = _clip_probability(est.mean - est.ci_half_width)
        ci_high = _clip_probability(est.mean + est.ci_half_width)
        rows.append(
            ",".join(
                [
                    format_sig(est.snr_db),
                    format_sig(est.mean),
                    format_sig(ci_low),
                    format_sig(ci_high),
                    str(est.trials),
                    str(est.errors_observed),
                    est.method.value,
                    lattice_name,
                    str(big_k),
                    seed_text,
                ]
            )
        )
    return rows


def write_sep_csv(
    path, estimates: list[SepEstimate], lattice_name: str, big_k: int, seed: int | None
) -> None:
    """Write :func:`sep_csv_rows` to ``path`` with a trailing newline."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(sep_csv_rows(estimates, lattice_name, big_k, seed)) + "\n")
