"""Symbol-error probabilities of finite multidimensional lattice constellations.

Exact error-rate decompositions over the constellation's facet geometry,
multiple-sphere lower/upper bounds, their classical single-sphere
counterparts, and a maximum-likelihood Monte Carlo simulator, all under
per-dimension AWGN with SNR defined as rho = 1 / sigma**2 for unit-volume
lattices.
"""

from .bounds import (
    BoundCurve,
    CurveKind,
    SnrGrid,
    curve_csv_rows,
    facet_weights,
    format_sig,
    mslb,
    msub,
    slb,
    sub,
    write_curve_csv,
)
from .constellation import (
    ClassCounts,
    FacetClass,
    FiniteConstellation,
    LatticePoint,
    classify_point,
    constellation_points,
    count_points_by_class,
    enumerate_points,
    facet_count,
    points_per_facet,
    subset_rank,
)
from .cvp import (
    BatchDecoder,
    Decoder,
    closest_point,
    enumerate_within_radius,
    shortest_vector_norm,
    triangularize,
    voronoi_test_vectors,
)
from .exceptions import BudgetError, ConvergenceError, InternalCheckError, LatticeSepError
from .lattices import (
    DminMethod,
    Lattice,
    SublatticeSelector,
    catalog_lattice,
    catalog_names,
    is_integer_orthonormal,
    load_lattice,
    minimum_distance,
    read_lattice_file,
    sublattice_generator,
    write_lattice_file,
)
from .sep import (
    JEstimate,
    JSource,
    SepEstimate,
    SepMethod,
    SimPlan,
    exact_sep_theorem1,
    j_integral_mc,
    j_integral_zn,
    sep_csv_rows,
    simulate_sep,
    write_sep_csv,
)
from .special import (
    RadiusKind,
    SphereRadiusSpec,
    clamp_probability,
    q_function,
    regularized_gamma_upper,
    sphere_radius_sq,
)
from .streams import SHARD_SIZE, derive_seed, standard_normals, stream, uniform_symbols
from .svgplot import CurveSeries, render_svg, write_svg

__version__ = "0.1.0"

__all__ = [
    "BatchDecoder",
    "BoundCurve",
    "BudgetError",
    "ClassCounts",
    "ConvergenceError",
    "CurveKind",
    "CurveSeries",
    "Decoder",
    "DminMethod",
    "FacetClass",
    "FiniteConstellation",
    "InternalCheckError",
    "JEstimate",
    "JSource",
    "Lattice",
    "LatticePoint",
    "LatticeSepError",
    "RadiusKind",
    "SHARD_SIZE",
    "SepEstimate",
    "SepMethod",
    "SimPlan",
    "SnrGrid",
    "SphereRadiusSpec",
    "SublatticeSelector",
    "catalog_lattice",
    "catalog_names",
    "clamp_probability",
    "classify_point",
    "closest_point",
    "constellation_points",
    "count_points_by_class",
    "curve_csv_rows",
    "derive_seed",
    "enumerate_points",
    "enumerate_within_radius",
    "exact_sep_theorem1",
    "facet_count",
    "facet_weights",
    "format_sig",
    "is_integer_orthonormal",
    "j_integral_mc",
    "j_integral_zn",
    "load_lattice",
    "minimum_distance",
    "mslb",
    "msub",
    "points_per_facet",
    "q_function",
    "read_lattice_file",
    "regularized_gamma_upper",
    "render_svg",
    "sep_csv_rows",
    "shortest_vector_norm",
    "simulate_sep",
    "slb",
    "sphere_radius_sq",
    "standard_normals",
    "stream",
    "sub",
    "sublattice_generator",
    "subset_rank",
    "triangularize",
    "uniform_symbols",
    "voronoi_test_vectors",
    "write_curve_csv",
    "write_lattice_file",
    "write_sep_csv",
    "write_svg",
    "__version__",
]
