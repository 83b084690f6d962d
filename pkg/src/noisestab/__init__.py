"""Noise stability, influence, agreement and mutual information of Boolean
functions on the cube, the discrete torus and BSC broadcast trees, with
exhaustive extremal search."""

from .canonical import (
    dictator,
    hamming_ball_like,
    is_monotone,
    lexicographic,
    majority,
    named,
    parity,
)
from .cube import (
    BooleanFunction,
    CubeFunction,
    Spectrum,
    degree_weight,
    from_support,
    is_balanced,
    mean,
    wht,
    wht_inverse,
)
from .influence import InfluenceReport, edge_boundary, influence, total_influence
from .information import binary_entropy, mutual_information, neg_cond_entropy
from .noise import (
    NoiseParam,
    PhiSpec,
    agreement_probability,
    alpha_stability,
    apply_noise,
    apply_noise_direct,
    correlation_star,
    laplacian,
    phi_stability,
    stability_slope_zero,
)
from .search import (
    BudgetExceeded,
    Objective,
    SearchResult,
    SearchSpec,
    compare_named,
    enumerate_functions,
    maximize,
)
from .shifting import ShiftTrace, monotonize, shift_up
from .torus import (
    TorusFunction,
    torus_alpha_stability,
    torus_apply_noise,
    torus_apply_noise_direct,
    torus_dft,
    torus_edge_boundary,
    torus_influence,
    torus_monotonize,
    torus_phi_stability,
)
from .tree import (
    BroadcastTree,
    dump_tree_json,
    load_tree_json,
    path_dictator_bound,
    tree_agreement,
    tree_correlation,
    tree_mc_estimate,
)

__version__ = "0.1.0"
