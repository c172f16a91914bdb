"""Finite tolerance-space engine and classifier-audit toolchain.

Builds finite indiscriminability relations (from edges, coverings, contrast
contexts, or Weber-law generators), derives their metamorphy structure, and
audits classifiers for adversarial Doppelgangers: regularity,
well-posedness, conceptual entropy, fooling-rate bounds, accuracy
trade-offs, and category structure, cross-validated against brute-force and
erf/Gaussian oracles.
"""

from .errors import GuardError, TheoremViolationError, ValidationError
from .spaces import (
    ContrastContext,
    Covering,
    ElementaryPartition,
    ToleranceSpace,
    canonical_contrast,
    canonical_covering,
    is_optimal,
    is_transitive,
    relation_from_contrast,
    relation_from_covering,
    transitive_closure,
    weber_contrast,
)
from .audit import (
    Attack,
    AuditReport,
    Classifier,
    Refusal,
    adversarial_pairs,
    ambiguity_region,
    audit_report,
    conceptual_entropy,
    doppel_chain,
    enumerate_regular,
    fooling_bound,
    fooling_rate,
    is_regular,
    label_distribution,
    max_fooling_attack,
    na_hazard_witness,
    sorites_extract,
    stirling2,
    well_posed,
)
from .accuracy import (
    TheoremCheck,
    TradeoffReport,
    WorldModel,
    accuracy,
    check_hypersensitivity,
    check_low_recall_unsafety,
    is_hyper_sensitive,
    k_bar,
    recall_rates,
    tradeoff_scan,
    validate_world_model,
)
from .features import (
    FeatureRepresentation,
    clique_dfr,
    finite_dfr_witness,
    indiscernible,
    is_dfr,
    pawlak_contrast,
    refine,
    satisfies_law_of_indiscriminability,
    semantic_cluster,
)
from .metric import (
    graph_distance,
    is_perceptually_regular,
    laplacian_ad,
    laplacian_sigma,
    perceptual_distance,
    sigma_spectrum,
    strata,
)
from .weber import (
    KlineInstance,
    RayInstance,
    WeberGrid,
    analytic_oracles,
    erf,
    kline_eps_star,
    kline_eps_star_exact,
    make_kline_gaussian,
    make_weber_interval,
    make_weber_ray_gaussian,
    make_weber_two_cell,
)
from .category import (
    SimilarityScale,
    TverskyModel,
    affinity,
    expected_affinity,
    fringe,
    importance,
    index_of_coincidence,
    m_core,
    prototypes,
    structural_entropy,
    tau_fringe,
    tversky_affinity_closed_form,
    tversky_similarity,
)

__version__ = "0.1.0"
