"""Random group presentations, link-graph spectra, and matchings.

The package samples presentations and graphs from the standard random
models, evaluates the spectral criterion (connected link graph with
second Laplacian eigenvalue above 1/2), extracts permutation structure
from relator hypergraphs, and rewrites words over a small alphabet as
products of fixed-length table words.

Hot numeric kernels live in a compiled extension when it is available;
a pure Python implementation is selected automatically otherwise (see
randomgroups._backend, override with RANDOMGROUPS_BACKEND=c|py|auto).
"""

from ._backend import backend_name
from .embed import (
    WordTable,
    build_word_table,
    coset_normal_form,
    expand_factors,
    phi_map,
    sample_gromov_restricted,
)
from .experiments import (
    SweepConfig,
    TrialRecord,
    derived_seed,
    run_sweep,
    write_csv,
    write_jsonl,
)
from .linkgraph import (
    Multigraph,
    build_link_graph,
    collapse_duplicates,
    is_bipartite,
    is_connected,
    parse_graph_text,
    split_link_parts,
    write_graph_text,
)
from .matching import (
    Matching,
    MatchResult,
    RelatorHypergraph,
    build_hypergraph,
    derangement_count,
    derangement_fraction,
    extract_permutation_subsets,
    find_perfect_matching,
    matching_to_permutations,
    sample_hypergraph,
    two_forbidden_fraction,
)
from .models import (
    PermutationPairSet,
    Presentation,
    parse_presentation_text,
    relator_count,
    sample_graph,
    sample_gromov,
    sample_permutation_model,
    sample_triangular,
    write_presentation_text,
)
from .spectral import (
    SpectralReport,
    bound,
    decomposition_residual,
    eig_symmetric,
    lambda1,
    laplacian,
    spectral_criterion,
)
from .words import (
    concat,
    cyclic_reduce,
    enumerate_words,
    free_reduce,
    inverse_word,
    is_cyclically_reduced,
    is_reduced,
    sample_cyclically_reduced,
    sample_reduced,
    word_from_text,
    word_to_text,
)

__version__ = "0.1.0"

__all__ = [
    "Matching",
    "MatchResult",
    "Multigraph",
    "PermutationPairSet",
    "Presentation",
    "RelatorHypergraph",
    "SpectralReport",
    "SweepConfig",
    "TrialRecord",
    "WordTable",
    "backend_name",
    "bound",
    "build_hypergraph",
    "build_link_graph",
    "build_word_table",
    "collapse_duplicates",
    "concat",
    "coset_normal_form",
    "cyclic_reduce",
    "decomposition_residual",
    "derangement_count",
    "derangement_fraction",
    "derived_seed",
    "eig_symmetric",
    "enumerate_words",
    "expand_factors",
    "extract_permutation_subsets",
    "find_perfect_matching",
    "free_reduce",
    "inverse_word",
    "is_bipartite",
    "is_connected",
    "is_cyclically_reduced",
    "is_reduced",
    "lambda1",
    "laplacian",
    "matching_to_permutations",
    "parse_graph_text",
    "parse_presentation_text",
    "phi_map",
    "relator_count",
    "run_sweep",
    "sample_cyclically_reduced",
    "sample_graph",
    "sample_gromov",
    "sample_gromov_restricted",
    "sample_hypergraph",
    "sample_permutation_model",
    "sample_reduced",
    "sample_triangular",
    "spectral_criterion",
    "split_link_parts",
    "two_forbidden_fraction",
    "word_from_text",
    "word_to_text",
    "write_csv",
    "write_graph_text",
    "write_jsonl",
    "write_presentation_text",
]
