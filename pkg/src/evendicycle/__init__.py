"""Even dicycles: detection, non-evenness, walls and routing, decompositions, packing and covering."""
from .core import (
    Dicycle,
    Digraph,
    DirSeparation,
    PathFamily,
    enumerate_dicycles,
    parse_digraph,
    strong_components,
    to_dot,
    to_edgelist,
)
from .decomposition import (
    DirTreeDecomposition,
    brute_force_dtw,
    dtd_width,
    validate_dtd,
    validate_odd_dtd,
)
from .errors import (
    CapExceeded,
    EvenDicycleError,
    GateExceeded,
    OracleFailure,
    ParseError,
    PreconditionError,
    VerificationFailure,
)
from .erdos_posa import (
    FractionalPacking,
    Transversal,
    count_pm_via_transversal,
    counterexample_family,
    extract_low_dtw,
    extract_main,
    global_decompose,
    max_packing,
    min_transversal,
    t_ddpp,
    verify_packing,
)
from .evenness import contains_even_dicycle, is_non_even, odd_bicycle
from .kernels import BACKEND

__version__ = "0.1.0"
