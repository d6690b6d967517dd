"""Decompose graph adjacency matrices over F_p into direct sums of small graphs."""
from .decomp import (
    BasisItem,
    CaseId,
    CaseTag,
    Decomposition,
    VerificationResult,
    case_basis,
    classify_prime,
    decompose,
    decompose_matrix,
    solve_blocks,
    verify,
)
from .exceptions import (
    CapExceededError,
    FpDecompError,
    InfeasibleError,
    ParseError,
    PreconditionError,
    UnsupportedModulusError,
    VerificationError,
)
from .ffield import PrimeModulus, ResidueClass, Scalar, residue_class, sqrt, two_square_split
from .graphs import CATALOG, Graph, emit_graph6, parse_graph, parse_graph6
from .oracle import compute_invariants, det_spectrum
from .symmat import CanonicalForm, CongruenceMap, SymMatrix, congruence_diagonalize, normalize

__version__ = "0.1.0"

__all__ = [
    "BasisItem",
    "CATALOG",
    "CanonicalForm",
    "CapExceededError",
    "CaseId",
    "CaseTag",
    "CongruenceMap",
    "Decomposition",
    "FpDecompError",
    "Graph",
    "InfeasibleError",
    "ParseError",
    "PreconditionError",
    "PrimeModulus",
    "ResidueClass",
    "Scalar",
    "SymMatrix",
    "UnsupportedModulusError",
    "VerificationError",
    "VerificationResult",
    "__version__",
    "case_basis",
    "classify_prime",
    "compute_invariants",
    "congruence_diagonalize",
    "decompose",
    "decompose_matrix",
    "det_spectrum",
    "emit_graph6",
    "normalize",
    "parse_graph",
    "parse_graph6",
    "residue_class",
    "solve_blocks",
    "sqrt",
    "two_square_split",
    "verify",
]
