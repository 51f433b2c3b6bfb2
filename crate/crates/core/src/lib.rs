//! Exact arithmetic for small fusion rings and the first obstruction to
//! realizing them monoidally.
//!
//! A fusion ring is a finite basis with non-negative integer structural
//! constants satisfying associativity. Whether such a ring underlies a
//! semisimple monoidal category is controlled, at first order, by a degree-4
//! Hochschild class with coefficients in the ring mod 2: each entry is the
//! parity of the permutation obtained by chasing ordered index sets around
//! the pentagon of bracketings. This crate computes that cocycle two
//! independent ways, decides its triviality by GF(2) linear algebra, and
//! cross-checks the two-element classification in closed form.
//!
//! - [`fusion`]: rings, morphisms, enveloping arithmetic, validation, and a
//!   pruned enumerator for small tables.
//! - [`trees`]: planar rooted trees, grafting and contraction, and the
//!   ordered marked index sets of binary trees.
//! - [`obstruction`]: permutation parities, the closed sign formula, the
//!   brute-force pentagon-loop oracle, and the assembled cocycle.
//! - [`hochschild`]: the cochain complex mod 2, coboundary membership with
//!   witnesses, and the two-element closed forms.
//! - [`pentagon`]: exact rational operators, the pentagon equation itself,
//!   group solutions, and the x*x = n e solvability decision.
//!
//! Everything is deterministic and exact: checked 64-bit integers, GF(2) bit
//! matrices, and arbitrary-precision rationals. No floating point touches a
//! mathematical result.

pub mod fusion;
pub mod gf2;
pub mod hochschild;
pub mod obstruction;
pub mod pentagon;
pub mod trees;

pub use fusion::{
    enumerate_fusion_rings, nary_constant, normalize_identity_first, ring_from_json,
    ring_from_json_str, ring_to_json, ring_to_json_string, validate_morphism, validate_table,
    ElementOrder, EnumerationParams, EnvelopingElement, FusionError, FusionMorphism, FusionRing,
    ValidationReport, Violation,
};
pub use gf2::{BitMatrix, Bits};
pub use hochschild::{
    classify_rank2, coboundary, cohomology_dim, is_coboundary, rank2_cohomology,
    CoboundaryDecision, Cochain, HochschildError, Rank2Cohomology, TrivialityVerdict,
};
pub use obstruction::{
    block_reindex_sign, first_obstruction, first_obstruction_with_order, lex_swap_sign,
    pentagon_sign_bruteforce, pentagon_sign_closed, sort_sign_oracle, verify_against_oracle,
    ObstructionCocycle, OracleMismatch, PentagonOracle, Permutation,
};
pub use pentagon::{
    check_pentagon, group_unitary, ne_case_solvable, operator_schmidt_rank, ExactMatrix,
    GroupTable, PentagonError,
};
pub use trees::{
    enumerate_trees, marked_index_set, marked_index_set_with_order, MarkedEntry, MarkedIndexSet,
    Marking, PlanarTree, TreeError, TreeShape, VertexPath,
};
