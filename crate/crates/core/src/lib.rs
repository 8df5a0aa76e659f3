//! Exact tools for gross substitutes valuations and the matroid rank cone.
//!
//! Items are labelled `1..=n` and subsets are bitmasks ([`SubsetMask`]); all
//! arithmetic is over arbitrary-precision rationals.

pub mod artifacts;
pub mod cone;
pub mod error;
pub mod io;
pub mod lp;
pub mod matroid;
pub mod rational;
pub mod subset;
pub mod substitutes;
pub mod tree;
pub mod valuation;

pub use artifacts::{
    appendix_b_function, counterexample_valuation, figure9_constraints_check, paper_certificate,
    verify_group_bounds, verify_paper, verify_paper_with, ClaimReport, GroupPartition, PaperConfig,
};
pub use cone::{
    decompose, matroid_cone, verify_certificate, weighted_rank_decompose, weighted_rank_valuation,
    ConeSpec, Decomposition, DecompositionResult, FarkasCertificate, G4Case,
};
pub use error::{Error, Result};
pub use matroid::{
    enumerate_matroids, is_matroid_rank_valuation, isomorphism_classes, Matroid, MatroidCatalog,
    WeightedMatroid,
};
pub use rational::Rational;
pub use subset::SubsetMask;
pub use substitutes::{check_gs, check_submodular, demand, greedy, GsReport, GsViolation};
pub use tree::{delta_tensor, extract_tree, reconstruct, DeltaTensor, LabeledTree};
pub use valuation::{AffineTransform, PriceVector, Valuation};
