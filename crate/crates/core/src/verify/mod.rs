//! Numerical confirmation of structural results.

pub mod field;
pub mod float;
pub mod matrix;
pub mod pbh;
pub mod poly;
pub mod rank;
pub mod realize;

pub use field::{Field, Fp, P};
pub use matrix::Mat;
pub use pbh::{pbh_float, pbh_output_test, pbh_rational, PbhMode, PbhReport, Verdict, WhichTest};
pub use rank::{
    generic_rank_controllability, generic_rank_output_controllability, rank_estimate, sample_ranks, RankEstimate,
    RankKind,
};
pub use realize::{tree_witness, bifurcation_witness, sample_realization, FieldKind, Matrices, RealizationSample};
