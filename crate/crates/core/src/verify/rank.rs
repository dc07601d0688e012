//! Randomized generic-rank estimates of the (output) controllability matrix.
//!
//! Every minor of `[B, AB, ...]` is a polynomial of degree below `n_hat^2` in
//! the free entries, so by Schwartz–Zippel a single prime-field trial with
//! p = 2^31 - 1 underestimates the generic rank with probability at most
//! about `n_hat^2 / p` (below 1e-6 for `n_hat <= 46`). Taking the maximum over
//! trials never overestimates it.

use num_rational::BigRational;
use serde_json::{json, Value};

use super::field::Field;
use super::float::{controllability_matrix, svd_rank, DEFAULT_TOLERANCE_BITS};
use super::matrix::{krylov_basis, Mat};
use super::realize::{sample_realization, FieldKind, Matrices, RealizationSample};
use crate::error::{Error, Result};
use crate::model::ExtendedNetwork;
use crate::par::{map_indexed, trial_seed, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankKind {
    /// Rank of `[B, AB, ..., A^{n_hat-1} B]`; full means `n_hat`.
    Controllability,
    /// Rank of `C [B, AB, ...]`; full means `n`.
    Output,
}

impl RankKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RankKind::Controllability => "structural",
            RankKind::Output => "output",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEstimate {
    pub kind: RankKind,
    pub field: FieldKind,
    pub seed: u64,
    pub trial_seeds: Vec<u64>,
    pub ranks: Vec<usize>,
    /// Maximum over trials.
    pub rank: usize,
    pub target: usize,
}

impl RankEstimate {
    pub fn is_full(&self) -> bool {
        self.rank == self.target
    }

    pub fn full_trials(&self) -> usize {
        self.ranks.iter().filter(|&&r| r == self.target).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "what": self.kind.as_str(),
            "field": self.field.as_str(),
            "seed": self.seed,
            "trial_seeds": self.trial_seeds,
            "ranks": self.ranks,
            "rank": self.rank,
            "target": self.target,
            "full": self.is_full(),
        })
    }
}

fn exact_ranks<F: Field>(a: &Mat<F>, b: &Mat<F>, c: &Mat<F>) -> (usize, usize) {
    let basis = krylov_basis(a, b);
    let reach = basis.len();
    if reach == 0 {
        return (0, 0);
    }
    let r = Mat::from_columns(a.rows(), &basis);
    (reach, c.mul(&r).rank())
}

/// Controllability rank and output controllability rank of one sample.
pub fn sample_ranks(sample: &RealizationSample) -> Result<(usize, usize)> {
    Ok(match &sample.matrices {
        Matrices::Prime { a, b, c } => exact_ranks(a, b, c),
        Matrices::Rational { a, b, c } => exact_ranks::<BigRational>(a, b, c),
        Matrices::Float { a, b, c } => {
            let r = controllability_matrix(a, b);
            (svd_rank(&r, DEFAULT_TOLERANCE_BITS)?, svd_rank(&(c * &r), DEFAULT_TOLERANCE_BITS)?)
        }
    })
}

/// Maximum rank over `trials` independent realizations.
pub fn rank_estimate(
    net: &ExtendedNetwork,
    kind: RankKind,
    field: FieldKind,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<RankEstimate> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let trial_seeds: Vec<u64> = (0..trials).map(|t| trial_seed(seed, t)).collect();
    let ranks = map_indexed(trials, exec, |t| {
        let (ctrb, out) = sample_ranks(&sample_realization(net, field, trial_seeds[t]))?;
        Ok(match kind {
            RankKind::Controllability => ctrb,
            RankKind::Output => out,
        })
    })
    .into_iter()
    .collect::<Result<Vec<usize>>>()?;
    Ok(RankEstimate {
        kind,
        field,
        seed,
        rank: ranks.iter().copied().max().unwrap_or(0),
        target: match kind {
            RankKind::Controllability => net.n_hat(),
            RankKind::Output => net.n(),
        },
        trial_seeds,
        ranks,
    })
}

/// Generic rank of the controllability matrix over the prime field.
pub fn generic_rank_controllability(net: &ExtendedNetwork, trials: usize, seed: u64) -> Result<RankEstimate> {
    rank_estimate(net, RankKind::Controllability, FieldKind::Prime, trials, seed, Execution::default())
}

/// Generic rank of the output controllability matrix over the prime field.
pub fn generic_rank_output_controllability(net: &ExtendedNetwork, trials: usize, seed: u64) -> Result<RankEstimate> {
    rank_estimate(net, RankKind::Output, FieldKind::Prime, trials, seed, Execution::default())
}
