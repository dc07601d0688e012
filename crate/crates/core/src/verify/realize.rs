//! Numerical instantiations of an extended network's sparsity pattern.

use nalgebra::DMatrix;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::field::{Field, Fp, P};
use super::matrix::Mat;
use crate::cases;
use crate::error::{Error, Result};
use crate::model::{CopyId, ExtendedNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// Integers modulo 2^31 - 1.
    Prime,
    Float,
    /// Exact rationals; sampled entries are nonzero integers in `[-9, 9]`.
    Rational,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Prime => "prime",
            FieldKind::Float => "float",
            FieldKind::Rational => "rational",
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(FieldKind::Prime),
            "float" | "float64" => Ok(FieldKind::Float),
            "rational" => Ok(FieldKind::Rational),
            _ => Err(Error::Parameter(format!("unknown field {s:?}"))),
        }
    }
}

/// State, input and output matrices over one field.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrices {
    Prime { a: Mat<Fp>, b: Mat<Fp>, c: Mat<Fp> },
    Float { a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64> },
    Rational { a: Mat<BigRational>, b: Mat<BigRational>, c: Mat<BigRational> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationSample {
    pub field: FieldKind,
    /// `None` for deterministic constructions.
    pub seed: Option<u64>,
    pub matrices: Matrices,
}

impl RealizationSample {
    /// Rational matrices `(A, B, C)`; converts float samples exactly and
    /// fails for prime-field samples.
    pub fn rational(&self) -> Result<(Mat<BigRational>, Mat<BigRational>, Mat<BigRational>)> {
        match &self.matrices {
            Matrices::Rational { a, b, c } => Ok((a.clone(), b.clone(), c.clone())),
            Matrices::Float { a, b, c } => {
                let conv = |m: &DMatrix<f64>| -> Result<Mat<BigRational>> {
                    let mut out = Mat::zeros(m.nrows(), m.ncols());
                    for r in 0..m.nrows() {
                        for col in 0..m.ncols() {
                            let v = BigRational::from_float(m[(r, col)])
                                .ok_or_else(|| Error::Parameter("non-finite entry".into()))?;
                            out.set(r, col, v);
                        }
                    }
                    Ok(out)
                };
                Ok((conv(a)?, conv(b)?, conv(c)?))
            }
            Matrices::Prime { .. } => Err(Error::Parameter("prime-field sample has no rational form".into())),
        }
    }

    /// Float matrices `(A, B, C)`; fails for prime-field samples.
    pub fn float(&self) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
        use num_traits::ToPrimitive;
        match &self.matrices {
            Matrices::Float { a, b, c } => Ok((a.clone(), b.clone(), c.clone())),
            Matrices::Rational { a, b, c } => {
                let conv = |m: &Mat<BigRational>| {
                    DMatrix::from_fn(m.rows(), m.cols(), |r, col| m.get(r, col).to_f64().unwrap_or(f64::NAN))
                };
                Ok((conv(a), conv(b), conv(c)))
            }
            Matrices::Prime { .. } => Err(Error::Parameter("prime-field sample has no float form".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        fn rows<T>(r: usize, c: usize, f: impl Fn(usize, usize) -> T) -> Vec<Vec<T>> {
            (0..r).map(|i| (0..c).map(|j| f(i, j)).collect()).collect()
        }
        let (a, b, c) = match &self.matrices {
            Matrices::Prime { a, b, c } => {
                let m = |x: &Mat<Fp>| json!(rows(x.rows(), x.cols(), |i, j| x.get(i, j).value()));
                (m(a), m(b), m(c))
            }
            Matrices::Float { a, b, c } => {
                let m = |x: &DMatrix<f64>| json!(rows(x.nrows(), x.ncols(), |i, j| x[(i, j)]));
                (m(a), m(b), m(c))
            }
            Matrices::Rational { a, b, c } => {
                let m = |x: &Mat<BigRational>| json!(rows(x.rows(), x.cols(), |i, j| x.get(i, j).to_string()));
                (m(a), m(b), m(c))
            }
        };
        json!({ "field": self.field.as_str(), "seed": self.seed, "A": a, "B": b, "C": c })
    }
}

/// Free positions of `A`, `B` and `C`; output positions carry whether the
/// entry is free (extended subsystem) or fixed to one.
struct Layout {
    a: Vec<(usize, usize)>,
    b: Vec<(usize, usize)>,
    c: Vec<(usize, usize, bool)>,
}

impl Layout {
    fn of(net: &ExtendedNetwork) -> Self {
        Self {
            a: net.state_positions(),
            b: net.input_positions(),
            c: net
                .output_positions()
                .into_iter()
                .map(|(i, g)| (i, g, net.orders()[i] > 1))
                .collect(),
        }
    }

    fn exact<F: Field>(&self, net: &ExtendedNetwork, mut free: impl FnMut() -> F) -> (Mat<F>, Mat<F>, Mat<F>) {
        let mut a = Mat::zeros(net.n_hat(), net.n_hat());
        for &(r, c) in &self.a {
            a.set(r, c, free());
        }
        let mut b = Mat::zeros(net.n_hat(), net.m());
        for &(r, s) in &self.b {
            b.set(r, s, free());
        }
        let mut c = Mat::zeros(net.n(), net.n_hat());
        for &(i, g, is_free) in &self.c {
            c.set(i, g, if is_free { free() } else { F::one() });
        }
        (a, b, c)
    }

    fn float(&self, net: &ExtendedNetwork, mut free: impl FnMut() -> f64) -> Matrices {
        let mut a = DMatrix::zeros(net.n_hat(), net.n_hat());
        for &(r, c) in &self.a {
            a[(r, c)] = free();
        }
        let mut b = DMatrix::zeros(net.n_hat(), net.m());
        for &(r, s) in &self.b {
            b[(r, s)] = free();
        }
        let mut c = DMatrix::zeros(net.n(), net.n_hat());
        for &(i, g, is_free) in &self.c {
            c[(i, g)] = if is_free { free() } else { 1.0 };
        }
        Matrices::Float { a, b, c }
    }
}

/// Draws one realization. Free entries are iid: uniform nonzero residues
/// (prime), uniform on `[-1, -0.05] ∪ [0.05, 1]` (float), or uniform nonzero
/// integers in `[-9, 9]` (rational).
pub fn sample_realization(net: &ExtendedNetwork, field: FieldKind, seed: u64) -> RealizationSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = Layout::of(net);
    let matrices = match field {
        FieldKind::Prime => {
            let (a, b, c) = layout.exact(net, || Fp::new(rng.random_range(1..P)));
            Matrices::Prime { a, b, c }
        }
        FieldKind::Float => layout.float(net, || {
            let mag = rng.random_range(0.05..=1.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        }),
        FieldKind::Rational => {
            let (a, b, c) = layout.exact(net, || {
                let mag = rng.random_range(1..=9i64);
                BigRational::from_i64(if rng.random_bool(0.5) { mag } else { -mag })
            });
            Matrices::Rational { a, b, c }
        }
    };
    RealizationSample {
        field,
        seed: Some(seed),
        matrices,
    }
}

/// Exact realization of an extended case-study network: the internal block
/// of the `k`-th extended subsystem (1-based) is `[[0, k+1], [1, 0]]`, with
/// eigenvalues `±sqrt(k+1)`; every other free entry of `A` is one. `B` and
/// the outputs of extended subsystems follow `b_first` and `c_row`.
fn witness(net: &ExtendedNetwork, b_first: &[i64], c_row: &[i64]) -> RealizationSample {
    let q = |v: i64| BigRational::from_i64(v);
    let nh = net.n_hat();
    let mut a = Mat::zeros(nh, nh);
    for (r, c) in net.state_positions() {
        a.set(r, c, q(1));
    }
    let mut k = 0;
    for i in 0..net.n() {
        if net.orders()[i] == 2 && net.heterogeneous()[i] {
            k += 1;
            let base = net.index_of(CopyId::new(i, 0));
            a.set(base, base, q(0));
            a.set(base + 1, base + 1, q(0));
            a.set(base, base + 1, q(k + 1));
            a.set(base + 1, base, q(1));
        }
    }
    let mut b = Mat::zeros(nh, net.m());
    for (r, s) in net.input_positions() {
        let copy = net.copy_at(r).copy;
        b.set(r, s, q(b_first[copy.min(b_first.len() - 1)]));
    }
    let mut c = Mat::zeros(net.n(), nh);
    for (i, g) in net.output_positions() {
        let v = if net.orders()[i] == 1 { 1 } else { c_row[net.copy_at(g).copy] };
        c.set(i, g, q(v));
    }
    RealizationSample {
        field: FieldKind::Rational,
        seed: None,
        matrices: Matrices::Rational { a, b, c },
    }
}

/// Exact realization of the extended binary tree of height `h >= 1` with
/// `b_1 = [1, 0]^T` and outputs `[1, 0]` on the extended subsystems.
pub fn tree_witness(h: usize) -> Result<RealizationSample> {
    if h < 1 {
        return Err(Error::Parameter("tree witness needs height at least 1".into()));
    }
    Ok(witness(&cases::extended_binary_tree(h)?, &[1, 0], &[1, 0]))
}

/// Exact realization of the extended bifurcation of even height `h >= 2`
/// with `b_1 = 1` and outputs `[0, 1]` on the extended subsystems.
pub fn bifurcation_witness(h: usize) -> Result<RealizationSample> {
    if h < 2 || h % 2 == 1 {
        return Err(Error::Parameter("bifurcation witness needs an even height of at least 2".into()));
    }
    Ok(witness(&cases::extended_bifurcation(h)?, &[1], &[0, 1]))
}
