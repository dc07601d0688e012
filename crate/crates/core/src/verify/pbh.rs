//! Eigenvalue-based output controllability test.
//!
//! With `C` of full row rank and `p < n`, and provided every eigenvector of
//! `A^T` heading a Jordan chain of length two or more that lies in `ker B^T`
//! also lies in `Im C^T`, the system is output controllable iff
//!
//! `[diag([l_i I - A, B]) , 1 (x) K_C]` has rank `r n`,
//!
//! with `Im K_C = ker C`. Blocks of controllable eigenvalues have full row
//! rank and split off, so only the `r_u` uncontrollable ones are assembled
//! and the target becomes `r_u n`. With a single uncontrollable eigenvalue
//! the test reduces to `rank C [l I - A, B] = p`.

use nalgebra::{Complex, DMatrix, Schur};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::field::Field;
use super::float::{complexify, controllability_matrix, hstack, shifted, svd_rank, DEFAULT_TOLERANCE_BITS};
use super::matrix::{krylov_basis, Echelon, Mat};
use super::poly::{charpoly, degree, divrem, is_squarefree, rational_roots, Poly};
use super::realize::{FieldKind, RealizationSample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbhMode {
    Rational,
    Float,
}

impl PbhMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PbhMode::Rational => "rational",
            PbhMode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    OutputControllable,
    NotOutputControllable,
    Inconclusive(String),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::OutputControllable => "output_controllable",
            Verdict::NotOutputControllable => "not_output_controllable",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichTest {
    /// Block rank condition over all uncontrollable eigenvalues.
    Blocks,
    /// Single uncontrollable eigenvalue: `rank C [l I - A, B] = p`.
    SingleEigenvalue,
    /// No uncontrollable eigenvalue: `rank C R = p` on the reachable space.
    DirectRank,
}

impl WhichTest {
    pub fn as_str(self) -> &'static str {
        match self {
            WhichTest::Blocks => "blocks",
            WhichTest::SingleEigenvalue => "single_eigenvalue",
            WhichTest::DirectRank => "direct_rank",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub value: String,
    pub re: f64,
    pub im: f64,
    pub algebraic: usize,
    pub geometric: usize,
    pub uncontrollable: bool,
    /// `rank C [l I - A, B]`.
    pub output_rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PbhReport {
    pub mode: PbhMode,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub reachable_dim: usize,
    pub eigenvalues: Vec<Eigenvalue>,
    /// Eigenvalues not expressible in the working field, as a factor of the
    /// characteristic polynomial.
    pub other_factor: Option<String>,
    pub uncontrollable: Vec<String>,
    pub diagonalizable: Option<bool>,
    /// Basis of the span of chain-heading eigenvectors of `A^T`.
    pub chain_heads: Option<Vec<Vec<String>>>,
    pub hypothesis_ok: Option<bool>,
    pub which_test: Option<WhichTest>,
    pub achieved_rank: Option<usize>,
    pub required_rank: Option<usize>,
    /// Whether `rank C [l I - A, B] = p` holds at every listed eigenvalue.
    pub eigenvalue_wise_passes: bool,
    pub verdict: Verdict,
}

impl PbhReport {
    pub fn to_json(&self) -> Value {
        let reason = match &self.verdict {
            Verdict::Inconclusive(r) => Some(r.clone()),
            _ => None,
        };
        json!({
            "mode": self.mode.as_str(),
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "reachable_dim": self.reachable_dim,
            "eigenvalues": self.eigenvalues.iter().map(|e| json!({
                "value": e.value,
                "re": e.re,
                "im": e.im,
                "algebraic": e.algebraic,
                "geometric": e.geometric,
                "uncontrollable": e.uncontrollable,
                "output_rank": e.output_rank,
            })).collect::<Vec<_>>(),
            "other_factor": self.other_factor,
            "uncontrollable_eigenvalues": self.uncontrollable,
            "diagonalizable": self.diagonalizable,
            "chain_heads": self.chain_heads,
            "hypothesis_ok": self.hypothesis_ok,
            "which_test": self.which_test.map(WhichTest::as_str),
            "certificate": { "rank": self.achieved_rank, "required": self.required_rank },
            "eigenvalue_wise_passes": self.eigenvalue_wise_passes,
            "verdict": self.verdict.as_str(),
            "reason": reason,
        })
    }
}

/// Runs the test on a sample. Prime-field samples are rejected.
pub fn pbh_output_test(sample: &RealizationSample, mode: PbhMode) -> Result<PbhReport> {
    if sample.field == FieldKind::Prime {
        return Err(Error::Parameter("the eigenvalue test needs rational or float matrices".into()));
    }
    match mode {
        PbhMode::Rational => {
            let (a, b, c) = sample.rational()?;
            pbh_rational(&a, &b, &c)
        }
        PbhMode::Float => {
            let (a, b, c) = sample.float()?;
            pbh_float(&a, &b, &c)
        }
    }
}

fn check_dims(n: usize, a: (usize, usize), b: (usize, usize), c: (usize, usize)) -> Result<()> {
    if a != (n, n) || b.0 != n || c.1 != n {
        return Err(Error::Parameter(format!(
            "inconsistent dimensions: A {}x{}, B {}x{}, C {}x{}",
            a.0, a.1, b.0, b.1, c.0, c.1
        )));
    }
    if c.0 >= n {
        return Err(Error::Precondition(format!("the test needs p < n, got p = {} and n = {n}", c.0)));
    }
    Ok(())
}

/// Basis of the intersection of the spans of `u` and `w` in `F^n`.
fn intersect<F: Field>(n: usize, u: &[Vec<F>], w: &[Vec<F>]) -> Vec<Vec<F>> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let stacked = Mat::from_columns(n, u).hstack(&Mat::from_columns(n, w).scale(&F::from_i64(-1)));
    let um = Mat::from_columns(n, u);
    let mut e = Echelon::new(n);
    let mut out = Vec::new();
    for z in stacked.nullspace() {
        let x = um.mul_vec(&z[..u.len()]);
        if e.insert(x.clone()) {
            out.push(x);
        }
    }
    out
}

/// `[l I - A, B]` for each listed eigenvalue, block diagonally, next to `1 (x) K_C`.
fn block_matrix<F: Field>(a: &Mat<F>, b: &Mat<F>, kc: &Mat<F>, lambdas: &[F]) -> Mat<F> {
    let n = a.rows();
    let w = n + b.cols();
    let r = lambdas.len();
    let mut out = Mat::zeros(r * n, r * w + kc.cols());
    for (i, l) in lambdas.iter().enumerate() {
        let blk = a.shifted(l).hstack(b);
        for row in 0..n {
            for col in 0..w {
                out.set(i * n + row, i * w + col, blk.get(row, col).clone());
            }
            for col in 0..kc.cols() {
                out.set(i * n + row, r * w + col, kc.get(row, col).clone());
            }
        }
    }
    out
}

fn poly_string(p: &Poly) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if Zero::is_zero(c) {
            continue;
        }
        terms.push(match k {
            0 => format!("{c}"),
            1 => format!("({c})x"),
            _ => format!("({c})x^{k}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Exact test over the rationals. Eigenvalues outside Q are handled only
/// when they are controllable and simple.
pub fn pbh_rational(a: &Mat<BigRational>, b: &Mat<BigRational>, c: &Mat<BigRational>) -> Result<PbhReport> {
    let n = a.rows();
    check_dims(n, (a.rows(), a.cols()), (b.rows(), b.cols()), (c.rows(), c.cols()))?;
    let p = c.rows();
    if c.rank() < p {
        return Err(Error::DegenerateOutput(format!("C has rank {} < {p}", c.rank())));
    }

    let basis = krylov_basis(a, b);
    let reach = basis.len();
    let chi = charpoly(a);
    // Characteristic polynomial of A on the reachable subspace.
    let chi_ctrl = if reach == 0 {
        vec![BigRational::from_i64(1)]
    } else {
        let v = Mat::from_columns(n, &basis);
        let (rr, _) = v.hstack(&a.mul(&v)).rref();
        charpoly(&Mat::from_fn(reach, reach, |i, j| rr.get(i, reach + j).clone()))
    };
    let (chi_unc, _) = divrem(&chi, &chi_ctrl);

    let mut report = PbhReport {
        mode: PbhMode::Rational,
        n,
        m: b.cols(),
        p,
        reachable_dim: reach,
        eigenvalues: Vec::new(),
        other_factor: None,
        uncontrollable: Vec::new(),
        diagonalizable: None,
        chain_heads: None,
        hypothesis_ok: None,
        which_test: None,
        achieved_rank: None,
        required_rank: None,
        eigenvalue_wise_passes: true,
        verdict: Verdict::Inconclusive("not evaluated".into()),
    };

    let roots = rational_roots(&chi);
    let mut unc_roots: Option<Vec<BigRational>> = None;
    if let Some((list, rest)) = &roots {
        let mut diag = true;
        let mut heads: Vec<Vec<BigRational>> = Vec::new();
        let at = a.transpose();
        for (l, mult) in list {
            let shift = a.shifted(l);
            let geometric = n - shift.rank();
            diag &= geometric == *mult;
            let unc = shift.hstack(b).rank() < n;
            let output_rank = c.mul(&shift.hstack(b)).rank();
            report.eigenvalue_wise_passes &= output_rank == p;
            report.eigenvalues.push(Eigenvalue {
                value: l.to_string(),
                re: l.to_f64().unwrap_or(f64::NAN),
                im: 0.0,
                algebraic: *mult,
                geometric,
                uncontrollable: unc,
                output_rank,
            });
            if geometric < *mult {
                let st = at.shifted(l);
                for x in intersect(n, &st.nullspace(), &st.column_basis()) {
                    heads.push(x);
                }
            }
        }
        if degree(rest).unwrap_or(0) > 0 {
            report.other_factor = Some(poly_string(rest));
        }
        let rest_ok = is_squarefree(rest);
        report.diagonalizable = Some(diag && rest_ok);
        if rest_ok {
            report.chain_heads = Some(heads.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect());
            // N ∩ ker B^T ⊆ Im C^T
            let ok = if heads.is_empty() {
                true
            } else {
                let nb = Mat::from_columns(n, &heads);
                let bt_n = b.transpose().mul(&nb);
                let mut rowspace = Echelon::new(n);
                for r in 0..p {
                    rowspace.insert(c.row(r).to_vec());
                }
                bt_n.nullspace().iter().all(|z| rowspace.contains(&nb.mul_vec(z)))
            };
            report.hypothesis_ok = Some(ok);
        }
    }
    if let Some((list, rest)) = rational_roots(&chi_unc) {
        if degree(&rest).unwrap_or(0) == 0 {
            unc_roots = Some(list.into_iter().map(|(l, _)| l).collect());
        }
    }
    if let Some(u) = &unc_roots {
        report.uncontrollable = u.iter().map(ToString::to_string).collect();
    }

    if reach == n {
        let r = Mat::from_columns(n, &basis);
        let achieved = c.mul(&r).rank();
        report.which_test = Some(WhichTest::DirectRank);
        report.achieved_rank = Some(achieved);
        report.required_rank = Some(p);
        report.verdict = if achieved == p {
            Verdict::OutputControllable
        } else {
            Verdict::NotOutputControllable
        };
        return Ok(report);
    }
    let Some(unc) = unc_roots else {
        report.verdict = Verdict::Inconclusive("an uncontrollable eigenvalue is not rational".into());
        return Ok(report);
    };
    match report.hypothesis_ok {
        None => {
            report.verdict = Verdict::Inconclusive(if roots.is_none() {
                "characteristic polynomial coefficients too large to factor".into()
            } else {
                "repeated eigenvalues outside the rationals".into()
            });
            return Ok(report);
        }
        Some(false) => {
            report.verdict =
                Verdict::Inconclusive("a chain-heading eigenvector in ker B^T lies outside Im C^T".into());
            return Ok(report);
        }
        Some(true) => {}
    }
    let (achieved, required, which) = if unc.len() == 1 {
        let blk = a.shifted(&unc[0]).hstack(b);
        (c.mul(&blk).rank(), p, WhichTest::SingleEigenvalue)
    } else {
        let kc = Mat::from_columns(n, &c.nullspace());
        (block_matrix(a, b, &kc, &unc).rank(), unc.len() * n, WhichTest::Blocks)
    };
    report.which_test = Some(which);
    report.achieved_rank = Some(achieved);
    report.required_rank = Some(required);
    report.verdict = if achieved == required {
        Verdict::OutputControllable
    } else {
        Verdict::NotOutputControllable
    };
    Ok(report)
}

/// Iteration cap of the real Schur decomposition.
pub const SCHUR_MAX_ITERATIONS: usize = 10_000;

/// Relative distance below which computed eigenvalues are merged.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-8;

/// Floating-point test. Non-diagonalizable matrices and failed numerical
/// iterations are reported as inconclusive.
pub fn pbh_float(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<PbhReport> {
    check_dims(a.nrows(), a.shape(), b.shape(), c.shape())?;
    match float_report(a, b, c) {
        Err(Error::Numeric(reason)) => Ok(PbhReport {
            mode: PbhMode::Float,
            n: a.nrows(),
            m: b.ncols(),
            p: c.nrows(),
            reachable_dim: 0,
            eigenvalues: Vec::new(),
            other_factor: None,
            uncontrollable: Vec::new(),
            diagonalizable: None,
            chain_heads: None,
            hypothesis_ok: None,
            which_test: None,
            achieved_rank: None,
            required_rank: None,
            eigenvalue_wise_passes: false,
            verdict: Verdict::Inconclusive(reason),
        }),
        other => other,
    }
}

fn float_report(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<PbhReport> {
    let n = a.nrows();
    let p = c.nrows();
    let bits = DEFAULT_TOLERANCE_BITS;
    let c_rank = svd_rank(c, bits)?;
    if c_rank < p {
        return Err(Error::DegenerateOutput(format!("C has rank {c_rank} < {p}")));
    }
    let reach = svd_rank(&controllability_matrix(a, b), bits)?;
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
    let Some(schur) = Schur::try_new(a.clone(), f64::EPSILON, SCHUR_MAX_ITERATIONS) else {
        return Err(Error::Numeric("eigenvalue iteration did not converge".into()));
    };
    let computed = schur.complex_eigenvalues();
    if computed.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
        return Err(Error::Numeric("eigenvalue computation produced non-finite values".into()));
    }
    for l in computed.iter() {
        match clusters.iter_mut().find(|(c, _)| (c - l).norm() <= EIGEN_CLUSTER_TOL * scale) {
            Some(entry) => entry.1 += 1,
            None => clusters.push((*l, 1)),
        }
    }
    clusters.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));

    let bc = complexify(b);
    let cc = complexify(c);
    let mut eigenvalues = Vec::new();
    let mut diag = true;
    let mut unc = Vec::new();
    let mut all_pass = true;
    for (l, mult) in &clusters {
        let sh = shifted(a, *l);
        let geometric = n - svd_rank(&sh, bits)?;
        diag &= geometric == *mult;
        let blk = hstack(&sh, &bc);
        let uncontrollable = svd_rank(&blk, bits)? < n;
        let output_rank = svd_rank(&(&cc * &blk), bits)?;
        all_pass &= output_rank == p;
        if uncontrollable {
            unc.push(*l);
        }
        eigenvalues.push(Eigenvalue {
            value: format_complex(*l),
            re: l.re,
            im: l.im,
            algebraic: *mult,
            geometric,
            uncontrollable,
            output_rank,
        });
    }
    let mut report = PbhReport {
        mode: PbhMode::Float,
        n,
        m: b.ncols(),
        p,
        reachable_dim: reach,
        eigenvalues,
        other_factor: None,
        uncontrollable: unc.iter().map(|l| format_complex(*l)).collect(),
        diagonalizable: Some(diag),
        chain_heads: if diag { Some(Vec::new()) } else { None },
        hypothesis_ok: if diag { Some(true) } else { None },
        which_test: None,
        achieved_rank: None,
        required_rank: None,
        eigenvalue_wise_passes: all_pass,
        verdict: Verdict::Inconclusive("not evaluated".into()),
    };
    let (achieved, required, which) = if reach == n {
        (svd_rank(&(c * controllability_matrix(a, b)), bits)?, p, WhichTest::DirectRank)
    } else if !diag {
        report.verdict = Verdict::Inconclusive("A is not diagonalizable in floating point".into());
        return Ok(report);
    } else if unc.len() == 1 {
        let blk = hstack(&shifted(a, unc[0]), &bc);
        (svd_rank(&(&cc * &blk), bits)?, p, WhichTest::SingleEigenvalue)
    } else {
        let kc = float_kernel(c);
        let w = n + b.ncols();
        let r = unc.len();
        let mut big = DMatrix::zeros(r * n, r * w + kc.ncols());
        for (i, l) in unc.iter().enumerate() {
            let blk = hstack(&shifted(a, *l), &bc);
            big.view_mut((i * n, i * w), (n, w)).copy_from(&blk);
            big.view_mut((i * n, r * w), (n, kc.ncols())).copy_from(&kc);
        }
        (svd_rank(&big, bits)?, r * n, WhichTest::Blocks)
    };
    report.which_test = Some(which);
    report.achieved_rank = Some(achieved);
    report.required_rank = Some(required);
    report.verdict = if achieved == required {
        Verdict::OutputControllable
    } else {
        Verdict::NotOutputControllable
    };
    Ok(report)
}

fn format_complex(l: Complex<f64>) -> String {
    if l.im.abs() <= f64::EPSILON * l.re.abs().max(1.0) * 16.0 {
        format!("{:.12}", l.re)
    } else {
        format!("{:.12}{:+.12}i", l.re, l.im)
    }
}

/// Orthonormal basis of `ker C` from the full SVD, as complex columns.
fn float_kernel(c: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    let n = c.ncols();
    let p = c.nrows();
    // Pad C to a square matrix so the SVD returns a full right basis.
    let mut sq = DMatrix::zeros(n, n);
    sq.view_mut((0, 0), (p, n)).copy_from(c);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let kernel: Vec<usize> = idx[p..].to_vec();
    complexify(&DMatrix::from_fn(n, kernel.len(), |r, k| vt[(kernel[k], r)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    fn rat(rows: usize, cols: usize, v: &[i64]) -> Mat<BigRational> {
        Mat::from_fn(rows, cols, |r, c| q(v[r * cols + c]))
    }

    #[test]
    fn eigenvalue_wise_test_is_not_sufficient() {
        let a = rat(2, 2, &[1, 0, 0, 0]);
        let b = rat(2, 1, &[0, 0]);
        let c = rat(1, 2, &[1, 1]);
        let r = pbh_rational(&a, &b, &c).unwrap();
        assert!(r.eigenvalue_wise_passes);
        assert_eq!(r.which_test, Some(WhichTest::Blocks));
        assert_eq!((r.achieved_rank, r.required_rank), (Some(3), Some(4)));
        assert_eq!(r.verdict, Verdict::NotOutputControllable);

        let fr = pbh_float(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]), &DMatrix::zeros(2, 1), &DMatrix::from_row_slice(1, 2, &[1.0, 1.0])).unwrap();
        assert_eq!(fr.verdict, Verdict::NotOutputControllable);
        assert_eq!((fr.achieved_rank, fr.required_rank), (Some(3), Some(4)));
    }

    #[test]
    fn single_uncontrollable_mode_seen_by_output() {
        // x1' = u, x2' = 0; y = x1 is reachable, y = x2 is not.
        let a = rat(2, 2, &[0, 0, 0, 0]);
        let b = rat(2, 1, &[1, 0]);
        let good = pbh_rational(&a, &b, &rat(1, 2, &[1, 0])).unwrap();
        assert_eq!(good.which_test, Some(WhichTest::SingleEigenvalue));
        assert_eq!(good.verdict, Verdict::OutputControllable);
        let bad = pbh_rational(&a, &b, &rat(1, 2, &[0, 1])).unwrap();
        assert_eq!(bad.verdict, Verdict::NotOutputControllable);
    }

    #[test]
    fn controllable_system_uses_direct_rank() {
        let a = rat(2, 2, &[0, 0, 1, 0]);
        let b = rat(2, 1, &[1, 0]);
        let r = pbh_rational(&a, &b, &rat(1, 2, &[0, 1])).unwrap();
        assert_eq!(r.which_test, Some(WhichTest::DirectRank));
        assert_eq!(r.verdict, Verdict::OutputControllable);
    }

    #[test]
    fn preconditions() {
        let a = rat(2, 2, &[0, 0, 0, 0]);
        let b = rat(2, 1, &[1, 0]);
        assert!(matches!(pbh_rational(&a, &b, &rat(2, 2, &[1, 0, 0, 1])), Err(Error::Precondition(_))));
        assert!(matches!(pbh_rational(&rat(3, 3, &[0; 9]), &rat(3, 1, &[1, 0, 0]), &rat(2, 3, &[1, 0, 0, 2, 0, 0])), Err(Error::DegenerateOutput(_))));
    }

    #[test]
    fn jordan_chain_head_checked() {
        // Nilpotent chain x1 -> x2 with an uncontrolled copy; A^T has head e1.
        let a = rat(3, 3, &[0, 0, 0, 1, 0, 0, 0, 0, 0]);
        let b = rat(3, 1, &[0, 0, 1]);
        let r = pbh_rational(&a, &b, &rat(1, 3, &[0, 1, 0])).unwrap();
        assert_eq!(r.diagonalizable, Some(false));
        assert_eq!(r.chain_heads.as_ref().map(Vec::len), Some(1));
        assert_eq!(r.hypothesis_ok, Some(false));
        assert!(matches!(r.verdict, Verdict::Inconclusive(_)));
    }
}
