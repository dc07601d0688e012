//! Univariate polynomials with rational coefficients, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Mat;

pub type Poly = Vec<BigRational>;

/// Largest constant or leading coefficient whose divisors are enumerated.
pub const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000_000;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Quotient and remainder of `a / b`; `b` must be nonzero.
pub fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let db = degree(&b).expect("division by zero polynomial");
    let mut r = trim(a.clone());
    let Some(da) = degree(&r) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); da - db + 1];
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &lead;
        for (i, c) in b.iter().enumerate() {
            let v = &r[dr - db + i] - &f * c;
            r[dr - db + i] = v;
        }
        q[dr - db] = f;
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while degree(&y).is_some() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    match degree(&x) {
        Some(d) => {
            let lead = x[d].clone();
            x.iter().map(|c| c / &lead).collect()
        }
        None => x,
    }
}

/// Characteristic polynomial `det(xI - A)` (Faddeev–LeVerrier).
pub fn charpoly(a: &Mat<BigRational>) -> Poly {
    let n = a.rows();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = Mat::<BigRational>::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = a.mul(&next);
        let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + am.get(i, i));
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
        m = next;
    }
    coeffs
}

/// Integer multiple of `p` with coprime coefficients.
fn primitive(p: &Poly) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|c| c / &g).collect()
    }
}

fn divisors(v: u64) -> Vec<u64> {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = v;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut out = vec![1u64];
    for (p, e) in factors {
        let current = out.clone();
        let mut pow = 1;
        for _ in 0..e {
            pow *= p;
            out.extend(current.iter().map(|x| x * pow));
        }
    }
    out.sort_unstable();
    out
}

/// Rational roots with multiplicities and the remaining factor without
/// rational roots. `None` if the coefficients are too large to search.
pub fn rational_roots(p: &Poly) -> Option<(Vec<(BigRational, usize)>, Poly)> {
    let mut rest = trim(p.clone());
    let mut roots = Vec::new();
    let zero_mult = rest.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if zero_mult > 0 {
        rest.drain(..zero_mult);
        roots.push((BigRational::zero(), zero_mult));
    }
    if degree(&rest).unwrap_or(0) == 0 {
        return Some((roots, rest));
    }
    let ints = primitive(&rest);
    let a0 = ints[0].abs().to_u64().filter(|&v| v <= ROOT_SEARCH_LIMIT)?;
    let an = ints[ints.len() - 1].abs().to_u64().filter(|&v| v <= ROOT_SEARCH_LIMIT)?;
    let qs = divisors(an);
    for pn in divisors(a0) {
        for &qd in &qs {
            if pn.gcd(&qd) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(sign) * BigInt::from(pn), BigInt::from(qd));
                let mut mult = 0;
                loop {
                    if degree(&rest).unwrap_or(0) == 0 || !eval(&rest, &r).is_zero() {
                        break;
                    }
                    let (q, _) = divrem(&rest, &vec![-r.clone(), BigRational::one()]);
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((r, mult));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some((roots, rest))
}

/// Whether `p` has no repeated roots over the complex numbers.
pub fn is_squarefree(p: &Poly) -> bool {
    match degree(p) {
        None | Some(0) => true,
        Some(_) => degree(&gcd(p, &derivative(p))) == Some(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn poly(c: &[i64]) -> Poly {
        c.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn charpoly_of_companion_like_matrix() {
        // [[0, 2], [1, 0]] has x^2 - 2.
        let a = Mat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => q(2),
            (1, 0) => q(1),
            _ => q(0),
        });
        assert_eq!(charpoly(&a), poly(&[-2, 0, 1]));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // x^2 (x - 1)^2 (2x + 3) (x^2 - 2)
        let mut p = poly(&[1]);
        for f in [poly(&[0, 1]), poly(&[0, 1]), poly(&[-1, 1]), poly(&[-1, 1]), poly(&[3, 2]), poly(&[-2, 0, 1])] {
            let mut out = vec![q(0); p.len() + f.len() - 1];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] = &out[i + j] + a * b;
                }
            }
            p = out;
        }
        let (roots, rest) = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![(BigRational::new(BigInt::from(-3), BigInt::from(2)), 1), (q(0), 2), (q(1), 2)]);
        assert_eq!(degree(&rest), Some(2));
        assert!(is_squarefree(&rest));
        assert!(!is_squarefree(&poly(&[1, -2, 1])));
    }

    #[test]
    fn gcd_and_division() {
        let a = poly(&[-1, 0, 1]); // (x-1)(x+1)
        let b = poly(&[-1, 1]);
        assert_eq!(gcd(&a, &b), b);
        let (qt, r) = divrem(&a, &b);
        assert_eq!(qt, poly(&[1, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn divisors_of_small_numbers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(13), vec![1, 13]);
    }
}
