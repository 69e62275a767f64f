//! Independent reference computations used to cross-check the generators.
//!
//! These deliberately avoid the production code paths: the brute-force
//! expansions use dense arithmetic on one Eulerian summand at a time, and the
//! Cesaro oracle works from the Eulerian series whose averaged partial sums
//! converge coefficient-wise.

use num_bigint::BigInt;
use num_rational::BigRational;
use crate::series::{Integers, Series};

/// Brute-force omega: each summand `q^{2n^2+2n} / prod_j (1-q^{2j+1})^2` is
/// expanded independently with dense products and a dense inversion.
pub fn omega_brute(n_max: i64) -> Series<Integers> {
    let mut acc = Series::zero(Integers, 1, 0, n_max as usize);
    let mut n = 0i64;
    while 2 * n * n + 2 * n < n_max {
        let mut denom = Series::one(Integers, n_max as usize);
        for j in 0..=n {
            let e = 2 * j + 1;
            if e >= n_max {
                continue;
            }
            let factor = binomial_dense(e, -1, n_max);
            denom = denom.mul_dense(&factor).unwrap().mul_dense(&factor).unwrap();
        }
        let term = denom.invert().unwrap().shifted(2 * n * n + 2 * n);
        acc = acc.add(&term.truncated(n_max)).unwrap();
        n += 1;
    }
    acc
}

/// Brute-force f with denominators `prod_j (1+q^j)^2`, dense arithmetic.
pub fn f_brute(n_max: i64) -> Series<Integers> {
    let mut acc = Series::one(Integers, n_max as usize);
    let mut n = 1i64;
    while n * n < n_max {
        let mut denom = Series::one(Integers, n_max as usize);
        for j in 1..=n {
            if j >= n_max {
                continue;
            }
            let factor = binomial_dense(j, 1, n_max);
            denom = denom.mul_dense(&factor).unwrap().mul_dense(&factor).unwrap();
        }
        let term = denom.invert().unwrap().shifted(n * n);
        acc = acc.add(&term.truncated(n_max)).unwrap();
        n += 1;
    }
    acc
}

/// `1 + sign*q^e` as a dense series to precision `n_max`.
fn binomial_dense(e: i64, sign: i64, n_max: i64) -> Series<Integers> {
    let mut s = Series::zero(Integers, 1, 0, n_max as usize);
    s.coeffs_mut()[0] = BigInt::from(1);
    s.coeffs_mut()[e as usize] = BigInt::from(sign);
    s
}

/// Result of the Cesaro-sense evaluation of the Eulerian series
/// `sum_n (-1)^n (q;q^2)_n / (-q;q)_n^2`.
pub struct CesaroOracle {
    /// Coefficient-wise limit of the averaged partial sums `(S_T + S_{T+1})/2`,
    /// as exact rationals.
    pub coeffs: Vec<BigRational>,
    /// Number of leading coefficients that stabilized within the requested
    /// number of terms; entries past this index are unreliable.
    pub stabilized: usize,
}

/// Averages consecutive partial sums of the oscillating Eulerian series.
/// `terms >= 2*n_max + 4` empirically stabilizes all requested coefficients.
pub fn cesaro_oracle(n_max: i64, terms: usize) -> CesaroOracle {
    assert!(terms >= 4);
    let prec = n_max as usize;
    // term_n = (-1)^n (q;q^2)_n / (-q;q)_n^2, built up incrementally
    let mut term = Series::one(Integers, prec);
    let mut partial = term.clone(); // S_0
    let mut sums: Vec<Series<Integers>> = Vec::with_capacity(terms + 2);
    sums.push(partial.clone());
    for n in 1..=(terms + 1) as i64 {
        term = term.negate();
        if 2 * n - 1 < n_max {
            term = term.mul_binomial((2 * n - 1) as u32, -1, 1);
        }
        if n < n_max {
            term = term.mul_binomial(n as u32, 1, -2);
        }
        partial = partial.add(&term).unwrap();
        sums.push(partial.clone());
    }
    // A_T = S_T + S_{T+1}; compare the last two available averages to find
    // the stabilized prefix.
    let a_last = sums[terms].add(&sums[terms + 1]).unwrap();
    let a_prev = sums[terms - 1].add(&sums[terms]).unwrap();
    let mut stabilized = 0;
    while stabilized < prec
        && a_last.coeff(stabilized as i64).unwrap() == a_prev.coeff(stabilized as i64).unwrap()
    {
        stabilized += 1;
    }
    let two = BigInt::from(2);
    let coeffs = (0..prec)
        .map(|i| BigRational::new(a_last.coeff(i as i64).unwrap(), two.clone()))
        .collect();
    CesaroOracle { coeffs, stabilized }
}

impl CesaroOracle {
    /// Indices (below the stabilized prefix) where `lambda * oracle` differs
    /// from the supplied integer series.
    pub fn mismatches(&self, lambda: &BigRational, series: &Series<Integers>) -> Vec<usize> {
        let upto = self
            .stabilized
            .min((series.precision_end().max(0)) as usize)
            .min(self.coeffs.len());
        (0..upto)
            .filter(|&i| {
                let lhs = lambda * &self.coeffs[i];
                let rhs = BigRational::from(series.coeff(i as i64).unwrap());
                lhs != rhs
            })
            .collect()
    }
}
