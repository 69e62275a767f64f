//! Coefficient streams of the mock theta functions omega, f and the Cesaro
//! function C, their embeddings as holomorphic parts, and descriptors of the
//! accompanying non-holomorphic supports.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::series::{euler_product, pentagonal_terms, Ring, Series};

/// Which of the two harmonic-Maass families a computation belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cesaro,
    Omega,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cesaro => write!(f, "cesaro"),
            Family::Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cesaro" => Ok(Family::Cesaro),
            "omega" => Ok(Family::Omega),
            other => Err(format!("unknown family {other}")),
        }
    }
}

/// Generator selector for the three coefficient streams.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesId {
    Omega,
    Cesaro,
    F,
}

impl fmt::Display for SeriesId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesId::Omega => write!(f, "omega"),
            SeriesId::Cesaro => write!(f, "cesaro"),
            SeriesId::F => write!(f, "f"),
        }
    }
}

impl FromStr for SeriesId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "omega" => Ok(SeriesId::Omega),
            "cesaro" => Ok(SeriesId::Cesaro),
            "f" => Ok(SeriesId::F),
            other => Err(format!("unknown series {other} (expected omega, cesaro or f)")),
        }
    }
}

/// Generates the selected coefficient stream to precision `n_max`.
pub fn generate<R: Ring>(id: SeriesId, n_max: i64, ring: R) -> Series<R> {
    match id {
        SeriesId::Omega => omega_series(n_max, ring),
        SeriesId::Cesaro => cesaro_series(n_max, ring),
        SeriesId::F => f_series(n_max, ring),
    }
}

/// Coefficients of omega: `sum_n q^{2n^2+2n} / ((1-q)^2 (1-q^3)^2 ... (1-q^{2n+1})^2)`.
///
/// The running denominator is maintained incrementally with two binomial
/// divisions per Eulerian term, `O(N sqrt N)` ring operations in total.
pub fn omega_series<R: Ring>(n_max: i64, ring: R) -> Series<R> {
    assert!(n_max >= 1);
    let mut acc = Series::zero(ring.clone(), 1, 0, n_max as usize);
    let mut denom = Series::one(ring.clone(), n_max as usize);
    let mut n = 0i64;
    loop {
        let shift = 2 * n * n + 2 * n;
        if shift >= n_max {
            break;
        }
        let odd = 2 * n + 1;
        if odd < n_max {
            denom = denom.mul_binomial(odd as u32, -1, -2);
        }
        accumulate_shifted(&mut acc, &denom, shift);
        n += 1;
    }
    acc
}

/// Coefficients of the third-order mock theta function f:
/// `1 + sum_{n>=1} q^{n^2} / ((1+q)^2 ... (1+q^n)^2)`.
pub fn f_series<R: Ring>(n_max: i64, ring: R) -> Series<R> {
    assert!(n_max >= 1);
    let mut acc = Series::zero(ring.clone(), 1, 0, n_max as usize);
    acc.coeffs_mut()[0] = ring.one();
    let mut denom = Series::one(ring.clone(), n_max as usize);
    let mut n = 1i64;
    loop {
        let shift = n * n;
        if shift >= n_max {
            break;
        }
        if n < n_max {
            denom = denom.mul_binomial(n as u32, 1, -2);
        }
        accumulate_shifted(&mut acc, &denom, shift);
        n += 1;
    }
    acc
}

/// Coefficients of the Cesaro function C via the theta-quotient form
/// `2 P(q) B(q)` with `P = prod (1-q^{2n-1})/(1-q^{2n})` and
/// `2B = 1 + 4 sum_{m>=1} q^{m(m+1)/2} / (1+q^m)` (bilateral sum folded).
///
/// `P = E(q) / E(q^2)^2` is applied through sparse pentagonal
/// multiplication/division, never a dense product.
pub fn cesaro_series<R: Ring>(n_max: i64, ring: R) -> Series<R> {
    assert!(n_max >= 1);
    // doubled bilateral sum: geometric expansion of each q^{T_m}/(1+q^m)
    let mut two_b = Series::zero(ring.clone(), 1, 0, n_max as usize);
    two_b.coeffs_mut()[0] = ring.one();
    let four = ring.from_i64(4);
    let mut m = 1i64;
    while m * (m + 1) / 2 < n_max {
        let t = m * (m + 1) / 2;
        let mut e = t;
        let mut sign = true;
        while e < n_max {
            let c = &mut two_b.coeffs_mut()[e as usize];
            *c = if sign { ring.add(c, &four) } else { ring.sub(c, &four) };
            sign = !sign;
            e += m;
        }
        m += 1;
    }
    let pent = pentagonal_terms(n_max);
    let pent_sq: Vec<(i64, i64)> = pent
        .iter()
        .map(|&(e, c)| (2 * e, c))
        .filter(|&(e, _)| e < n_max)
        .collect();
    two_b
        .mul_sparse(&pent)
        .truncated(n_max)
        .div_sparse(&pent_sq)
        .div_sparse(&pent_sq)
}

fn accumulate_shifted<R: Ring>(acc: &mut Series<R>, term: &Series<R>, shift: i64) {
    let ring = acc.ring().clone();
    let n = acc.len();
    let upto = n.saturating_sub(shift as usize);
    let src = &term.coeffs()[..upto];
    for (i, c) in src.iter().enumerate() {
        let dst = &mut acc.coeffs_mut()[i + shift as usize];
        *dst = ring.add(dst, c);
    }
}

/// The series actually sitting inside the harmonic Maass form:
/// cesaro: `a_C(n)` at numerator `8n-1` on the `q^{1/8}` lattice
/// (the holomorphic part of h_1, unit prefactor dropped);
/// omega: `2 a_omega(n)` at exponent `3n+2` (the holomorphic part of H_2(6 tau)).
pub fn embedded_series<R: Ring>(family: Family, n_max: i64, ring: R) -> Series<R> {
    match family {
        Family::Cesaro => {
            let c = cesaro_series(n_max, ring.clone());
            let end = 8 * (n_max - 1); // exclusive: last stored numerator is 8(n_max-1)-1
            let mut s = Series::zero(ring, 8, -1, (end - (-1)) as usize);
            for n in 0..n_max {
                let idx = (8 * n - 1 - s.offset()) as usize;
                s.coeffs_mut()[idx] = c.coeff(n).expect("within precision");
            }
            s
        }
        Family::Omega => {
            let o = omega_series(n_max, ring.clone());
            let two = ring.from_i64(2);
            let end = 3 * (n_max - 1) + 3;
            let mut s = Series::zero(ring.clone(), 1, 2, (end - 2) as usize);
            for n in 0..n_max {
                let idx = (3 * n + 2 - s.offset()) as usize;
                s.coeffs_mut()[idx] = ring.mul(&two, &o.coeff(n).expect("within precision"));
            }
            s
        }
    }
}

/// Support of the non-holomorphic part, as a predicate on exponent
/// numerators of the family's lattice.
///
/// cesaro: numerators `-2(2k+1)^2`, k in Z, in units `q^{1/8}`;
/// omega: exponents `-k^2` with `k >= 1`, `k = 1 (mod 3)`.
#[derive(Clone, Copy, Debug)]
pub struct NonholoSupport {
    pub family: Family,
    pub w: u32,
}

pub fn nonholo_support(family: Family) -> NonholoSupport {
    match family {
        Family::Cesaro => NonholoSupport { family, w: 8 },
        Family::Omega => NonholoSupport { family, w: 1 },
    }
}

impl NonholoSupport {
    /// Exact membership test on exponent numerators.
    pub fn contains(&self, numerator: i64) -> bool {
        match self.family {
            Family::Cesaro => {
                // -2(2k+1)^2: negative, and -n/2 an odd perfect square
                if numerator >= 0 || numerator % 2 != 0 {
                    return false;
                }
                let half = -numerator / 2;
                let r = isqrt(half);
                r * r == half && r % 2 == 1
            }
            Family::Omega => {
                if numerator >= 0 {
                    return false;
                }
                let k = isqrt(-numerator);
                k * k == -numerator && k >= 1 && k % 3 == 1
            }
        }
    }

    /// All residues modulo `m` met by the support (squares repeat mod m, so
    /// exhausting the parameter modulo a small multiple of m is complete).
    pub fn residues_mod(&self, m: u64) -> Vec<u64> {
        let m = m as i64;
        let mut out: Vec<u64> = match self.family {
            Family::Cesaro => (0..2 * m)
                .map(|k| (-2 * (2 * k + 1) * (2 * k + 1)).rem_euclid(m) as u64)
                .collect(),
            Family::Omega => (0..3 * m)
                .filter(|k| k % 3 == 1)
                .map(|k| (-k * k).rem_euclid(m) as u64)
                .collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `prod (1-q^{2n-1}) / prod (1-q^{2n})` — the theta-quotient prefactor of C.
/// Exposed for cross-checks.
pub fn cesaro_prefactor<R: Ring>(n_max: i64, ring: R) -> Series<R> {
    let pent_sq: Vec<(i64, i64)> = pentagonal_terms(n_max)
        .iter()
        .map(|&(e, c)| (2 * e, c))
        .filter(|&(e, _)| e < n_max)
        .collect();
    euler_product(ring, n_max)
        .div_sparse(&pent_sq)
        .div_sparse(&pent_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Integers, Residues};

    fn first(s: &Series<Integers>, k: i64) -> Vec<i64> {
        (0..k).map(|n| s.coeff_i64(n)).collect()
    }

    #[test]
    fn omega_first_coefficients() {
        let s = omega_series(6, Integers);
        assert_eq!(first(&s, 6), vec![1, 2, 3, 4, 6, 8]);
    }

    #[test]
    fn omega_truncation_one() {
        let s = omega_series(1, Integers);
        assert_eq!(s.coeff_i64(0), 1);
    }

    #[test]
    fn omega_theorem_instances_n0() {
        let s = omega_series(40, Integers);
        assert_eq!(s.coeff_i64(27) % 5, 0);
        assert_eq!(s.coeff_i64(35) % 5, 0);
    }

    #[test]
    fn cesaro_first_coefficients() {
        let s = cesaro_series(4, Integers);
        assert_eq!(first(&s, 4), vec![1, 3, -7, 14]);
    }

    #[test]
    fn cesaro_theorem_instances_n0() {
        let s = cesaro_series(8, Integers);
        assert_eq!(s.coeff_i64(1) % 3, 0);
        assert_eq!(s.coeff_i64(2) % 7, 0);
        assert_eq!(s.coeff_i64(3) % 7, 0);
        assert_eq!(s.coeff_i64(5) % 7, 0);
    }

    #[test]
    fn cesaro_prefactor_expansion() {
        let p = cesaro_prefactor(4, Integers);
        assert_eq!(first(&p, 4), vec![1, -1, 1, -2]);
    }

    #[test]
    fn f_first_coefficients() {
        let s = f_series(6, Integers);
        assert_eq!(first(&s, 6), vec![1, 1, -2, 3, -3, 3]);
    }

    #[test]
    fn f_truncation_one() {
        assert_eq!(f_series(1, Integers).coeff_i64(0), 1);
    }

    #[test]
    fn generators_reduce_mod_commutes() {
        let n = 80;
        for id in [SeriesId::Omega, SeriesId::Cesaro, SeriesId::F] {
            let z = generate(id, n, Integers).reduce_mod(5);
            let m = generate(id, n, Residues::new(5));
            assert_eq!(z.coeffs(), m.coeffs(), "{id}");
        }
        let z2 = f_series(n, Integers).reduce_mod(2);
        let m2 = f_series(n, Residues::new(2));
        assert_eq!(z2.coeffs(), m2.coeffs());
    }

    #[test]
    fn embedded_cesaro_lattice() {
        let s = embedded_series(Family::Cesaro, 3, Integers);
        assert_eq!(s.w(), 8);
        assert_eq!(s.coeff_i64(-1), 1);
        assert_eq!(s.coeff_i64(7), 3);
        assert_eq!(s.coeff_i64(0), 0);
        // a_C(3n+1) sits at numerator 24n+7
        let big = embedded_series(Family::Cesaro, 20, Integers);
        let plain = cesaro_series(20, Integers);
        for n in 0..6 {
            assert_eq!(
                big.coeff_i64(24 * n + 7),
                plain.coeff_i64(3 * n + 1)
            );
        }
    }

    #[test]
    fn embedded_omega_lattice() {
        let s = embedded_series(Family::Omega, 40, Integers);
        let o = omega_series(40, Integers);
        assert_eq!(s.coeff_i64(83), 2 * o.coeff_i64(27));
        assert_eq!(s.coeff_i64(107), 2 * o.coeff_i64(35));
        assert_eq!(s.coeff_i64(2), 2);
    }

    #[test]
    fn nonholo_membership() {
        let c = nonholo_support(Family::Cesaro);
        assert!(c.contains(-2)); // k = 0
        assert!(c.contains(-18)); // k = 1
        assert!(!c.contains(7));
        assert!(!c.contains(-4));
        let o = nonholo_support(Family::Omega);
        assert!(o.contains(-1)); // k = 1
        assert!(!o.contains(-4)); // k = 2, not 1 mod 3
        assert!(o.contains(-16)); // k = 4
    }

    #[test]
    fn nonholo_residues_match_enumeration() {
        for family in [Family::Cesaro, Family::Omega] {
            let s = nonholo_support(family);
            for m in [8u64, 24, 120] {
                let via_residues = s.residues_mod(m);
                let mut direct: Vec<u64> = (-1_000_000i64..0)
                    .filter(|&n| s.contains(n))
                    .map(|n| n.rem_euclid(m as i64) as u64)
                    .collect();
                direct.sort_unstable();
                direct.dedup();
                assert_eq!(via_residues, direct, "{family} mod {m}");
            }
        }
    }
}
