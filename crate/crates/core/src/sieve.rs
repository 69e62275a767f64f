//! The sieve operator U_{r,m}, quadratic-character indicator algebra, and
//! residue-disjointness checks against non-holomorphic supports.

use num_rational::Ratio;

use crate::error::SieveError;
use crate::generators::NonholoSupport;
use crate::series::{Ring, Series};

pub type Rat = Ratio<i64>;

/// U_{r,m}: zeroes every coefficient whose exponent numerator is not
/// congruent to r modulo m. Precision is unchanged.
pub fn sieve<R: Ring>(f: &Series<R>, r: i64, m: u64) -> Series<R> {
    let ring = f.ring().clone();
    let offset = f.offset();
    let mi = m as i64;
    let mut out = f.clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        if (offset + i as i64 - r).rem_euclid(mi) != 0 {
            *c = ring.zero();
        }
    }
    out
}

fn legendre(n: i64, p: i64) -> i64 {
    // Euler's criterion for odd prime p
    let n = n.rem_euclid(p);
    if n == 0 {
        return 0;
    }
    let mut acc = 1i64;
    let mut base = n;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Value tables of the quadratic characters mod 3, 5 and 8.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub chi3: [i64; 3],
    pub chi5: [i64; 5],
    pub chi8: [[i64; 8]; 4],
}

impl CharacterTable {
    pub fn new() -> Self {
        let mut chi3 = [0i64; 3];
        let mut chi5 = [0i64; 5];
        for n in 0..3 {
            chi3[n as usize] = legendre(n, 3);
        }
        for n in 0..5 {
            chi5[n as usize] = legendre(n, 5);
        }
        // the four characters of (Z/8)^*: trivial, mod-4, and the two
        // genuinely mod-8 ones (discriminants 8 and -8)
        let chi8 = [
            [0, 1, 0, 1, 0, 1, 0, 1],
            [0, 1, 0, 1, 0, -1, 0, -1],
            [0, 1, 0, -1, 0, 1, 0, -1],
            [0, 1, 0, -1, 0, -1, 0, 1],
        ];
        CharacterTable { chi3, chi5, chi8 }
    }
}

impl Default for CharacterTable {
    fn default() -> Self {
        Self::new()
    }
}

/// A rational linear combination over a character basis that realizes the
/// indicator of a residue set.
#[derive(Clone, Debug)]
pub struct IndicatorCombo {
    pub modulus: u64,
    /// Human-readable basis labels, parallel to `coeffs`.
    pub basis: Vec<String>,
    pub coeffs: Vec<Rat>,
}

impl IndicatorCombo {
    pub fn eval(&self, n: i64) -> Rat {
        let table = CharacterTable::new();
        let values = basis_values(&table, self.modulus, n);
        self.coeffs
            .iter()
            .zip(values)
            .map(|(c, v)| *c * Rat::from_integer(v))
            .sum()
    }
}

fn basis_values(t: &CharacterTable, modulus: u64, n: i64) -> Vec<i64> {
    let idx = n.rem_euclid(modulus as i64) as usize;
    match modulus {
        3 => vec![t.chi3[idx], t.chi3[idx] * t.chi3[idx]],
        5 => vec![t.chi5[idx], t.chi5[idx] * t.chi5[idx]],
        8 => (0..4).map(|k| t.chi8[k][idx]).collect(),
        _ => unreachable!("modulus validated before basis evaluation"),
    }
}

fn basis_labels(modulus: u64) -> Vec<String> {
    match modulus {
        3 => vec!["chi3".into(), "chi3^2".into()],
        5 => vec!["chi5".into(), "chi5^2".into()],
        8 => (0..4).map(|k| format!("chi8_{k}")).collect(),
        _ => unreachable!(),
    }
}

/// Solves for rational coefficients making the character combination equal
/// 1 on the target residues and 0 on every other residue of the modulus.
pub fn indicator_combo(targets: &[u64], modulus: u64) -> Result<IndicatorCombo, SieveError> {
    if !matches!(modulus, 3 | 5 | 8) {
        return Err(SieveError::UnsupportedModulus(modulus));
    }
    let table = CharacterTable::new();
    let k = if modulus == 8 { 4 } else { 2 };
    // augmented system: one row per residue
    let mut rows: Vec<Vec<Rat>> = (0..modulus)
        .map(|n| {
            let mut row: Vec<Rat> = basis_values(&table, modulus, n as i64)
                .into_iter()
                .map(Rat::from_integer)
                .collect();
            let hit = targets.iter().any(|&t| t % modulus == n);
            row.push(Rat::from_integer(hit as i64));
            row
        })
        .collect();
    // Gaussian elimination
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        if let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != Rat::from_integer(0)) {
            rows.swap(pivot_row, r);
            let inv = rows[pivot_row][col].recip();
            for x in rows[pivot_row].iter_mut() {
                *x *= inv;
            }
            for r in 0..rows.len() {
                if r != pivot_row && rows[r][col] != Rat::from_integer(0) {
                    let factor = rows[r][col];
                    let pivot = rows[pivot_row].clone();
                    for (x, p) in rows[r].iter_mut().zip(&pivot) {
                        *x -= factor * p;
                    }
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    // consistency: zero rows must have zero RHS
    for row in &rows[pivot_row..] {
        if row[k] != Rat::from_integer(0) {
            return Err(SieveError::UnrealizableTarget);
        }
    }
    let mut coeffs = vec![Rat::from_integer(0); k];
    for &(r, c) in &pivots {
        coeffs[c] = rows[r][k];
    }
    let combo = IndicatorCombo {
        modulus,
        basis: basis_labels(modulus),
        coeffs,
    };
    // brute-force validation is the source of truth
    for n in 0..modulus as i64 {
        let want = targets.iter().any(|&t| t % modulus == n as u64);
        if combo.eval(n) != Rat::from_integer(want as i64) {
            return Err(SieveError::UnrealizableTarget);
        }
    }
    Ok(combo)
}

/// Residues n in 0..120 where the product of the three indicator combos of
/// the omega sieve differs from the characteristic function of {83, 107}.
pub fn characteristic_mismatches() -> Vec<u64> {
    let c3 = indicator_combo(&[2], 3).expect("realizable");
    let c5 = indicator_combo(&[2, 3], 5).expect("realizable");
    let c8 = indicator_combo(&[3], 8).expect("realizable");
    (0..120)
        .filter(|&n| {
            let v = c3.eval(n as i64) * c5.eval(n as i64) * c8.eval(n as i64);
            let want = n == 83 || n == 107;
            v != Rat::from_integer(want as i64)
        })
        .collect()
}

/// Exhaustive check that the character product is exactly the characteristic
/// function of {83, 107} modulo 120.
pub fn verify_characteristic_product() -> bool {
    characteristic_mismatches().is_empty()
}

/// True iff no element of the non-holomorphic support is congruent to a
/// target residue modulo m.
pub fn residue_disjoint(targets: &[u64], m: u64, support: &NonholoSupport) -> bool {
    let support = support.residues_mod(m);
    targets
        .iter()
        .all(|&t| !support.contains(&(t % m)))
}

mod fixed {
    //! 192-bit fixed-point arithmetic: a real x is stored as the integer
    //! round(x * 2^192). Plenty of headroom below the 1e-20 tolerance of the
    //! numeric sieve check.

    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};

    pub const BITS: u32 = 192;

    pub fn one() -> BigInt {
        BigInt::from(1) << BITS
    }

    pub fn from_ratio(num: i128, den: i128) -> BigInt {
        assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        div_round(BigInt::from(num) << BITS, &BigInt::from(den))
    }

    fn div_round(num: BigInt, den: &BigInt) -> BigInt {
        // round-half-away-from-zero
        let half = den / 2;
        if num.is_negative() {
            (num - half) / den
        } else {
            (num + half) / den
        }
    }

    pub fn mul(a: &BigInt, b: &BigInt) -> BigInt {
        div_round(a * b, &one())
    }

    pub fn pi() -> BigInt {
        // 75 decimal digits
        let digits = "3141592653589793238462643383279502884197169399375105820974944592307816406";
        let scale = BigInt::from(10u8).pow(digits.len() as u32 - 1);
        div_round(digits.parse::<BigInt>().unwrap() << BITS, &scale)
    }

    pub fn two_pi() -> BigInt {
        pi() << 1
    }

    /// cos and sin with argument reduction to [-pi, pi] and a 60-term Taylor
    /// tail (error far below the comparison tolerance).
    pub fn sincos(x: &BigInt) -> (BigInt, BigInt) {
        let tau = two_pi();
        let k = div_round(x << BITS, &tau) >> BITS;
        let r = x - k * &tau;
        let r2 = mul(&r, &r);
        let mut cos = BigInt::zero();
        let mut sin = BigInt::zero();
        let mut term_c = one();
        let mut term_s = r.clone();
        for i in 1..=60u32 {
            cos += &term_c;
            sin += &term_s;
            let n = 2 * i as i128;
            term_c = -div_round(mul(&term_c, &r2), &BigInt::from((n - 1) * n));
            term_s = -div_round(mul(&term_s, &r2), &BigInt::from(n * (n + 1)));
        }
        (sin, cos)
    }

    /// e^x for fixed-point x of either sign; underflows to exact zero.
    pub fn exp(x: &BigInt) -> BigInt {
        if x.is_negative() {
            let ip = (-x) >> BITS;
            if ip >= BigInt::from(140) {
                return BigInt::zero(); // below 2^-192 resolution
            }
        }
        let neg = x.is_negative();
        let ax = x.abs();
        let k: BigInt = &ax >> BITS;
        let k = u32::try_from(&k).expect("exponent integer part fits u32");
        let frac = &ax - (BigInt::from(k) << BITS);
        let mut sum = BigInt::zero();
        let mut term = one();
        for i in 1..=60u32 {
            sum += &term;
            term = div_round(mul(&term, &frac), &BigInt::from(i));
        }
        let e1 = euler();
        let mut result = sum;
        let mut base = e1;
        let mut p = k;
        while p > 0 {
            if p & 1 == 1 {
                result = mul(&result, &base);
            }
            base = mul(&base, &base);
            p >>= 1;
        }
        if neg {
            if result.is_zero() {
                return BigInt::zero();
            }
            // (2^384 / (x * 2^192)) = (1/x) * 2^192
            div_round(one() << BITS, &result)
        } else {
            result
        }
    }

    fn euler() -> BigInt {
        let mut sum = BigInt::zero();
        let mut term = one();
        for i in 1..=80u32 {
            sum += &term;
            term = div_round(term, &BigInt::from(i));
        }
        sum
    }
}

use num_bigint::BigInt;
use num_traits::Zero;

use crate::series::Integers;

type Complex = (BigInt, BigInt);

fn c_add(a: &Complex, b: &Complex) -> Complex {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn c_mul(a: &Complex, b: &Complex) -> Complex {
    (
        fixed::mul(&a.0, &b.0) - fixed::mul(&a.1, &b.1),
        fixed::mul(&a.0, &b.1) + fixed::mul(&a.1, &b.0),
    )
}

fn c_norm2(a: &Complex) -> BigInt {
    fixed::mul(&a.0, &a.0) + fixed::mul(&a.1, &a.1)
}

/// e^{2 pi i theta} for rational theta.
fn cis_ratio(num: i128, den: i128) -> Complex {
    let angle = fixed::mul(&fixed::two_pi(), &fixed::from_ratio(num, den));
    let (s, c) = fixed::sincos(&angle);
    (c, s)
}

/// Evaluates f at tau = x + iy (both rational): sum a_n e^{2 pi i n tau / w}.
fn eval_series(f: &Series<Integers>, x: (i128, i128), y: (i128, i128)) -> Complex {
    let w = f.w() as i128;
    let mut acc: Complex = (BigInt::zero(), BigInt::zero());
    for (i, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let n = (f.offset() + i as i64) as i128;
        // |q^{n/w}| = e^{-2 pi y n / w}
        let decay = fixed::mul(
            &fixed::two_pi(),
            &fixed::from_ratio(-y.0 * n, y.1 * w),
        );
        let radius = fixed::exp(&decay);
        if radius.is_zero() {
            continue;
        }
        let phase = cis_ratio(x.0 * n, x.1 * w);
        let term = (fixed::mul(&radius, &phase.0), fixed::mul(&radius, &phase.1));
        acc = c_add(&acc, &(a * &term.0, a * &term.1));
    }
    acc
}

/// Numerically validates the roots-of-unity representation of the sieve:
/// U_{r,m} f(tau) = (1/m) sum_{s mod m} zeta_m^{rs} f(tau - ws/m),
/// at `samples` points in the upper half-plane, to 1e-20 relative tolerance.
/// A validation utility, not a production path.
pub fn shift_representation_check(
    f: &Series<Integers>,
    r: i64,
    m: u64,
    samples: usize,
) -> Result<bool, SieveError> {
    if f.len() > 1000 {
        return Err(SieveError::InsufficientPrecision {
            have: f.precision_end(),
            need: 1000,
        });
    }
    let sieved = sieve(f, r, m);
    let inv_m = fixed::from_ratio(1, m as i128);
    let w = f.w() as i128;
    for t in 0..samples.max(1) as i128 {
        // tau_t = (2t+1)/(4S+5) + i (4/5 + t/(10 S + 10))
        let s_count = samples.max(1) as i128;
        let x = (2 * t + 1, 4 * s_count + 5);
        let y = (
            4 * (10 * s_count + 10) + 5 * t,
            5 * (10 * s_count + 10),
        );
        let lhs = eval_series(&sieved, x, y);
        let mut rhs: Complex = (BigInt::zero(), BigInt::zero());
        for s in 0..m as i128 {
            let zeta = cis_ratio(r as i128 * s, m as i128);
            // x - ws/m on a common denominator
            let xs = (x.0 * m as i128 - w * s * x.1, x.1 * m as i128);
            let val = eval_series(f, xs, y);
            rhs = c_add(&rhs, &c_mul(&zeta, &val));
        }
        rhs = (fixed::mul(&rhs.0, &inv_m), fixed::mul(&rhs.1, &inv_m));
        let diff = (&lhs.0 - &rhs.0, &lhs.1 - &rhs.1);
        let err2 = c_norm2(&diff);
        let scale2 = c_norm2(&lhs)
            .max(c_norm2(&rhs))
            .max(fixed::one());
        // |diff| <= 1e-20 * scale, compared exactly after squaring
        if err2 * BigInt::from(10u8).pow(40) > scale2 {
            return Ok(false);
        }
    }
    Ok(true)
}
