//! Truncated formal power series in a fractional exponent lattice `q^{1/w}`.
//!
//! A [`Series`] stores the coefficients of `q^{(offset+i)/w}` for
//! `i = 0..len`, over either the integers ([`Integers`]) or the residues
//! modulo `m` ([`Residues`]). Precision is tracked pessimistically: every
//! operation records the largest exponent numerator to which the result is
//! trustworthy, and reading beyond that bound is an error rather than silent
//! garbage.

use std::fmt;
use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::SeriesError;

/// Coefficient arithmetic behind a [`Series`].
///
/// `modulus() == 0` means the ring of integers; `m >= 2` means canonical
/// residues in `[0, m)`.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn modulus(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    // takes &self: the ring value carries the modulus
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse(&self, s: &str) -> Option<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
}

/// The ring of integers, with arbitrary-precision coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn modulus(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.is_one() || (-a).is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn parse(&self, s: &str) -> Option<BigInt> {
        s.parse().ok()
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// Residues modulo `m >= 2`, stored as canonical machine-word values.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Residues {
    m: u64,
}

impl Residues {
    pub fn new(m: u64) -> Self {
        assert!(m >= 2, "modulus must be 0 or >= 2");
        Residues { m }
    }
}

impl Ring for Residues {
    type Elem = u64;

    fn modulus(&self) -> u64 {
        self.m
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.m as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        let (g, x, _) = ext_gcd(*a as i128, self.m as i128);
        if g != 1 {
            return None;
        }
        Some(x.rem_euclid(self.m as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse(&self, s: &str) -> Option<u64> {
        let v: i64 = s.parse().ok()?;
        Some(self.from_i64(v))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`, `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Truncated formal q-expansion with exact coefficients.
///
/// The coefficient of `q^{(offset+i)/w}` is `coeffs[i]`. Everything below
/// `offset` is exactly zero; everything at numerator `>= precision_end()` is
/// unknown.
#[derive(Clone, Debug)]
pub struct Series<R: Ring> {
    ring: R,
    w: u32,
    offset: i64,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Series<R> {
    pub fn new(ring: R, w: u32, offset: i64, coeffs: Vec<R::Elem>) -> Self {
        assert!(w >= 1);
        Series {
            ring,
            w,
            offset,
            coeffs,
        }
    }

    /// The constant series 1, on the integer lattice, known up to `q^prec`.
    pub fn one(ring: R, prec: usize) -> Self {
        assert!(prec >= 1);
        let mut coeffs = vec![ring.zero(); prec];
        coeffs[0] = ring.one();
        Series::new(ring, 1, 0, coeffs)
    }

    pub fn zero(ring: R, w: u32, offset: i64, len: usize) -> Self {
        let coeffs = vec![ring.zero(); len];
        Series::new(ring, w, offset, coeffs)
    }

    /// `q^{numerator/w}` known up to numerator `end` (exclusive).
    pub fn monomial(ring: R, w: u32, numerator: i64, end: i64) -> Self {
        assert!(end > numerator);
        let mut s = Series::zero(ring.clone(), w, numerator, (end - numerator) as usize);
        s.coeffs[0] = ring.one();
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn w(&self) -> u32 {
        self.w
    }
    pub fn offset(&self) -> i64 {
        self.offset
    }
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    pub fn coeffs_mut(&mut self) -> &mut [R::Elem] {
        &mut self.coeffs
    }

    /// Exclusive numerator bound up to which coefficients are trustworthy.
    pub fn precision_end(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    /// Coefficient at exponent numerator `n`. Numerators below the offset are
    /// exactly zero; reading past the precision bound is an error.
    pub fn coeff(&self, n: i64) -> Result<R::Elem, SeriesError> {
        if n >= self.precision_end() {
            return Err(SeriesError::PrecisionExceeded {
                requested: n,
                end: self.precision_end(),
            });
        }
        if n < self.offset {
            return Ok(self.ring.zero());
        }
        Ok(self.coeffs[(n - self.offset) as usize].clone())
    }

    /// Numerator of the lowest nonzero stored coefficient, if any.
    pub fn leading_numerator(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .map(|i| self.offset + i as i64)
    }

    /// Re-expresses the series on the lattice `q^{1/(w*k)}`.
    fn stretch(&self, k: u32) -> Self {
        if k == 1 {
            return self.clone();
        }
        let k64 = k as i64;
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() * k as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        Series::new(
            self.ring.clone(),
            self.w * k,
            self.offset * k64,
            coeffs,
        )
    }

    fn check_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch);
        }
        Ok(())
    }

    fn on_common_lattice(&self, other: &Self) -> (Self, Self) {
        let w = self.w.lcm(&other.w);
        (self.stretch(w / self.w), other.stretch(w / other.w))
    }

    /// Coefficient-wise sum; precision is the minimum of the two bounds.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let (a, b) = self.on_common_lattice(other);
        let offset = a.offset.min(b.offset);
        let end = a.precision_end().min(b.precision_end());
        let mut out = Series::zero(a.ring.clone(), a.w, offset, (end - offset).max(0) as usize);
        for src in [&a, &b] {
            for (i, c) in src.coeffs.iter().enumerate() {
                let n = src.offset + i as i64;
                if n < end {
                    let j = (n - offset) as usize;
                    out.coeffs[j] = out.ring.add(&out.coeffs[j], c);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = out.ring.neg(c);
        }
        out
    }

    /// Schoolbook Cauchy product, truncated to the valid joint precision.
    /// Only intended for desk-scale operands; large-scale generation goes
    /// through [`Series::mul_binomial`] and the sparse pentagonal routines.
    pub fn mul_dense(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let (a, b) = self.on_common_lattice(other);
        let offset = a.offset + b.offset;
        // a is valid below end_a, so products a_i * b_j are valid for
        // i + j < min(end_a + off_b, end_b + off_a).
        let end = (a.precision_end() + b.offset).min(b.precision_end() + a.offset);
        let len = (end - offset).max(0) as usize;
        let mut out = Series::zero(a.ring.clone(), a.w, offset, len);
        for (i, ca) in a.coeffs.iter().enumerate() {
            if a.ring.is_zero(ca) {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.ring.is_zero(cb) {
                    continue;
                }
                let p = out.ring.mul(ca, cb);
                out.coeffs[i + j] = out.ring.add(&out.coeffs[i + j], &p);
            }
        }
        Ok(out)
    }

    /// Multiplies in place by `(1 + sign*q^{exp/w})^power` using the two-term
    /// recurrence; `power < 0` divides. Costs `O(len * |power|)` ring ops.
    pub fn mul_binomial(&self, exp: u32, sign: i64, power: i64) -> Self {
        assert!(exp >= 1, "binomial exponent must be positive");
        assert!(sign == 1 || sign == -1);
        let mut out = self.clone();
        let e = exp as usize;
        let n = out.coeffs.len();
        for _ in 0..power.unsigned_abs() {
            if power > 0 {
                // multiply: c'_n = c_n + sign*c_{n-e}
                for i in (e..n).rev() {
                    let t = out.coeffs[i - e].clone();
                    out.coeffs[i] = if sign > 0 {
                        out.ring.add(&out.coeffs[i], &t)
                    } else {
                        out.ring.sub(&out.coeffs[i], &t)
                    };
                }
            } else {
                // divide: c'_n = c_n - sign*c'_{n-e}
                for i in e..n {
                    let t = out.coeffs[i - e].clone();
                    out.coeffs[i] = if sign > 0 {
                        out.ring.sub(&out.coeffs[i], &t)
                    } else {
                        out.ring.add(&out.coeffs[i], &t)
                    };
                }
            }
        }
        out
    }

    /// Multiplicative inverse by the leading-unit recurrence.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let j0 = self
            .coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .ok_or(SeriesError::NonUnitLeading)?;
        let lead = &self.coeffs[j0];
        let lead_inv = self.ring.inv(lead).ok_or(SeriesError::NonUnitLeading)?;
        let off = self.offset + j0 as i64;
        let len = self.coeffs.len() - j0;
        let a = &self.coeffs[j0..];
        let mut b = vec![self.ring.zero(); len];
        b[0] = lead_inv.clone();
        for i in 1..len {
            let mut acc = self.ring.zero();
            for k in 1..=i {
                if self.ring.is_zero(&a[k]) {
                    continue;
                }
                let p = self.ring.mul(&a[k], &b[i - k]);
                acc = self.ring.add(&acc, &p);
            }
            let t = self.ring.mul(&lead_inv, &acc);
            b[i] = self.ring.neg(&t);
        }
        Ok(Series::new(self.ring.clone(), self.w, -off, b))
    }

    /// Substitutes `q -> q^{delta}`.
    pub fn rescale(&self, delta: u32) -> Self {
        assert!(delta >= 1);
        if delta == 1 {
            return self.clone();
        }
        let d = delta as usize;
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() * d];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c.clone();
        }
        // exponents e < end were known; so are all new numerators below
        // delta*end (non-multiples of delta are exact zeros).
        Series::new(self.ring.clone(), self.w, self.offset * delta as i64, coeffs)
    }

    /// Multiplies by `q^{k/w}` (pure shift of the exponent lattice).
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.offset += k;
        out
    }

    /// Drops knowledge beyond numerator `end`.
    pub fn truncated(&self, end: i64) -> Self {
        let mut out = self.clone();
        if end < out.precision_end() {
            let keep = (end - out.offset).max(0) as usize;
            out.coeffs.truncate(keep);
            if keep == 0 {
                out.offset = end;
            }
        }
        out
    }

    /// Multiplies by a sparse integer series `sum_j c_j q^{e_j/w}` given as
    /// `(numerator, coefficient)` pairs sorted by numerator.
    pub fn mul_sparse(&self, sparse: &[(i64, i64)]) -> Self {
        assert!(!sparse.is_empty());
        let base = sparse[0].0;
        let mut out = Series::zero(self.ring.clone(), self.w, self.offset + base, self.len());
        let elems: Vec<(usize, R::Elem)> = sparse
            .iter()
            .map(|&(e, c)| ((e - base) as usize, self.ring.from_i64(c)))
            .collect();
        let n = self.coeffs.len();
        for (shift, c) in &elems {
            if self.ring.is_zero(c) {
                continue;
            }
            for i in *shift..n {
                let p = self.ring.mul(c, &self.coeffs[i - shift]);
                out.coeffs[i] = self.ring.add(&out.coeffs[i], &p);
            }
        }
        out
    }

    /// Divides by a sparse series whose first term is `(0, ±1)`; this is the
    /// workhorse for reciprocal pentagonal (eta-power) expansions, costing
    /// `O(len * sqrt(len))` for pentagonal divisors.
    pub fn div_sparse(&self, sparse: &[(i64, i64)]) -> Self {
        assert!(!sparse.is_empty());
        assert_eq!(sparse[0].0, 0, "sparse divisor must start at q^0");
        assert!(
            sparse[0].1 == 1 || sparse[0].1 == -1,
            "sparse divisor must have unit leading coefficient"
        );
        let negate = sparse[0].1 == -1;
        let tail: Vec<(usize, R::Elem)> = sparse[1..]
            .iter()
            .map(|&(e, c)| (e as usize, self.ring.from_i64(c)))
            .collect();
        let n = self.coeffs.len();
        let mut out = self.coeffs.clone();
        for i in 0..n {
            let mut acc = out[i].clone();
            for (e, c) in &tail {
                if *e > i {
                    break;
                }
                let p = self.ring.mul(c, &out[i - e]);
                acc = self.ring.sub(&acc, &p);
            }
            out[i] = if negate { self.ring.neg(&acc) } else { acc };
        }
        Series::new(self.ring.clone(), self.w, self.offset, out)
    }

    /// Writes the CSV coefficient dump: header `# w=<w> modulus=<m>
    /// precision=<N>`, then `exponent_numerator,coefficient` for every
    /// nonzero coefficient.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "# w={} modulus={} precision={}",
            self.w,
            self.ring.modulus(),
            self.precision_end()
        )?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !self.ring.is_zero(c) {
                writeln!(out, "{},{}", self.offset + i as i64, self.ring.format(c))?;
            }
        }
        Ok(())
    }

    pub fn read_csv<B: BufRead>(ring: R, input: B) -> Result<Self, SeriesError> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| SeriesError::Csv("empty input".into()))??;
        let header = header
            .strip_prefix("# ")
            .ok_or_else(|| SeriesError::Csv("missing header".into()))?;
        let mut w = None;
        let mut modulus = None;
        let mut precision = None;
        for field in header.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| SeriesError::Csv(format!("bad header field {field}")))?;
            match k {
                "w" => w = v.parse::<u32>().ok(),
                "modulus" => modulus = v.parse::<u64>().ok(),
                "precision" => precision = v.parse::<i64>().ok(),
                _ => return Err(SeriesError::Csv(format!("unknown header field {k}"))),
            }
        }
        let w = w.ok_or_else(|| SeriesError::Csv("missing w".into()))?;
        let end = precision.ok_or_else(|| SeriesError::Csv("missing precision".into()))?;
        if modulus.ok_or_else(|| SeriesError::Csv("missing modulus".into()))? != ring.modulus() {
            return Err(SeriesError::RingMismatch);
        }
        let mut entries = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (n, c) = line
                .split_once(',')
                .ok_or_else(|| SeriesError::Csv(format!("bad line {line}")))?;
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| SeriesError::Csv(format!("bad exponent {n}")))?;
            let c = ring
                .parse(c.trim())
                .ok_or_else(|| SeriesError::Csv(format!("bad coefficient {c}")))?;
            entries.push((n, c));
        }
        let offset = entries.iter().map(|(n, _)| *n).min().unwrap_or(0).min(end - 1);
        let mut s = Series::zero(ring, w, offset, (end - offset).max(0) as usize);
        for (n, c) in entries {
            if n >= end {
                return Err(SeriesError::Csv(format!(
                    "coefficient at {n} beyond declared precision {end}"
                )));
            }
            s.coeffs[(n - offset) as usize] = c;
        }
        Ok(s)
    }
}

impl Series<Integers> {
    /// Reduces every coefficient modulo `m`.
    pub fn reduce_mod(&self, m: u64) -> Series<Residues> {
        let ring = Residues::new(m);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&BigInt::from(m));
                // mod_floor of a BigInt by a positive modulus is in [0, m)
                let (_, digits) = r.to_u64_digits();
                if digits.is_empty() {
                    0
                } else {
                    digits[0]
                }
            })
            .collect();
        Series::new(ring, self.w, self.offset, coeffs)
    }

    /// Coefficient as i64, for desk-scale checks. Panics on overflow.
    pub fn coeff_i64(&self, n: i64) -> i64 {
        let c = self.coeff(n).expect("coefficient within precision");
        let mag: u64 = {
            let (_, d) = c.to_u64_digits();
            assert!(d.len() <= 1, "coefficient does not fit i64");
            if d.is_empty() {
                0
            } else {
                d[0]
            }
        };
        if c.is_negative() {
            -(mag as i64)
        } else {
            mag as i64
        }
    }
}

/// Exponent/sign pairs of Euler's pentagonal expansion of `prod (1-q^n)`,
/// truncated below numerator `n_max`.
pub fn pentagonal_terms(n_max: i64) -> Vec<(i64, i64)> {
    let mut terms = vec![(0i64, 1i64)];
    let mut k = 1i64;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut any = false;
        if e1 < n_max {
            terms.push((e1, sign));
            any = true;
        }
        if e2 < n_max {
            terms.push((e2, sign));
            any = true;
        }
        if !any {
            break;
        }
        k += 1;
    }
    terms.sort_unstable();
    terms
}

/// `prod_{n>=1} (1 - q^n)` to precision `n_max`, as the sparse pentagonal sum.
pub fn euler_product<R: Ring>(ring: R, n_max: i64) -> Series<R> {
    assert!(n_max >= 1);
    let mut s = Series::zero(ring.clone(), 1, 0, n_max as usize);
    for (e, c) in pentagonal_terms(n_max) {
        s.coeffs_mut()[e as usize] = ring.from_i64(c);
    }
    s
}

/// Reciprocal of the Euler product (the partition generating function),
/// computed by sparse pentagonal convolution in `O(N sqrt N)`.
pub fn euler_reciprocal<R: Ring>(ring: R, n_max: i64) -> Series<R> {
    Series::one(ring, n_max as usize).div_sparse(&pentagonal_terms(n_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zser(v: &[i64]) -> Series<Integers> {
        Series::new(
            Integers,
            1,
            0,
            v.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    fn as_i64(s: &Series<Integers>) -> Vec<i64> {
        (s.offset()..s.precision_end()).map(|n| s.coeff_i64(n)).collect()
    }

    #[test]
    fn add_basic() {
        // (1 + q) + q = 1 + 2q
        let a = zser(&[1, 1, 0]);
        let b = zser(&[0, 1, 0]);
        assert_eq!(as_i64(&a.add(&b).unwrap()), vec![1, 2, 0]);
    }

    #[test]
    fn add_identity() {
        let a = zser(&[3, -1, 7]);
        let z = Series::zero(Integers, 1, 0, 3);
        assert_eq!(as_i64(&a.add(&z).unwrap()), vec![3, -1, 7]);
    }

    #[test]
    fn add_fractional_lattice() {
        // q^{-1/8} + q^{7/8}
        let a = Series::monomial(Integers, 8, -1, 8);
        let b = Series::monomial(Integers, 8, 7, 8);
        let s = a.add(&b).unwrap();
        assert_eq!(s.coeff_i64(-1), 1);
        assert_eq!(s.coeff_i64(7), 1);
        assert_eq!(s.coeff_i64(0), 0);
    }

    #[test]
    fn mul_dense_basic() {
        // (1 - q)(1 + q) = 1 - q^2
        let a = zser(&[1, -1, 0]);
        let b = zser(&[1, 1, 0]);
        assert_eq!(as_i64(&a.mul_dense(&b).unwrap()), vec![1, 0, -1]);
    }

    #[test]
    fn mul_dense_cesaro_factors() {
        // hand expansion of the two C-generator factors
        let p = zser(&[1, -1, 1, -2]);
        let b2 = zser(&[1, 4, -4, 8]);
        assert_eq!(as_i64(&p.mul_dense(&b2).unwrap()), vec![1, 3, -7, 14]);
    }

    #[test]
    fn mul_dense_identity() {
        let a = zser(&[2, 5, -3]);
        let one = Series::one(Integers, 3);
        assert_eq!(as_i64(&a.mul_dense(&one).unwrap()), vec![2, 5, -3]);
    }

    #[test]
    fn binomial_division_geometric() {
        // 1/(1-q)^2 = 1 + 2q + 3q^2 + ...
        let one = Series::one(Integers, 6);
        let s = one.mul_binomial(1, -1, -2);
        assert_eq!(as_i64(&s), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn binomial_multiplication() {
        // (1 - q^2)(1 + q^2) = 1 - q^4
        let a = Series::one(Integers, 6).mul_binomial(2, -1, 1);
        let s = a.mul_binomial(2, 1, 1);
        assert_eq!(as_i64(&s), vec![1, 0, 0, 0, -1, 0]);
    }

    #[test]
    fn binomial_alternating() {
        // 1/(1+q) = 1 - q + q^2 - q^3
        let s = Series::one(Integers, 4).mul_binomial(1, 1, -1);
        assert_eq!(as_i64(&s), vec![1, -1, 1, -1]);
    }

    #[test]
    fn binomial_roundtrip() {
        let a = zser(&[1, 4, -2, 9, 0, 3]);
        let back = a.mul_binomial(2, -1, -3).mul_binomial(2, -1, 3);
        assert_eq!(as_i64(&back), as_i64(&a));
    }

    #[test]
    fn invert_geometric() {
        let a = Series::one(Integers, 4).mul_binomial(1, -1, 1);
        assert_eq!(as_i64(&a.invert().unwrap()), vec![1, 1, 1, 1]);
    }

    #[test]
    fn invert_identity() {
        let one = Series::one(Integers, 5);
        assert_eq!(as_i64(&one.invert().unwrap()), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn invert_modular_leading() {
        // invert(2 + q) mod 5 starts with 3
        let ring = Residues::new(5);
        let a = Series::new(ring, 1, 0, vec![2, 1, 0, 0]);
        let inv = a.invert().unwrap();
        assert_eq!(inv.coeff(0).unwrap(), 3);
        let prod = a.mul_dense(&inv).unwrap();
        assert_eq!(prod.coeff(0).unwrap(), 1);
        assert_eq!(prod.coeff(1).unwrap(), 0);
    }

    #[test]
    fn invert_non_unit_fails() {
        let a = zser(&[2, 1]);
        assert!(a.invert().is_err());
        let ring = Residues::new(6);
        let b = Series::new(ring, 1, 0, vec![3, 1]);
        assert!(b.invert().is_err());
    }

    #[test]
    fn invert_times_self_is_one() {
        let a = zser(&[1, 5, -7, 2, 0, 1]);
        let prod = a.mul_dense(&a.invert().unwrap()).unwrap();
        assert_eq!(as_i64(&prod), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn euler_pentagonal() {
        let e = euler_product(Integers, 13);
        assert_eq!(
            as_i64(&e),
            vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
        );
    }

    #[test]
    fn euler_reciprocal_partitions() {
        let p = euler_reciprocal(Integers, 6);
        assert_eq!(as_i64(&p), vec![1, 1, 2, 3, 5, 7]);
    }

    #[test]
    fn euler_times_reciprocal_is_one() {
        let n = 50;
        let prod = euler_reciprocal(Integers, n).mul_sparse(&pentagonal_terms(n));
        let mut expect = vec![0i64; n as usize];
        expect[0] = 1;
        assert_eq!(as_i64(&prod.truncated(n)), expect);
    }

    #[test]
    fn rescale_cubes() {
        let a = zser(&[1, 1, 1]);
        let s = a.rescale(3);
        assert_eq!(s.coeff_i64(0), 1);
        assert_eq!(s.coeff_i64(3), 1);
        assert_eq!(s.coeff_i64(6), 1);
        assert_eq!(s.coeff_i64(1), 0);
    }

    #[test]
    fn rescale_identity_and_fraction() {
        let a = Series::monomial(Integers, 8, -1, 8);
        assert_eq!(a.rescale(1).offset(), -1);
        let b = a.rescale(2);
        assert_eq!(b.offset(), -2);
        assert_eq!(b.coeff_i64(-2), 1);
    }

    #[test]
    fn precision_read_is_checked() {
        let a = zser(&[1, 2]);
        assert!(a.coeff(1).is_ok());
        assert!(matches!(
            a.coeff(2),
            Err(SeriesError::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn reduction_commutes_with_generation() {
        let n = 40;
        let pz = euler_reciprocal(Integers, n).reduce_mod(7);
        let pm = euler_reciprocal(Residues::new(7), n);
        assert_eq!(pz.coeffs(), pm.coeffs());
    }

    #[test]
    fn csv_roundtrip() {
        let s = Series::new(
            Integers,
            8,
            -1,
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(-3)],
        );
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = Series::read_csv(Integers, &buf[..]).unwrap();
        assert_eq!(back.w(), 8);
        assert_eq!(back.precision_end(), s.precision_end());
        assert_eq!(back.coeff(-1).unwrap(), BigInt::from(1));
        assert_eq!(back.coeff(1).unwrap(), BigInt::from(-3));
    }
}
