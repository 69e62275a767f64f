//! Exact integer SL2(Z) utilities: shift decompositions, component
//! classification by parity, congruence-subgroup index formulas and cusp
//! enumeration.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::ModularError;
use crate::series::ext_gcd;

pub type Rat = Ratio<i128>;

fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// An element of SL2(Z).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ModularError> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(ModularError::NotUnimodular(det));
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn identity() -> Self {
        Mat2 { a: 1, b: 0, c: 0, d: 1 }
    }

    /// T = [[1,1],[0,1]]
    pub fn t() -> Self {
        Mat2 { a: 1, b: 1, c: 0, d: 1 }
    }

    /// S = [[0,-1],[1,0]]
    pub fn s() -> Self {
        Mat2 { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Evaluates the Moebius action at a rational point; `None` at the pole.
    pub fn apply(&self, tau: Rat) -> Option<Rat> {
        mobius(
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.d as i128,
            tau,
        )
    }
}

/// Moebius action of an arbitrary integer matrix with nonzero determinant.
pub fn mobius(a: i128, b: i128, c: i128, d: i128, tau: Rat) -> Option<Rat> {
    let num = Ratio::from_integer(a) * tau + Ratio::from_integer(b);
    let den = Ratio::from_integer(c) * tau + Ratio::from_integer(d);
    if den == Ratio::from_integer(0) {
        None
    } else {
        Some(num / den)
    }
}

/// A cusp a/c in lowest terms; infinity is 1/0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Cusp {
    pub a: i64,
    pub c: i64,
}

impl Cusp {
    pub fn new(a: i64, c: i64) -> Self {
        assert!(c >= 0);
        assert_eq!(gcd(a as i128, c as i128), 1, "cusp {a}/{c} not in lowest terms");
        Cusp { a, c }
    }

    pub fn infinity() -> Self {
        Cusp { a: 1, c: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }

    /// A matrix in SL2(Z) mapping infinity to this cusp.
    pub fn matrix_to(&self) -> Mat2 {
        if self.c == 0 {
            return Mat2::identity();
        }
        // a*d - b*c = 1
        let (_, x, y) = ext_gcd(self.a as i128, self.c as i128);
        // a*x + c*y = 1  =>  choose d = x, b = -y
        Mat2::new(self.a, -(y as i64), self.c, x as i64).expect("unimodular by construction")
    }

    /// Width of this cusp for Gamma_0(N) / Gamma_1(N) (N > 4).
    pub fn width(&self, level: u64) -> u64 {
        let n = level as i128;
        let c2 = (self.c as i128) * (self.c as i128);
        (n / gcd(c2, n)) as u64
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c == 0 {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.a, self.c)
        }
    }
}

/// Parity-classified component a weight-1/2 vector component is mapped to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Component {
    First,
    Second,
    Third,
}

/// Cesaro family: image of h_1 under M by (c, d) parity.
/// h1 if c even, d odd; h2 if c odd, d even; h3 if both odd.
pub fn classify_cesaro(m: &Mat2) -> Component {
    classify_parity(m.c, m.d)
}

/// Omega family: image of H_2 under M by (a, b) parity.
/// H1 if a even, b odd; H2 if a odd, b even; H3 if both odd.
pub fn classify_omega(m: &Mat2) -> Component {
    match classify_parity(m.b, m.a) {
        // classify_parity(x, y): First = (x even, y odd) -> here b even, a odd = H2
        Component::First => Component::Second,
        Component::Second => Component::First,
        Component::Third => Component::Third,
    }
}

fn classify_parity(x: i64, y: i64) -> Component {
    let xe = x.rem_euclid(2) == 0;
    let ye = y.rem_euclid(2) == 0;
    assert!(!(xe && ye), "both entries even contradicts det 1");
    match (xe, ye) {
        (true, false) => Component::First,
        (false, true) => Component::Second,
        _ => Component::Third,
    }
}

/// The integer sextuple of the matrix lemmas: the unimodular factor
/// `(at, bt; ct, dt)` and the triangular factor `(l, t; 0, m^2/(g*l))`.
#[derive(Clone, Copy, Debug)]
pub struct ShiftDecomposition {
    pub l: i64,
    pub t: i64,
    pub at: i64,
    pub bt: i64,
    pub ct: i64,
    pub dt: i64,
    pub m: u64,
    /// Family divisor: 1 for the cesaro lemma, 6 for the omega lemma.
    pub g: u64,
}

impl ShiftDecomposition {
    pub fn unimodular(&self) -> Mat2 {
        Mat2 {
            a: self.at,
            b: self.bt,
            c: self.ct,
            d: self.dt,
        }
    }

    /// Bottom-right entry of the triangular factor.
    pub fn triangular_diag(&self) -> i64 {
        let m = self.m as i64;
        m * m / (self.g as i64 * self.l)
    }
}

/// Column-style factorization of an integer matrix with positive determinant
/// into a unimodular factor and an upper-triangular one:
/// `(A,B;C,D) = (at,bt;ct,dt) * (l, t; 0, det/l)` with `l = gcd(A, C) > 0`
/// and `dt` the least nonnegative inverse of `at` modulo `ct`.
fn factor_triangular(
    a: i128,
    b: i128,
    c: i128,
    d: i128,
) -> Result<(i128, i128, i128, i128, i128, i128), ModularError> {
    let det = a * d - b * c;
    debug_assert!(det > 0);
    if a == 0 && c == 0 {
        return Err(ModularError::DecompositionInvariant(
            "zero first column".into(),
        ));
    }
    let l = gcd(a, c);
    let at = a / l;
    let ct = c / l;
    let (bt, dt) = if ct == 0 {
        // at = +-1; unimodular factor is +-identity
        (0, at)
    } else {
        // least nonnegative dt with at*dt = 1 (mod |ct|)
        let (g, x, _) = ext_gcd(at, ct);
        if g != 1 {
            return Err(ModularError::DecompositionInvariant(
                "first column not primitive after gcd division".into(),
            ));
        }
        let dt = x.rem_euclid(ct.abs());
        let bt = (at * dt - 1) / ct;
        (bt, dt)
    };
    // U^{-1} * M = (dt, -bt; -ct, at) * (a, b; c, d)
    let t = dt * b - bt * d;
    let diag = at * d - ct * b;
    if diag * l != det {
        return Err(ModularError::DecompositionInvariant(format!(
            "triangular factor has determinant {} != {}",
            diag * l,
            det
        )));
    }
    Ok((l, t, at, bt, ct, dt))
}

/// Cesaro-family shift decomposition: realizes
/// `(1, sigma/m; 0, 1) M = (at,bt;ct,dt) (l, t; 0, m^2/l)` with
/// `l = gcd(cm, sigma*c + a*m)`. The caller passes `sigma = w*s`.
///
/// `sigma = 0` short-circuits to the trivial decomposition `l = m, t = 0`
/// with the unimodular factor `M` itself.
pub fn decompose_shift_cesaro(
    m_mat: &Mat2,
    sigma: u64,
    m: u64,
) -> Result<ShiftDecomposition, ModularError> {
    let mi = m as i128;
    if sigma == 0 {
        return Ok(ShiftDecomposition {
            l: m as i64,
            t: 0,
            at: m_mat.a,
            bt: m_mat.b,
            ct: m_mat.c,
            dt: m_mat.d,
            m,
            g: 1,
        });
    }
    let s = sigma as i128;
    let (a, b, c, d) = (
        m_mat.a as i128,
        m_mat.b as i128,
        m_mat.c as i128,
        m_mat.d as i128,
    );
    // m * (1, sigma/m; 0, 1) * M
    let (l, t, at, bt, ct, dt) =
        factor_triangular(mi * a + s * c, mi * b + s * d, c * mi, d * mi)?;
    Ok(ShiftDecomposition {
        l: l as i64,
        t: t as i64,
        at: at as i64,
        bt: bt as i64,
        ct: ct as i64,
        dt: dt as i64,
        m,
        g: 1,
    })
}

/// Omega-family shift decomposition (6 | m): realizes
/// `(6,0;0,1)(1, s/m; 0,1) M = (at,bt;ct,dt) (l, t; 0, m^2/(6l))` with
/// `l = gcd(cm/6, s*c + a*m)`.
pub fn decompose_shift_omega(
    m_mat: &Mat2,
    s: u64,
    m: u64,
) -> Result<ShiftDecomposition, ModularError> {
    if !m.is_multiple_of(6) {
        return Err(ModularError::ShiftModulusNotDivisible(m));
    }
    let mi = m as i128;
    let sh = s as i128;
    let (a, b, c, d) = (
        m_mat.a as i128,
        m_mat.b as i128,
        m_mat.c as i128,
        m_mat.d as i128,
    );
    // m * (6,0;0,1)(1, s/m; 0,1) M; the factorization comes out 6-scaled
    let (l6, t6, at, bt, ct, dt) = factor_triangular(
        6 * (mi * a + sh * c),
        6 * (mi * b + sh * d),
        c * mi,
        d * mi,
    )?;
    if l6 % 6 != 0 || t6 % 6 != 0 {
        return Err(ModularError::DecompositionInvariant(format!(
            "scaled factors (l = {l6}, t = {t6}) not divisible by 6"
        )));
    }
    Ok(ShiftDecomposition {
        l: (l6 / 6) as i64,
        t: (t6 / 6) as i64,
        at: at as i64,
        bt: bt as i64,
        ct: ct as i64,
        dt: dt as i64,
        m,
        g: 6,
    })
}

fn factor_primes(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factor_primes(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Index of the sieve group of the cesaro family:
/// `2 m^4 phi(m) / phi(2 m^2) * prod_{p | 2m^2} (1 - 1/p^2)`, exact rational.
pub fn sieve_group_index(m: u64) -> Rat {
    assert!(m >= 2);
    let m = m as i128;
    let two_m2 = (2 * m * m) as u64;
    let mut idx = Rat::new(
        2 * m * m * m * m * euler_phi(m as u64) as i128,
        euler_phi(two_m2) as i128,
    );
    for (p, _) in factor_primes(two_m2) {
        let p = p as i128;
        idx *= Rat::new(p * p - 1, p * p);
    }
    idx
}

/// `[SL2(Z) : Gamma_0(N)] = N prod_{p|N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    let mut idx = n as u128;
    for (p, _) in factor_primes(n) {
        idx = idx * (p as u128 + 1) / p as u128;
    }
    idx as u64
}

/// `[SL2(Z) : Gamma_1(N)] = N^2 prod_{p|N} (1 - 1/p^2)` for N >= 3.
pub fn gamma1_index(n: u64) -> u64 {
    if n <= 2 {
        return gamma0_index(n);
    }
    let mut idx = (n as u128) * (n as u128);
    for (p, _) in factor_primes(n) {
        let p2 = p as u128 * p as u128;
        idx = idx * (p2 - 1) / p2;
    }
    idx as u64
}

/// Which congruence subgroup governs the cusp enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Gamma0,
    Gamma1,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Gamma0 => write!(f, "gamma0"),
            GroupKind::Gamma1 => write!(f, "gamma1"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gamma0" => Ok(GroupKind::Gamma0),
            "gamma1" => Ok(GroupKind::Gamma1),
            other => Err(format!("unknown group kind {other}")),
        }
    }
}

use std::str::FromStr;

/// A complete, duplicate-free system of cusp representatives.
pub fn cusp_representatives(kind: GroupKind, n: u64) -> Vec<Cusp> {
    match kind {
        GroupKind::Gamma0 => gamma0_cusps(n),
        GroupKind::Gamma1 => gamma1_cusps(n),
    }
}

/// Gamma_0(N) cusps: one representative a/c per divisor c | N and residue
/// class a modulo gcd(c, N/c).
fn gamma0_cusps(n: u64) -> Vec<Cusp> {
    let mut out = Vec::new();
    for c in divisors(n) {
        if c == n {
            out.push(Cusp::infinity());
            continue;
        }
        let g = gcd(c as i128, (n / c) as i128) as u64;
        for a0 in 0..g.max(1) {
            if gcd(a0 as i128, g as i128) != 1 && g > 1 {
                continue;
            }
            let a = lift_coprime(a0 as i64, g.max(1) as i64, c as i64);
            out.push(Cusp::new(a, c as i64));
        }
    }
    out.sort();
    out
}

/// Gamma_1(N) cusps via the invariant label `(c mod N, a mod gcd(c, N))` up
/// to simultaneous negation; two cusps a1/c1, a2/c2 are Gamma_1(N)-equivalent
/// iff `(a2, c2) = +-(a1 + j c1, c1) (mod N)` for some j.
fn gamma1_cusps(n: u64) -> Vec<Cusp> {
    let ni = n as i64;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for c0 in 0..ni {
        let g = gcd(c0 as i128, ni as i128) as i64;
        let g = if g == 0 { ni } else { g };
        for a0 in 0..g {
            if gcd(a0 as i128, g as i128) != 1 && g > 1 {
                continue;
            }
            if g == 1 && a0 != 0 {
                continue;
            }
            let label = (c0, a0);
            let flipped = ((ni - c0) % ni, (g - a0) % g);
            let canon = label.min(flipped);
            if !seen.insert(canon) {
                continue;
            }
            if c0 == 0 && a0 == 1 {
                out.push(Cusp::infinity());
            } else {
                let c = if c0 == 0 { ni } else { c0 };
                let a = lift_coprime(a0, g, c);
                out.push(Cusp::new(a, c));
            }
        }
    }
    out.sort();
    out
}

/// Smallest `a >= a0` with `a = a0 (mod g)` and `gcd(a, c) = 1`.
fn lift_coprime(a0: i64, g: i64, c: i64) -> i64 {
    let mut a = a0;
    if a == 0 && c != 1 {
        a += g;
    }
    while gcd(a as i128, c as i128) != 1 {
        a += g;
    }
    a
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Number of Gamma_0(N) cusps by the class-counting formula
/// `sum_{d|N} phi(gcd(d, N/d))`.
pub fn gamma0_cusp_count(n: u64) -> u64 {
    divisors(n)
        .into_iter()
        .map(|d| euler_phi(gcd(d as i128, (n / d) as i128) as u64))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_cesaro_cases() {
        assert_eq!(classify_cesaro(&Mat2::t()), Component::First);
        assert_eq!(classify_cesaro(&Mat2::s()), Component::Second);
        assert_eq!(
            classify_cesaro(&Mat2::new(1, 0, 1, 1).unwrap()),
            Component::Third
        );
    }

    #[test]
    fn classify_omega_cases() {
        assert_eq!(classify_omega(&Mat2::identity()), Component::Second);
        assert_eq!(classify_omega(&Mat2::s()), Component::First);
        assert_eq!(classify_omega(&Mat2::t()), Component::Third);
    }

    #[test]
    fn cesaro_decomposition_example() {
        // M = S, sigma = 1, m = 24 -> (l, t, at, bt, ct, dt) = (1, -24, 1, 0, 24, 1)
        let d = decompose_shift_cesaro(&Mat2::s(), 1, 24).unwrap();
        assert_eq!((d.l, d.t, d.at, d.bt, d.ct, d.dt), (1, -24, 1, 0, 24, 1));
        // both sides map tau to (tau - 24) / (24 tau)
        let tau = Rat::new(5, 7);
        let lhs = mobius(24, 1, 0, 24, Mat2::s().apply(tau).unwrap()).unwrap();
        let tri = mobius(d.l as i128, d.t as i128, 0, d.triangular_diag() as i128, tau).unwrap();
        let rhs = d.unimodular().apply(tri).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, (tau - Rat::from_integer(24)) / (Rat::from_integer(24) * tau));
    }

    #[test]
    fn cesaro_zero_shift_is_trivial() {
        let d = decompose_shift_cesaro(&Mat2::s(), 0, 24).unwrap();
        assert_eq!(d.l, 24);
        assert_eq!(d.t, 0);
        assert_eq!(d.unimodular(), Mat2::s());
        assert_eq!(d.triangular_diag(), 24);
    }

    #[test]
    fn omega_decomposition_example() {
        // M = S, s = 1, m = 6 -> l = 1, at = 1, ct = 1, dt = 0, bt = -1, t = 0
        let d = decompose_shift_omega(&Mat2::s(), 1, 6).unwrap();
        assert_eq!((d.l, d.t, d.at, d.bt, d.ct, d.dt), (1, 0, 1, -1, 1, 0));
        // both sides map tau to (tau - 6)/tau
        let tau = Rat::new(3, 11);
        let inner = Mat2::s().apply(tau).unwrap();
        let shifted = mobius(6, 1, 0, 6, inner).unwrap(); // (1, 1/6; 0, 1)
        let lhs = mobius(6, 0, 0, 1, shifted).unwrap();
        let tri = mobius(d.l as i128, d.t as i128, 0, d.triangular_diag() as i128, tau).unwrap();
        let rhs = d.unimodular().apply(tri).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, (tau - Rat::from_integer(6)) / tau);
    }

    #[test]
    fn omega_requires_six_divides_m() {
        assert!(decompose_shift_omega(&Mat2::s(), 1, 8).is_err());
    }

    #[test]
    fn sieve_index_paper_values() {
        assert_eq!(sieve_group_index(24), Rat::from_integer(9216));
        assert_eq!(sieve_group_index(56), Rat::from_integer(129024));
        assert_eq!(sieve_group_index(2), Rat::from_integer(6));
    }

    #[test]
    fn gamma_indices() {
        assert_eq!(gamma0_index(2), 3);
        assert_eq!(gamma0_index(86400), 207360);
        assert_eq!(gamma1_index(1152), 884736);
        assert_eq!(884736 % 9216, 0);
        assert_eq!(884736 / 9216, 96);
    }

    #[test]
    fn gamma0_cusps_classical() {
        let c4 = gamma0_cusps(4);
        assert_eq!(c4.len(), 3);
        assert!(c4.contains(&Cusp::infinity()));
        assert!(c4.contains(&Cusp::new(0, 1)));
        assert!(c4.contains(&Cusp::new(1, 2)));
        assert_eq!(gamma0_cusps(2).len(), 2);
    }

    #[test]
    fn gamma0_cusp_count_matches_formula() {
        for n in [1u64, 2, 6, 12, 36, 86400] {
            assert_eq!(
                gamma0_cusps(n).len() as u64,
                gamma0_cusp_count(n),
                "N = {n}"
            );
        }
    }

    #[test]
    fn gamma1_cusp_count_small_levels() {
        // 1/2 sum_{d|N} phi(d) phi(N/d) for N > 4
        for n in [5u64, 7, 8, 9, 12, 24, 30, 1152] {
            let expect: u64 = divisors(n)
                .into_iter()
                .map(|d| euler_phi(d) * euler_phi(n / d))
                .sum::<u64>()
                / 2;
            assert_eq!(gamma1_cusps(n).len() as u64, expect, "N = {n}");
        }
    }

    #[test]
    fn gamma1_cusps_of_five() {
        let c = gamma1_cusps(5);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn cusp_matrix_maps_infinity() {
        for cusp in gamma0_cusps(36) {
            let m = cusp.matrix_to();
            assert_eq!(m.a, cusp.a);
            assert_eq!(m.c, cusp.c);
        }
    }
}
