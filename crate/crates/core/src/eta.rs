//! Eta quotients, their vanishing orders at cusps, pole-order bounds for the
//! sieved mock-theta expansions, and the cusp-by-cusp holomorphy certificate.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{EtaError, ModularError};
use crate::generators::Family;
use crate::modular::{
    classify_cesaro, classify_omega, cusp_representatives, decompose_shift_cesaro,
    decompose_shift_omega, Component, Cusp, GroupKind, Mat2, Rat,
};

fn gcd_u(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u(b, a % b)
    }
}

/// A finite product prod_delta eta(delta tau)^{r_delta} at a fixed level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u64,
    /// (delta, r_delta) with delta | level, r_delta != 0, sorted by delta.
    exponents: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(level: u64, mut exponents: Vec<(u64, i64)>) -> Result<Self, EtaError> {
        assert!(level >= 1);
        exponents.retain(|&(_, r)| r != 0);
        exponents.sort_unstable();
        for w in exponents.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EtaError::Parse(format!("duplicate divisor {}", w[0].0)));
            }
        }
        for &(delta, _) in &exponents {
            if delta == 0 || !level.is_multiple_of(delta) {
                return Err(EtaError::BadDivisor { delta, level });
            }
        }
        Ok(EtaQuotient { level, exponents })
    }

    /// Parses the CLI syntax "delta:r,delta:r", e.g. "24:12,1:24".
    pub fn parse(level: u64, spec: &str) -> Result<Self, EtaError> {
        let mut exponents = Vec::new();
        for part in spec.split(',') {
            let part = part.trim();
            let (d, r) = part
                .split_once(':')
                .ok_or_else(|| EtaError::Parse(format!("expected delta:r, got {part:?}")))?;
            let delta: u64 = d
                .trim()
                .parse()
                .map_err(|_| EtaError::Parse(format!("bad divisor {d:?}")))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|_| EtaError::Parse(format!("bad exponent {r:?}")))?;
            exponents.push((delta, r));
        }
        EtaQuotient::new(level, exponents)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &[(u64, i64)] {
        &self.exponents
    }

    /// Weight 1/2 sum_delta r_delta.
    pub fn weight(&self) -> Rat {
        let sum: i128 = self.exponents.iter().map(|&(_, r)| r as i128).sum();
        Rat::new(sum, 2)
    }

    /// The two 24-divisibility preconditions of modularity:
    /// sum delta r_delta = 0 (mod 24) and sum (N/delta) r_delta = 0 (mod 24).
    pub fn valid24(&self) -> (bool, bool) {
        let s1: i128 = self
            .exponents
            .iter()
            .map(|&(d, r)| d as i128 * r as i128)
            .sum();
        let s2: i128 = self
            .exponents
            .iter()
            .map(|&(d, r)| (self.level / d) as i128 * r as i128)
            .sum();
        (s1.rem_euclid(24) == 0, s2.rem_euclid(24) == 0)
    }

    /// Vanishing order at a cusp a/c in units of the local uniformizer, by
    /// the Ligozat formula: with d = gcd(c, N),
    /// order = (N / (24 gcd(d, N/d) d)) sum_delta gcd(d, delta)^2 r_delta / delta.
    pub fn order_at_cusp(&self, cusp: &Cusp) -> Rat {
        let n = self.level;
        let c = cusp.c.unsigned_abs();
        // c = 0 encodes infinity; gcd(0, N) = N gives the expansion at oo
        let d = gcd_u(c, n);
        let d = if d == 0 { n } else { d };
        let mut sum = Rat::from_integer(0);
        for &(delta, r) in &self.exponents {
            let g = gcd_u(d, delta) as i128;
            sum += Rat::new(g * g * r as i128, delta as i128);
        }
        Rat::new(n as i128, 24 * gcd_u(d, n / d) as i128 * d as i128) * sum
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .rev()
            .map(|(d, r)| format!("{d}:{r}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Embedded-lattice parameters of the family: (w, leading exponent numerator).
fn embedding(family: Family) -> (u64, i64) {
    match family {
        Family::Cesaro => (8, -1),
        Family::Omega => (1, 2),
    }
}

/// Lower bound on the leading exponent (in exponents of q = e^{2 pi i tau})
/// of the sieved series at the given cusp, minimized over all shifts
/// s in 0..m. Finite cusps use the shift decomposition and the
/// component-classified exponents:
/// cesaro {h1: -l^2/(8m^2), h2/h3: +l^2/(4m^2)},
/// omega  {H1: -l^2/(4m^2), H2/H3: +l^2/(18m^2)}.
/// At infinity the sieve itself gives the bound: the smallest exponent
/// numerator at or above the leading one that hits a target residue.
pub fn sieved_pole_bound(
    family: Family,
    cusp: &Cusp,
    m: u64,
    targets: &[u64],
) -> Result<Rat, ModularError> {
    if cusp.is_infinity() {
        return Ok(infinity_bound(family, m, targets));
    }
    sieved_pole_bound_for_matrix(family, &cusp.matrix_to(), m)
}

fn infinity_bound(family: Family, m: u64, targets: &[u64]) -> Rat {
    let (w, offset) = embedding(family);
    let mi = m as i64;
    let best = targets
        .iter()
        .map(|&r| offset + (r as i64 - offset).rem_euclid(mi))
        .min()
        .unwrap_or(offset);
    Rat::new(best as i128, w as i128)
}

/// The finite-cusp bound for an explicit representative matrix. The result
/// only depends on the cusp: right-multiplying the representative by a
/// translation leaves every (l, component) pair unchanged.
pub fn sieved_pole_bound_for_matrix(
    family: Family,
    mat: &Mat2,
    m: u64,
) -> Result<Rat, ModularError> {
    let (w, _) = embedding(family);
    let mm = (m as i128) * (m as i128);
    let mut best: Option<Rat> = None;
    for s in 0..m {
        let (l, component) = match family {
            Family::Cesaro => {
                let d = decompose_shift_cesaro(mat, w * s, m)?;
                (d.l, classify_cesaro(&d.unimodular()))
            }
            Family::Omega => {
                let d = decompose_shift_omega(mat, s, m)?;
                (d.l, classify_omega(&d.unimodular()))
            }
        };
        let l2 = (l as i128) * (l as i128);
        let bound = match (family, component) {
            (Family::Cesaro, Component::First) => Rat::new(-l2, 8 * mm),
            (Family::Cesaro, _) => Rat::new(l2, 4 * mm),
            (Family::Omega, Component::First) => Rat::new(-l2, 4 * mm),
            (Family::Omega, _) => Rat::new(l2, 18 * mm),
        };
        best = Some(match best {
            Some(b) if b <= bound => b,
            _ => bound,
        });
    }
    Ok(best.expect("m >= 1"))
}

/// One row of the holomorphy certificate.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CuspLedgerEntry {
    #[serde(serialize_with = "ser_cusp")]
    pub cusp: Cusp,
    pub width: u64,
    /// Leading-exponent lower bound of the sieved series, in local
    /// uniformizer units (the raw bound times the cusp width).
    #[serde(serialize_with = "ser_rat")]
    pub pole_bound: Rat,
    /// Vanishing order of the eta quotient, same units.
    #[serde(serialize_with = "ser_rat")]
    pub eta_order: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub margin: Rat,
}

pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ser_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rat_str(r))
}

fn ser_cusp<S: Serializer>(c: &Cusp, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

/// Sweeps every cusp representative of the group: pole bound for the sieved
/// family, eta order, and their sum. The certificate passes iff no margin is
/// negative. Entries come back in canonical cusp order regardless of thread
/// count.
pub fn holomorphy_certificate(
    family: Family,
    m: u64,
    quotient: &EtaQuotient,
    kind: GroupKind,
    targets: &[u64],
) -> Result<Vec<CuspLedgerEntry>, ModularError> {
    let level = quotient.level();
    let cusps = cusp_representatives(kind, level);
    cusps
        .par_iter()
        .map(|cusp| {
            let raw = sieved_pole_bound(family, cusp, m, targets)?;
            // Gamma_1(N) widths coincide with the Gamma_0(N) ones for the
            // levels in play (every cusp regular, N > 4).
            let width = cusp.width(level);
            let pole_bound = raw * Rat::from_integer(width as i128);
            let eta_order = quotient.order_at_cusp(cusp);
            let margin = eta_order + pole_bound;
            Ok(CuspLedgerEntry {
                cusp: *cusp,
                width,
                pole_bound,
                eta_order,
                margin,
            })
        })
        .collect()
}

pub fn certificate_passes(ledger: &[CuspLedgerEntry]) -> bool {
    ledger.iter().all(|e| e.margin >= Rat::from_integer(0))
}

/// Offending entries of a failed certificate.
pub fn negative_margins(ledger: &[CuspLedgerEntry]) -> Vec<&CuspLedgerEntry> {
    ledger
        .iter()
        .filter(|e| e.margin < Rat::from_integer(0))
        .collect()
}
