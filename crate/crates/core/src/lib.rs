//! Exact-arithmetic tooling for mock theta function congruences: truncated
//! q-series over the integers or a residue ring, generators for the omega, f
//! and Cesaro-summed Eulerian series, SL2(Z) shift decompositions, eta
//! quotient holomorphy certificates, residue sieving, and Sturm-bounded
//! congruence verification with JSON certificates.

pub mod error;
pub mod eta;
pub mod generators;
pub mod modular;
pub mod oracles;
pub mod series;
pub mod sieve;
pub mod verify;

pub use error::{EtaError, ModularError, SeriesError, SieveError, VerifyError};
pub use eta::{holomorphy_certificate, sieved_pole_bound, CuspLedgerEntry, EtaQuotient};
pub use generators::{generate, nonholo_support, Family, NonholoSupport, SeriesId};
pub use modular::{
    cusp_representatives, gamma0_index, gamma1_index, sieve_group_index, Component, Cusp,
    GroupKind, Mat2, ShiftDecomposition,
};
pub use series::{Integers, Residues, Ring, Series};
pub use sieve::{indicator_combo, residue_disjoint, sieve, verify_characteristic_product};
pub use verify::{
    plan_claim, scan_progressions, sturm_bound, verify_claim, BoundPolicy, Certificate,
    CongruenceClaim,
};
