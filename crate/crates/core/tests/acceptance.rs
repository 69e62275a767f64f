//! End-to-end acceptance suite. Runs the twelve gate criteria sequentially
//! and prints one pass/fail line each; any failure fails the single test.

use std::time::{Duration, Instant};

use mocksieve_core::eta::{certificate_passes, negative_margins, EtaQuotient};
use mocksieve_core::generators::{cesaro_series, f_series, omega_series};
use mocksieve_core::modular::{
    decompose_shift_cesaro, decompose_shift_omega, mobius, sieve_group_index, Mat2, Rat,
};
use mocksieve_core::oracles::{cesaro_oracle, f_brute, omega_brute};
use mocksieve_core::verify::{verify_claim, BoundPolicy, CongruenceClaim};
use mocksieve_core::{
    holomorphy_certificate, nonholo_support, residue_disjoint, sturm_bound,
    verify_characteristic_product, Family, GroupKind, Integers, SeriesId,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn check(&mut self, id: u32, label: &str, ok: bool) {
        println!(
            "criterion {id:02}: {} - {label}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failures.push(format!("{id:02} {label}"));
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };

    // 1: cesaro mod 3 up to the exact bound 7104, under 5 s
    let claim = CongruenceClaim::named("cesaro-3").unwrap();
    let (cert, took) = timed(|| verify_claim(&claim, BoundPolicy::Paper).unwrap());
    gate.check(
        1,
        "cesaro mod 3 passes at bound 7104 in < 5 s",
        cert.pass && cert.sturm_bound == 7104 && cert.coefficients_checked == 296
            && took < Duration::from_secs(5),
    );

    // 2: cesaro mod 7 to embedded exponent 260736, under 60 s
    let claim = CongruenceClaim::named("cesaro-7").unwrap();
    let (cert, took) = timed(|| verify_claim(&claim, BoundPolicy::Paper).unwrap());
    gate.check(
        2,
        "cesaro mod 7 passes at bound 260736 in < 60 s",
        cert.pass && cert.sturm_bound == 260_736 && took < Duration::from_secs(60),
    );

    // 3: omega mod 5 at both the published and the conservative bound, < 5 min
    let claim = CongruenceClaim::named("omega-5").unwrap();
    let (pair, took) = timed(|| {
        let a = verify_claim(&claim, BoundPolicy::Paper).unwrap();
        let b = verify_claim(&claim, BoundPolicy::Max).unwrap();
        (a, b)
    });
    gate.check(
        3,
        "omega mod 5 passes at bounds 832320 and 1248480 in < 5 min",
        pair.0.pass
            && pair.0.sturm_bound == 832_320
            && pair.1.pass
            && pair.1.sturm_bound == 1_248_480
            && took < Duration::from_secs(300),
    );

    // 4: sieve group index values
    gate.check(
        4,
        "sieve group index is 9216 (m=24) and 129024 (m=56)",
        sieve_group_index(24) == Rat::from_integer(9216)
            && sieve_group_index(56) == Rat::from_integer(129_024),
    );

    // 5: Sturm bounds
    gate.check(
        5,
        "sturm bounds 7104 and 260736 from (37/2, 9216), (97/2, 129024)",
        sturm_bound(Rat::new(37, 2), 9216) == 7104
            && sturm_bound(Rat::new(97, 2), 129_024) == 260_736,
    );

    // 6: character product = indicator of {83, 107} mod 120
    gate.check(
        6,
        "character product is the characteristic function of {83,107} mod 120",
        verify_characteristic_product(),
    );

    // 7: residue disjointness for both families
    gate.check(
        7,
        "targets are disjoint from both non-holomorphic supports",
        residue_disjoint(&[7], 8, &nonholo_support(Family::Cesaro))
            && residue_disjoint(&[83, 107], 120, &nonholo_support(Family::Omega)),
    );

    // 8: 500 random decompositions per family satisfy the exact identities
    gate.check(8, "500 random shift decompositions verify exactly", fuzz_decompositions());

    // 9: oracle equivalence
    let oracle = cesaro_oracle(200, 404);
    let series = cesaro_series(200, Integers);
    let lambda = BigRational::from(BigInt::from(2));
    let cesaro_ok = oracle.stabilized >= 200 && oracle.mismatches(&lambda, &series).is_empty();
    let omega_ok = omega_series(500, Integers).coeffs() == omega_brute(500).coeffs();
    let f_ok = f_series(500, Integers).coeffs() == f_brute(500).coeffs();
    gate.check(
        9,
        "generators match the independent oracles (lambda = 2, N = 500)",
        cesaro_ok && omega_ok && f_ok,
    );

    // 10: first coefficients and the 1:3 leading ratio
    let c = cesaro_series(4, Integers);
    let o = omega_series(6, Integers);
    let c_vals: Vec<i64> = (0..4).map(|n| c.coeff_i64(n)).collect();
    let o_vals: Vec<i64> = (0..6).map(|n| o.coeff_i64(n)).collect();
    gate.check(
        10,
        "first coefficients (1,3,-7,14) / (1,2,3,4,6,8) with leading ratio 1:3",
        c_vals == [1, 3, -7, 14] && o_vals == [1, 2, 3, 4, 6, 8] && 3 * c_vals[0] == c_vals[1],
    );

    // 11: both holomorphy certificates pass; the multiplier-free run fails
    let q_c = EtaQuotient::parse(1152, "24:12,1:24").unwrap();
    let led_c =
        holomorphy_certificate(Family::Cesaro, 24, &q_c, GroupKind::Gamma1, &[7]).unwrap();
    let q_o = EtaQuotient::parse(86400, "120:240,1:48").unwrap();
    let led_o =
        holomorphy_certificate(Family::Omega, 120, &q_o, GroupKind::Gamma0, &[83, 107]).unwrap();
    let bare = EtaQuotient::new(1152, vec![]).unwrap();
    let led_bare =
        holomorphy_certificate(Family::Cesaro, 24, &bare, GroupKind::Gamma1, &[7]).unwrap();
    gate.check(
        11,
        "cusp certificates pass for both quotients and fail without them",
        certificate_passes(&led_c)
            && certificate_passes(&led_o)
            && !negative_margins(&led_bare).is_empty(),
    );

    // 12: three false claims fail with counterexamples below index 100
    let false_claims = [
        CongruenceClaim::new(SeriesId::Cesaro, 3, 3, vec![0]).unwrap(),
        CongruenceClaim::new(SeriesId::Cesaro, 3, 3, vec![2]).unwrap(),
        CongruenceClaim::new(SeriesId::Omega, 5, 40, vec![0]).unwrap(),
    ];
    let all_fail = false_claims.iter().all(|c| {
        let cert = verify_claim(c, BoundPolicy::Paper).unwrap();
        matches!(cert.first_failure, Some(n) if n < 100) && !cert.pass
    });
    gate.check(12, "three adversarial claims fail below index 100", all_fail);

    assert!(
        gate.failures.is_empty(),
        "failed criteria: {:?}",
        gate.failures
    );
}

fn random_sl2(rng: &mut impl Rng) -> Mat2 {
    let mut m = Mat2::identity();
    for _ in 0..5 {
        let k = rng.gen_range(-3..=3i64);
        m = m.mul(&Mat2::new(1, k, 0, 1).unwrap());
        if rng.gen_bool(0.7) {
            m = m.mul(&Mat2::s());
        }
    }
    m
}

fn fuzz_decompositions() -> bool {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2026);
    let tau = Rat::new(3, 13);

    let mut done = 0;
    while done < 500 {
        let mat = random_sl2(&mut rng);
        let m = rng.gen_range(2..=48u64);
        let s = rng.gen_range(0..m);
        let sigma = 8 * s;
        let inner = match mat.apply(tau) {
            Some(v) => v,
            None => continue,
        };
        let d = decompose_shift_cesaro(&mat, sigma, m).unwrap();
        // divisibility and unimodularity
        if (m * m) % d.l as u64 != 0 {
            return false;
        }
        if d.at as i128 * d.dt as i128 - d.bt as i128 * d.ct as i128 != 1 {
            return false;
        }
        // exact Moebius identity
        let lhs = mobius(m as i128, sigma as i128, 0, m as i128, inner).unwrap();
        let tri = mobius(d.l as i128, d.t as i128, 0, d.triangular_diag() as i128, tau).unwrap();
        let rhs = match d.unimodular().apply(tri) {
            Some(v) => v,
            None => return false,
        };
        if lhs != rhs {
            return false;
        }
        done += 1;
    }

    done = 0;
    while done < 500 {
        let mat = random_sl2(&mut rng);
        let m = 6 * rng.gen_range(1..=8u64);
        let s = rng.gen_range(0..m);
        let inner = match mat.apply(tau) {
            Some(v) => v,
            None => continue,
        };
        let d = decompose_shift_omega(&mat, s, m).unwrap();
        if (m * m / 6) % d.l as u64 != 0 {
            return false;
        }
        if d.at as i128 * d.dt as i128 - d.bt as i128 * d.ct as i128 != 1 {
            return false;
        }
        let shifted = mobius(m as i128, s as i128, 0, m as i128, inner).unwrap();
        let lhs = match mobius(6, 0, 0, 1, shifted) {
            Some(v) => v,
            None => continue,
        };
        let tri = mobius(d.l as i128, d.t as i128, 0, d.triangular_diag() as i128, tau).unwrap();
        let rhs = match d.unimodular().apply(tri) {
            Some(v) => v,
            None => return false,
        };
        if lhs != rhs {
            return false;
        }
        done += 1;
    }
    true
}
