//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line (run with `--nocapture` to see them).

use robin_kappa::arith::{sigma_kappa, Factorization, SigmaKappaValue};
use robin_kappa::constants::{c_constant, zeta};
use robin_kappa::critical::{ca_number, ca_sequence, enumerate_critical};
use robin_kappa::hp::{HPReal, Kappa};
use robin_kappa::props;
use robin_kappa::sieve::{
    mean_value_report, scan_lagarias, scan_robin, theta_spot_checks, ScanCriterion,
};
use std::time::Instant;

const P: u32 = 128;

fn kappa_int(k: u32) -> Kappa {
    Kappa::integer(k).unwrap()
}

fn report(id: u32, name: &str, pass: bool) {
    println!(
        "criterion {id:2} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed");
}

/// The 79 verified counterexamples to the kappa=2 Robin-type inequality
/// below 3*10^6 (degenerate n = 2 included by convention).
const ROBIN_79: [u64; 79] = [
    2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 16, 18, 20, 24, 28, 30, 36, 40, 42, 48, 54, 60, 72,
    84, 90, 96, 108, 120, 126, 132, 144, 168, 180, 210, 240, 252, 300, 336, 360, 420, 480, 504,
    540, 600, 630, 660, 720, 840, 1080, 1260, 1320, 1440, 1680, 2520, 3360, 3780, 4200, 4620,
    5040, 7560, 9240, 10080, 12600, 13860, 15120, 18480, 27720, 32760, 55440, 65520, 83160,
    110880, 166320, 360360, 720720, 1441440, 2162160,
];

#[test]
fn criterion_01_robin_counterexamples() {
    let t0 = Instant::now();
    let records = scan_robin(3_000_000, &kappa_int(2), P).unwrap();
    let ns: Vec<u64> = records.iter().map(|r| r.n).collect();
    let mut pass = ns == ROBIN_79;
    pass &= *ns.last().unwrap() == 2_162_160;
    for r in records.iter().skip(1) {
        pass &= r.margin.precision_bits() >= 128;
        pass &= r.margin.to_f64() > 0.0;
        pass &= r.lhs > r.rhs;
    }
    pass &= t0.elapsed().as_secs() < 300;
    println!(
        "  robin kappa=2 to 3e6: {} counterexamples in {:?}",
        ns.len(),
        t0.elapsed()
    );
    report(1, "robin counterexamples kappa=2", pass);
}

// The strong list the scan verifies; the source remark says "a total of 33"
// but itself lists these 32, and the exhaustive certified scan agrees with
// the list, not the count.
const LAGARIAS_STRONG_32: [u64; 32] = [
    2, 3, 4, 6, 8, 10, 12, 18, 20, 24, 30, 36, 42, 48, 60, 72, 84, 90, 120, 168, 180, 240, 360,
    420, 720, 840, 1260, 1680, 2520, 5040, 27720, 55440,
];

const LAGARIAS_WEAK_25: [u64; 25] = [
    2, 4, 6, 12, 18, 24, 30, 36, 48, 60, 72, 84, 120, 180, 240, 360, 420, 720, 840, 1260, 1680,
    2520, 5040, 27720, 55440,
];

#[test]
fn criterion_02_lagarias_counterexamples() {
    let t0 = Instant::now();
    let k2 = kappa_int(2);
    let strong = scan_lagarias(100_000, &k2, ScanCriterion::LagariasStrong, P).unwrap();
    let weak = scan_lagarias(100_000, &k2, ScanCriterion::LagariasWeak, P).unwrap();
    let strong_ns: Vec<u64> = strong.iter().map(|r| r.n).collect();
    let weak_ns: Vec<u64> = weak.iter().map(|r| r.n).collect();
    let mut pass = strong_ns == LAGARIAS_STRONG_32;
    pass &= weak_ns == LAGARIAS_WEAK_25;
    pass &= strong_ns.last() == Some(&55440) && weak_ns.last() == Some(&55440);
    let k389 = Kappa::parse("3.89", P).unwrap();
    let none = scan_lagarias(100_000, &k389, ScanCriterion::LagariasWeak, P).unwrap();
    pass &= none.is_empty();
    pass &= t0.elapsed().as_secs() < 60;
    println!(
        "  lagarias to 1e5: strong {} weak {} kappa=3.89 {} in {:?}",
        strong_ns.len(),
        weak_ns.len(),
        none.len(),
        t0.elapsed()
    );
    report(2, "lagarias counterexamples", pass);
}

#[test]
fn criterion_03_ca_construction() {
    // the 6th CA number together with the critical value at which it stops
    // being optimal (the value the worked examples print alongside N_6)
    let entries2 = ca_sequence(&kappa_int(2), 6, P).unwrap();
    let n6_2 = entries2[5].factorization.value();
    let eps2 = entries2[5].eps_next.to_f64();
    let mut pass = n6_2 == 840;
    pass &= (eps2 - 0.05696).abs() / 0.05696 < 1e-3; // 4 significant digits

    let entries3 = ca_sequence(&kappa_int(3), 6, P).unwrap();
    let n6_3 = entries3[5].factorization.value();
    let eps3 = entries3[5].eps_next.to_f64();
    pass &= n6_3 == 360;
    pass &= (eps3 - 0.06829).abs() / 0.06829 < 1e-3;

    // the special kappa where two prime ladders cross: the 13th critical
    // value is a tie group and N_13 picks up both primes at once
    let prec_tie = 96;
    let kappa_star = Kappa::parse("2.956801214357021", prec_tie).unwrap();
    let values = enumerate_critical(&kappa_star, 13, prec_tie).unwrap();
    let tie = &values[12];
    pass &= tie.is_tie();
    let members: Vec<(u64, u32)> = tie.members.iter().map(|e| (e.p, e.a)).collect();
    pass &= members == vec![(2, 5), (5, 2)];
    // 15 significant digits: relative error below 1e-14 (kappa itself is a
    // 16-digit decimal, which caps the achievable agreement)
    let target = 0.019785233524272305_f64;
    pass &= ((tie.eps.to_f64() - target) / target).abs() < 1e-14;
    let seq = ca_sequence(&kappa_star, 13, prec_tie).unwrap();
    let n13 = seq[12].factorization.value();
    let expected = rug::Integer::from(367567200u64); // 2^5 3^3 5^2 7 11 13 17
    pass &= n13 == expected;
    pass &= seq[12].factorization.pairs()
        == [(2u64, 5u32), (3, 3), (5, 2), (7, 1), (11, 1), (13, 1), (17, 1)];
    println!(
        "  N_6[2]={n6_2} eps={eps2:.5}; N_6[3]={n6_3} eps={eps3:.5}; tie eps={}",
        tie.eps.to_decimal_string()
    );
    report(3, "colossally abundant construction", pass);
}

#[test]
fn criterion_04_brute_force_ca_oracle() {
    let t0 = Instant::now();
    let bound = 100_000u64;
    let mut pass = true;
    for kappa in [2u32, 3] {
        let kk = kappa_int(kappa);
        let values = enumerate_critical(&kk, 10, P).unwrap();
        // interval 0 sits above the first critical value; interval i >= 1 is
        // (eps_{i+1}, eps_i], probed at a point in its interior
        for interval in 0..10usize {
            let eps = if interval == 0 {
                2.0 * values[0].eps.to_f64()
            } else if interval < 9 {
                (values[interval - 1].eps.to_f64() * values[interval].eps.to_f64()).sqrt()
            } else {
                (values[8].eps.to_f64() * values[9].eps.to_f64()).sqrt()
            };
            let eps_hp = HPReal::from_f64(eps, P);
            let constructed = ca_number(&eps_hp, &kk, P).unwrap();
            let n_constructed = constructed.factorization.value().to_u64().unwrap();
            // exhaustive argmax of ln rho over n <= bound
            let mut best_n = 1u64;
            let mut best = 0.0f64; // ln rho(1) = 0
            let scale = f64::from(kappa) * (1.0 + eps);
            for n in 2..=bound {
                let mut ln_sigma_kappa = 0.0f64;
                let fac = trial_factor(n);
                for &(p, e) in &fac {
                    let (hi, lo) = sigma_pair(p, e);
                    ln_sigma_kappa += f64::from(kappa) * hi.ln()
                        + (-((lo / hi).powf(f64::from(kappa)))).ln_1p();
                }
                let v = ln_sigma_kappa - scale * (n as f64).ln();
                if v > best {
                    best = v;
                    best_n = n;
                }
            }
            if n_constructed != best_n {
                eprintln!(
                    "  mismatch kappa={kappa} interval={interval}: built {n_constructed}, argmax {best_n}"
                );
                pass = false;
            }
        }
    }
    pass &= t0.elapsed().as_secs() < 120;
    println!("  brute-force rho argmax agreed on 20 intervals in {:?}", t0.elapsed());
    report(4, "brute-force CA oracle", pass);
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn sigma_pair(p: u64, e: u32) -> (f64, f64) {
    let mut lo = 1.0f64;
    let mut term = 1.0f64;
    for _ in 0..e - 1 {
        term *= p as f64;
        lo += term;
    }
    (lo + term * p as f64, lo)
}

#[test]
fn criterion_05_mean_value_kappa_two() {
    let t0 = Instant::now();
    let k2 = kappa_int(2);
    let mut ratios = Vec::new();
    let mut sums = Vec::new();
    for x in [10_000u64, 100_000, 1_000_000] {
        let r = mean_value_report(x, &k2, P).unwrap();
        let xf = x as f64;
        let denom = xf * xf * xf.ln().powf(4.0 / 3.0) * xf.ln().ln().powf(8.0 / 3.0);
        ratios.push(r.residual.to_f64().abs() / denom);
        sums.push(r);
    }
    // |S - main - secondary| / (x^2 log^{4/3} x loglog^{8/3} x) must not grow
    let mut pass = ratios[2] <= ratios[0].max(ratios[1]);
    // and the leading term alone captures S to 5e-4 at x = 10^6
    let r6 = &sums[2];
    let s_over_main = match &r6.sum {
        SigmaKappaValue::Exact(s) => {
            let s = HPReal::from_integer(s, P);
            (&s / &r6.main_term).to_f64()
        }
        _ => unreachable!(),
    };
    pass &= (s_over_main - 1.0).abs() < 5e-4;
    pass &= t0.elapsed().as_secs() < 180;
    println!(
        "  residual ratios {:?}, |S/main - 1| = {:.3e} in {:?}",
        ratios
            .iter()
            .map(|v| (v * 1000.0).round() / 1000.0)
            .collect::<Vec<_>>(),
        (s_over_main - 1.0).abs(),
        t0.elapsed()
    );
    report(5, "mean value kappa=2", pass);
}

#[test]
fn criterion_06_c_constant_convergence() {
    let k2 = kappa_int(2);
    let c = c_constant(&k2, 1_000_000, P).unwrap();
    let z3 = zeta(&kappa_int(3), P).unwrap();
    let target = &HPReal::from_f64(2.5, P) * &z3;
    let rel = (&(&c.partial - &target).abs() / &target).to_f64();
    let pass = rel < 1e-3;
    println!("  c(2) truncated at 1e6: relative error {rel:.2e}");
    report(6, "c(2) convergence", pass);
}

#[test]
fn criterion_07_monotonicity_suites() {
    let suites = [
        "f-monotonicity",
        "f-limits",
        "h-log-concave",
        "inverse-roundtrip",
        "x2-bounds",
        "x2-asymptotic",
        "h-functions",
        "appendix-inequality",
        "kappa-root",
    ];
    let mut pass = true;
    for name in suites {
        let r = props::run_suite(name, P).unwrap();
        if !r.passed() {
            eprintln!("  suite {name}: {:?}", r.violations.iter().take(5).collect::<Vec<_>>());
            pass = false;
        }
        println!("  suite {name}: {} checks, {} violations", r.checks, r.violations.len());
    }
    report(7, "monotonicity suites", pass);
}

#[test]
fn criterion_08_definition_equivalence() {
    let mut pass = true;
    for name in ["definition-equivalence", "lower-bound", "monotone-approach", "sieve-consistency"] {
        let r = props::run_suite(name, P).unwrap();
        if !r.passed() {
            eprintln!("  suite {name}: {:?}", r.violations.iter().take(5).collect::<Vec<_>>());
            pass = false;
        }
        println!("  suite {name}: {} checks, {} violations", r.checks, r.violations.len());
    }
    report(8, "definition equivalence and lower bound", pass);
}

#[test]
fn criterion_09_appendix_certificates() {
    let t0 = Instant::now();
    let mut pass = true;
    for a in 2..=40u32 {
        let c = robin_kappa::poly::certificate(a).unwrap();
        pass &= c.sign_changes == (a + 1) as usize;
        pass &= c.leading == (2 * (a - 1)).to_string();
        let c0 = -(rug::Integer::from(-2).pow(a));
        pass &= c.c0 == c0.to_string();
        pass &= c.formulas_match;
        pass &= c.divisibility;
        pass &= c.nonnegative_on_tail;
    }
    pass &= t0.elapsed().as_secs() < 30;
    println!("  39 certificates verified in {:?}", t0.elapsed());
    report(9, "appendix certificates", pass);
}

use rug::ops::Pow;

#[test]
fn criterion_10_theta_and_mertens() {
    let checks = theta_spot_checks(
        &[286, 1000, 19421, 100_000, 1_000_000, 10_000_000],
        P,
    )
    .unwrap();
    let mut pass = true;
    for c in &checks {
        if c.x == 19421 {
            pass &= (c.theta.to_f64() - 19182.3).abs() < 0.05;
        }
        if let Some(ok) = c.chebyshev_band_holds {
            pass &= ok;
        }
        if let Some(ok) = c.mertens_bracket_holds {
            pass &= ok;
        }
    }
    println!(
        "  theta(19421) = {:.1}; bounds hold at all {} samples",
        checks.iter().find(|c| c.x == 19421).unwrap().theta.to_f64(),
        checks.len()
    );
    report(10, "theta and Mertens spot checks", pass);
}

#[test]
fn criterion_11_headline_scope() {
    // The headline equivalence (RH versus the inequality holding for every
    // n > 2162160) and the astronomically large verification bound are not
    // desk-scale computations. This build covers them through the finite
    // certified scans (criteria 1-2) and the property suites (criteria 7-8):
    // check here that the scan boundary value really is the last
    // counterexample the finite scan can exhibit.
    let k2 = kappa_int(2);
    let records = scan_robin(2_200_000, &k2, P).unwrap();
    let pass = records.last().map(|r| r.n) == Some(2_162_160);
    println!("  finite-scan boundary confirmed at 2162160");
    report(11, "headline scope covered by finite scans", pass);
}

#[test]
fn sigma_values_exact_spot() {
    // anchor a few exact values used across the suite
    let v = sigma_kappa(&Factorization::of(2_162_160).unwrap(), &kappa_int(2), 0);
    assert_eq!(
        v.as_exact().unwrap(),
        &rug::Integer::from(64_758_486_592_800u64)
    );
}
