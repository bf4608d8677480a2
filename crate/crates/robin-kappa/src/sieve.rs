//! Batch computation over ranges: sigma^[kappa] streams, partial-sum reports,
//! Robin/Lagarias counterexample scans, and prime-sum spot checks.
//!
//! Ranges are processed in independent chunks (factored by the primes up to
//! sqrt(hi), with the cofactor left over as a single large prime), so memory
//! stays at O(chunk) regardless of the range. Scans run a fast log-domain f64
//! prefilter with a wide safety margin; only near-boundary candidates are
//! re-evaluated in high precision, and every emitted record is certified.

use crate::arith::{ln_sigma_kappa, primes_below, Factorization, SigmaKappaValue};
use crate::constants::{c_constant, euler_gamma, sigma_prime_power, zeta};
use crate::error::{Error, Result};
use crate::hp::{certify, HPReal, Kappa, Relation};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer};

/// Largest admissible sieve endpoint; chunking keeps memory at O(chunk_size)
/// but per-run cost past this point stops being a desk-scale computation.
pub const MAX_SIEVE_HI: u64 = 1 << 31;
pub const DEFAULT_CHUNK_SIZE: usize = 1 << 20;

/// Width of the f64 log-domain prefilter window. Accumulated f64 error per n
/// is far below 1e-9, so any n whose true log-margin is inside the window is
/// guaranteed to be flagged for certification.
const PREFILTER_LOG_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct RangeScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub kappa: Kappa,
    pub precision_bits: u32,
    pub chunk_size: usize,
}

impl RangeScanConfig {
    pub fn new(lo: u64, hi: u64, kappa: Kappa) -> Self {
        RangeScanConfig {
            lo,
            hi,
            kappa,
            precision_bits: crate::hp::DEFAULT_PRECISION,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lo < 1 || self.lo > self.hi {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= lo <= hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.hi > MAX_SIEVE_HI {
            return Err(Error::RangeGuard(format!(
                "hi = {} exceeds the sieve bound {MAX_SIEVE_HI}; chunked memory stays at \
                 O(chunk_size) but the run would not be desk-scale",
                self.hi
            )));
        }
        if self.chunk_size < 64 {
            return Err(Error::InvalidConfig("chunk_size must be >= 64".into()));
        }
        Ok(())
    }
}

/// Walks [lo, hi] in order, handing each n to `visit` together with its
/// factorization accumulated through `combine` over an accumulator type.
fn process_range<A: Clone>(
    lo: u64,
    hi: u64,
    chunk_size: usize,
    primes: &[u64],
    init: &A,
    combine: &mut impl FnMut(&mut A, u64, u32),
    visit: &mut impl FnMut(u64, A),
) {
    let mut start = lo;
    let mut rem: Vec<u64> = Vec::with_capacity(chunk_size);
    let mut acc: Vec<A> = Vec::with_capacity(chunk_size);
    while start <= hi {
        let len = ((hi - start + 1) as usize).min(chunk_size);
        rem.clear();
        rem.extend(start..start + len as u64);
        acc.clear();
        acc.resize(len, init.clone());
        for &p in primes {
            if p.saturating_mul(p) > start + len as u64 - 1 {
                break;
            }
            let mut m = start.div_ceil(p) * p;
            while m < start + len as u64 {
                let idx = (m - start) as usize;
                let mut e = 0u32;
                while rem[idx].is_multiple_of(p) {
                    rem[idx] /= p;
                    e += 1;
                }
                if e > 0 {
                    combine(&mut acc[idx], p, e);
                }
                m += p;
            }
        }
        for idx in 0..len {
            if rem[idx] > 1 {
                combine(&mut acc[idx], rem[idx], 1);
            }
            visit(start + idx as u64, acc[idx].clone());
        }
        start += len as u64;
    }
}

fn sieve_primes_for(hi: u64) -> Vec<u64> {
    let root = (hi as f64).sqrt() as u64 + 2;
    primes_below(root + 1)
}

/// ln sigma^[kappa](p^e) in f64; used only for prefiltering.
fn ln_local_f64(p: u64, e: u32, kappa: f64) -> f64 {
    let mut s_lo = 1.0f64;
    let mut term = 1.0f64;
    for _ in 0..e - 1 {
        term *= p as f64;
        s_lo += term;
    }
    let s_hi = s_lo + term * p as f64;
    kappa * s_hi.ln() + (-((s_lo / s_hi).powf(kappa))).ln_1p()
}

/// Streams (n, sigma^[kappa](n)) over the configured range in ascending
/// order. Integer kappa streams exact values; real kappa streams HPReal.
pub fn sieve_sigma_kappa(
    config: &RangeScanConfig,
    mut sink: impl FnMut(u64, SigmaKappaValue),
) -> Result<()> {
    config.validate()?;
    let primes = sieve_primes_for(config.hi);
    match &config.kappa {
        Kappa::Int(k) => {
            let k = *k;
            process_range(
                config.lo,
                config.hi,
                config.chunk_size,
                &primes,
                &Integer::from(1),
                &mut |acc: &mut Integer, p, e| {
                    let hi = sigma_prime_power(p, e).pow(k);
                    let lo = sigma_prime_power(p, e - 1).pow(k);
                    *acc *= hi - lo;
                },
                &mut |n, v| sink(n, SigmaKappaValue::Exact(v)),
            );
        }
        Kappa::Real(_) => {
            let prec = config.precision_bits;
            let kappa = config.kappa.clone();
            process_range(
                config.lo,
                config.hi,
                config.chunk_size,
                &primes,
                &Vec::<(u64, u32)>::new(),
                &mut |acc: &mut Vec<(u64, u32)>, p, e| acc.push((p, e)),
                &mut |n, pairs| {
                    let mut pairs = pairs;
                    pairs.sort_unstable();
                    let fac = Factorization::from_pairs(pairs).expect("sieve factors are prime");
                    sink(n, crate::arith::sigma_kappa(&fac, &kappa, prec));
                },
            );
        }
    }
    Ok(())
}

/// Exact u128 range sum of sigma^[kappa](n) for integer kappa; the per-value
/// bound is prechecked so every intermediate fits.
fn exact_sum_u128(lo: u64, hi: u64, k: u32, chunk: usize) -> Option<Integer> {
    // sigma(n) < n (1 + ln n); per-value sigma^kappa must fit u128 with
    // headroom for 2^16 values per flushed block
    let s_max = (hi as f64) * (1.0 + (hi as f64).ln());
    if (k as f64) * s_max.ln() > 110.0 * std::f64::consts::LN_2 {
        return None;
    }
    let primes = sieve_primes_for(hi);
    let mut total = Integer::from(0);
    let mut chunk_sum: u128 = 0;
    let mut count = 0usize;
    process_range(
        lo,
        hi,
        chunk,
        &primes,
        &1u128,
        &mut |acc: &mut u128, p, e| {
            let s_hi = sigma_prime_power(p, e).to_u128().unwrap();
            let s_lo = sigma_prime_power(p, e - 1).to_u128().unwrap();
            *acc *= s_hi.pow(k) - s_lo.pow(k);
        },
        &mut |_n, v| {
            chunk_sum += v;
            count += 1;
            if count == 1 << 16 {
                total += Integer::from(chunk_sum);
                chunk_sum = 0;
                count = 0;
            }
        },
    );
    total += Integer::from(chunk_sum);
    Some(total)
}

/// Partial-sum report for sum_{n<=x} sigma^[kappa](n) against the mean-value
/// main term c(kappa) x^{kappa+1} / ((kappa+1) zeta(kappa+1)); kappa = 2 also
/// carries the explicit secondary term 3/(4 zeta(2)) x^2 log^2 x.
#[derive(Clone, Debug)]
pub struct PartialSumReport {
    pub x: u64,
    pub sum: SigmaKappaValue,
    pub main_term: HPReal,
    pub secondary_term: HPReal,
    pub residual: HPReal,
}

pub fn mean_value_report(x: u64, kappa: &Kappa, prec: u32) -> Result<PartialSumReport> {
    if x < 3 {
        return Err(Error::Domain("mean value requires x >= 3".into()));
    }
    if x > MAX_SIEVE_HI {
        return Err(Error::RangeGuard(format!("x = {x} exceeds sieve bound")));
    }
    let sum = match kappa {
        Kappa::Int(k) => {
            let total = match exact_sum_u128(1, x, *k, DEFAULT_CHUNK_SIZE) {
                Some(t) => t,
                None => {
                    let mut t = Integer::from(0);
                    let config = RangeScanConfig::new(1, x, kappa.clone());
                    sieve_sigma_kappa(&config, |_, v| {
                        if let SigmaKappaValue::Exact(i) = v {
                            t += i;
                        }
                    })?;
                    t
                }
            };
            SigmaKappaValue::Exact(total)
        }
        Kappa::Real(_) => {
            let mut total = HPReal::zero(prec);
            let config = RangeScanConfig {
                precision_bits: prec,
                ..RangeScanConfig::new(1, x, kappa.clone())
            };
            sieve_sigma_kappa(&config, |_, v| {
                if let SigmaKappaValue::Approx(h) = v {
                    total = &total + &h;
                }
            })?;
            SigmaKappaValue::Approx(total)
        }
    };
    let xf = HPReal::from_u64(x, prec);
    let kf = kappa.as_hp(prec);
    let one = HPReal::one(prec);
    let (main_term, secondary_term) = if kappa.as_int() == Some(2) {
        // c(2)/(3 zeta(3)) = 5/6 exactly
        let x3 = Integer::from(x).pow(3);
        let main = &HPReal::from_integer(&(x3 * Integer::from(5)), prec) / &HPReal::from_u64(6, prec);
        let z2 = zeta(&Kappa::integer(2).unwrap(), prec)?;
        let logx = xf.ln();
        let sec = &(&(&HPReal::from_u64(3, prec) / &(&HPReal::from_u64(4, prec) * &z2))
            * &(&xf * &xf))
            * &(&logx * &logx);
        (main, sec)
    } else {
        let kappa_plus = match kappa {
            Kappa::Int(k) => Kappa::integer(k + 1).unwrap(),
            Kappa::Real(v) => Kappa::real(&v.with_precision(prec) + &one).unwrap(),
        };
        let c = c_constant(kappa, 1_000_000, prec)?;
        let z = zeta(&kappa_plus, prec)?;
        let power = xf.pow(&(&kf + &one));
        let main = &(&c.estimate() * &power) / &(&(&kf + &one) * &z);
        (main, HPReal::zero(prec))
    };
    let sum_hp = sum.to_hp(prec);
    let residual = &(&sum_hp - &main_term) - &secondary_term;
    Ok(PartialSumReport {
        x,
        sum,
        main_term,
        secondary_term,
        residual,
    })
}

/// The three kappa = 2 partial sums: sum sigma_{-1}^[2](n), sum sigma_{-1}^[2](n)/n,
/// and sum (sigma(n)/n)^2, all from exact per-term integers.
pub fn sigma_minus1_partial_sums(x: u64, prec: u32) -> Result<(HPReal, HPReal, HPReal)> {
    if x < 3 {
        return Err(Error::Domain("partial sums require x >= 3".into()));
    }
    if x > MAX_SIEVE_HI {
        return Err(Error::RangeGuard(format!("x = {x} exceeds sieve bound")));
    }
    let primes = sieve_primes_for(x);
    let mut s1 = HPReal::zero(prec);
    let mut s2 = HPReal::zero(prec);
    let mut s3 = HPReal::zero(prec);
    // acc = (T(n), sigma(n)) with T(p^e) = sigma(p^e)^2 - p^2 sigma(p^{e-1})^2,
    // so sigma_{-1}^[2](n) = T(n)/n^2 exactly.
    process_range(
        1,
        x,
        DEFAULT_CHUNK_SIZE,
        &primes,
        &(1u128, 1u128),
        &mut |acc: &mut (u128, u128), p, e| {
            let s_hi = sigma_prime_power(p, e).to_u128().unwrap();
            let s_lo = sigma_prime_power(p, e - 1).to_u128().unwrap();
            acc.0 *= s_hi * s_hi - (p as u128 * s_lo) * (p as u128 * s_lo);
            acc.1 *= s_hi;
        },
        &mut |n, (t, sig)| {
            let nf = HPReal::from_u64(n, prec);
            let n2 = &nf * &nf;
            let t_hp = HPReal::from_float(Float::with_val(prec, t));
            let sig_hp = HPReal::from_float(Float::with_val(prec, sig));
            let sm1 = &t_hp / &n2;
            s1 = &s1 + &sm1;
            s2 = &s2 + &(&sm1 / &nf);
            s3 = &s3 + &(&(&sig_hp * &sig_hp) / &n2);
        },
    );
    Ok((s1, s2, s3))
}

/// Which inequality a scan checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanCriterion {
    Robin,
    LagariasStrong,
    LagariasWeak,
}

/// A certified counterexample: lhs >= rhs with positive margin at the
/// record's precision.
#[derive(Clone, Debug)]
pub struct CounterexampleRecord {
    pub n: u64,
    pub criterion: ScanCriterion,
    pub lhs: HPReal,
    pub rhs: HPReal,
    pub margin: HPReal,
}

/// Scans (2, hi] for violations of the kappa-Robin inequality
/// zeta(kappa) sigma^[kappa](n) < (e^gamma n loglog n)^kappa.
///
/// n = 2 has loglog n < 0; the criterion counts as violated whenever
/// loglog n <= 0, so n = 2 is reported as a degenerate record with rhs = 0.
pub fn scan_robin(hi: u64, kappa: &Kappa, prec: u32) -> Result<Vec<CounterexampleRecord>> {
    if hi < 2 {
        return Err(Error::Domain("scan requires hi >= 2".into()));
    }
    if hi > MAX_SIEVE_HI {
        return Err(Error::RangeGuard(format!("hi = {hi} exceeds sieve bound")));
    }
    let mut records = Vec::new();
    // degenerate n = 2
    {
        let z = zeta(kappa, prec)?;
        let two = Factorization::of(2).unwrap();
        let lhs = &z.ln() + &ln_sigma_kappa(&two, kappa, prec);
        records.push(CounterexampleRecord {
            n: 2,
            criterion: ScanCriterion::Robin,
            lhs: lhs.exp(),
            rhs: HPReal::zero(prec),
            margin: lhs.exp(),
        });
    }
    if hi == 2 {
        return Ok(records);
    }
    let kf64 = kappa.to_f64();
    let ln_zeta_f64 = zeta(kappa, prec)?.ln().to_f64();
    let gamma_f64 = euler_gamma(prec)?.to_f64();
    let primes = sieve_primes_for(hi);
    // chunk boundaries processed in parallel, candidates merged in order
    let chunk = DEFAULT_CHUNK_SIZE as u64;
    let starts: Vec<u64> = (3..=hi).step_by(chunk as usize).collect();
    let candidate_lists: Vec<Vec<u64>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk - 1).min(hi);
            let mut out = Vec::new();
            process_range(
                start,
                end,
                chunk as usize,
                &primes,
                &0.0f64,
                &mut |acc: &mut f64, p, e| *acc += ln_local_f64(p, e, kf64),
                &mut |n, ln_sigma| {
                    let nf = n as f64;
                    let lhs = ln_zeta_f64 + ln_sigma;
                    let rhs = kf64 * (gamma_f64 + nf.ln() + nf.ln().ln().ln());
                    if lhs >= rhs - PREFILTER_LOG_MARGIN {
                        out.push(n);
                    }
                },
            );
            out
        })
        .collect();
    let ladder = escalation_from(prec);
    for n in candidate_lists.into_iter().flatten() {
        let fac = Factorization::of(n)?;
        let verdict = certify(
            |bits| {
                let z = zeta(kappa, bits).expect("validated");
                let lhs = &z.ln() + &ln_sigma_kappa(&fac, kappa, bits);
                let gamma = euler_gamma(bits).expect("validated");
                let nf = HPReal::from_u64(n, bits);
                let kf = kappa.as_hp(bits);
                let rhs = &kf * &(&(&gamma + &nf.ln()) + &nf.ln().ln().ln());
                (lhs, rhs)
            },
            &ladder,
            n,
        )?;
        if verdict.relation == Relation::Greater {
            let z = zeta(kappa, prec)?;
            let lhs = (&z.ln() + &ln_sigma_kappa(&fac, kappa, prec)).exp();
            let gamma = euler_gamma(prec)?;
            let nf = HPReal::from_u64(n, prec);
            let kf = kappa.as_hp(prec);
            let rhs = (&kf * &(&(&gamma + &nf.ln()) + &nf.ln().ln().ln())).exp();
            records.push(CounterexampleRecord {
                n,
                criterion: ScanCriterion::Robin,
                margin: &lhs - &rhs,
                lhs,
                rhs,
            });
        }
    }
    Ok(records)
}

fn escalation_from(prec: u32) -> Vec<u32> {
    let mut ladder: Vec<u32> = crate::hp::ESCALATION_LADDER
        .iter()
        .copied()
        .filter(|&b| b >= prec)
        .collect();
    if ladder.is_empty() || ladder[0] != prec.max(128) {
        ladder.insert(0, prec.max(128));
        ladder.dedup();
    }
    ladder
}

/// Exact harmonic accumulator: num/den with den = lcm(1..n), kept exact by
/// big-integer times small-integer updates only.
struct ExactHarmonic {
    num: Integer,
    den: Integer,
}

impl ExactHarmonic {
    fn new() -> Self {
        ExactHarmonic {
            num: Integer::from(0),
            den: Integer::from(1),
        }
    }

    fn push(&mut self, n: u64) {
        let g = self.den.clone().gcd(&Integer::from(n));
        let scale = Integer::from(n) / g;
        if scale != 1 {
            self.num *= &scale;
            self.den *= &scale;
        }
        self.num += self.den.clone() / Integer::from(n);
    }

    fn to_hp(&self, prec: u32) -> HPReal {
        HPReal::from_float(
            Float::with_val(prec, &self.num) / Float::with_val(prec, &self.den),
        )
    }
}

/// Cap for exact-rational harmonic accumulation; past it the scan switches to
/// compensated high-precision summation (error n * 2^-256, certifiably tiny).
const EXACT_HARMONIC_CAP: u64 = 100_000;
const LAGARIAS_MAX_HI: u64 = 10_000_000;

/// Scans [2, hi] for violations of the Lagarias-type inequalities
///   strong: sigma^[kappa](n) < (e^{H_n} log H_n)^kappa / zeta(kappa)
///   weak:   sigma^[kappa](n) < (H_n + e^{H_n} log H_n)^kappa / zeta(kappa).
pub fn scan_lagarias(
    hi: u64,
    kappa: &Kappa,
    form: ScanCriterion,
    prec: u32,
) -> Result<Vec<CounterexampleRecord>> {
    if !matches!(form, ScanCriterion::LagariasStrong | ScanCriterion::LagariasWeak) {
        return Err(Error::InvalidConfig("form must be a Lagarias criterion".into()));
    }
    if hi < 2 {
        return Err(Error::Domain("scan requires hi >= 2".into()));
    }
    if hi > LAGARIAS_MAX_HI {
        return Err(Error::RangeGuard(format!(
            "hi = {hi} exceeds the Lagarias scan bound {LAGARIAS_MAX_HI}"
        )));
    }
    let strong = form == ScanCriterion::LagariasStrong;
    let kf64 = kappa.to_f64();
    let ln_zeta_f64 = zeta(kappa, prec)?.ln().to_f64();
    let table = crate::arith::SpfTable::up_to(hi);
    let hp_bits = 256u32;
    let mut exact_h = ExactHarmonic::new();
    exact_h.push(1);
    let mut hp_h = HPReal::one(hp_bits);
    // f64 harmonic with Kahan compensation for the prefilter
    let mut h64 = 1.0f64;
    let mut h64_c = 0.0f64;
    let mut records = Vec::new();
    let ladder = escalation_from(prec);
    for n in 2..=hi {
        let term = 1.0 / n as f64;
        let y = term - h64_c;
        let t = h64 + y;
        h64_c = (t - h64) - y;
        h64 = t;
        if n <= EXACT_HARMONIC_CAP {
            exact_h.push(n);
        }
        hp_h = &hp_h + &HPReal::from_u64(n, hp_bits).recip();
        let fac = Factorization::with_table(n, &table)?;
        let mut ln_sigma = 0.0f64;
        for &(p, e) in fac.pairs() {
            ln_sigma += ln_local_f64(p, e, kf64);
        }
        // ln rhs (without the zeta division): strong = kappa (H + ln ln H),
        // weak = kappa ln(H + e^H ln H)
        let envelope = if strong {
            kf64 * (h64 + h64.ln().ln())
        } else {
            kf64 * (h64 + (h64.exp() * h64.ln())).ln()
        };
        let lhs64 = ln_zeta_f64 + ln_sigma;
        let rhs64 = envelope;
        if lhs64 < rhs64 - PREFILTER_LOG_MARGIN {
            continue;
        }
        // certification with exact (or compensated) H
        let h_at = |bits: u32| -> HPReal {
            if n <= EXACT_HARMONIC_CAP {
                exact_h.to_hp(bits)
            } else {
                hp_h.with_precision(bits)
            }
        };
        let verdict = certify(
            |bits| {
                let z = zeta(kappa, bits).expect("validated");
                let lhs = &z.ln() + &ln_sigma_kappa(&fac, kappa, bits);
                let kf = kappa.as_hp(bits);
                let h = h_at(bits);
                let rhs = if strong {
                    &kf * &(&h + &h.ln().ln())
                } else {
                    &kf * &(&h + &(&h.exp() * &h.ln())).ln()
                };
                (lhs, rhs)
            },
            &ladder,
            n,
        )?;
        if verdict.relation == Relation::Greater {
            let z = zeta(kappa, prec)?;
            let lhs = (&z.ln() + &ln_sigma_kappa(&fac, kappa, prec)).exp();
            let kf = kappa.as_hp(prec);
            let h = h_at(prec);
            let rhs = if strong {
                (&kf * &(&h + &h.ln().ln())).exp()
            } else {
                (&kf * &(&h + &(&h.exp() * &h.ln())).ln()).exp()
            };
            records.push(CounterexampleRecord {
                n,
                criterion: form,
                margin: &lhs - &rhs,
                lhs,
                rhs,
            });
        }
    }
    Ok(records)
}

/// Spot checks at one x: theta(x), the Chebyshev band |theta(x) - x| < x/(8 log x)
/// (stated for x >= 19421), and the Mertens-product two-sided bracket
/// (stated for x >= 286).
#[derive(Clone, Debug)]
pub struct ThetaCheck {
    pub x: u64,
    pub theta: HPReal,
    pub mertens_product: HPReal,
    pub chebyshev_band_holds: Option<bool>,
    pub mertens_bracket_holds: Option<bool>,
}

pub fn theta_spot_checks(xs: &[u64], prec: u32) -> Result<Vec<ThetaCheck>> {
    if xs.is_empty() {
        return Err(Error::InvalidConfig("no sample points".into()));
    }
    let mut sorted: Vec<u64> = xs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let max = *sorted.last().unwrap();
    if max > MAX_SIEVE_HI {
        return Err(Error::RangeGuard(format!("x = {max} exceeds sieve bound")));
    }
    let primes = primes_below(max + 1);
    let gamma = euler_gamma(prec)?;
    let mut theta = HPReal::zero(prec);
    let mut product = HPReal::one(prec);
    let mut out = Vec::with_capacity(sorted.len());
    let mut iter = primes.iter().peekable();
    for &x in &sorted {
        while let Some(&&p) = iter.peek() {
            if p > x {
                break;
            }
            let pf = HPReal::from_u64(p, prec);
            theta = &theta + &pf.ln();
            // (1 - 1/p)^{-1}
            product = &product / &(&HPReal::one(prec) - &pf.recip());
            iter.next();
        }
        let xf = HPReal::from_u64(x, prec);
        let chebyshev_band_holds = if x >= 19421 {
            let gap = (&theta - &xf).abs();
            let bound = &xf / &(&HPReal::from_u64(8, prec) * &xf.ln());
            Some(crate::hp::compare(&gap, &bound).relation == Relation::Less)
        } else {
            None
        };
        let mertens_bracket_holds = if x >= 286 {
            let ln_x = xf.ln();
            let base = &gamma.exp() * &ln_x;
            let half_inv_sq =
                &HPReal::one(prec) / &(&HPReal::from_u64(2, prec) * &(&ln_x * &ln_x));
            let lower = &base * &(&HPReal::one(prec) - &half_inv_sq);
            let upper = &base * &(&HPReal::one(prec) + &half_inv_sq);
            let lo_ok = crate::hp::compare(&lower, &product).relation == Relation::Less;
            let hi_ok = crate::hp::compare(&product, &upper).relation == Relation::Less;
            Some(lo_ok && hi_ok)
        } else {
            None
        };
        out.push(ThetaCheck {
            x,
            theta: theta.clone(),
            mertens_product: product.clone(),
            chebyshev_band_holds,
            mertens_bracket_holds,
        });
    }
    Ok(out)
}
