//! Fundamental constants and special-function evaluation.
//!
//! gamma is computed (never hardcoded) with the Brent-McMillan Bessel-series
//! limit; zeta uses Euler-Maclaurin summation with the remainder controlled by
//! the first omitted term, which bounds the truncation error for real
//! arguments. Both are cached per (constant, precision) key; first use from
//! multiple threads is serialized by the cache lock.

use crate::error::{Error, Result};
use crate::hp::{HPReal, Kappa, MIN_PRECISION};
use once_cell::sync::Lazy;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::HashMap;
use std::sync::Mutex;

static GAMMA_CACHE: Lazy<Mutex<HashMap<u32, Float>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static ZETA_CACHE: Lazy<Mutex<HashMap<(String, u32), Float>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static BERNOULLI_CACHE: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(Vec::new()));

fn check_precision(prec: u32) -> Result<()> {
    if prec < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(prec));
    }
    Ok(())
}

/// Exact Bernoulli number `B_m` (B_1 = -1/2 convention).
pub fn bernoulli(m: usize) -> Rational {
    let mut cache = BERNOULLI_CACHE.lock().unwrap();
    while cache.len() <= m {
        let k = cache.len();
        let b = match k {
            0 => Rational::from(1),
            1 => Rational::from((-1, 2)),
            _ if k % 2 == 1 => Rational::from(0),
            _ => {
                // B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
                let mut acc = Rational::new();
                for (j, bj) in cache.iter().enumerate() {
                    if bj.cmp0() == std::cmp::Ordering::Equal {
                        continue;
                    }
                    let c = Integer::from(k as u32 + 1).binomial(j as u32);
                    acc += bj.clone() * c;
                }
                -acc / Rational::from(k as u32 + 1)
            }
        };
        cache.push(b);
    }
    cache[m].clone()
}

fn gamma_brent_mcmillan(working: u32) -> Float {
    // Bessel-series form: gamma = A(n)/B(n) - ln n with
    //   B(n) = sum_k (n^k/k!)^2,  A(n) = sum_k (n^k/k!)^2 H_k,
    // truncation error below 2^-(working) once 4n >= (working + 10) ln 2.
    let n = ((f64::from(working) + 10.0) * std::f64::consts::LN_2 / 4.0).ceil() as u32 + 2;
    let n_sq = Integer::from(n) * Integer::from(n);
    let mut term_b = Float::with_val(working, 1); // (n^k/k!)^2
    let mut sum_b = Float::with_val(working, 1);
    let mut sum_a = Float::with_val(working, 0);
    let mut harmonic = Float::with_val(working, 0);
    let cutoff = Float::with_val(working, 1) >> (working - 4);
    for k in 1u64.. {
        term_b *= &n_sq;
        term_b /= k * k;
        harmonic += Float::with_val(working, Rational::from((1u64, k)));
        let term_a = Float::with_val(working, &term_b * &harmonic);
        sum_a += &term_a;
        sum_b += &term_b;
        if term_a < Float::with_val(working, &sum_b * &cutoff) {
            break;
        }
    }
    let ln_n = Float::with_val(working, n).ln();
    sum_a / sum_b - ln_n
}

/// The Euler-Mascheroni constant at the requested precision.
pub fn euler_gamma(prec: u32) -> Result<HPReal> {
    check_precision(prec)?;
    let mut cache = GAMMA_CACHE.lock().unwrap();
    let f = cache
        .entry(prec)
        .or_insert_with(|| {
            let working = prec + 64;
            Float::with_val(prec, gamma_brent_mcmillan(working))
        })
        .clone();
    Ok(HPReal::from_float(f))
}

/// Euler-Maclaurin evaluation of zeta(s) for real s > 1 at `working` bits.
///
/// Terms are added until the next correction falls below the target; for real
/// s the remainder is bounded by the first omitted term, so the loop exit
/// certifies the truncation error. If the asymptotic tail stalls before the
/// target is reached, the cutoff doubles.
fn zeta_euler_maclaurin(s: &Float, working: u32) -> Float {
    let target = Float::with_val(working, 1) >> (working - 6);
    let mut cutoff: u32 = std::cmp::max(16, working / 4);
    loop {
        let mut sum = Float::with_val(working, 0);
        for j in 1..cutoff {
            sum += Float::with_val(working, j).pow(&(-s.clone()));
        }
        let nf = Float::with_val(working, cutoff);
        // n^{1-s}/(s-1) + n^{-s}/2
        let n_pow_ms = nf.clone().pow(&(-s.clone()));
        sum += Float::with_val(working, &nf * &n_pow_ms) / (s.clone() - 1u32);
        sum += Float::with_val(working, &n_pow_ms / 2u32);
        // correction terms B_{2k}/(2k)! * (s)_{2k-1} * n^{-s-2k+1}
        let mut pochhammer = s.clone(); // (s)_1
        let mut n_factor = Float::with_val(working, &nf * &n_pow_ms); // n^{-s+1}
        let n_sq_inv = Float::with_val(working, &nf * &nf).recip();
        let mut factorial = Integer::from(2); // (2k)!
        let mut prev_mag: Option<Float> = None;
        let mut converged = false;
        for k in 1u32..200 {
            if k > 1 {
                pochhammer *= Float::with_val(working, s + Float::with_val(working, 2 * k - 3));
                pochhammer *= Float::with_val(working, s + Float::with_val(working, 2 * k - 2));
                factorial *= u64::from(2 * k - 1) * u64::from(2 * k);
            }
            n_factor *= &n_sq_inv;
            let coeff = Float::with_val(working, bernoulli(2 * k as usize)) / &factorial;
            let term = Float::with_val(working, &coeff * &pochhammer);
            let term = Float::with_val(working, &term * &n_factor);
            let mag = term.clone().abs();
            if let Some(prev) = &prev_mag {
                if mag > *prev {
                    break; // asymptotic tail started growing; need larger cutoff
                }
            }
            sum += &term;
            if mag < Float::with_val(working, &target * &sum.clone().abs()) {
                converged = true;
                break;
            }
            prev_mag = Some(mag);
        }
        if converged {
            return sum;
        }
        cutoff *= 2;
    }
}

/// zeta(kappa) for real kappa > 1; integer kappa is lifted to a float and
/// evaluated by the same routine.
pub fn zeta(kappa: &Kappa, prec: u32) -> Result<HPReal> {
    check_precision(prec)?;
    if kappa.to_f64() <= 1.0 {
        return Err(Error::KappaOutOfRange(kappa.to_string()));
    }
    let key = (kappa.cache_key(), prec);
    let mut cache = ZETA_CACHE.lock().unwrap();
    let f = cache
        .entry(key)
        .or_insert_with(|| {
            let working = prec + 32;
            let s = kappa.as_hp(working).into_float();
            Float::with_val(prec, zeta_euler_maclaurin(&s, working))
        })
        .clone();
    Ok(HPReal::from_float(f))
}

/// Truncated Dirichlet constant `c(kappa) = sum_{n>=1} sigma_{-1}^[kappa](n)/n`
/// together with a heuristic tail estimate.
#[derive(Clone, Debug)]
pub struct CConstant {
    /// The truncated sum over n <= truncation_N.
    pub partial: HPReal,
    /// Tail estimated by fitting the observed C log(x)/x decay between N/2 and N.
    pub tail_estimate: HPReal,
}

impl CConstant {
    /// Truncated sum plus the fitted tail.
    pub fn estimate(&self) -> HPReal {
        &self.partial + &self.tail_estimate
    }
}

/// Computes the truncated `c(kappa)` by multiplicative sieve over n <= truncation_N.
pub fn c_constant(kappa: &Kappa, truncation_n: u64, prec: u32) -> Result<CConstant> {
    check_precision(prec)?;
    if kappa.to_f64() <= 1.0 {
        return Err(Error::KappaOutOfRange(kappa.to_string()));
    }
    if truncation_n < 1000 {
        return Err(Error::InvalidConfig(format!(
            "c(kappa) truncation must be >= 10^3 (got {truncation_n})"
        )));
    }
    let n = truncation_n as usize;
    let spf = smallest_prime_factors(n);
    // sigma_{-1}^[kappa](p^e) = (sigma(p^e)/p^e)^kappa - (sigma(p^{e-1})/p^{e-1})^kappa,
    // cached per prime power. Everything else is one multiply per n.
    let mut local: HashMap<u64, HPReal> = HashMap::new();
    let kf = kappa.as_hp(prec);
    let mut local_value = |p: u64, e: u32, pe: u64| -> HPReal {
        if let Some(v) = local.get(&pe) {
            return v.clone();
        }
        let s_hi = sigma_prime_power(p, e);
        let s_lo = sigma_prime_power(p, e - 1);
        let hi = HPReal::from_integer(&s_hi, prec) / HPReal::from_u64(pe, prec);
        let v = if e == 1 {
            &hi.pow(&kf) - &HPReal::one(prec)
        } else {
            let lo = HPReal::from_integer(&s_lo, prec) / HPReal::from_u64(pe / p, prec);
            &hi.pow(&kf) - &lo.pow(&kf)
        };
        local.insert(pe, v.clone());
        v
    };
    let mut sum = HPReal::one(prec); // n = 1 term
    let mut sum_half = HPReal::zero(prec);
    let half = n as u64 / 2;
    for m in 2..=n as u64 {
        let mut value = HPReal::one(prec);
        let mut rest = m;
        while rest > 1 {
            let p = spf[rest as usize] as u64;
            let mut e = 0u32;
            let mut pe = 1u64;
            while rest % p == 0 {
                rest /= p;
                e += 1;
                pe *= p;
            }
            value = &value * &local_value(p, e, pe);
        }
        sum = &sum + &(&value / &HPReal::from_u64(m, prec));
        if m == half {
            sum_half = sum.clone();
        }
    }
    // fit tail(x) ~ C log(x)/x through the growth between N/2 and N
    let g = |x: u64| {
        let xf = HPReal::from_u64(x, prec);
        &xf.ln() / &xf
    };
    let g_half = g(half);
    let g_full = g(n as u64);
    let denom = &g_half - &g_full;
    let c_fit = &(&sum - &sum_half) / &denom;
    let tail_estimate = &c_fit * &g_full;
    Ok(CConstant {
        partial: sum,
        tail_estimate,
    })
}

/// sigma(p^e) as an exact integer, with sigma(p^-1) := 0 collapsing e = 0 to 1.
pub(crate) fn sigma_prime_power(p: u64, e: u32) -> Integer {
    if e == 0 {
        return Integer::from(1);
    }
    let pk = Integer::from(p).pow(e + 1);
    (pk - 1u32) / (Integer::from(p) - 1u32)
}

/// Smallest-prime-factor table for 0..=n (index 0 and 1 unused).
pub(crate) fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if p > spf[i] || ip > n {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}
