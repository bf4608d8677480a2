//! Exact and high-precision evaluation of the LCM-power divisor functions.
//!
//! Integer kappa stays in exact big-integer (or exact rational) arithmetic end
//! to end; real kappa is evaluated through `exp(kappa ln x)` in [`HPReal`].

use crate::constants::{euler_gamma, sigma_prime_power, zeta};
use crate::error::{Error, Result};
use crate::hp::{certify, ComparisonVerdict, HPReal, Kappa, Relation, ESCALATION_LADDER};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

const DEFAULT_FACTOR_SEED: u64 = 0x5eed_c0ff_ee00_0001;

/// Canonical factorization: primes strictly increasing, exponents >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

/// Smallest-prime-factor table for fast repeated factorization.
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn up_to(limit: u64) -> Self {
        let spf = crate::constants::smallest_prime_factors(limit as usize);
        SpfTable { limit, spf }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut pairs = Vec::new();
        while n > 1 {
            let p = u64::from(self.spf[n as usize]);
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        pairs.sort_unstable();
        pairs
    }
}

impl Factorization {
    /// Factors n with trial division and rho splitting; primality of every
    /// emitted factor is certified deterministically.
    pub fn of(n: u64) -> Result<Self> {
        Self::of_seeded(n, DEFAULT_FACTOR_SEED)
    }

    pub fn of_seeded(n: u64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotFactorable(0));
        }
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let mut rest = n;
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if p * p > rest {
                break;
            }
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                pairs.push((p, e));
            }
        }
        if rest > 1 {
            let mut stack = vec![rest];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while let Some(m) = stack.pop() {
                if is_prime_u64(m) {
                    match pairs.iter_mut().find(|(p, _)| *p == m) {
                        Some((_, e)) => *e += 1,
                        None => pairs.push((m, 1)),
                    }
                } else if let Some(d) = split_composite(m, &mut rng) {
                    stack.push(d);
                    stack.push(m / d);
                } else {
                    return Err(Error::NotFactorable(m));
                }
            }
        }
        pairs.sort_unstable();
        Ok(Factorization { pairs })
    }

    /// Table-backed factorization, falling back to [`Factorization::of`] when
    /// n exceeds the table bound.
    pub fn with_table(n: u64, table: &SpfTable) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotFactorable(0));
        }
        if n <= table.limit {
            Ok(Factorization {
                pairs: table.factor(n),
            })
        } else {
            Self::of(n)
        }
    }

    /// Builds from explicit pairs, validating primality and ordering.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidConfig("primes must strictly increase".into()));
            }
        }
        for &(p, e) in &pairs {
            if e == 0 || !is_prime_u64(p) {
                return Err(Error::InvalidConfig(format!("bad factor {p}^{e}")));
            }
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Reconstructs n exactly.
    pub fn value(&self) -> Integer {
        let mut n = Integer::from(1);
        for &(p, e) in &self.pairs {
            n *= Integer::from(p).pow(e);
        }
        n
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value().to_u64()
    }

    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].1 == 1
    }
}

/// Deterministic Miller-Rabin for u64 (12-witness set decides all of u64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Pollard rho (Floyd cycle); returns a nontrivial divisor of an odd composite.
fn split_composite(n: u64, rng: &mut ChaCha8Rng) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let step = |x: u64, c: u64| ((u128::from(x) * u128::from(x) + u128::from(c)) % u128::from(n)) as u64;
    for _ in 0..64 {
        let c = rng.gen_range(1..n - 1);
        let mut x = rng.gen_range(2..n);
        let mut y = x;
        for _ in 0..(1u64 << 24) {
            x = step(x, c);
            y = step(step(y, c), c);
            let d = gcd(x.abs_diff(y), n);
            if d == n {
                break;
            }
            if d > 1 {
                return Some(d);
            }
        }
    }
    None
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Primes below `limit` in increasing order.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// A sigma^[kappa] value: exact integer on the integer-kappa path, otherwise
/// a high-precision approximation.
#[derive(Clone, Debug)]
pub enum SigmaKappaValue {
    Exact(Integer),
    Approx(HPReal),
}

impl SigmaKappaValue {
    pub fn to_hp(&self, prec: u32) -> HPReal {
        match self {
            SigmaKappaValue::Exact(v) => HPReal::from_integer(v, prec),
            SigmaKappaValue::Approx(v) => v.with_precision(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&Integer> {
        match self {
            SigmaKappaValue::Exact(v) => Some(v),
            SigmaKappaValue::Approx(_) => None,
        }
    }
}

/// sigma^[kappa](p^ell) = sigma(p^ell)^kappa - sigma(p^{ell-1})^kappa, with the
/// sigma(p^-1) := 0 convention collapsing ell = 0 to 1.
pub fn sigma_kappa_local(p: u64, ell: u32, kappa: &Kappa, prec: u32) -> SigmaKappaValue {
    match kappa {
        Kappa::Int(k) => {
            if ell == 0 {
                return SigmaKappaValue::Exact(Integer::from(1));
            }
            let hi = sigma_prime_power(p, ell).pow(*k);
            let lo = if ell == 1 {
                Integer::from(1)
            } else {
                sigma_prime_power(p, ell - 1).pow(*k)
            };
            SigmaKappaValue::Exact(hi - lo)
        }
        Kappa::Real(_) => {
            if ell == 0 {
                return SigmaKappaValue::Approx(HPReal::one(prec));
            }
            SigmaKappaValue::Approx(ln_sigma_kappa_local(p, ell, kappa, prec).exp())
        }
    }
}

/// ln sigma^[kappa](p^ell), cancellation-safe:
/// kappa ln s_hi + ln(1 - (s_lo/s_hi)^kappa).
fn ln_sigma_kappa_local(p: u64, ell: u32, kappa: &Kappa, prec: u32) -> HPReal {
    debug_assert!(ell >= 1);
    let kf = kappa.as_hp(prec);
    let ln_hi = HPReal::from_integer(&sigma_prime_power(p, ell), prec).ln();
    if ell == 1 {
        // ln((p+1)^kappa - 1)
        let ratio = (&kf * &ln_hi).neg().exp().neg();
        return &(&kf * &ln_hi) + &ratio.ln_1p();
    }
    let ln_lo = HPReal::from_integer(&sigma_prime_power(p, ell - 1), prec).ln();
    let t = (&kf * &(&ln_lo - &ln_hi)).exp().neg();
    &(&kf * &ln_hi) + &t.ln_1p()
}

/// ln sigma^[kappa](n) as a sum of local logarithms.
pub fn ln_sigma_kappa(n: &Factorization, kappa: &Kappa, prec: u32) -> HPReal {
    let mut acc = HPReal::zero(prec);
    for &(p, e) in n.pairs() {
        acc = &acc + &ln_sigma_kappa_local(p, e, kappa, prec);
    }
    acc
}

/// sigma^[kappa](n) as the product of local factors.
pub fn sigma_kappa(n: &Factorization, kappa: &Kappa, prec: u32) -> SigmaKappaValue {
    match kappa {
        Kappa::Int(_) => {
            let mut acc = Integer::from(1);
            for &(p, e) in n.pairs() {
                match sigma_kappa_local(p, e, kappa, prec) {
                    SigmaKappaValue::Exact(v) => acc *= v,
                    SigmaKappaValue::Approx(_) => unreachable!(),
                }
            }
            SigmaKappaValue::Exact(acc)
        }
        Kappa::Real(_) => SigmaKappaValue::Approx(ln_sigma_kappa(n, kappa, prec).exp()),
    }
}

/// A sigma_{-1}^[kappa] value: exact rational for integer kappa.
#[derive(Clone, Debug)]
pub enum SigmaMinus1Value {
    Exact(Rational),
    Approx(HPReal),
}

impl SigmaMinus1Value {
    pub fn to_hp(&self, prec: u32) -> HPReal {
        match self {
            SigmaMinus1Value::Exact(v) => HPReal::from_rational(v, prec),
            SigmaMinus1Value::Approx(v) => v.with_precision(prec),
        }
    }
}

/// sigma_{-1}^[kappa](n), the kappa-th LCM-power of 1/n: multiplicative with
/// local factor (sigma(p^e)/p^e)^kappa - (sigma(p^{e-1})/p^{e-1})^kappa.
///
/// For integer kappa this is T(n)/n^kappa exactly, where
/// T(p^e) = sigma(p^e)^kappa - (p sigma(p^{e-1}))^kappa.
pub fn sigma_minus1_kappa(n: &Factorization, kappa: &Kappa, prec: u32) -> SigmaMinus1Value {
    match kappa {
        Kappa::Int(k) => {
            let mut num = Integer::from(1);
            let mut den = Integer::from(1);
            for &(p, e) in n.pairs() {
                let hi = sigma_prime_power(p, e).pow(*k);
                let lo = (sigma_prime_power(p, e - 1) * Integer::from(p)).pow(*k);
                num *= hi - lo;
                den *= Integer::from(p).pow(e * k);
            }
            SigmaMinus1Value::Exact(Rational::from((num, den)))
        }
        Kappa::Real(_) => {
            let kf = kappa.as_hp(prec);
            let mut acc = HPReal::one(prec);
            for &(p, e) in n.pairs() {
                let hi = HPReal::from_integer(&sigma_prime_power(p, e), prec)
                    / HPReal::from_integer(&Integer::from(p).pow(e), prec);
                let lo = if e == 1 {
                    HPReal::one(prec)
                } else {
                    HPReal::from_integer(&sigma_prime_power(p, e - 1), prec)
                        / HPReal::from_integer(&Integer::from(p).pow(e - 1), prec)
                };
                acc = &acc * &(&hi.pow(&kf) - &lo.pow(&kf));
            }
            SigmaMinus1Value::Approx(acc)
        }
    }
}

/// Verdict for the sharp lower bound sigma^[kappa](n) >= (n+1)^kappa - 1.
#[derive(Clone, Debug)]
pub struct LowerBoundVerdict {
    pub holds: bool,
    pub equality: bool,
}

/// Checks the lower bound; equality holds exactly when n is prime.
pub fn lower_bound_check(n: &Factorization, kappa: &Kappa) -> Result<LowerBoundVerdict> {
    let value = n.value();
    if value < 2 {
        return Err(Error::Domain("lower bound requires n >= 2".into()));
    }
    match kappa {
        Kappa::Int(k) => {
            let lhs = match sigma_kappa(n, kappa, 0) {
                SigmaKappaValue::Exact(v) => v,
                SigmaKappaValue::Approx(_) => unreachable!(),
            };
            let rhs = (value + Integer::from(1)).pow(*k) - Integer::from(1);
            Ok(LowerBoundVerdict {
                holds: lhs >= rhs,
                equality: lhs == rhs,
            })
        }
        Kappa::Real(_) => {
            if n.is_prime() {
                // sigma^[kappa](p) = (p+1)^kappa - 1 identically
                return Ok(LowerBoundVerdict {
                    holds: true,
                    equality: true,
                });
            }
            let label = n.value_u64().unwrap_or(0);
            let verdict = certify(
                |prec| {
                    let lhs = ln_sigma_kappa(n, kappa, prec);
                    let kf = kappa.as_hp(prec);
                    let n1 = HPReal::from_integer(&(n.value() + Integer::from(1)), prec);
                    // ln((n+1)^kappa - 1)
                    let t = (&kf * &n1.ln()).neg().exp().neg();
                    let rhs = &(&kf * &n1.ln()) + &t.ln_1p();
                    (lhs, rhs)
                },
                &ESCALATION_LADDER,
                label,
            )?;
            Ok(LowerBoundVerdict {
                holds: verdict.relation == Relation::Greater,
                equality: false,
            })
        }
    }
}

/// Checks sigma^[kappa](n) < (e^gamma n loglog n + 0.42 n/loglog n)^kappa * prod_{p|n}(1-p^-kappa).
///
/// Returns the comparison verdict between lhs and rhs; `Less` means the bound
/// holds.
pub fn upper_bound_check_thm_v(n: &Factorization, kappa: &Kappa) -> Result<ComparisonVerdict> {
    let nv = n.value();
    if nv < 3 {
        return Err(Error::Domain("upper bound requires n >= 3".into()));
    }
    let label = n.value_u64().unwrap_or(0);
    certify(
        |prec| {
            let lhs = ln_sigma_kappa(n, kappa, prec);
            let kf = kappa.as_hp(prec);
            let gamma = euler_gamma(prec).expect("precision checked");
            let nf = HPReal::from_integer(&n.value(), prec);
            let loglog = nf.ln().ln();
            let env = &(&gamma.exp() * &(&nf * &loglog))
                + &(&(&HPReal::from_f64(0.42, prec) * &nf) / &loglog);
            let mut rhs = &kf * &env.ln();
            for &(p, _) in n.pairs() {
                let pk = (&kf * &HPReal::from_u64(p, prec).ln()).neg().exp();
                rhs = &rhs + &pk.neg().ln_1p();
            }
            (lhs, rhs)
        },
        &ESCALATION_LADDER,
        label,
    )
}

/// The normalized ratio G^[kappa](n) = zeta(kappa) sigma^[kappa](n) / (e^gamma n loglog n)^kappa.
#[derive(Clone, Debug)]
pub struct GrValue {
    pub g: HPReal,
}

/// Evaluates G^[kappa](n) with certified error below 2^(-prec/2); requires n >= 3.
pub fn g_ratio(n: &Factorization, kappa: &Kappa, prec: u32) -> Result<GrValue> {
    let nv = n.value();
    if nv < 3 {
        return Err(Error::Domain(format!("G requires n >= 3, got {nv}")));
    }
    let work = prec + 32;
    let g = ln_g_ratio(n, kappa, work).exp().with_precision(prec);
    Ok(GrValue { g })
}

/// ln G^[kappa](n) = ln zeta + ln sigma^[kappa](n) - kappa(gamma + ln n + ln loglog n).
pub fn ln_g_ratio(n: &Factorization, kappa: &Kappa, prec: u32) -> HPReal {
    let kf = kappa.as_hp(prec);
    let z = zeta(kappa, prec).expect("kappa validated at construction");
    let nf = HPReal::from_integer(&n.value(), prec);
    let ln_n = nf.ln();
    let gamma = euler_gamma(prec).expect("precision checked");
    let scale = &(&gamma + &ln_n) + &ln_n.ln().ln();
    &(&z.ln() + &ln_sigma_kappa(n, kappa, prec)) - &(&kf * &scale)
}

/// (zeta(kappa) sigma^[kappa](n))^(1/kappa); decreasing in kappa, with limit sigma(n).
pub fn kappa_root_normalized(n: &Factorization, kappa: &Kappa, prec: u32) -> HPReal {
    let kf = kappa.as_hp(prec);
    let z = zeta(kappa, prec).expect("kappa validated at construction");
    let ln_val = &(&z.ln() + &ln_sigma_kappa(n, kappa, prec)) / &kf;
    ln_val.exp()
}

/// sigma(n) as an exact integer.
pub fn sigma(n: &Factorization) -> Integer {
    let mut acc = Integer::from(1);
    for &(p, e) in n.pairs() {
        acc *= sigma_prime_power(p, e);
    }
    acc
}
