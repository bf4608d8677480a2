//! Critical values and kappa-colossally abundant numbers.
//!
//! The local ratio F^[kappa](x, a) decides the optimal exponent of a prime x
//! for a given eps: exponents jump exactly at the critical values F(p, j).
//! Everything here is evaluated in the log domain through
//! h^[kappa](x,a) = (q(a+1)^k - q(a)^k)/(q(a)^k - q(a-1)^k), q(t) = x^t - 1,
//! because the raw differences cancel catastrophically once x^a is large.

use crate::arith::{g_ratio, is_prime_u64, ln_sigma_kappa, Factorization, SpfTable};
use crate::error::{Error, Result};
use crate::hp::{compare, exceeds, HPReal, Kappa, Relation};
use rug::float::Special;
use rug::Float;
use rug::Integer;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// ln(x^t - 1) for x > 1, t > 0, stable for large x^t.
fn ln_q(ln_x: &HPReal, t: &HPReal) -> HPReal {
    let t_ln_x = t * ln_x;
    &t_ln_x + &t_ln_x.neg().exp().neg().ln_1p()
}

/// ln h^[kappa](x, a); `a = 1` collapses to ln((x+1)^kappa - 1).
fn ln_h(x: &HPReal, a: &HPReal, kappa: &Kappa, prec: u32) -> HPReal {
    let kf = kappa.as_hp(prec);
    let one = HPReal::one(prec);
    if (a - &one).abs().to_f64() == 0.0 {
        let ln_x1 = (x + &one).ln();
        let k_ln = &kf * &ln_x1;
        return &k_ln + &k_ln.neg().exp().neg().ln_1p();
    }
    let ln_x = x.ln();
    let lq_hi = ln_q(&ln_x, &(a + &one));
    let lq_mid = ln_q(&ln_x, a);
    let lq_lo = ln_q(&ln_x, &(a - &one));
    // q_hi^k - q_mid^k = q_mid^k expm1(k (lq_hi - lq_mid)), same for the denominator
    let num = &(&kf * &lq_mid) + &(&kf * &(&lq_hi - &lq_mid)).exp_m1().ln();
    let den = &(&kf * &lq_lo) + &(&kf * &(&lq_mid - &lq_lo)).exp_m1().ln();
    &num - &den
}

fn check_domain(x: &HPReal, a: &HPReal) -> Result<()> {
    if !exceeds(x.to_f64(), 1.0) {
        return Err(Error::Domain(format!("x must exceed 1, got {}", x)));
    }
    if a.to_f64() < 1.0 {
        return Err(Error::Domain(format!("a must be >= 1, got {}", a)));
    }
    Ok(())
}

/// f^[kappa]_eps(x, a) = x^{-kappa(1+eps)} h^[kappa](x, a).
pub fn f_eval(x: &HPReal, a: &HPReal, kappa: &Kappa, eps: &HPReal, prec: u32) -> Result<HPReal> {
    check_domain(x, a)?;
    let kf = kappa.as_hp(prec);
    let scale = &(&kf * &(&HPReal::one(prec) + eps)) * &x.ln();
    Ok((&ln_h(x, a, kappa, prec) - &scale).exp())
}

/// F^[kappa](x, a) = ln h^[kappa](x, a) / (kappa ln x) - 1, with the a = 0
/// convention mapping to +infinity.
pub fn f_critical(x: &HPReal, a: &HPReal, kappa: &Kappa, prec: u32) -> Result<HPReal> {
    if a.to_f64() == 0.0 {
        return Ok(HPReal::from_float(Float::with_val(prec, Special::Infinity)));
    }
    check_domain(x, a)?;
    let kf = kappa.as_hp(prec);
    let ratio = &ln_h(x, a, kappa, prec) / &(&kf * &x.ln());
    Ok(&ratio - &HPReal::one(prec))
}

/// Convenience form for prime arguments and integer exponents.
pub fn f_critical_pa(p: u64, a: u32, kappa: &Kappa, prec: u32) -> HPReal {
    f_critical(
        &HPReal::from_u64(p, prec),
        &HPReal::from_u64(u64::from(a), prec),
        kappa,
        prec,
    )
    .expect("p >= 2, a >= 1")
}

/// The kappa -> infinity limit F(x, a) = ln((x^{a+1}-1)/(x^{a+1}-x)) / ln x.
pub fn f_limit(x: &HPReal, a: &HPReal, prec: u32) -> Result<HPReal> {
    check_domain(x, a)?;
    let ln_x = x.ln();
    let one = HPReal::one(prec);
    let a1 = a + &one;
    // ln(x^{a+1}-1) - ln(x^{a+1}-x) = ln_q(a+1) - (ln x + ln_q(a))
    let num = ln_q(&ln_x, &a1);
    let den = &ln_x + &ln_q(&ln_x, a);
    Ok(&(&num - &den) / &ln_x)
}

/// H(t) = t ln^2 t / (t-1)^2; strictly decreasing on (1, inf).
pub fn h_t(t: &HPReal) -> HPReal {
    let one = HPReal::one(t.precision_bits());
    let ln_t = t.ln();
    let dm1 = t - &one;
    &(t * &(&ln_t * &ln_t)) / &(&dm1 * &dm1)
}

/// H(x; u, v) = ((v^x - 1)/(u^x - 1))^{1/x} for 1 < u < v; strictly decreasing in x.
pub fn h_ratio(x: &HPReal, u: &HPReal, v: &HPReal) -> HPReal {
    let prec = x.precision_bits().max(u.precision_bits()).max(v.precision_bits());
    let xf = x.with_precision(prec);
    let num = ln_q(&v.ln(), &xf);
    let den = ln_q(&u.ln(), &xf);
    (&(&num - &den) / &xf).exp()
}

/// Result of inverting F in the exponent argument.
#[derive(Clone, Debug)]
pub enum ExponentInverse {
    /// eps exceeds F(p, 1): no positive exponent is admissible.
    ExponentZero,
    /// The real a >= 1 with F(p, a) = eps.
    Value(HPReal),
}

const MAX_BISECTION_STEPS: u32 = 2000;

/// a_p^[kappa](eps): the a with F^[kappa](p, a) = eps, by bisection on the
/// strictly decreasing map.
pub fn invert_a(p: u64, eps: &HPReal, kappa: &Kappa, prec: u32) -> Result<ExponentInverse> {
    if !exceeds(eps.to_f64(), 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let x = HPReal::from_u64(p, prec);
    let f1 = f_critical_pa(p, 1, kappa, prec);
    if eps > &f1 {
        return Ok(ExponentInverse::ExponentZero);
    }
    let mut lo = HPReal::one(prec);
    let mut hi = HPReal::from_u64(2, prec);
    let mut guard = 0;
    while &f_critical(&x, &hi, kappa, prec)? >= eps {
        hi = &hi * &HPReal::from_u64(2, prec);
        guard += 1;
        if guard > 128 {
            return Err(Error::NonConvergence("invert_a bracket".into()));
        }
    }
    let tol = HPReal::from_float(Float::with_val(prec, 1) >> (prec / 2));
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = &(&lo + &hi) * &HPReal::from_f64(0.5, prec);
        if &f_critical(&x, &mid, kappa, prec)? >= eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if (&hi - &lo) < (&lo * &tol) {
            return Ok(ExponentInverse::Value(lo));
        }
    }
    Err(Error::NonConvergence(format!("invert_a(p={p})")))
}

/// x_a^[kappa](eps): the x with F^[kappa](x, a) = eps, by bisection.
pub fn invert_x(a: &HPReal, eps: &HPReal, kappa: &Kappa, prec: u32) -> Result<HPReal> {
    if !exceeds(eps.to_f64(), 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let mut lo = &HPReal::one(prec) + &HPReal::from_float(Float::with_val(prec, 1) >> 20);
    if &f_critical(&lo, a, kappa, prec)? < eps {
        return Err(Error::NonConvergence("eps exceeds F at the lower bracket".into()));
    }
    let mut hi = HPReal::from_u64(2, prec);
    let mut guard = 0;
    while &f_critical(&hi, a, kappa, prec)? >= eps {
        hi = &hi * &HPReal::from_u64(2, prec);
        guard += 1;
        if guard > 512 {
            return Err(Error::NonConvergence("invert_x bracket".into()));
        }
    }
    let tol = HPReal::from_float(Float::with_val(prec, 1) >> (prec / 2));
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = &(&lo + &hi) * &HPReal::from_f64(0.5, prec);
        if &f_critical(&mid, a, kappa, prec)? >= eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if (&hi - &lo) < (&lo * &tol) {
            return Ok(lo);
        }
    }
    Err(Error::NonConvergence("invert_x".into()))
}

/// One element of the critical set: eps = F^[kappa](p, a).
#[derive(Clone, Debug)]
pub struct CriticalEvent {
    pub p: u64,
    pub a: u32,
    pub eps: HPReal,
}

/// One critical value; ties within the merge tolerance are grouped, never
/// silently collapsed.
#[derive(Clone, Debug)]
pub struct CriticalValue {
    pub eps: HPReal,
    pub members: Vec<CriticalEvent>,
}

impl CriticalValue {
    pub fn is_tie(&self) -> bool {
        self.members.len() > 1
    }
}

struct HeapItem {
    eps: HPReal,
    p: u64,
    a: u32,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.eps
            .partial_cmp(&other.eps)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.p.cmp(&self.p))
            .then_with(|| other.a.cmp(&self.a))
    }
}

fn next_prime_after(n: u64) -> u64 {
    let mut m = n + 1;
    loop {
        if is_prime_u64(m) {
            return m;
        }
        m += 1;
    }
}

/// Enumerates the top `count` critical values of {F^[kappa](p, j)} in
/// decreasing order. The queue is seeded with (p, 1) for each prime and a new
/// prime enters only while F(p, 1) can still reach the current frontier;
/// events within relative 2^(-prec/2) of each other merge into a tie group.
pub fn enumerate_critical(kappa: &Kappa, count: usize, prec: u32) -> Result<Vec<CriticalValue>> {
    if count == 0 {
        return Err(Error::InvalidConfig("count must be >= 1".into()));
    }
    let tol = HPReal::from_float(Float::with_val(prec, 1) >> (prec / 2));
    let mut heap: BinaryHeap<HeapItem> = BinaryHeap::new();
    heap.push(HeapItem {
        eps: f_critical_pa(2, 1, kappa, prec),
        p: 2,
        a: 1,
    });
    let mut next_p = 3u64;
    let mut next_f1 = f_critical_pa(next_p, 1, kappa, prec);
    let mut values = Vec::with_capacity(count);
    while values.len() < count {
        // admit primes that can still reach the frontier (with tie slack)
        loop {
            let frontier = &heap.peek().expect("queue never empties").eps;
            let slack = &(frontier * &tol) * &HPReal::from_u64(4, prec);
            if &next_f1 + &slack >= *frontier {
                heap.push(HeapItem {
                    eps: next_f1.clone(),
                    p: next_p,
                    a: 1,
                });
                next_p = next_prime_after(next_p);
                next_f1 = f_critical_pa(next_p, 1, kappa, prec);
            } else {
                break;
            }
        }
        let top = heap.pop().expect("nonempty");
        let eps = top.eps.clone();
        let mut members = vec![CriticalEvent {
            p: top.p,
            a: top.a,
            eps: top.eps,
        }];
        heap.push(HeapItem {
            eps: f_critical_pa(top.p, top.a + 1, kappa, prec),
            p: top.p,
            a: top.a + 1,
        });
        // group near-equal successors into a tie
        loop {
            let is_tie = {
                let peek = heap.peek().expect("nonempty");
                (&eps - &peek.eps).abs() < (&eps * &tol)
            };
            if !is_tie {
                break;
            }
            let item = heap.pop().expect("nonempty");
            members.push(CriticalEvent {
                p: item.p,
                a: item.a,
                eps: item.eps,
            });
            heap.push(HeapItem {
                eps: f_critical_pa(item.p, item.a + 1, kappa, prec),
                p: item.p,
                a: item.a + 1,
            });
        }
        members.sort_by_key(|e| (e.p, e.a));
        values.push(CriticalValue { eps, members });
    }
    Ok(values)
}

/// rho^[kappa]_eps(n) = sigma^[kappa](n) / n^{kappa(1+eps)}.
pub fn rho_eval(n: &Factorization, kappa: &Kappa, eps: &HPReal, prec: u32) -> HPReal {
    if n.is_one() {
        return HPReal::one(prec);
    }
    let kf = kappa.as_hp(prec);
    let ln_n = HPReal::from_integer(&n.value(), prec).ln();
    let scale = &(&kf * &(&HPReal::one(prec) + eps)) * &ln_n;
    (&ln_sigma_kappa(n, kappa, prec) - &scale).exp()
}

/// The largest kappa-colossally abundant number for eps.
#[derive(Clone, Debug)]
pub struct CaNumber {
    pub factorization: Factorization,
    /// Set when eps sits within merge tolerance of a critical value: the two
    /// adjacent candidates (exclusive of the boundary events, inclusive).
    pub ambiguous: Option<(Integer, Integer)>,
}

/// Computes N^[kappa]_eps = prod p^{floor(a_p(eps))}. Exponents are the largest
/// a with F(p, a) >= eps; a comparison too close to call at this precision
/// flags the result AMBIGUOUS and reports both adjacent values.
pub fn ca_number(eps: &HPReal, kappa: &Kappa, prec: u32) -> Result<CaNumber> {
    if !exceeds(eps.to_f64(), 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let mut pairs_lo: Vec<(u64, u32)> = Vec::new();
    let mut pairs_hi: Vec<(u64, u32)> = Vec::new();
    let mut boundary = false;
    let mut p = 2u64;
    loop {
        let mut a_certain = 0u32;
        let mut a_boundary = 0u32;
        let mut a = 1u32;
        loop {
            let f = f_critical_pa(p, a, kappa, prec);
            match compare(&f, eps).relation {
                Relation::Greater => {
                    a_certain = a;
                    a_boundary = a;
                }
                Relation::Undecided => {
                    a_boundary = a;
                    boundary = true;
                }
                Relation::Less => break,
            }
            a += 1;
        }
        if a_boundary == 0 {
            break; // p (and every larger prime) contributes exponent 0
        }
        if a_certain > 0 {
            pairs_lo.push((p, a_certain));
        }
        pairs_hi.push((p, a_boundary));
        p = next_prime_after(p);
    }
    let fac_hi = Factorization::from_pairs(pairs_hi)?;
    let ambiguous = if boundary {
        let fac_lo = Factorization::from_pairs(pairs_lo)?;
        Some((fac_lo.value(), fac_hi.value()))
    } else {
        None
    };
    Ok(CaNumber {
        factorization: fac_hi,
        ambiguous,
    })
}

/// One row of the colossally abundant table.
#[derive(Clone, Debug)]
pub struct CaEntry {
    pub index: usize,
    /// The critical value at which this N first becomes the maximizer.
    pub eps: HPReal,
    /// The next critical value: N stays the maximizer for eps in (eps_next, eps].
    pub eps_next: HPReal,
    pub factorization: Factorization,
    pub log_n: HPReal,
    pub log_log_n: HPReal,
    /// G^[kappa](N); None for N = 2 where loglog is negative.
    pub g: Option<HPReal>,
}

/// The sequence N_i of largest kappa-colossally abundant numbers, one per
/// critical value; a tie group contributes all of its primes in one step.
pub fn ca_sequence(kappa: &Kappa, count: usize, prec: u32) -> Result<Vec<CaEntry>> {
    let values = enumerate_critical(kappa, count + 1, prec)?;
    let mut exponents: Vec<(u64, u32)> = Vec::new();
    let mut entries = Vec::with_capacity(count);
    for (i, value) in values.iter().take(count).enumerate() {
        for ev in &value.members {
            match exponents.iter_mut().find(|(p, _)| *p == ev.p) {
                Some((_, e)) => {
                    debug_assert_eq!(*e + 1, ev.a);
                    *e = ev.a;
                }
                None => {
                    debug_assert_eq!(ev.a, 1);
                    exponents.push((ev.p, 1));
                }
            }
        }
        let mut pairs = exponents.clone();
        pairs.sort_unstable();
        let fac = Factorization::from_pairs(pairs)?;
        let n = fac.value();
        let log_n = HPReal::from_integer(&n, prec).ln();
        let log_log_n = log_n.ln();
        let g = if n >= 3 {
            Some(g_ratio(&fac, kappa, prec)?.g)
        } else {
            None
        };
        entries.push(CaEntry {
            index: i + 1,
            eps: value.eps.clone(),
            eps_next: values[i + 1].eps.clone(),
            factorization: fac,
            log_n,
            log_log_n,
            g,
        });
    }
    Ok(entries)
}

/// Span guard for exhaustive local-maxima verification.
const LOCAL_MAXIMA_SPAN_GUARD: u64 = 10_000_000;

/// Verifies G^[kappa](n) <= max(G(N_i), G(N_{i+1})) for every n in
/// [N_i, N_{i+1}], by exhaustive scan of the interior.
pub fn local_maxima_check(i: usize, kappa: &Kappa, prec: u32) -> Result<bool> {
    if i == 0 {
        return Err(Error::InvalidConfig("index is 1-based".into()));
    }
    let entries = ca_sequence(kappa, i + 1, prec)?;
    let lo = entries[i - 1].factorization.value().to_u64().ok_or_else(|| {
        Error::RangeGuard("N_i exceeds u64".into())
    })?;
    let hi = entries[i].factorization.value().to_u64().ok_or_else(|| {
        Error::RangeGuard("N_{i+1} exceeds u64".into())
    })?;
    if hi - lo > LOCAL_MAXIMA_SPAN_GUARD {
        return Err(Error::RangeGuard(format!("span {} too large", hi - lo)));
    }
    if entries[i - 1].g.is_none() {
        return Err(Error::Domain("G undefined below n = 3".into()));
    }
    let end_lo = &entries[i - 1].factorization;
    let end_hi = &entries[i].factorization;
    let ln_bound_at = |bits: u32| {
        let a = crate::arith::ln_g_ratio(end_lo, kappa, bits);
        let b = crate::arith::ln_g_ratio(end_hi, kappa, bits);
        if a >= b {
            a
        } else {
            b
        }
    };
    let ln_bound = ln_bound_at(prec);
    let table = SpfTable::up_to(hi);
    // f64 prefilter with a wide safety margin; candidates get certified
    let kf64 = kappa.to_f64();
    let zeta_ln = crate::constants::zeta(kappa, prec)?.ln().to_f64();
    let gamma = crate::constants::euler_gamma(prec)?.to_f64();
    for n in (lo + 1)..hi {
        let fac = Factorization::with_table(n, &table)?;
        let mut ln_sigma = 0.0f64;
        for &(p, e) in fac.pairs() {
            let s_hi = sigma_prime_power_f64(p, e);
            let s_lo = sigma_prime_power_f64(p, e.saturating_sub(1));
            ln_sigma += kf64 * s_hi.ln() + (-((s_lo / s_hi).powf(kf64))).ln_1p();
        }
        let nf = n as f64;
        let ln_g = zeta_ln + ln_sigma - kf64 * (gamma + nf.ln() + nf.ln().ln().ln());
        if ln_g > ln_bound.to_f64() - 1e-9 {
            let verdict = crate::hp::certify(
                |bits| (crate::arith::ln_g_ratio(&fac, kappa, bits), ln_bound_at(bits)),
                &crate::hp::ESCALATION_LADDER,
                n,
            )?;
            if verdict.relation == Relation::Greater {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn sigma_prime_power_f64(p: u64, e: u32) -> f64 {
    if e == 0 {
        return 1.0;
    }
    let mut acc = 1.0f64;
    let mut term = 1.0f64;
    for _ in 0..e {
        term *= p as f64;
        acc += term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::DEFAULT_PRECISION as P;

    fn k(n: u32) -> Kappa {
        Kappa::integer(n).unwrap()
    }

    fn hp(v: f64) -> HPReal {
        HPReal::from_f64(v, P)
    }

    #[test]
    fn f_closed_forms() {
        // F^[2](2,1) = log 8 / (2 log 2) - 1 = 1/2 exactly
        let f = f_critical_pa(2, 1, &k(2), P);
        assert!((f.to_f64() - 0.5).abs() < 1e-30);
        // h^[2](3,2) = 51/5, F = log(51/5)/(2 log 3) - 1
        let f32 = f_critical_pa(3, 2, &k(2), P);
        assert!((f32.to_f64() - 0.056964201222).abs() < 1e-11);
        // f^[2]_0(2,1) = h/x^2 = 8/4 = 2
        let f0 = f_eval(&hp(2.0), &hp(1.0), &k(2), &HPReal::zero(P), P).unwrap();
        assert!((f0.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn f_matches_sigma_route() {
        // F(p, a) = (1/(kappa log p)) log(sigma^[k](p^a) / (p^k sigma^[k](p^{a-1})))
        for (p, a, kappa) in [(2u64, 3u32, 2u32), (3, 2, 2), (5, 2, 3), (7, 1, 3)] {
            let kk = k(kappa);
            let direct = f_critical_pa(p, a, &kk, P);
            let hi = ln_sigma_kappa(&Factorization::of(p.pow(a)).unwrap(), &kk, P);
            let lo = if a == 1 {
                HPReal::zero(P)
            } else {
                ln_sigma_kappa(&Factorization::of(p.pow(a - 1)).unwrap(), &kk, P)
            };
            let kf = kk.as_hp(P);
            let ln_p = HPReal::from_u64(p, P).ln();
            let via_sigma = &(&(&hi - &lo) / &(&kf * &ln_p)) - &HPReal::one(P);
            assert!(
                (&direct - &via_sigma).abs().to_f64() < 1e-30,
                "p={p} a={a} kappa={kappa}"
            );
        }
    }

    #[test]
    fn f_infinity_sentinel() {
        let f = f_critical(&hp(2.0), &HPReal::zero(P), &k(2), P).unwrap();
        assert!(!f.is_finite());
        assert!(f_critical(&hp(0.5), &hp(1.0), &k(2), P).is_err());
        assert!(f_eval(&hp(2.0), &hp(0.5), &k(2), &HPReal::zero(P), P).is_err());
    }

    #[test]
    fn invert_a_round_trip() {
        let kk = k(2);
        let eps = f_critical_pa(3, 2, &kk, P);
        match invert_a(3, &eps, &kk, P).unwrap() {
            ExponentInverse::Value(a) => assert!((a.to_f64() - 2.0).abs() < 1e-15),
            ExponentInverse::ExponentZero => panic!(),
        }
        // above F(p, 1): exponent-zero sentinel
        let big = hp(10.0);
        assert!(matches!(
            invert_a(3, &big, &kk, P).unwrap(),
            ExponentInverse::ExponentZero
        ));
    }

    #[test]
    fn invert_x_round_trip() {
        let kk = k(2);
        for x0 in [2.0f64, 10.0, 100.0] {
            let eps = f_critical(&hp(x0), &hp(1.0), &kk, P).unwrap();
            let x = invert_x(&hp(1.0), &eps, &kk, P).unwrap();
            assert!((x.to_f64() - x0).abs() / x0 < 1e-12, "x0={x0}");
        }
    }

    #[test]
    fn critical_values_kappa_two() {
        let values = enumerate_critical(&k(2), 8, P).unwrap();
        let expected = [
            (0.5, 2u64, 1u32),
            (0.232486760359, 3, 1),
            (0.160964047444, 2, 2),
            (0.104530977561, 5, 1),
            (0.068751761875, 2, 3),
            (0.064575034054, 7, 1),
            (0.056964201222, 3, 2),
            (0.034833482212, 11, 1),
        ];
        for (v, (eps, p, a)) in values.iter().zip(expected) {
            assert_eq!(v.members.len(), 1);
            assert_eq!((v.members[0].p, v.members[0].a), (p, a));
            assert!((v.eps.to_f64() - eps).abs() < 1e-11);
        }
    }

    #[test]
    fn critical_values_kappa_three() {
        let values = enumerate_critical(&k(3), 7, P).unwrap();
        // the 6th value is (3,2); (7,1) = log(511)/(3 log 7) - 1 lands 7th
        assert_eq!(
            (values[5].members[0].p, values[5].members[0].a),
            (3, 2)
        );
        assert!((values[5].eps.to_f64() - 0.068666361618).abs() < 1e-11);
        assert_eq!(
            (values[6].members[0].p, values[6].members[0].a),
            (7, 1)
        );
        assert!((values[6].eps.to_f64() - 0.068286664937).abs() < 1e-11);
    }

    #[test]
    fn tie_group_at_special_kappa() {
        // at 96 bits the merge tolerance 2^-48 groups F(2,5) and F(5,2)
        let kappa = Kappa::parse("2.956801214357021", 96).unwrap();
        let values = enumerate_critical(&kappa, 13, 96).unwrap();
        let tie = &values[12];
        assert!(tie.is_tie(), "13th value must be a tie group");
        let members: Vec<_> = tie.members.iter().map(|e| (e.p, e.a)).collect();
        assert_eq!(members, vec![(2, 5), (5, 2)]);
        assert!((tie.eps.to_f64() - 0.019785233524272305).abs() < 1e-15);
    }

    #[test]
    fn ca_number_examples() {
        let kk2 = k(2);
        // just below the 6th critical value: N = 840
        let eps = &f_critical_pa(7, 1, &kk2, P) - &hp(1e-4);
        let ca = ca_number(&eps, &kk2, P).unwrap();
        assert!(ca.ambiguous.is_none());
        assert_eq!(ca.factorization.value(), Integer::from(840));
        // kappa = 3, just below its 6th critical value: N = 360
        let kk3 = k(3);
        let eps3 = &f_critical_pa(3, 2, &kk3, P) - &hp(1e-4);
        let ca3 = ca_number(&eps3, &kk3, P).unwrap();
        assert_eq!(ca3.factorization.value(), Integer::from(360));
        // at a critical value the result is flagged ambiguous with both N's
        let at = f_critical_pa(7, 1, &kk2, P);
        let amb = ca_number(&at, &kk2, P).unwrap();
        let (lo, hi) = amb.ambiguous.expect("boundary must flag");
        assert_eq!(lo, Integer::from(120));
        assert_eq!(hi, Integer::from(840));
    }

    #[test]
    fn ca_sequence_matches_event_products() {
        let entries = ca_sequence(&k(2), 8, P).unwrap();
        let ns: Vec<u64> = entries
            .iter()
            .map(|e| e.factorization.value().to_u64().unwrap())
            .collect();
        assert_eq!(ns, vec![2, 6, 12, 60, 120, 840, 2520, 27720]);
        // N_i divides N_{i+1}
        for w in entries.windows(2) {
            let a = w[0].factorization.value();
            let b = w[1].factorization.value();
            assert_eq!(b.clone() % a, 0);
        }
        // exponents non-increasing in p
        for e in &entries {
            let pairs = e.factorization.pairs();
            for w in pairs.windows(2) {
                assert!(w[0].1 >= w[1].1);
            }
        }
        // eps_next of entry 6 is the 7th critical value
        assert!((entries[5].eps_next.to_f64() - 0.056964201222).abs() < 1e-11);
        // consistency with direct construction at eps_i
        for e in &entries {
            let direct = ca_number(&e.eps, &k(2), P).unwrap();
            assert_eq!(direct.factorization.value(), e.factorization.value());
        }
    }

    #[test]
    fn ca_divides_for_larger_kappa() {
        for eps in [0.03f64, 0.05, 0.1, 0.2] {
            let e = hp(eps);
            let n2 = ca_number(&e, &k(2), P).unwrap().factorization.value();
            let n3 = ca_number(&e, &k(3), P).unwrap().factorization.value();
            assert_eq!(n3 % n2, 0, "eps={eps}");
        }
    }

    #[test]
    fn rho_examples() {
        let kk = k(2);
        let one = Factorization::of(1).unwrap();
        assert!((rho_eval(&one, &kk, &hp(0.1), P).to_f64() - 1.0).abs() < 1e-30);
        // eps = 0 collapses to sigma^[k](n)/n^k
        let f6 = Factorization::of(6).unwrap();
        let r = rho_eval(&f6, &kk, &HPReal::zero(P), P);
        assert!((r.to_f64() - 120.0 / 36.0).abs() < 1e-25);
    }

    #[test]
    fn local_maxima_small_ranges() {
        // consecutive CA pairs around 120..840, 840..2520, 2520..27720
        for i in [5usize, 6, 7] {
            assert!(local_maxima_check(i, &k(2), P).unwrap(), "i={i}");
        }
    }

    #[test]
    fn h_t_decreasing() {
        let grid = [1.01, 1.1, 2.0, 10.0, 100.0];
        let mut prev = f64::INFINITY;
        for t in grid {
            let v = h_t(&hp(t)).to_f64();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn h_ratio_decreasing_in_x() {
        for (u, v) in [(1.5, 2.0), (2.0, 3.0), (2.0, 10.0)] {
            let mut prev = f64::INFINITY;
            for x in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
                let h = h_ratio(&hp(x), &hp(u), &hp(v)).to_f64();
                assert!(h < prev, "u={u} v={v} x={x}");
                prev = h;
            }
        }
    }
}
