//! Small integer and floating-point helpers shared by the other modules.

use num_integer::Integer;

use crate::error::{KrullError, Result};

/// Default trial-division limit for factoring integer inputs.
pub const DEFAULT_TRIAL_LIMIT: u64 = 10_000_000;

pub fn lcm_all<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(&v))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_n < n (ln n + ln ln n) for n >= 6
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64 + 10;
    let mut primes = primes_up_to(bound);
    primes.truncate(count);
    primes
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor `n` by trial division, failing if a cofactor above `limit²`
/// would remain unverified.
///
/// Returns `(prime, exponent)` pairs in increasing prime order.
pub fn factor_trial(n: u128, limit: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(KrullError::InvalidParameter("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= rest {
        if d > limit as u128 {
            return Err(KrullError::FactorizationLimit { value: n, limit });
        }
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest > u64::MAX as u128 {
            return Err(KrullError::FactorizationLimit { value: n, limit });
        }
        out.push((rest as u64, 1));
    }
    Ok(out)
}

/// Ω(n) for every n in 0..=bound (Ω(0) = Ω(1) = 0), from a smallest
/// prime factor sieve.
pub fn big_omega_table(bound: usize) -> Vec<u8> {
    let mut spf = vec![0u32; bound + 1];
    let mut omega = vec![0u8; bound + 1];
    for i in 2..=bound {
        if spf[i] == 0 {
            let mut j = i;
            while j <= bound {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        omega[i] = omega[i / spf[i] as usize] + 1;
    }
    omega
}

/// Neumaier-compensated accumulator that also tracks a running bound on
/// the rounding error of the compensated result.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    abs_total: f64,
    terms: u64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_total += x.abs();
        self.terms += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Upper bound on |computed − exact| for the summed terms. The terms
    /// themselves are assumed to carry one ulp of error each.
    pub fn error_bound(&self) -> f64 {
        let eps = f64::EPSILON;
        2.0 * eps * self.value().abs() + (self.terms as f64 + 2.0) * eps * eps * self.abs_total + eps * self.abs_total
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}
