//! Imaginary quadratic fields with class number 1 or 2: prime ideals by
//! norm, principality via norm forms, the principal-ideal monoid as a
//! Krull presentation, and Dedekind zeta brackets.
//!
//! O_K = ℤ[ω] with ω = √d, or ω = (1+√d)/2 when d ≡ 1 (mod 4). The prime
//! ideals above a split prime p are (p, ω − r) for the two roots r of
//! ω's minimal polynomial mod p.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factor_trial, isqrt, primes_up_to, CompensatedSum, DEFAULT_TRIAL_LIMIT};
use crate::decay::{decay, DecayDecomposition};
use crate::error::{KrullError, Result};
use crate::monoid::{ClassGroup, ExponentVector, KrullPresentation, StrongAtom};
use crate::zeta::{bracket_from_log, log_euler, ZetaEstimate};

/// d and class number of the fields whose configuration is known good.
pub const SHIPPED_FIELDS: [(i64, u8); 4] = [(-1, 1), (-2, 1), (-5, 2), (-6, 2)];

const VALIDATION_LIMIT: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticField {
    d: i64,
    disc: i64,
    class_number: u8,
    /// False for fields outside [`SHIPPED_FIELDS`]; their class number was
    /// only checked against norm-form behaviour.
    validated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub kind: Splitting,
    pub norm: u64,
    pub principal: bool,
    /// Root r of ω's minimal polynomial mod p with the ideal = (p, ω − r);
    /// only meaningful for split primes.
    pub root: u64,
    /// 0 or 1: which of the two ideals above a split prime.
    pub conjugate: u8,
}

impl PrimeIdeal {
    /// Stable divisor id used in presentations.
    pub fn id(&self) -> u64 {
        2 * self.p + self.conjugate as u64
    }

    pub fn label(&self) -> String {
        match self.kind {
            Splitting::Split => format!("P{}[{}]", self.p, self.root),
            Splitting::Ramified => format!("P{}", self.p),
            Splitting::Inert => format!("({})", self.p),
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let m128 = m as u128;
    let mut b128 = b as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    acc as u64
}

/// Kronecker symbol (a/n) for n ≥ 0.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1;
    let tz = n.trailing_zeros();
    let mut n = n >> tz;
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

impl QuadraticField {
    /// Validates d < 0 squarefree and h ∈ {1, 2}, then checks h against
    /// the norm form: for h = 1 every split prime ≤ 200 must be a norm,
    /// for h = 2 at least one must not be.
    pub fn new(d: i64, class_number: u8) -> Result<Self> {
        if d >= 0 || !is_squarefree(d.unsigned_abs()) {
            return Err(KrullError::InvalidParameter(format!("d = {d} must be negative and squarefree")));
        }
        if !(1..=2).contains(&class_number) {
            return Err(KrullError::Unsupported(format!("class number {class_number}; only 1 and 2 are supported")));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let validated = SHIPPED_FIELDS.contains(&(d, class_number));
        if let Some(&(_, h)) = SHIPPED_FIELDS.iter().find(|f| f.0 == d) {
            if h != class_number {
                return Err(KrullError::InvalidParameter(format!("d = {d} has class number {h}, not {class_number}")));
            }
        }
        let field = Self { d, disc, class_number, validated };
        let split: Vec<u64> =
            primes_up_to(VALIDATION_LIMIT).into_iter().filter(|&p| field.splitting(p) == Splitting::Split).collect();
        let all_norms = split.iter().all(|&p| field.represents(p, false));
        if (class_number == 1) != all_norms {
            return Err(KrullError::InvalidParameter(format!(
                "class number {class_number} is inconsistent with the norm form of d = {d}"
            )));
        }
        Ok(field)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn class_number(&self) -> u8 {
        self.class_number
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    fn omega_is_half(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// N(x + yω).
    pub fn norm(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        if self.omega_is_half() {
            x * x + x * y + ((1 - self.d as i128) / 4) * y * y
        } else {
            x * x - (self.d as i128) * y * y
        }
    }

    /// Whether n = N(x + yω) for some x, y; with `primitive`, p ∤ gcd(x, y)
    /// is also required for every prime p dividing n.
    fn represents(&self, n: u64, primitive: bool) -> bool {
        let r = isqrt(n) as i64 + 1;
        let primes: Vec<u64> = if primitive {
            factor_trial(n as u128, DEFAULT_TRIAL_LIMIT)
                .map(|f| f.into_iter().map(|p| p.0).collect())
                .unwrap_or_default()
        } else {
            Vec::new()
        };
        for x in -r..=r {
            for y in 0..=r {
                if self.norm(x, y) == n as i128
                    && (!primitive || primes.iter().all(|&p| x % p as i64 != 0 || y % p as i64 != 0))
                {
                    return true;
                }
            }
        }
        false
    }

    pub fn splitting(&self, p: u64) -> Splitting {
        match kronecker(self.disc, p) {
            0 => Splitting::Ramified,
            1 => Splitting::Split,
            _ => Splitting::Inert,
        }
    }

    /// Roots of ω's minimal polynomial mod p, ascending.
    fn roots_mod(&self, p: u64) -> Vec<u64> {
        let pi = p as i128;
        let (b, c) = if self.omega_is_half() { (-1i128, (1 - self.d as i128) / 4) } else { (0, -(self.d as i128)) };
        (0..p)
            .filter(|&t| {
                let t = t as i128;
                (t * t + b * t + c).rem_euclid(pi) == 0
            })
            .collect()
    }

    fn ideals_above(&self, p: u64) -> Vec<PrimeIdeal> {
        let roots = self.roots_mod(p);
        let kind = match roots.len() {
            2 => Splitting::Split,
            1 => Splitting::Ramified,
            _ => Splitting::Inert,
        };
        let norm = if kind == Splitting::Inert { p * p } else { p };
        let principal = kind == Splitting::Inert || self.class_number == 1 || self.represents(p, false);
        match kind {
            Splitting::Split => roots
                .iter()
                .enumerate()
                .map(|(i, &r)| PrimeIdeal { p, kind, norm, principal, root: r, conjugate: i as u8 })
                .collect(),
            _ => vec![PrimeIdeal { p, kind, norm, principal, root: roots.first().copied().unwrap_or(0), conjugate: 0 }],
        }
    }

    /// Every prime ideal of norm ≤ X, sorted by norm then label.
    pub fn prime_ideals_up_to_norm(&self, x: u64) -> Vec<PrimeIdeal> {
        let mut out: Vec<PrimeIdeal> =
            primes_up_to(x).into_iter().flat_map(|p| self.ideals_above(p)).filter(|i| i.norm <= x).collect();
        out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.conjugate.cmp(&b.conjugate)));
        out
    }

    pub fn is_principal(&self, ideal: &PrimeIdeal) -> bool {
        match ideal.kind {
            Splitting::Inert => true,
            _ => self.class_number == 1 || self.represents(ideal.p, false),
        }
    }

    /// Whether P² is principal: (p) for ramified P, otherwise p² must be
    /// the norm of an element outside pO_K.
    pub fn square_is_principal(&self, ideal: &PrimeIdeal) -> bool {
        match ideal.kind {
            Splitting::Inert | Splitting::Ramified => true,
            Splitting::Split => self.represents(ideal.p * ideal.p, true),
        }
    }

    /// Number of ideals of norm n as Σ_{m | n} χ_D(m).
    pub fn ideal_count_oracle(&self, n: u64) -> u64 {
        let mut total: i64 = 0;
        let mut m = 1;
        while m * m <= n {
            if n.is_multiple_of(m) {
                total += kronecker(self.disc, m) as i64;
                if m * m != n {
                    total += kronecker(self.disc, n / m) as i64;
                }
            }
            m += 1;
        }
        total as u64
    }

    /// Ideal counts a_n for n ≤ X, by counting multisets of the enumerated
    /// prime ideals with the given product norm.
    pub fn ideal_counts_by_enumeration(&self, x: u64) -> Vec<u64> {
        let mut count = vec![0u64; x as usize + 1];
        if x >= 1 {
            count[1] = 1;
        }
        for ideal in self.prime_ideals_up_to_norm(x) {
            let q = ideal.norm as usize;
            for n in (q..=x as usize).step_by(q) {
                count[n] += count[n / q];
            }
        }
        count
    }

    /// Σ over prime ideals of norm > X of N(P)^{-s}: at most two ideals of
    /// norm p for each p > X, plus inert p > √X with norm p².
    pub fn omitted_tail_bound(&self, s: f64, x: u64) -> f64 {
        let m = isqrt(x).max(1) as f64;
        2.0 * (x as f64).powf(1.0 - s) / (s - 1.0) + m.powf(1.0 - 2.0 * s) / (2.0 * s - 1.0)
    }

    /// Σ_{n≤X} a_n n^{-s} (oracle coefficients) and the Euler product over
    /// prime ideals of norm ≤ X, bracketed with the analytic tail bound.
    pub fn dedekind_zeta(&self, s: f64, x: u64) -> Result<ZetaEstimate> {
        if !(s > 1.0 && s.is_finite()) {
            return Err(KrullError::InvalidParameter(format!("s must be > 1, got {s}")));
        }
        if x < 2 {
            return Err(KrullError::InvalidParameter("norm bound must be >= 2".into()));
        }
        let mut sum = CompensatedSum::new();
        for n in 1..=x {
            let a = self.ideal_count_oracle(n);
            if a > 0 {
                sum.add(a as f64 * (n as f64).powf(-s));
            }
        }
        let ideals = self.prime_ideals_up_to_norm(x);
        let log = log_euler(ideals.iter().map(|i| (i.norm as f64).powf(s)));
        let tail = self.omitted_tail_bound(s, x);
        let rounding = sum.error_bound() + 4.0 * f64::EPSILON * sum.value() * (x as f64).log2();
        Ok(ZetaEstimate {
            partial_sum: sum.value(),
            product: log.0.exp(),
            lower: sum.value() - rounding,
            upper: Some(bracket_from_log(log, tail)),
            terms: x,
            atoms: ideals.len() as u64,
            assumed_tail: Some(tail),
            conditional: tail >= 0.5,
        })
    }

    /// Strong atoms of the principal-ideal monoid with norm ≤ X: principal
    /// prime ideals, and squares of the non-principal ones.
    pub fn principal_monoid_strong_atoms(&self, x: u64) -> Vec<IdealPower> {
        let mut out: Vec<IdealPower> = self
            .prime_ideals_up_to_norm(x)
            .into_iter()
            .map(|ideal| {
                let power = if ideal.principal { 1 } else { 2 };
                IdealPower { norm: ideal.norm.pow(power), ideal, power }
            })
            .filter(|a| a.norm <= x)
            .collect();
        out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.ideal.id().cmp(&b.ideal.id())));
        out
    }

    /// The principal-ideal monoid as a divisor theory over the prime
    /// ideals of norm ≤ X, with class 0 for principal ideals and 1 else.
    pub fn presentation(&self, x: u64) -> Result<FieldPresentation> {
        let ideals = self.prime_ideals_up_to_norm(x);
        let group = if self.class_number == 1 { ClassGroup::trivial() } else { ClassGroup::cyclic(2)? };
        let divisors = ideals
            .iter()
            .map(|i| {
                let class = if self.class_number == 1 { vec![] } else { vec![if i.principal { 0 } else { 1 }] };
                (i.id(), i.label(), class, Some(i.norm))
            })
            .collect();
        let pres = KrullPresentation::new(format!("quadratic_field({})", self.d), group, divisors, Some(x))?;
        Ok(FieldPresentation { pres, ideals })
    }

    /// Prime-ideal factorization of (u + vω), read off N(u + vω).
    pub fn factor_element(&self, u: i64, v: i64) -> Result<Vec<(PrimeIdeal, u64)>> {
        let n = self.norm(u, v);
        if n <= 1 {
            return Err(KrullError::InvalidParameter(format!("{u} + {v}ω is zero or a unit")));
        }
        let mut out = Vec::new();
        for (p, e) in factor_trial(n as u128, DEFAULT_TRIAL_LIMIT)? {
            let e = e as u64;
            let ideals = self.ideals_above(p);
            match ideals[0].kind {
                Splitting::Inert => out.push((ideals[0].clone(), e / 2)),
                Splitting::Ramified => out.push((ideals[0].clone(), e)),
                Splitting::Split => {
                    let pi = p as i64;
                    let (mut a, mut b, mut k) = (u, v, 0u64);
                    while a % pi == 0 && b % pi == 0 {
                        a /= pi;
                        b /= pi;
                        k += 1;
                    }
                    let rest = e - 2 * k;
                    for ideal in ideals {
                        let mut exp = k;
                        let r = ideal.root as i128;
                        if rest > 0 && (a as i128 + b as i128 * r).rem_euclid(p as i128) == 0 {
                            exp += rest;
                        }
                        if exp > 0 {
                            out.push((ideal, exp));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Decay decomposition of (u + vω) in the principal-ideal monoid.
    pub fn decay_in_ok(&self, u: i64, v: i64) -> Result<(FieldPresentation, DecayDecomposition)> {
        let factors = self.factor_element(u, v)?;
        let top = factors.iter().map(|f| f.0.norm).max().unwrap_or(2);
        let fp = self.presentation(top)?;
        let x = ExponentVector::from_pairs(factors.iter().map(|(i, e)| (i.id(), *e)));
        let d = decay(&fp.pres, &x)?;
        Ok((fp, d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPower {
    pub ideal: PrimeIdeal,
    pub power: u32,
    pub norm: u64,
}

impl IdealPower {
    pub fn label(&self) -> String {
        if self.power == 1 {
            self.ideal.label()
        } else {
            format!("{}^{}", self.ideal.label(), self.power)
        }
    }
}

/// A presentation together with the prime ideals behind its divisor ids.
#[derive(Debug, Clone)]
pub struct FieldPresentation {
    pub pres: KrullPresentation,
    pub ideals: Vec<PrimeIdeal>,
}

impl FieldPresentation {
    pub fn ideal(&self, id: u64) -> Option<&PrimeIdeal> {
        self.ideals.iter().find(|i| i.id() == id)
    }

    pub fn atom_label(&self, a: &StrongAtom) -> String {
        let base = self.ideal(a.divisor).map_or_else(|| a.divisor.to_string(), |i| i.label());
        if a.power == 1 {
            base
        } else {
            format!("{base}^{}", a.power)
        }
    }
}
