//! Scales, ordered enumeration of the free monoid ⟨S(M)⟩ on the strong
//! atoms, zeta partial sums and certified Euler-product brackets.
//!
//! Sums run in double precision with compensated accumulation. Every
//! reported bracket is widened by the accumulated rounding budget, so
//! `lower` and `upper` stay valid bounds, not just estimates.

mod heap;
mod scale;

pub use heap::{HeapEnumerator, HeapTerm};
pub use scale::{Scale, ScaleValue};

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{big_omega_table, CompensatedSum};
use crate::decay::decay;
use crate::error::{KrullError, Result};
use crate::monoid::{KrullPresentation, StrongAtom};

const EPS: f64 = f64::EPSILON;

/// Snapshot of a zeta computation. `lower` is a certified lower bound on
/// ζ_M(σ); `upper` is only present when a tail bound was supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaEstimate {
    pub partial_sum: f64,
    pub product: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    pub terms: u64,
    pub atoms: u64,
    pub assumed_tail: Option<f64>,
    /// Set when the omitted-atom condition behind `upper` could not be
    /// verified.
    #[serde(skip)]
    pub conditional: bool,
}

impl ZetaEstimate {
    pub const CSV_HEADER: &'static str = "partial_sum,product,lower,upper,terms,atoms,assumed_tail";

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.partial_sum,
            self.product,
            self.lower,
            opt(self.upper),
            self.terms,
            self.atoms,
            opt(self.assumed_tail)
        )
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && self.upper.is_none_or(|u| value <= u)
    }
}

/// Strong atoms sorted by σ value, ties in divisor order.
pub fn atoms_by_value(scale: &Scale) -> Vec<(StrongAtom, f64)> {
    let mut atoms: Vec<(StrongAtom, f64)> = scale.values().iter().map(|(a, v)| (a.clone(), v.to_f64())).collect();
    atoms.sort_by(|x, y| x.1.total_cmp(&y.1));
    atoms
}

struct PartialSum {
    value: f64,
    rounding: f64,
    terms: u64,
}

fn heap_sum(scale: &Scale, budget: u64) -> PartialSum {
    let mut sum = CompensatedSum::new();
    let mut term_error = 0.0;
    for t in HeapEnumerator::new(scale).take(budget as usize) {
        let r = 1.0 / t.value;
        sum.add(r);
        term_error += (t.indices.len() as f64 + 2.0) * EPS * r;
    }
    PartialSum { value: sum.value(), rounding: sum.error_bound() + term_error, terms: sum.terms() }
}

/// Σ 1/σ(x) over the `term_budget` σ-smallest elements of ⟨S(M)⟩,
/// including the identity. `product` is the Euler product over every
/// presented strong atom.
pub fn zeta_partial_sum(pres: &KrullPresentation, scale: &Scale, term_budget: u64) -> Result<ZetaEstimate> {
    zeta_estimate(pres, scale, term_budget, None, None)
}

/// Partial sum plus the Euler product over the `atom_count` σ-smallest
/// strong atoms (all when `None`), with an upper bracket when `tail`
/// bounds Σ 1/σ(a) over the atoms left out of the product.
pub fn zeta_estimate(
    _pres: &KrullPresentation,
    scale: &Scale,
    term_budget: u64,
    atom_count: Option<usize>,
    tail: Option<f64>,
) -> Result<ZetaEstimate> {
    if term_budget == 0 {
        return Err(KrullError::InvalidParameter("term budget must be >= 1".into()));
    }
    let sorted = atoms_by_value(scale);
    let n = atom_count.unwrap_or(sorted.len()).min(sorted.len());
    let chosen: Vec<StrongAtom> = sorted[..n].iter().map(|p| p.0.clone()).collect();
    let product = euler_product_truncated(scale, &chosen)?;
    let sum = heap_sum(scale, term_budget);
    let (upper, conditional) = match tail {
        Some(t) => {
            let b = zeta_upper_bound(scale, &chosen, t)?;
            (Some(b.value), b.conditional)
        }
        None => (None, false),
    };
    Ok(ZetaEstimate {
        partial_sum: sum.value,
        product,
        lower: sum.value - sum.rounding,
        upper,
        terms: sum.terms,
        atoms: n as u64,
        assumed_tail: tail,
        conditional,
    })
}

/// Σ −ln(1 − 1/v) with the number of factors.
pub(crate) fn log_euler(values: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut acc = CompensatedSum::new();
    let mut n = 0;
    for v in values {
        acc.add(-(-1.0 / v).ln_1p());
        n += 1;
    }
    (acc.value(), n)
}

/// ∏ (1 − 1/σ(a))⁻¹ over the listed atoms; the empty product is 1.
pub fn euler_product_truncated(scale: &Scale, atoms: &[StrongAtom]) -> Result<f64> {
    let values: Vec<f64> = atoms.iter().map(|a| scale.value(a).map(|v| v.to_f64())).collect::<Result<_>>()?;
    Ok(log_euler(values.into_iter()).0.exp())
}

/// Exact Euler product when every listed value is rational.
pub fn euler_product_exact(scale: &Scale, atoms: &[StrongAtom]) -> Result<Option<BigRational>> {
    let mut acc = BigRational::one();
    for a in atoms {
        let Some(v) = scale.value(a)?.as_rational() else {
            return Ok(None);
        };
        acc *= v / (v - BigRational::one());
    }
    Ok(Some(acc))
}

/// exp(log product + 2·tail), padded for rounding in ln_1p, the
/// compensated sum and exp.
pub(crate) fn bracket_from_log((log_p, n): (f64, usize), tail: f64) -> f64 {
    let slack = (n as f64 + 8.0) * 4.0 * EPS * (1.0 + log_p.abs());
    (log_p + 2.0 * tail + slack).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    /// True when some omitted atom may have 1/σ ≥ 1/2.
    pub conditional: bool,
}

/// product(atoms) · e^{2·tail}, valid when every omitted atom has
/// 1/σ(a) < 1/2. That condition is implied by tail < 1/2; otherwise the
/// bound is flagged conditional. A tail below the sum over the presented
/// omitted atoms is rejected since it is demonstrably false.
pub fn zeta_upper_bound(scale: &Scale, atoms: &[StrongAtom], tail_bound: f64) -> Result<UpperBound> {
    if !(tail_bound >= 0.0 && tail_bound.is_finite()) {
        return Err(KrullError::InvalidParameter(format!("tail bound must be finite and >= 0, got {tail_bound}")));
    }
    let listed: HashSet<&StrongAtom> = atoms.iter().collect();
    let known_omitted: f64 =
        scale.values().iter().filter(|(a, _)| !listed.contains(a)).map(|(_, v)| 1.0 / v.to_f64()).sum();
    if known_omitted > tail_bound * (1.0 + 1e-12) {
        return Err(KrullError::InvalidParameter(format!(
            "tail bound {tail_bound} is below the omitted presented atoms' sum {known_omitted}"
        )));
    }
    let values: Vec<f64> = atoms.iter().map(|a| scale.value(a).map(|v| v.to_f64())).collect::<Result<_>>()?;
    Ok(UpperBound {
        value: bracket_from_log(log_euler(values.into_iter()), tail_bound),
        conditional: tail_bound >= 0.5,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Agreement {
    Agree,
    Inconclusive,
}

/// Compares Σ_{x∈M} 1/σ(x) with the Euler product over the prime
/// elements of M, which coincide exactly when M is factorial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UfmCriterion {
    pub full_sum: f64,
    pub full_terms: u64,
    pub prime_product: f64,
    pub prime_upper: Option<f64>,
    /// Certified lower bound of (full sum − prime upper bracket).
    pub excess: Option<f64>,
    /// A positive excess refutes factoriality.
    pub refutes_ufm: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerIdentityReport {
    pub estimate: ZetaEstimate,
    pub brackets_consistent: bool,
    pub difference: f64,
    pub agreement: Agreement,
    pub ufm: Option<UfmCriterion>,
}

/// Sum-versus-product check at the given budget. With `full_bound`, the
/// factoriality criterion is also evaluated over all members of grade ≤
/// `full_bound`, using `tail` for the primes beyond the presentation.
pub fn check_euler_identity(
    pres: &KrullPresentation,
    scale: &Scale,
    budget: u64,
    tolerance: f64,
    tail: Option<f64>,
    full_bound: Option<u64>,
) -> Result<EulerIdentityReport> {
    let estimate = zeta_estimate(pres, scale, budget, None, tail)?;
    let brackets_consistent = estimate.upper.is_none_or(|u| estimate.lower <= u);
    let difference = (estimate.partial_sum - estimate.product).abs();
    let agreement = if difference <= tolerance { Agreement::Agree } else { Agreement::Inconclusive };
    let ufm = match full_bound {
        Some(b) => Some(ufm_criterion(pres, scale, b, tail)?),
        None => None,
    };
    Ok(EulerIdentityReport { estimate, brackets_consistent, difference, agreement, ufm })
}

pub fn ufm_criterion(
    pres: &KrullPresentation,
    scale: &Scale,
    full_bound: u64,
    tail: Option<f64>,
) -> Result<UfmCriterion> {
    let mut sum = CompensatedSum::new();
    let mut term_error = 0.0;
    for x in pres.enumerate(full_bound) {
        let r = 1.0 / scale.eval(pres, &x)?;
        sum.add(r);
        term_error += (x.degree() as f64 + 4.0) * 4.0 * EPS * r;
    }
    let primes: Vec<StrongAtom> = pres.strong_atoms().into_iter().filter(|a| a.power == 1).collect();
    let prime_product = euler_product_truncated(scale, &primes)?;
    let prime_upper = match tail {
        // only the prime atoms are in the product; the non-prime strong
        // atoms are not part of this tail
        Some(t) => {
            let values: Vec<f64> = primes.iter().map(|a| scale.value(a).map(|v| v.to_f64())).collect::<Result<_>>()?;
            Some(bracket_from_log(log_euler(values.into_iter()), t))
        }
        None => None,
    };
    let lower = sum.value() - sum.error_bound() - term_error;
    let excess = prime_upper.map(|u| lower - u);
    Ok(UfmCriterion {
        full_sum: sum.value(),
        full_terms: sum.terms(),
        prime_product,
        prime_upper,
        excess,
        refutes_ufm: excess.is_some_and(|e| e > 0.0),
    })
}

/// Σ_{n>X} n^{-s} < X^{1−s}/(s−1), an analytic tail bound for power scales
/// dominated by the integers.
pub fn power_tail_bound(x: u64, s: f64) -> f64 {
    (x as f64).powf(1.0 - s) / (s - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfinitudeParams {
    pub c: f64,
    pub n_max: u64,
}

/// Length bound n ≥ c^δ(n) over members n ≤ N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthBoundCheck {
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<u64>,
}

/// Σ (1/c)^δ(n) against the harmonic reference Σ_{n≥2} 1/n, both over
/// members n ≤ N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntiGeometricCheck {
    pub partial_sum: f64,
    pub harmonic: f64,
    pub dominates: bool,
}

/// Σ 1/σ(a) over the presented strong atoms, split into prime atoms
/// (k = 1) and proper powers (k > 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSums {
    pub prime_atoms: u64,
    pub prime_sum: f64,
    pub power_atoms: u64,
    pub power_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinitudeReport {
    pub c: f64,
    pub n_max: u64,
    pub length_bound: Option<LengthBoundCheck>,
    pub anti_geometric: Option<AntiGeometricCheck>,
    pub atom_sums: AtomSums,
    /// Divergence is never certified by finite computation; this records
    /// what the numbers are evidence for.
    pub note: String,
}

/// Desk-scale evidence for the infinitude criteria. The length-bound and
/// anti-geometric checks need integer labels and a truncation ≥ N.
pub fn infinitude_report(
    pres: &KrullPresentation,
    scale: &Scale,
    params: InfinitudeParams,
) -> Result<InfinitudeReport> {
    let InfinitudeParams { c, n_max } = params;
    if !(c > 1.0 && c.is_finite()) {
        return Err(KrullError::InvalidParameter(format!("c must be > 1, got {c}")));
    }
    let integer = pres.has_integer_labels() && pres.truncation().is_some_and(|t| t >= n_max);
    let (length_bound, anti_geometric) = if integer {
        let (lb, ag) = if pres.group().is_trivial() { naturals_scan(c, n_max) } else { member_scan(pres, c, n_max)? };
        (Some(lb), Some(ag))
    } else {
        (None, None)
    };
    let mut prime = CompensatedSum::new();
    let mut power = CompensatedSum::new();
    for (a, v) in scale.values() {
        if a.power == 1 {
            prime.add(1.0 / v.to_f64());
        } else {
            power.add(1.0 / v.to_f64());
        }
    }
    Ok(InfinitudeReport {
        c,
        n_max,
        length_bound,
        anti_geometric,
        atom_sums: AtomSums {
            prime_atoms: prime.terms(),
            prime_sum: prime.value(),
            power_atoms: power.terms(),
            power_sum: power.value(),
        },
        note: "finite partial sums only evidence divergence; a growing atom sum or anti-geometric sum \
               dominating the harmonic series is consistent with infinitely many strong atoms"
            .into(),
    })
}

fn finish_scan(
    lb_checked: u64,
    violations: u64,
    first: Option<u64>,
    ag: CompensatedSum,
    h: CompensatedSum,
) -> (LengthBoundCheck, AntiGeometricCheck) {
    (
        LengthBoundCheck { checked: lb_checked, violations, first_violation: first },
        AntiGeometricCheck { partial_sum: ag.value(), harmonic: h.value(), dominates: ag.value() >= h.value() },
    )
}

/// On ℕ, δ(n) = Ω(n), read off a sieve.
fn naturals_scan(c: f64, n_max: u64) -> (LengthBoundCheck, AntiGeometricCheck) {
    let omega = big_omega_table(n_max as usize);
    let inv = 1.0 / c;
    let powers: Vec<f64> = (0..64).map(|k| c.powi(k)).collect();
    let inv_powers: Vec<f64> = (0..64).map(|k| inv.powi(k)).collect();
    let (mut violations, mut first) = (0, None);
    let mut ag = CompensatedSum::new();
    let mut h = CompensatedSum::new();
    for n in 1..=n_max {
        let k = omega[n as usize] as usize;
        if (n as f64) < powers[k] {
            violations += 1;
            first.get_or_insert(n);
        }
        ag.add(inv_powers[k]);
        if n >= 2 {
            h.add(1.0 / n as f64);
        }
    }
    finish_scan(n_max, violations, first, ag, h)
}

fn member_scan(pres: &KrullPresentation, c: f64, n_max: u64) -> Result<(LengthBoundCheck, AntiGeometricCheck)> {
    let (mut violations, mut first, mut checked) = (0, None, 0);
    let mut ag = CompensatedSum::new();
    let mut h = CompensatedSum::new();
    for x in pres.enumerate(n_max) {
        let n = pres.to_integer(&x).ok_or(KrullError::Overflow("member value"))? as u64;
        let d = decay(pres, &x)?;
        let delta = num_traits::ToPrimitive::to_f64(&d.delta).unwrap_or(f64::INFINITY);
        checked += 1;
        if (n as f64) < c.powf(delta) {
            violations += 1;
            first.get_or_insert(n);
        }
        ag.add(c.powf(-delta));
        if n >= 2 {
            h.add(1.0 / n as f64);
        }
    }
    Ok(finish_scan(checked, violations, first, ag, h))
}

#[cfg(test)]
mod tests;
