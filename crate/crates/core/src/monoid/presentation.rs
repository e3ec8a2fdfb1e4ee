use std::collections::HashMap;

use crate::arith::{factor_trial, primes_up_to, DEFAULT_TRIAL_LIMIT};
use crate::error::{KrullError, Result};

use super::element::ExponentVector;
use super::group::{ClassElement, ClassGroup};

/// A prime divisor of a Krull monoid: a basis element of the free
/// monoid F together with its class in F/M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDivisor {
    pub id: u64,
    pub label: String,
    pub class: ClassElement,
    /// Order k(p) of `class` in the class group.
    pub order: u64,
    /// Multiplicative weight used for grading (the rational prime for the
    /// naturals and Hilbert presets, the ideal norm for number fields).
    pub weight: Option<u64>,
}

/// How elements of a presentation are graded for bounded enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// Grade of x is ∏ weight(p)^x(p).
    Multiplicative,
    /// Grade of x is Σ x(p).
    Degree,
}

/// Strong atom p^k(p) of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrongAtom {
    pub divisor: u64,
    pub power: u64,
}

impl StrongAtom {
    pub fn element(&self) -> ExponentVector {
        ExponentVector::single(self.divisor, self.power)
    }
}

/// Divisor-theory presentation of a Krull monoid: prime divisors with
/// classes in a finite abelian group. The monoid is the set of exponent
/// vectors whose class sum vanishes.
#[derive(Debug, Clone)]
pub struct KrullPresentation {
    name: String,
    group: ClassGroup,
    divisors: Vec<PrimeDivisor>,
    index: HashMap<u64, usize>,
    grading: Grading,
    /// Divisors are the rational primes listed by id (naturals, Hilbert),
    /// so plain integers can be used as elements.
    integer_labels: bool,
    truncation: Option<u64>,
}

impl KrullPresentation {
    /// Builds a presentation from `(id, label, class coordinates, weight)`
    /// tuples. Multiplicative grading is used when every divisor carries a
    /// weight ≥ 2, degree grading otherwise.
    pub fn new(
        name: impl Into<String>,
        group: ClassGroup,
        divisors: Vec<(u64, String, Vec<i64>, Option<u64>)>,
        truncation: Option<u64>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        let mut built = Vec::with_capacity(divisors.len());
        for (id, label, class, weight) in divisors {
            let class = group.element(&class)?;
            if index.insert(id, built.len()).is_some() {
                return Err(KrullError::InvalidParameter(format!("duplicate divisor id {id}")));
            }
            let order = group.order_of(&class);
            built.push(PrimeDivisor { id, label, class, order, weight });
        }
        let grading = if !built.is_empty() && built.iter().all(|d| d.weight.is_some_and(|w| w >= 2)) {
            Grading::Multiplicative
        } else {
            Grading::Degree
        };
        Ok(Self { name: name.into(), group, divisors: built, index, grading, integer_labels: false, truncation })
    }

    /// Hilbert monoid 4ℕ₀+1 inside the free monoid of odd numbers, with
    /// the odd primes up to `bound` as prime divisors and class group ℤ/2.
    pub fn hilbert(bound: u64) -> Result<Self> {
        if bound < 3 {
            return Err(KrullError::InvalidParameter("hilbert preset needs bound >= 3".into()));
        }
        let divisors = primes_up_to(bound)
            .into_iter()
            .filter(|&p| p != 2)
            .map(|p| (p, p.to_string(), vec![if p % 4 == 1 { 0 } else { 1 }], Some(p)))
            .collect();
        let mut pres = Self::new("hilbert", ClassGroup::cyclic(2)?, divisors, Some(bound))?;
        pres.integer_labels = true;
        Ok(pres)
    }

    /// Multiplicative monoid ℕ truncated to the primes up to `bound`.
    pub fn naturals(bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(KrullError::InvalidParameter("naturals preset needs bound >= 2".into()));
        }
        let divisors = primes_up_to(bound).into_iter().map(|p| (p, p.to_string(), vec![], Some(p))).collect();
        let mut pres = Self::new("naturals", ClassGroup::trivial(), divisors, Some(bound))?;
        pres.integer_labels = true;
        Ok(pres)
    }

    /// Naturals with exactly the first `count` primes as divisors.
    pub fn naturals_with_primes(count: usize) -> Result<Self> {
        let primes = crate::arith::first_primes(count);
        let bound = primes.last().copied().unwrap_or(2);
        Self::naturals(bound)
    }

    /// Free commutative monoid of rank `n` (divisors 1..=n, trivial group).
    pub fn free(n: u64) -> Result<Self> {
        let divisors = (1..=n).map(|i| (i, format!("e{i}"), vec![], None)).collect();
        Self::new("free", ClassGroup::trivial(), divisors, None)
    }

    /// Arbitrary presentation over the group with the given cyclic moduli.
    pub fn divisor_theory(moduli: Vec<u64>, classes: &[(u64, Vec<i64>)]) -> Result<Self> {
        let group = ClassGroup::new(moduli)?;
        let divisors = classes.iter().map(|(id, c)| (*id, format!("p{id}"), c.clone(), None)).collect();
        Self::new("divisor_theory", group, divisors, None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn divisors(&self) -> &[PrimeDivisor] {
        &self.divisors
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn has_integer_labels(&self) -> bool {
        self.integer_labels
    }

    pub fn truncation(&self) -> Option<u64> {
        self.truncation
    }

    pub fn divisor(&self, id: u64) -> Result<&PrimeDivisor> {
        self.index.get(&id).map(|&i| &self.divisors[i]).ok_or(KrullError::UnknownDivisor(id))
    }

    pub fn position(&self, id: u64) -> Result<usize> {
        self.index.get(&id).copied().ok_or(KrullError::UnknownDivisor(id))
    }

    /// Class-sum map Σ v(p)·[p].
    pub fn class_of(&self, v: &ExponentVector) -> Result<ClassElement> {
        let mut acc = self.group.zero();
        for &(id, e) in v.entries() {
            let d = self.divisor(id)?;
            acc = self.group.add(&acc, &self.group.scale(&d.class, e));
        }
        Ok(acc)
    }

    pub fn contains(&self, v: &ExponentVector) -> Result<bool> {
        Ok(self.class_of(v)?.is_zero())
    }

    /// Grade used for bounded enumeration; saturates at `u128::MAX`.
    pub fn grade(&self, v: &ExponentVector) -> u128 {
        match self.grading {
            Grading::Degree => v.degree() as u128,
            Grading::Multiplicative => {
                let mut g: u128 = 1;
                for &(id, e) in v.entries() {
                    let w = self.index.get(&id).and_then(|&i| self.divisors[i].weight).unwrap_or(1) as u128;
                    for _ in 0..e {
                        g = g.saturating_mul(w);
                    }
                }
                g
            }
        }
    }

    /// Factors a positive integer over the presented primes.
    pub fn from_integer(&self, n: u64) -> Result<ExponentVector> {
        if !self.integer_labels {
            return Err(KrullError::FamilyMismatch(format!("presentation `{}` has no integer labels", self.name)));
        }
        if n == 0 {
            return Err(KrullError::NotMember("0".into()));
        }
        let factors = factor_trial(n as u128, DEFAULT_TRIAL_LIMIT)?;
        let mut pairs = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            if !self.index.contains_key(&p) {
                return Err(KrullError::NotMember(format!("{n} has prime factor {p} outside the presented divisors")));
            }
            pairs.push((p, e as u64));
        }
        Ok(ExponentVector::from_pairs(pairs))
    }

    /// Integer value of an element of an integer-labelled presentation.
    pub fn to_integer(&self, v: &ExponentVector) -> Option<u128> {
        if !self.integer_labels {
            return None;
        }
        let mut acc: u128 = 1;
        for &(p, e) in v.entries() {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }

    pub fn display(&self, v: &ExponentVector) -> String {
        match self.to_integer(v) {
            Some(n) => n.to_string(),
            None => v.to_string(),
        }
    }

    /// Strong atoms p^k(p), one per presented divisor, in divisor order.
    pub fn strong_atoms(&self) -> Vec<StrongAtom> {
        self.divisors.iter().map(|d| StrongAtom { divisor: d.id, power: d.order }).collect()
    }

    pub fn strong_atom_label(&self, a: &StrongAtom) -> String {
        self.display(&a.element())
    }

    /// All members with grade ≤ `bound`, sorted by grade then by dense
    /// lexicographic order.
    pub fn enumerate(&self, bound: u64) -> Vec<ExponentVector> {
        let mut out = Vec::new();
        let mut current: Vec<(u64, u64)> = Vec::new();
        let zero = self.group.zero();
        match self.grading {
            Grading::Multiplicative => {
                let mut order: Vec<usize> = (0..self.divisors.len()).collect();
                order.sort_by_key(|&i| self.divisors[i].weight);
                self.walk_multiplicative(&order, 0, 1, bound as u128, &zero, &mut current, &mut out);
            }
            Grading::Degree => {
                self.walk_degree(0, bound, &zero, &mut current, &mut out);
            }
        }
        let mut keyed: Vec<(u128, ExponentVector)> = out.into_iter().map(|v| (self.grade(&v), v)).collect();
        keyed.sort();
        keyed.into_iter().map(|p| p.1).collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_multiplicative(
        &self,
        order: &[usize],
        start: usize,
        value: u128,
        bound: u128,
        class: &ClassElement,
        current: &mut Vec<(u64, u64)>,
        out: &mut Vec<ExponentVector>,
    ) {
        if class.is_zero() {
            out.push(ExponentVector::from_pairs(current.iter().copied()));
        }
        for (pos, &i) in order.iter().enumerate().skip(start) {
            let d = &self.divisors[i];
            let w = d.weight.unwrap_or(1) as u128;
            if value * w > bound {
                break;
            }
            let mut v = value;
            let mut e = 0;
            let mut c = class.clone();
            while v * w <= bound {
                v *= w;
                e += 1;
                c = self.group.add(&c, &d.class);
                current.push((d.id, e));
                self.walk_multiplicative(order, pos + 1, v, bound, &c, current, out);
                current.pop();
            }
        }
    }

    fn walk_degree(
        &self,
        start: usize,
        remaining: u64,
        class: &ClassElement,
        current: &mut Vec<(u64, u64)>,
        out: &mut Vec<ExponentVector>,
    ) {
        if class.is_zero() {
            out.push(ExponentVector::from_pairs(current.iter().copied()));
        }
        for i in start..self.divisors.len() {
            let d = &self.divisors[i];
            let mut c = class.clone();
            for e in 1..=remaining {
                c = self.group.add(&c, &d.class);
                current.push((d.id, e));
                self.walk_degree(i + 1, remaining - e, &c, current, out);
                current.pop();
            }
        }
    }
}
