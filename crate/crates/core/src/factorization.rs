//! Bounded atoms, factorizations and length sets, plus bounded
//! certification of prime, strong-atom, UFM and HFM status.
//!
//! Bounded verdicts never claim global truth: `Unrefuted` only means no
//! counterexample exists below the stated bound.

use std::collections::BTreeSet;

use crate::cone;
use crate::error::{KrullError, Result};
use crate::monoid::{ExponentVector, KrullPresentation, MonoidElement, MonoidSpec};

/// Outcome of a bounded search for a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedVerdict<W> {
    Refuted { witness: W, bound: u64 },
    UnrefutedUpTo { bound: u64 },
}

impl<W> BoundedVerdict<W> {
    pub fn bound(&self) -> u64 {
        match self {
            BoundedVerdict::Refuted { bound, .. } | BoundedVerdict::UnrefutedUpTo { bound } => *bound,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, BoundedVerdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            BoundedVerdict::Refuted { witness, .. } => Some(witness),
            BoundedVerdict::UnrefutedUpTo { .. } => None,
        }
    }
}

/// All factorizations of one element; each factorization is a multiset of
/// atoms listed in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationSet {
    pub element: MonoidElement,
    pub factorizations: Vec<Vec<MonoidElement>>,
}

impl FactorizationSet {
    pub fn len(&self) -> usize {
        self.factorizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factorizations.is_empty()
    }

    pub fn lengths(&self) -> BTreeSet<usize> {
        self.factorizations.iter().map(|z| z.len()).collect()
    }
}

/// p | bc with p ∤ b and p ∤ c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWitness {
    pub b: MonoidElement,
    pub c: MonoidElement,
}

/// A power aⁿ with more than one factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerWitness {
    pub power: u64,
    pub factorizations: FactorizationSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongVerdict {
    Exact(bool),
    Bounded(BoundedVerdict<PowerWitness>),
}

impl StrongVerdict {
    /// False only when the atom is known not to be strong.
    pub fn possibly_strong(&self) -> bool {
        match self {
            StrongVerdict::Exact(b) => *b,
            StrongVerdict::Bounded(v) => !v.is_refuted(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UfmHfmReport {
    pub ufm: BoundedVerdict<FactorizationSet>,
    pub hfm: BoundedVerdict<FactorizationSet>,
}

fn sort_key(spec: &MonoidSpec, e: &MonoidElement) -> (u128, MonoidElement) {
    (spec.grade(e).unwrap_or(u128::MAX), e.clone())
}

/// Nonidentity class-zero sub-vectors y ≤ v, excluding v itself when
/// `proper` is set.
fn member_subvectors(pres: &KrullPresentation, v: &ExponentVector, proper: bool) -> Result<Vec<ExponentVector>> {
    let entries = v.entries();
    let mut out = Vec::new();
    let mut current = vec![0u64; entries.len()];
    loop {
        // advance odometer
        let mut i = 0;
        loop {
            if i == entries.len() {
                return Ok(out);
            }
            if current[i] < entries[i].1 {
                current[i] += 1;
                break;
            }
            current[i] = 0;
            i += 1;
        }
        let y = ExponentVector::from_pairs(entries.iter().zip(&current).map(|(&(id, _), &e)| (id, e)));
        if proper && &y == v {
            continue;
        }
        if pres.contains(&y)? {
            out.push(y);
        }
    }
}

fn krull_is_atom(pres: &KrullPresentation, v: &ExponentVector) -> Result<bool> {
    if v.is_identity() || !pres.contains(v)? {
        return Ok(false);
    }
    Ok(member_subvectors(pres, v, true)?.is_empty())
}

/// True iff `x` is a nonidentity member with no proper nontrivial divisor.
pub fn is_atom(spec: &MonoidSpec, x: &MonoidElement) -> Result<bool> {
    let x = spec.canonicalize(x)?;
    if spec.is_identity(&x) || !spec.contains(&x)? {
        return Ok(false);
    }
    match (spec, &x) {
        (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => krull_is_atom(p, v),
        _ => {
            let g = spec.grade(&x)?;
            for y in spec.enumerate(g as u64)? {
                if spec.is_identity(&y) || y == x {
                    continue;
                }
                if let Some(z) = spec.quotient(&x, &y)? {
                    if !spec.is_identity(&z) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Atoms of grade ≤ `bound`, in canonical order.
pub fn atoms_up_to(spec: &MonoidSpec, bound: u64) -> Result<Vec<MonoidElement>> {
    let elements = spec.enumerate(bound)?;
    match spec {
        MonoidSpec::Krull(p) => {
            let mut out = Vec::new();
            for e in elements {
                if let MonoidElement::Exponents(v) = &e {
                    if krull_is_atom(p, v)? {
                        out.push(e);
                    }
                }
            }
            Ok(out)
        }
        _ => {
            // proper divisors have strictly smaller grade, so earlier atoms suffice
            let mut atoms: Vec<MonoidElement> = Vec::new();
            for x in elements {
                if spec.is_identity(&x) {
                    continue;
                }
                let mut reducible = false;
                for a in &atoms {
                    if let Some(z) = spec.quotient(&x, a)? {
                        if !spec.is_identity(&z) {
                            reducible = true;
                            break;
                        }
                    }
                }
                if !reducible {
                    atoms.push(x);
                }
            }
            Ok(atoms)
        }
    }
}

/// Atoms dividing `x`, in canonical order.
fn atom_divisors(spec: &MonoidSpec, x: &MonoidElement) -> Result<Vec<MonoidElement>> {
    let mut out = match (spec, x) {
        (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => {
            let mut out = Vec::new();
            for y in member_subvectors(p, v, false)? {
                if krull_is_atom(p, &y)? {
                    out.push(MonoidElement::Exponents(y));
                }
            }
            out
        }
        _ => {
            let g = spec.grade(x)?;
            let mut out = Vec::new();
            for a in atoms_up_to(spec, g as u64)? {
                if spec.quotient(x, &a)?.is_some() {
                    out.push(a);
                }
            }
            out
        }
    };
    out.sort_by_cached_key(|e| sort_key(spec, e));
    Ok(out)
}

fn collect_factorizations(
    spec: &MonoidSpec,
    rest: &MonoidElement,
    atoms: &[MonoidElement],
    start: usize,
    current: &mut Vec<MonoidElement>,
    out: &mut Vec<Vec<MonoidElement>>,
) -> Result<()> {
    if spec.is_identity(rest) {
        out.push(current.clone());
        return Ok(());
    }
    for i in start..atoms.len() {
        if let Some(z) = spec.quotient(rest, &atoms[i])? {
            current.push(atoms[i].clone());
            collect_factorizations(spec, &z, atoms, i, current, out)?;
            current.pop();
        }
    }
    Ok(())
}

/// The complete factorization set Z(x). Every divisor of x has grade at
/// most grade(x), so `atom_bound` must be at least that.
pub fn factorizations(spec: &MonoidSpec, x: &MonoidElement, atom_bound: u64) -> Result<FactorizationSet> {
    let x = spec.canonicalize(x)?;
    if !spec.contains(&x)? {
        return Err(KrullError::NotMember(spec.display(&x)));
    }
    let g = spec.grade(&x)?;
    if g > atom_bound as u128 {
        return Err(KrullError::AtomBoundInsufficient { bound: atom_bound, grade: g.min(u64::MAX as u128) as u64 });
    }
    let atoms = atom_divisors(spec, &x)?;
    factorizations_over(spec, &x, &atoms)
}

/// Factorizations of `x` using only the given atoms (which must be in
/// canonical order).
pub fn factorizations_over(spec: &MonoidSpec, x: &MonoidElement, atoms: &[MonoidElement]) -> Result<FactorizationSet> {
    let mut out = Vec::new();
    collect_factorizations(spec, x, atoms, 0, &mut Vec::new(), &mut out)?;
    out.sort_by_cached_key(|z| z.iter().map(|e| sort_key(spec, e)).collect::<Vec<_>>());
    Ok(FactorizationSet { element: x.clone(), factorizations: out })
}

pub fn lengths(spec: &MonoidSpec, x: &MonoidElement, atom_bound: u64) -> Result<BTreeSet<usize>> {
    Ok(factorizations(spec, x, atom_bound)?.lengths())
}

/// Searches b, c of grade ≤ `bound` with p | bc, p ∤ b, p ∤ c.
pub fn is_prime_bounded(spec: &MonoidSpec, p: &MonoidElement, bound: u64) -> Result<BoundedVerdict<PrimeWitness>> {
    let p = spec.canonicalize(p)?;
    if !is_atom(spec, &p)? {
        return Err(KrullError::NotAnAtom(spec.display(&p)));
    }
    let mut candidates = Vec::new();
    for e in spec.enumerate(bound)? {
        if spec.quotient(&e, &p)?.is_none() {
            candidates.push(e);
        }
    }
    for (i, b) in candidates.iter().enumerate() {
        for c in &candidates[i..] {
            let bc = spec.combine(b, c)?;
            if spec.quotient(&bc, &p)?.is_some() {
                return Ok(BoundedVerdict::Refuted { witness: PrimeWitness { b: b.clone(), c: c.clone() }, bound });
            }
        }
    }
    Ok(BoundedVerdict::UnrefutedUpTo { bound })
}

/// Generic bounded strong-atom test: |Z(aⁿ)| = 1 for n ≤ `power_bound`.
pub fn is_strong_atom_bounded(
    spec: &MonoidSpec,
    a: &MonoidElement,
    power_bound: u64,
) -> Result<BoundedVerdict<PowerWitness>> {
    let a = spec.canonicalize(a)?;
    if !is_atom(spec, &a)? {
        return Err(KrullError::NotAnAtom(spec.display(&a)));
    }
    for n in 1..=power_bound {
        let an = spec.power(&a, n)?;
        let g = spec.grade(&an)?;
        let z = factorizations(spec, &an, g.min(u64::MAX as u128) as u64)?;
        if z.len() > 1 {
            return Ok(BoundedVerdict::Refuted {
                witness: PowerWitness { power: n, factorizations: z },
                bound: power_bound,
            });
        }
    }
    Ok(BoundedVerdict::UnrefutedUpTo { bound: power_bound })
}

/// Strong-atom status. Exact for divisor theories (a = p^k(p)) and
/// affine monoids (extreme-ray criterion); bounded otherwise.
///
/// `atom_bound` caps the grade of the powers examined by the bounded route.
pub fn is_strong_atom(
    spec: &MonoidSpec,
    a: &MonoidElement,
    power_bound: u64,
    atom_bound: u64,
) -> Result<StrongVerdict> {
    let a = spec.canonicalize(a)?;
    if !is_atom(spec, &a)? {
        return Err(KrullError::NotAnAtom(spec.display(&a)));
    }
    match (spec, &a) {
        (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => {
            let strong = match v.entries() {
                [(id, e)] => p.divisor(*id)?.order == *e,
                _ => false,
            };
            Ok(StrongVerdict::Exact(strong))
        }
        (MonoidSpec::Affine(m), MonoidElement::IntVector(v)) => {
            let strong = cone::strong_atoms_affine(m.generators())?;
            Ok(StrongVerdict::Exact(strong.iter().any(|s| s == v)))
        }
        _ => {
            let top = spec.grade(&spec.power(&a, power_bound)?)?;
            if top > atom_bound as u128 {
                return Err(KrullError::AtomBoundInsufficient {
                    bound: atom_bound,
                    grade: top.min(u64::MAX as u128) as u64,
                });
            }
            Ok(StrongVerdict::Bounded(is_strong_atom_bounded(spec, &a, power_bound)?))
        }
    }
}

/// Scans every element of grade ≤ `bound`: UFM is refuted by the first
/// element with two factorizations, HFM by the first with two lengths.
pub fn check_ufm_hfm_bounded(spec: &MonoidSpec, bound: u64) -> Result<UfmHfmReport> {
    let mut ufm = None;
    let mut hfm = None;
    for x in spec.enumerate(bound)? {
        if ufm.is_some() && hfm.is_some() {
            break;
        }
        let z = factorizations(spec, &x, bound)?;
        if ufm.is_none() && z.len() > 1 {
            ufm = Some(z.clone());
        }
        if hfm.is_none() && z.lengths().len() > 1 {
            hfm = Some(z);
        }
    }
    let verdict = |w: Option<FactorizationSet>| match w {
        Some(witness) => BoundedVerdict::Refuted { witness, bound },
        None => BoundedVerdict::UnrefutedUpTo { bound },
    };
    Ok(UfmHfmReport { ufm: verdict(ufm), hfm: verdict(hfm) })
}
