//! Property suite behind `krull-zeta verify`. Each check compares a library
//! result against an independent computation and reports its violations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::primes_up_to;
use crate::cone;
use crate::decay::{decay, lambda_delta, verify_proportionality};
use crate::error::Result;
use crate::factorization::{
    atoms_up_to, factorizations, factorizations_over, is_prime_bounded, is_strong_atom, is_strong_atom_bounded,
    StrongVerdict,
};
use crate::monoid::{ExponentVector, KrullPresentation, MonoidElement, MonoidSpec};
use crate::numberfield::QuadraticField;
use crate::zeta::{euler_product_exact, HeapEnumerator, Scale, ScaleValue};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random member pairs per class group in the decay suite.
    pub pairs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 0x6b_7275_6c6c, pairs: 1000 }
    }
}

type Check = fn(&SuiteConfig) -> Result<std::result::Result<String, String>>;

const CHECKS: &[(&str, Check)] = &[
    ("class map is a homomorphism", class_homomorphism),
    ("hilbert divisor theory", hilbert_divisor_theory),
    ("factorizations recombine", factorizations_recombine),
    ("trivial class group is factorial", trivial_group_ufm),
    ("strong atoms generate a factorial monoid", strong_atom_closure_ufm),
    ("primes are strong atoms", primes_are_strong),
    ("affine strong atoms match bounded powers", affine_exact_vs_bounded),
    ("decay properties", decay_properties),
    ("order-2 splitting atoms", order_two_splitting),
    ("heap enumeration", heap_enumeration),
    ("finite-subset Euler lemma", finite_subset_lemma),
    ("quadratic field ideal counts", field_ideal_counts),
    ("quadratic field strong atoms", field_strong_atoms),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check; errors are reported as failures.
pub fn run_all(cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, f)| match f(cfg) {
            Ok(Ok(detail)) => CheckOutcome { name, passed: true, detail },
            Ok(Err(detail)) => CheckOutcome { name, passed: false, detail },
            Err(e) => CheckOutcome { name, passed: false, detail: format!("error: {e}") },
        })
        .collect()
}

fn verdict(violations: usize, checked: usize, what: &str) -> std::result::Result<String, String> {
    let msg = format!("{checked} {what}, {violations} violations");
    if violations == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn hilbert_spec(b: u64) -> Result<(KrullPresentation, MonoidSpec)> {
    let h = KrullPresentation::hilbert(b)?;
    Ok((h.clone(), MonoidSpec::Krull(h)))
}

/// Random presentation over the given moduli with 1..=8 divisors.
fn random_presentation(rng: &mut ChaCha8Rng, moduli: &[u64]) -> Result<KrullPresentation> {
    let n = rng.gen_range(1..=8u64);
    let classes: Vec<(u64, Vec<i64>)> =
        (1..=n).map(|id| (id, moduli.iter().map(|&m| rng.gen_range(0..m) as i64).collect())).collect();
    KrullPresentation::divisor_theory(moduli.to_vec(), &classes)
}

/// Rejection-samples a member with exponents ≤ 3.
fn random_member(rng: &mut ChaCha8Rng, pres: &KrullPresentation) -> Result<ExponentVector> {
    loop {
        let v = ExponentVector::from_pairs(pres.divisors().iter().map(|d| (d.id, rng.gen_range(0..=3u64))));
        if pres.contains(&v)? {
            return Ok(v);
        }
    }
}

const GROUPS: [&[u64]; 4] = [&[2], &[3], &[2, 2], &[6]];

fn class_homomorphism(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut bad, mut n) = (0, 0);
    for moduli in GROUPS {
        let pres = random_presentation(&mut rng, moduli)?;
        for _ in 0..200 {
            let gen = |rng: &mut ChaCha8Rng| {
                ExponentVector::from_pairs(pres.divisors().iter().map(|d| (d.id, rng.gen_range(0..=4u64))))
            };
            let (x, y) = (gen(&mut rng), gen(&mut rng));
            let lhs = pres.class_of(&x.add(&y))?;
            let rhs = pres.group().add(&pres.class_of(&x)?, &pres.class_of(&y)?);
            n += 1;
            if lhs != rhs {
                bad += 1;
            }
            let (a, b) = (random_member(&mut rng, &pres)?, random_member(&mut rng, &pres)?);
            if !pres.contains(&a.add(&b))? {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, n, "sampled pairs"))
}

fn hilbert_divisor_theory(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let bound = 400u64;
    let (_, spec) = hilbert_spec(bound)?;
    let members: Vec<u64> = (1..=bound).filter(|n| n % 4 == 1).collect();
    let mut bad = 0;
    let mut n = 0;
    for (i, &b) in members.iter().enumerate() {
        for &c in &members[i..] {
            n += 1;
            let in_h = spec.divides(&MonoidElement::Natural(b), &MonoidElement::Natural(c))?;
            if in_h != (c % b == 0) {
                bad += 1;
            }
        }
    }
    // gcd surjectivity: d ≡ 3 (mod 4) is gcd(d·p₁, d·p₂) for primes p₁ ≠ p₂ ≡ 3
    let threes: Vec<u64> = primes_up_to(1000).into_iter().filter(|p| p % 4 == 3).collect();
    for d in (3..=bound).step_by(4) {
        n += 1;
        let pick: Vec<u64> = threes.iter().copied().filter(|&p| d % p != 0).take(2).collect();
        if pick.len() < 2 {
            bad += 1;
            continue;
        }
        let g = num_integer::Integer::gcd(&(d * pick[0]), &(d * pick[1]));
        if g != d || (d * pick[0]) % 4 != 1 {
            bad += 1;
        }
    }
    // divides is reflexive and transitive on members
    for &a in members.iter().take(40) {
        let a_el = MonoidElement::Natural(a);
        if !spec.divides(&a_el, &a_el)? {
            bad += 1;
        }
        for &b in members.iter().filter(|&&b| b % a == 0).take(10) {
            for &c in members.iter().filter(|&&c| c % b == 0).take(10) {
                n += 1;
                let ab = spec.divides(&a_el, &MonoidElement::Natural(b))?;
                let bc = spec.divides(&MonoidElement::Natural(b), &MonoidElement::Natural(c))?;
                if ab && bc && !spec.divides(&a_el, &MonoidElement::Natural(c))? {
                    bad += 1;
                }
            }
        }
    }
    Ok(verdict(bad, n, "divisibility instances"))
}

fn recombine(spec: &MonoidSpec, bound: u64) -> Result<(usize, usize)> {
    let (mut bad, mut n) = (0, 0);
    for x in spec.enumerate(bound)? {
        for f in factorizations(spec, &x, bound)?.factorizations {
            n += 1;
            let mut acc = spec.identity();
            for a in &f {
                acc = spec.combine(&acc, a)?;
            }
            if acc != x {
                bad += 1;
            }
        }
    }
    Ok((bad, n))
}

fn factorizations_recombine(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let (_, h) = hilbert_spec(2000)?;
    let numerical = crate::monoid::build_preset(
        "numerical",
        &crate::monoid::PresetParams { generators: vec![vec![3], vec![5], vec![7]], ..Default::default() },
    )?;
    let affine = crate::monoid::build_preset(
        "affine",
        &crate::monoid::PresetParams { generators: vec![vec![0, 2], vec![1, 1], vec![2, 0]], ..Default::default() },
    )?;
    let mut bad = 0;
    let mut n = 0;
    for (spec, b) in [(&h, 2000), (&numerical, 60), (&affine, 12)] {
        let (x, y) = recombine(spec, b)?;
        bad += x;
        n += y;
    }
    Ok(verdict(bad, n, "factorizations"))
}

fn trivial_group_ufm(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let mut bad = 0;
    let mut n = 0;
    for pres in [KrullPresentation::naturals(2000)?, KrullPresentation::free(3)?] {
        let bound = if pres.has_integer_labels() { 2000 } else { 6 };
        let spec = MonoidSpec::Krull(pres);
        for x in spec.enumerate(bound)? {
            n += 1;
            if factorizations(&spec, &x, bound)?.len() != 1 {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, n, "elements"))
}

fn strong_atom_closure_ufm(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 1);
    let mut bad = 0;
    let mut n = 0;
    for moduli in GROUPS {
        let pres = random_presentation(&mut rng, moduli)?;
        let spec = MonoidSpec::Krull(pres.clone());
        let mut strong: Vec<MonoidElement> =
            pres.strong_atoms().iter().map(|a| MonoidElement::Exponents(a.element())).collect();
        strong.sort_by_cached_key(|e| (spec.grade(e).unwrap_or(u128::MAX), e.clone()));
        for x in pres.enumerate(8) {
            if x.entries().iter().any(|&(id, e)| pres.divisor(id).map(|d| e % d.order != 0).unwrap_or(true)) {
                continue;
            }
            n += 1;
            let el = MonoidElement::Exponents(x);
            if factorizations_over(&spec, &el, &strong)?.len() != 1 {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, n, "elements of the strong-atom submonoid"))
}

fn primes_are_strong(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let (_, spec) = hilbert_spec(600)?;
    let mut bad = 0;
    let mut n = 0;
    for a in atoms_up_to(&spec, 60)? {
        n += 1;
        let prime = !is_prime_bounded(&spec, &a, 600)?.is_refuted();
        let strong = is_strong_atom(&spec, &a, 2, 600)?;
        if prime && strong == StrongVerdict::Exact(false) {
            bad += 1;
        }
    }
    Ok(verdict(bad, n, "atoms"))
}

fn affine_exact_vs_bounded(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let families: [Vec<Vec<i64>>; 3] = [
        vec![vec![0, 2], vec![1, 1], vec![2, 0]],
        vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]],
        vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]],
    ];
    let mut bad = 0;
    let mut n = 0;
    for gens in families {
        let spec = crate::monoid::build_preset(
            "affine",
            &crate::monoid::PresetParams { generators: gens.clone(), ..Default::default() },
        )?;
        let exact = cone::strong_atoms_affine(&gens)?;
        for g in &gens {
            n += 1;
            let el = MonoidElement::IntVector(g.clone());
            let bounded = !is_strong_atom_bounded(&spec, &el, 4)?.is_refuted();
            if bounded != exact.contains(g) {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, n, "generators"))
}

fn decay_properties(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 2);
    let mut bad = 0;
    let mut n = 0;
    for moduli in GROUPS {
        let exponent = moduli.iter().fold(1u64, |a, &m| num_integer::Integer::lcm(&a, &m));
        let presentations: Vec<KrullPresentation> =
            (0..4).map(|_| random_presentation(&mut rng, moduli)).collect::<Result<_>>()?;
        for pres in &presentations {
            for a in pres.strong_atoms() {
                let (lambda, _) = lambda_delta(pres, &a.element())?;
                for (b, l) in lambda {
                    let expected =
                        if a == b { BigRational::from_integer(BigInt::from(1)) } else { BigRational::zero() };
                    if l != expected {
                        bad += 1;
                    }
                }
            }
        }
        for i in 0..cfg.pairs {
            let pres = &presentations[i % presentations.len()];
            let x = random_member(&mut rng, pres)?;
            let y = random_member(&mut rng, pres)?;
            let (lx, dx) = lambda_delta(pres, &x)?;
            let (ly, dy) = lambda_delta(pres, &y)?;
            let (lxy, dxy) = lambda_delta(pres, &x.add(&y))?;
            n += 1;
            let additive = lx.iter().zip(&ly).zip(&lxy).all(|((a, b), c)| &a.1 + &b.1 == c.1);
            let dec = decay(pres, &x)?;
            let k = rng.gen_range(2..=5u64);
            if !additive
                || dx + dy != dxy
                || dec.expand() != x.scale(dec.m)
                || exponent % dec.m != 0
                || !verify_proportionality(pres, &x, dec.m, k * dec.m)?
            {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, n, "member pairs"))
}

fn order_two_splitting(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let (pres, spec) = hilbert_spec(3000)?;
    let mut bad = 0;
    let mut n = 0;
    for x in pres.enumerate(3000) {
        if decay(&pres, &x)?.m != 2 {
            continue;
        }
        n += 1;
        let el = MonoidElement::Exponents(x);
        for f in factorizations(&spec, &el, 3000)?.factorizations {
            let has_split = f.iter().any(|a| matches!(a, MonoidElement::Exponents(v) if v.entries().len() == 2));
            if !has_split {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, n, "elements with m = 2"))
}

fn heap_enumeration(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let pres = KrullPresentation::hilbert(20_000)?;
    let scale = Scale::power(&pres, 2.0)?;
    let mut heap = HeapEnumerator::new(&scale);
    let mut seen = BTreeSet::new();
    let mut last = 0.0f64;
    let mut bad = 0;
    for _ in 0..10_000 {
        let Some(t) = heap.next() else { break };
        if t.value < last || !seen.insert(heap.element(&t)) {
            bad += 1;
        }
        last = t.value;
    }
    Ok(verdict(bad, seen.len(), "terms"))
}

fn finite_subset_lemma(cfg: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 3);
    let pres = KrullPresentation::hilbert(60)?;
    let atoms = pres.strong_atoms();
    let mut bad = 0;
    for _ in 0..20 {
        let scale = Scale::from_fn(&pres, "random", |_, _| {
            let q = rng.gen_range(1..=4i64);
            let p = q + rng.gen_range(1..=6i64);
            Ok(ScaleValue::Rational(BigRational::new(p.into(), q.into())))
        })?;
        let size = rng.gen_range(1..=3);
        let chosen: Vec<_> = atoms.choose_multiple(&mut rng, size).cloned().collect();
        let cap = 6u64;
        // enumerate the box of exponents ≤ cap as monoid elements
        let mut elements = BTreeSet::new();
        let mut idx = vec![0u64; chosen.len()];
        loop {
            let x =
                chosen.iter().zip(&idx).fold(ExponentVector::identity(), |acc, (a, &e)| acc.add(&a.element().scale(e)));
            elements.insert(x);
            let mut i = 0;
            while i < idx.len() && idx[i] == cap {
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
            idx[i] += 1;
        }
        let mut box_sum = BigRational::zero();
        for x in &elements {
            let Some(s) = scale.eval_exact(&pres, x)? else {
                bad += 1;
                continue;
            };
            box_sum += BigRational::from_integer(1.into()) / s;
        }
        let Some(product) = euler_product_exact(&scale, &chosen)? else {
            bad += 1;
            continue;
        };
        let mut correction = BigRational::from_integer(1.into());
        for a in &chosen {
            let r = BigRational::from_integer(1.into()) / scale.value(a)?.as_rational().cloned().unwrap_or_default();
            correction *= BigRational::from_integer(1.into()) - r.pow(cap as i32 + 1);
        }
        if box_sum != product * correction {
            bad += 1;
        }
    }
    Ok(verdict(bad, 20, "random subsets"))
}

fn field_ideal_counts(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let mut bad = 0;
    let bound = 10_000u64;
    for (d, h) in [(-1, 1), (-5, 2)] {
        let k = QuadraticField::new(d, h)?;
        let counts = k.ideal_counts_by_enumeration(bound);
        for n in 1..=bound {
            if counts[n as usize] != k.ideal_count_oracle(n) {
                bad += 1;
            }
        }
        for ideal in k.prime_ideals_up_to_norm(2000) {
            if !ideal.principal && !k.square_is_principal(&ideal) {
                bad += 1;
            }
        }
    }
    Ok(verdict(bad, 2 * bound as usize, "norms"))
}

fn field_strong_atoms(_: &SuiteConfig) -> Result<std::result::Result<String, String>> {
    let k = QuadraticField::new(-5, 2)?;
    let bound = 10_000;
    let mut direct: Vec<(u64, u64)> =
        k.principal_monoid_strong_atoms(bound).iter().map(|a| (a.ideal.id(), a.power as u64)).collect();
    let fp = k.presentation(bound)?;
    let mut via: Vec<(u64, u64)> = fp
        .pres
        .strong_atoms()
        .into_iter()
        .filter(|a| fp.pres.grade(&a.element()) <= bound as u128)
        .map(|a| (a.divisor, a.power))
        .collect();
    direct.sort();
    via.sort();
    if direct == via {
        Ok(Ok(format!("{} strong atoms agree", direct.len())))
    } else {
        Ok(Err(format!("{} vs {} strong atoms", direct.len(), via.len())))
    }
}
