use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::decay::decay;
use crate::monoid::ExponentVector;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn atom(p: u64, k: u64) -> StrongAtom {
    StrongAtom { divisor: p, power: k }
}

#[test]
fn partial_sum_examples() {
    let n = KrullPresentation::naturals(100).unwrap();
    let s2 = Scale::power(&n, 2.0).unwrap();
    let est = zeta_partial_sum(&n, &s2, 5).unwrap();
    let direct = 1.0 + 1.0 / 4.0 + 1.0 / 9.0 + 1.0 / 16.0 + 1.0 / 25.0;
    assert!((est.partial_sum - direct).abs() < 1e-15);
    assert!(est.lower <= est.partial_sum && est.upper.is_none());
    assert_eq!(est.terms, 5);

    let f = KrullPresentation::free(1).unwrap();
    let two = Scale::from_fn(&f, "two", |_, _| Ok(ScaleValue::integer(2))).unwrap();
    let est = zeta_partial_sum(&f, &two, 60).unwrap();
    assert!((est.partial_sum - 2.0).abs() < 1e-15);
    assert!(zeta_partial_sum(&f, &two, 0).is_err());
}

#[test]
fn finite_closure_of_5_and_13() {
    let h = KrullPresentation::hilbert(20).unwrap();
    let id = Scale::identity(&h).unwrap();
    let p = euler_product_exact(&id, &[atom(5, 1), atom(13, 1)]).unwrap().unwrap();
    assert_eq!(p, rat(65, 48));
}

#[test]
fn euler_product_examples() {
    let n = KrullPresentation::naturals(100).unwrap();
    let w = Scale::wallis(&n).unwrap();
    let first3 = [atom(2, 1), atom(3, 1), atom(5, 1)];
    let direct = (4.0 / 3.0) * (16.0 / 15.0) * (36.0 / 35.0);
    assert!((euler_product_truncated(&w, &first3).unwrap() - direct).abs() < 1e-14);
    let s2 = Scale::power(&n, 2.0).unwrap();
    assert!((euler_product_truncated(&s2, &[atom(2, 1), atom(3, 1)]).unwrap() - 1.5).abs() < 1e-14);
    assert_eq!(euler_product_truncated(&s2, &[]).unwrap(), 1.0);
    assert_eq!(euler_product_exact(&s2, &[atom(2, 1), atom(3, 1)]).unwrap(), Some(rat(3, 2)));
}

#[test]
fn upper_bound_examples() {
    let f = KrullPresentation::free(9).unwrap();
    let sq = Scale::from_fn(&f, "squares", |_, i| Ok(ScaleValue::integer(((i + 2) * (i + 2)) as u128))).unwrap();
    let atoms: Vec<StrongAtom> = f.strong_atoms();
    let product = euler_product_truncated(&sq, &atoms).unwrap();
    let b = zeta_upper_bound(&sq, &atoms, 0.1).unwrap();
    assert!(!b.conditional);
    assert!(b.value >= product * 0.2f64.exp());
    assert!((b.value / (product * 0.2f64.exp()) - 1.0).abs() < 1e-12);
    let b0 = zeta_upper_bound(&sq, &atoms, 0.0).unwrap();
    assert!((b0.value / product - 1.0).abs() < 1e-12 && b0.value >= product);
    assert!(zeta_upper_bound(&sq, &atoms, 0.7).unwrap().conditional);
    // omitting a presented atom with 1/4 while claiming tail 0.1 is false
    assert!(zeta_upper_bound(&sq, &atoms[1..], 0.1).is_err());
    assert!(zeta_upper_bound(&sq, &atoms, f64::NAN).is_err());
}

#[test]
fn basel_bracket_small() {
    let n = KrullPresentation::naturals(100).unwrap();
    let s2 = Scale::power(&n, 2.0).unwrap();
    let est = zeta_estimate(&n, &s2, 5000, None, Some(0.01)).unwrap();
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    assert!(est.contains(basel), "{est:?}");
    assert!(est.partial_sum <= est.product);
}

#[test]
fn heap_on_naturals_is_counting() {
    // with all primes ≤ N presented, the N σ_id-smallest elements are 1..N
    let n = KrullPresentation::naturals(3000).unwrap();
    let id = Scale::identity(&n).unwrap();
    let mut heap = HeapEnumerator::new(&id);
    let mut got = Vec::new();
    while got.len() < 3000 {
        let t = heap.next().unwrap();
        got.push(n.to_integer(&heap.element(&t)).unwrap() as u64);
    }
    assert_eq!(got, (1..=3000).collect::<Vec<_>>());
}

#[test]
fn heap_order_and_uniqueness() {
    let h = KrullPresentation::hilbert(5000).unwrap();
    let s2 = Scale::power(&h, 2.0).unwrap();
    let mut heap = HeapEnumerator::new(&s2);
    let mut seen = BTreeSet::new();
    let mut last = 0.0;
    for _ in 0..10_000 {
        let t = heap.next().unwrap();
        assert!(t.value >= last);
        last = t.value;
        assert!(seen.insert(heap.element(&t)));
    }
}

#[test]
fn sum_over_decay_free_elements_equals_heap_sum() {
    // members with m(x) = 1 are exactly the elements of ⟨S(H)⟩
    let bound = 10_000u64;
    let h = KrullPresentation::hilbert(bound).unwrap();
    let id = Scale::identity(&h).unwrap();
    let direct: BTreeSet<u128> = h
        .enumerate(bound)
        .into_iter()
        .filter(|x| decay(&h, x).unwrap().m == 1)
        .map(|x| h.to_integer(&x).unwrap())
        .collect();
    let mut heap = HeapEnumerator::new(&id);
    let mut via_heap = BTreeSet::new();
    loop {
        let t = heap.next().unwrap();
        if t.value > bound as f64 + 0.5 {
            break;
        }
        via_heap.insert(h.to_integer(&heap.element(&t)).unwrap());
    }
    assert_eq!(direct, via_heap);
    let sum = |s: &BTreeSet<u128>| s.iter().map(|&n| 1.0 / n as f64).sum::<f64>();
    assert_eq!(sum(&direct), sum(&via_heap));
}

#[test]
fn scale_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = KrullPresentation::naturals(50).unwrap();
    let s2 = Scale::power(&n, 2.0).unwrap();
    let h = KrullPresentation::hilbert(50).unwrap();
    let id = Scale::identity(&h).unwrap();
    let members = h.enumerate(3000);
    for _ in 0..200 {
        let x = n.from_integer(rng.gen_range(1..2000)).unwrap_or_else(|_| ExponentVector::identity());
        let y = n.from_integer(rng.gen_range(1..2000)).unwrap_or_else(|_| ExponentVector::identity());
        let xy = x.add(&y);
        let (a, b, c) = (
            s2.eval_exact(&n, &x).unwrap().unwrap(),
            s2.eval_exact(&n, &y).unwrap().unwrap(),
            s2.eval_exact(&n, &xy).unwrap().unwrap(),
        );
        assert_eq!(a * b, c);
        let x = &members[rng.gen_range(0..members.len())];
        let y = &members[rng.gen_range(0..members.len())];
        let lhs = id.eval(&h, &x.add(y)).unwrap();
        let rhs = id.eval(&h, x).unwrap() * id.eval(&h, y).unwrap();
        assert!((lhs / rhs - 1.0).abs() < 1e-12);
        // the identity scale returns the integer itself
        assert!((id.eval(&h, x).unwrap() - h.to_integer(x).unwrap() as f64).abs() < 1e-9 * lhs);
    }
}

#[test]
fn euler_identity_reports() {
    let bound = 10_000;
    let n = KrullPresentation::naturals(bound).unwrap();
    let s2 = Scale::power(&n, 2.0).unwrap();
    let tail = power_tail_bound(bound, 2.0);
    let r = check_euler_identity(&n, &s2, bound, 1e-3, Some(tail), Some(bound)).unwrap();
    assert_eq!(r.agreement, Agreement::Agree);
    assert!(r.brackets_consistent);
    let u = r.ufm.unwrap();
    assert!(!u.refutes_ufm && u.excess.unwrap() < 0.0);

    let h = KrullPresentation::hilbert(bound).unwrap();
    let s2 = Scale::power(&h, 2.0).unwrap();
    let u = ufm_criterion(&h, &s2, bound, Some(tail)).unwrap();
    assert!(u.refutes_ufm);
    assert!(u.excess.unwrap() > 1.0 / 81.0, "{u:?}");

    let f = KrullPresentation::free(2).unwrap();
    let sc = Scale::from_fn(&f, "r", |_, i| Ok(ScaleValue::integer(2 + i as u128))).unwrap();
    // 1/(1−1/2) · 1/(1−1/3) = 3, and the sum over ℕ₀² of 2^-a 3^-b is 3
    assert_eq!(euler_product_exact(&sc, &f.strong_atoms()).unwrap(), Some(rat(3, 1)));
    let r = check_euler_identity(&f, &sc, 4000, 1e-9, None, None).unwrap();
    assert_eq!(r.agreement, Agreement::Agree);
    let r = check_euler_identity(&f, &sc, 3, 1e-9, None, None).unwrap();
    assert_eq!(r.agreement, Agreement::Inconclusive);
}

#[test]
fn infinitude_on_naturals_and_hilbert() {
    let n = KrullPresentation::naturals(100_000).unwrap();
    let s1 = Scale::identity(&n).unwrap();
    let r = infinitude_report(&n, &s1, InfinitudeParams { c: 1.9, n_max: 100_000 }).unwrap();
    let lb = r.length_bound.unwrap();
    assert_eq!((lb.checked, lb.violations), (100_000, 0));
    let ag = r.anti_geometric.unwrap();
    assert!(ag.dominates && (ag.harmonic - 11.0901).abs() < 1e-3, "{ag:?}");
    // δ from decay agrees with the sieve on a sample
    let omega = crate::arith::big_omega_table(5000);
    for k in (1..5000u64).step_by(37) {
        let d = decay(&n, &n.from_integer(k).unwrap()).unwrap();
        assert_eq!(d.delta, rat(omega[k as usize] as i64, 1));
    }

    let h = KrullPresentation::hilbert(1_000_000).unwrap();
    let id = Scale::identity(&h).unwrap();
    let r = infinitude_report(&h, &id, InfinitudeParams { c: 1.9, n_max: 1000 }).unwrap();
    assert!(r.atom_sums.prime_sum > 1.0 && r.atom_sums.power_sum < 0.2, "{:?}", r.atom_sums);
    assert_eq!(r.length_bound.unwrap().violations, 0);
}

#[test]
fn estimate_serialization() {
    let n = KrullPresentation::naturals(50).unwrap();
    let s2 = Scale::power(&n, 2.0).unwrap();
    let est = zeta_estimate(&n, &s2, 10, Some(3), Some(0.5)).unwrap();
    let json = serde_json::to_value(&est).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys.len(), 7);
    for k in ["partial_sum", "product", "lower", "upper", "terms", "atoms", "assumed_tail"] {
        assert!(keys.contains(&k));
    }
    let back: ZetaEstimate = serde_json::from_value(json).unwrap();
    assert_eq!(back.partial_sum, est.partial_sum);
    assert_eq!(ZetaEstimate::CSV_HEADER.split(',').count(), est.csv_row().split(',').count());
    let none = zeta_partial_sum(&n, &s2, 2).unwrap();
    assert!(none.csv_row().contains(",,"));
}
