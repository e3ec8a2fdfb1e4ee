//! Decay decompositions x^m(x) = ∏ a^x(a) over strong atoms, and the
//! λ/δ homomorphisms into ℚ≥0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{KrullError, Result};
use crate::monoid::{ExponentVector, KrullPresentation, StrongAtom};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayDecomposition {
    pub element: ExponentVector,
    /// Minimal exponent m(x).
    pub m: u64,
    /// x(a) > 0 for each strong atom in the support, in divisor order.
    pub exponents: Vec<(StrongAtom, u64)>,
    /// λ_a(x) = x(a)/m, parallel to `exponents`.
    pub lambda: Vec<(StrongAtom, BigRational)>,
    pub delta: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomExponent {
    pub atom: String,
    pub e: u64,
}

/// Wire form of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayJson {
    pub m: u64,
    pub exponents: Vec<AtomExponent>,
    pub delta: String,
}

/// Always "p/q", including integers.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let (p, q) = s.split_once('/')?;
    let q: BigInt = q.trim().parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p.trim().parse().ok()?, q))
}

impl DecayDecomposition {
    pub fn to_json(&self, pres: &KrullPresentation) -> DecayJson {
        DecayJson {
            m: self.m,
            exponents: self
                .exponents
                .iter()
                .map(|(a, e)| AtomExponent { atom: pres.strong_atom_label(a), e: *e })
                .collect(),
            delta: format_ratio(&self.delta),
        }
    }

    pub fn lambda_of(&self, a: &StrongAtom) -> BigRational {
        self.lambda.iter().find(|(b, _)| b == a).map(|(_, l)| l.clone()).unwrap_or_else(BigRational::zero)
    }

    /// ∏ a^x(a) as an exponent vector.
    pub fn expand(&self) -> ExponentVector {
        self.exponents.iter().fold(ExponentVector::identity(), |acc, (a, e)| acc.add(&a.element().scale(*e)))
    }
}

fn require_member(pres: &KrullPresentation, x: &ExponentVector) -> Result<()> {
    if !pres.contains(x)? {
        return Err(KrullError::NotMember(pres.display(x)));
    }
    Ok(())
}

/// Strong-atom exponents of x^m, assuming k(p) | m·e_p for every p.
fn exponents_at(pres: &KrullPresentation, x: &ExponentVector, m: u64) -> Result<Vec<(StrongAtom, u64)>> {
    let mut out = Vec::with_capacity(x.entries().len());
    for &(id, e) in x.entries() {
        let k = pres.divisor(id)?.order;
        let me = m.checked_mul(e).ok_or(KrullError::Overflow("decay exponent"))?;
        if me % k != 0 {
            return Err(KrullError::InvalidDecayExponent { m });
        }
        out.push((StrongAtom { divisor: id, power: k }, me / k));
    }
    out.sort_by_key(|(a, _)| pres.position(a.divisor).unwrap_or(usize::MAX));
    Ok(out)
}

pub fn decay(pres: &KrullPresentation, x: &ExponentVector) -> Result<DecayDecomposition> {
    require_member(pres, x)?;
    let mut m = 1u64;
    for &(id, e) in x.entries() {
        let k = pres.divisor(id)?.order;
        m = m.lcm(&(k / k.gcd(&e)));
    }
    let exponents = exponents_at(pres, x, m)?;
    let denom = BigInt::from(m);
    let lambda: Vec<(StrongAtom, BigRational)> =
        exponents.iter().map(|(a, e)| (a.clone(), BigRational::new(BigInt::from(*e), denom.clone()))).collect();
    let delta = lambda.iter().fold(BigRational::zero(), |acc, (_, l)| acc + l);
    Ok(DecayDecomposition { element: x.clone(), m, exponents, lambda, delta })
}

/// λ_a(x) for every presented strong atom (zeros included) and δ(x).
pub fn lambda_delta(
    pres: &KrullPresentation,
    x: &ExponentVector,
) -> Result<(Vec<(StrongAtom, BigRational)>, BigRational)> {
    let d = decay(pres, x)?;
    let all = pres.strong_atoms().into_iter().map(|a| {
        let l = d.lambda_of(&a);
        (a, l)
    });
    Ok((all.collect(), d.delta))
}

/// Checks x_{m1}(a)/m1 = x_{m2}(a)/m2 for every strong atom, where both
/// representations are also re-expanded against x^{m_i}.
pub fn verify_proportionality(pres: &KrullPresentation, x: &ExponentVector, m1: u64, m2: u64) -> Result<bool> {
    require_member(pres, x)?;
    for m in [m1, m2] {
        if m == 0 {
            return Err(KrullError::InvalidDecayExponent { m });
        }
    }
    let e1 = exponents_at(pres, x, m1)?;
    let e2 = exponents_at(pres, x, m2)?;
    let expand = |ex: &[(StrongAtom, u64)]| {
        ex.iter().fold(ExponentVector::identity(), |acc, (a, e)| acc.add(&a.element().scale(*e)))
    };
    if expand(&e1) != x.scale(m1) || expand(&e2) != x.scale(m2) {
        return Ok(false);
    }
    let ratio = |ex: &[(StrongAtom, u64)], a: &StrongAtom, m: u64| {
        let e = ex.iter().find(|(b, _)| b == a).map_or(0, |p| p.1);
        BigRational::new(BigInt::from(e), BigInt::from(m))
    };
    Ok(pres.strong_atoms().iter().all(|a| ratio(&e1, a, m1) == ratio(&e2, a, m2)))
}

/// An atom a with m(a) = 2 and the distinct strong atoms with a² = a₁a₂.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub atom: ExponentVector,
    pub pair: (StrongAtom, StrongAtom),
}

/// For class group ℤ/2 the atoms with m(a) = 2 are exactly pq with p ≠ q
/// both of class 1, and a² = p²·q². Integer-labelled presentations are cut
/// at their truncation bound.
pub fn split_report(pres: &KrullPresentation) -> Result<Vec<Split>> {
    if pres.group().order() != 2 {
        return Err(KrullError::Unsupported("split report needs class group of order 2".into()));
    }
    let odd: Vec<_> = pres.divisors().iter().filter(|d| !d.class.is_zero()).collect();
    let cap = if pres.has_integer_labels() { pres.truncation() } else { None };
    let mut out = Vec::new();
    for (i, p) in odd.iter().enumerate() {
        for q in &odd[i + 1..] {
            let atom = ExponentVector::from_pairs([(p.id, 1), (q.id, 1)]);
            if cap.is_some_and(|c| pres.grade(&atom) > c as u128) {
                continue;
            }
            let pair = (StrongAtom { divisor: p.id, power: 2 }, StrongAtom { divisor: q.id, power: 2 });
            out.push(Split { atom, pair });
        }
    }
    out.sort_by(|a, b| pres.grade(&a.atom).cmp(&pres.grade(&b.atom)).then_with(|| a.atom.cmp(&b.atom)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::factorizations;
    use crate::monoid::{MonoidElement, MonoidSpec};

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(p.into(), r.into())
    }

    #[test]
    fn hilbert_examples() {
        let h = KrullPresentation::hilbert(100).unwrap();
        let d = decay(&h, &h.from_integer(21).unwrap()).unwrap();
        assert_eq!(d.m, 2);
        let json = serde_json::to_string(&d.to_json(&h)).unwrap();
        assert_eq!(json, r#"{"m":2,"exponents":[{"atom":"9","e":1},{"atom":"49","e":1}],"delta":"1/1"}"#);
        assert_eq!(d.lambda_of(&StrongAtom { divisor: 3, power: 2 }), q(1, 2));
        assert_eq!(d.expand(), h.from_integer(441).unwrap());

        let d = decay(&h, &h.from_integer(25).unwrap()).unwrap();
        assert_eq!((d.m, d.delta.clone()), (1, q(2, 1)));
        assert_eq!(d.exponents, vec![(StrongAtom { divisor: 5, power: 1 }, 2)]);

        let d = decay(&h, &ExponentVector::identity()).unwrap();
        assert_eq!((d.m, d.exponents.len(), d.delta), (1, 0, q(0, 1)));
        assert!(matches!(decay(&h, &h.from_integer(3).unwrap()), Err(KrullError::NotMember(_))));
    }

    #[test]
    fn cyclic_three_example() {
        let pres = KrullPresentation::divisor_theory(vec![3], &[(1, vec![1]), (2, vec![2])]).unwrap();
        let x = ExponentVector::from_pairs([(1, 1), (2, 1)]);
        let d = decay(&pres, &x).unwrap();
        assert_eq!(d.m, 3);
        assert_eq!(d.delta, q(2, 3));
        // oracle: p³·q³ must be one of the factorizations of (pq)³
        let spec = MonoidSpec::Krull(pres.clone());
        let z = factorizations(&spec, &MonoidElement::Exponents(x.scale(3)), 6).unwrap();
        let mut target: Vec<MonoidElement> =
            d.exponents.iter().map(|(a, _)| MonoidElement::Exponents(a.element())).collect();
        target.sort();
        assert!(z.factorizations.iter().any(|f| {
            let mut f = f.clone();
            f.sort();
            f == target
        }));
        assert!(verify_proportionality(&pres, &x, 3, 6).unwrap());
        assert!(matches!(verify_proportionality(&pres, &x, 2, 3), Err(KrullError::InvalidDecayExponent { m: 2 })));
    }

    #[test]
    fn naturals_delta_is_big_omega() {
        let n = KrullPresentation::naturals(100).unwrap();
        let (_, delta) = lambda_delta(&n, &n.from_integer(12).unwrap()).unwrap();
        assert_eq!(delta, q(3, 1));
    }

    #[test]
    fn proportionality_and_kronecker() {
        let h = KrullPresentation::hilbert(100).unwrap();
        let x = h.from_integer(21).unwrap();
        assert!(verify_proportionality(&h, &x, 2, 4).unwrap());
        assert!(verify_proportionality(&h, &x, 2, 2).unwrap());
        for a in h.strong_atoms() {
            let (lambda, _) = lambda_delta(&h, &a.element()).unwrap();
            for (b, l) in lambda {
                assert_eq!(l, q((a == b) as i64, 1));
            }
        }
    }

    #[test]
    fn split_report_matches_factorizations() {
        let h = KrullPresentation::hilbert(200).unwrap();
        let splits = split_report(&h).unwrap();
        let shown: Vec<(String, String, String)> = splits
            .iter()
            .map(|s| (h.display(&s.atom), h.strong_atom_label(&s.pair.0), h.strong_atom_label(&s.pair.1)))
            .collect();
        assert_eq!(shown[0], ("21".into(), "9".into(), "49".into()));
        assert_eq!(shown[1], ("33".into(), "9".into(), "121".into()));
        assert!(!shown.iter().any(|s| s.0 == "5"));
        let spec = MonoidSpec::Krull(h.clone());
        for s in &splits {
            let square = MonoidElement::Exponents(s.atom.scale(2));
            let z = factorizations(&spec, &square, u64::MAX).unwrap();
            let mut pair =
                vec![MonoidElement::Exponents(s.pair.0.element()), MonoidElement::Exponents(s.pair.1.element())];
            pair.sort();
            assert!(
                z.factorizations.iter().any(|f| {
                    let mut f = f.clone();
                    f.sort();
                    f == pair
                }),
                "{}",
                h.display(&s.atom)
            );
        }
        let n = KrullPresentation::naturals(10).unwrap();
        assert!(split_report(&n).is_err());
    }

    #[test]
    fn ratio_format_round_trips() {
        assert_eq!(format_ratio(&q(3, 1)), "3/1");
        assert_eq!(parse_ratio("2/3"), Some(q(2, 3)));
        assert_eq!(parse_ratio("1/0"), None);
    }
}
