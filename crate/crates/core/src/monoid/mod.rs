//! Monoid families, canonical elements, membership and divisibility.
//!
//! Three families are supported: Krull monoids given by a divisor theory
//! ([`KrullPresentation`], which covers ℕ, the Hilbert monoid, free
//! monoids and arbitrary finite class groups), finitely generated
//! submonoids of ℤ^d ([`AffineMonoidSpec`]) and numerical monoids
//! ([`NumericalMonoidSpec`]). [`MonoidSpec`] dispatches over them.

mod affine;
mod element;
mod group;
mod numerical;
mod presentation;

pub use affine::AffineMonoidSpec;
pub use element::{ExponentVector, MonoidElement};
pub use group::{ClassElement, ClassGroup};
pub use numerical::NumericalMonoidSpec;
pub use presentation::{Grading, KrullPresentation, PrimeDivisor, StrongAtom};

use crate::error::{KrullError, Result};

#[derive(Debug, Clone)]
pub enum MonoidSpec {
    Krull(KrullPresentation),
    Affine(AffineMonoidSpec),
    Numerical(NumericalMonoidSpec),
}

/// Parameters accepted by [`build_preset`]; unused fields are ignored.
#[derive(Debug, Clone, Default)]
pub struct PresetParams {
    pub bound: Option<u64>,
    pub moduli: Vec<u64>,
    pub classes: Vec<(u64, Vec<i64>)>,
    pub generators: Vec<Vec<i64>>,
    pub dim: Option<usize>,
}

/// Builds one of the named monoid presets.
///
/// `free` reads its rank from `bound`.
pub fn build_preset(name: &str, params: &PresetParams) -> Result<MonoidSpec> {
    let need_bound =
        || params.bound.ok_or_else(|| KrullError::InvalidParameter(format!("preset `{name}` needs a bound")));
    Ok(match name {
        "hilbert" => MonoidSpec::Krull(KrullPresentation::hilbert(need_bound()?)?),
        "naturals" => MonoidSpec::Krull(KrullPresentation::naturals(need_bound()?)?),
        "free" => MonoidSpec::Krull(KrullPresentation::free(need_bound()?)?),
        "divisor_theory" => {
            MonoidSpec::Krull(KrullPresentation::divisor_theory(params.moduli.clone(), &params.classes)?)
        }
        "affine" => {
            let dim = params
                .dim
                .or_else(|| params.generators.first().map(|g| g.len()))
                .ok_or_else(|| KrullError::InvalidParameter("affine preset needs d".into()))?;
            MonoidSpec::Affine(AffineMonoidSpec::new(dim, params.generators.clone())?)
        }
        "numerical" => {
            let mut gens = Vec::with_capacity(params.generators.len());
            for g in &params.generators {
                match g.as_slice() {
                    [x] if *x >= 1 => gens.push(*x as u64),
                    _ => {
                        return Err(KrullError::InvalidParameter(
                            "numerical generators must be single positive integers".into(),
                        ))
                    }
                }
            }
            MonoidSpec::Numerical(NumericalMonoidSpec::new(gens)?)
        }
        other => return Err(KrullError::UnknownPreset(other.to_string())),
    })
}

fn mismatch(spec: &MonoidSpec, e: &MonoidElement) -> KrullError {
    KrullError::FamilyMismatch(format!("{} given to a {} monoid", e.family_name(), spec.family_name()))
}

impl MonoidSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            MonoidSpec::Krull(_) => "divisor-theory",
            MonoidSpec::Affine(_) => "affine",
            MonoidSpec::Numerical(_) => "numerical",
        }
    }

    pub fn as_krull(&self) -> Option<&KrullPresentation> {
        match self {
            MonoidSpec::Krull(p) => Some(p),
            _ => None,
        }
    }

    /// Converts an element to the family's canonical representation,
    /// without checking membership.
    pub fn canonicalize(&self, e: &MonoidElement) -> Result<MonoidElement> {
        match (self, e) {
            (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => {
                for &(id, _) in v.entries() {
                    p.divisor(id)?;
                }
                Ok(e.clone())
            }
            (MonoidSpec::Krull(p), MonoidElement::Natural(n)) if p.has_integer_labels() => {
                Ok(MonoidElement::Exponents(p.from_integer(*n)?))
            }
            (MonoidSpec::Affine(a), MonoidElement::IntVector(v)) => {
                if v.len() != a.dim() {
                    return Err(KrullError::DimensionMismatch { expected: a.dim(), got: v.len() });
                }
                Ok(e.clone())
            }
            (MonoidSpec::Numerical(_), MonoidElement::Numerical(_)) => Ok(e.clone()),
            (MonoidSpec::Numerical(_), MonoidElement::Natural(n)) => Ok(MonoidElement::Numerical(*n)),
            _ => Err(mismatch(self, e)),
        }
    }

    pub fn identity(&self) -> MonoidElement {
        match self {
            MonoidSpec::Krull(_) => MonoidElement::Exponents(ExponentVector::identity()),
            MonoidSpec::Affine(a) => MonoidElement::IntVector(vec![0; a.dim()]),
            MonoidSpec::Numerical(_) => MonoidElement::Numerical(0),
        }
    }

    pub fn is_identity(&self, e: &MonoidElement) -> bool {
        match e {
            MonoidElement::Exponents(v) => v.is_identity(),
            MonoidElement::IntVector(v) => v.iter().all(|&x| x == 0),
            MonoidElement::Numerical(n) => *n == 0,
            MonoidElement::Natural(n) => *n == 1,
        }
    }

    pub fn contains(&self, e: &MonoidElement) -> Result<bool> {
        let e = match self.canonicalize(e) {
            Ok(e) => e,
            Err(KrullError::NotMember(_)) => return Ok(false),
            Err(err) => return Err(err),
        };
        match (self, &e) {
            (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => p.contains(v),
            (MonoidSpec::Affine(a), MonoidElement::IntVector(v)) => a.contains(v),
            (MonoidSpec::Numerical(m), MonoidElement::Numerical(n)) => Ok(m.contains(*n)),
            _ => Err(mismatch(self, &e)),
        }
    }

    fn require_member(&self, e: &MonoidElement) -> Result<MonoidElement> {
        let c = self.canonicalize(e)?;
        if !self.contains(&c)? {
            return Err(KrullError::NotMember(self.display(&c)));
        }
        Ok(c)
    }

    /// The monoid operation on canonical forms.
    pub fn combine(&self, a: &MonoidElement, b: &MonoidElement) -> Result<MonoidElement> {
        let (a, b) = (self.canonicalize(a)?, self.canonicalize(b)?);
        match (&a, &b) {
            (MonoidElement::Exponents(x), MonoidElement::Exponents(y)) => Ok(MonoidElement::Exponents(x.add(y))),
            (MonoidElement::IntVector(x), MonoidElement::IntVector(y)) => {
                Ok(MonoidElement::IntVector(x.iter().zip(y).map(|(p, q)| p + q).collect()))
            }
            (MonoidElement::Numerical(x), MonoidElement::Numerical(y)) => Ok(MonoidElement::Numerical(x + y)),
            _ => Err(mismatch(self, &b)),
        }
    }

    pub fn power(&self, a: &MonoidElement, n: u64) -> Result<MonoidElement> {
        let a = self.canonicalize(a)?;
        Ok(match a {
            MonoidElement::Exponents(x) => MonoidElement::Exponents(x.scale(n)),
            MonoidElement::IntVector(x) => MonoidElement::IntVector(x.iter().map(|c| c * n as i64).collect()),
            MonoidElement::Numerical(x) => MonoidElement::Numerical(x * n),
            MonoidElement::Natural(_) => unreachable!("canonical forms are never Natural"),
        })
    }

    /// The element z of the monoid with y = x·z, if it exists.
    pub fn quotient(&self, y: &MonoidElement, x: &MonoidElement) -> Result<Option<MonoidElement>> {
        let (y, x) = (self.canonicalize(y)?, self.canonicalize(x)?);
        let z = match (&y, &x) {
            (MonoidElement::Exponents(b), MonoidElement::Exponents(a)) => match a.complement_in(b) {
                Some(z) => MonoidElement::Exponents(z),
                None => return Ok(None),
            },
            (MonoidElement::IntVector(b), MonoidElement::IntVector(a)) => {
                MonoidElement::IntVector(b.iter().zip(a).map(|(p, q)| p - q).collect())
            }
            (MonoidElement::Numerical(b), MonoidElement::Numerical(a)) => {
                if a > b {
                    return Ok(None);
                }
                MonoidElement::Numerical(b - a)
            }
            _ => return Err(mismatch(self, &x)),
        };
        Ok(if self.contains(&z)? { Some(z) } else { None })
    }

    /// x | y in the monoid. Both arguments must be members.
    pub fn divides(&self, x: &MonoidElement, y: &MonoidElement) -> Result<bool> {
        let x = self.require_member(x)?;
        let y = self.require_member(y)?;
        Ok(self.quotient(&y, &x)?.is_some())
    }

    /// Grade used by bounded enumeration: the integer value for
    /// integer-labelled presentations, the degree for other presentations,
    /// λ·v for affine monoids and the value itself for numerical monoids.
    pub fn grade(&self, e: &MonoidElement) -> Result<u128> {
        let e = self.canonicalize(e)?;
        Ok(match (self, &e) {
            (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => p.grade(v),
            (MonoidSpec::Affine(a), MonoidElement::IntVector(v)) => a.grade(v)?.max(0) as u128,
            (MonoidSpec::Numerical(_), MonoidElement::Numerical(n)) => *n as u128,
            _ => return Err(mismatch(self, &e)),
        })
    }

    /// Members of grade ≤ `bound` in canonical order.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<MonoidElement>> {
        Ok(match self {
            MonoidSpec::Krull(p) => p.enumerate(bound).into_iter().map(MonoidElement::Exponents).collect(),
            MonoidSpec::Affine(a) => a.enumerate(bound)?.into_iter().map(MonoidElement::IntVector).collect(),
            MonoidSpec::Numerical(m) => m.enumerate(bound).into_iter().map(MonoidElement::Numerical).collect(),
        })
    }

    pub fn display(&self, e: &MonoidElement) -> String {
        match (self, e) {
            (MonoidSpec::Krull(p), MonoidElement::Exponents(v)) => p.display(v),
            (_, MonoidElement::IntVector(v)) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            (_, MonoidElement::Natural(n)) | (_, MonoidElement::Numerical(n)) => n.to_string(),
            (_, MonoidElement::Exponents(v)) => v.to_string(),
        }
    }

    /// Parses an element: an integer (naturals, Hilbert, numerical), a
    /// vector `a,b,c` (affine) or an exponent map `id:e,id:e` (any
    /// presentation; `0` is the identity).
    pub fn parse_element(&self, text: &str) -> Result<MonoidElement> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = |what: &str| KrullError::InvalidParameter(format!("cannot parse element `{text}`: {what}"));
        let raw = match self {
            MonoidSpec::Krull(p) => {
                if text.contains(':') {
                    let mut pairs = Vec::new();
                    for part in text.split(',') {
                        let (id, e) = part.split_once(':').ok_or_else(|| bad("expected id:exponent"))?;
                        let id = id.trim().parse::<u64>().map_err(|_| bad("bad divisor id"))?;
                        let e = e.trim().parse::<u64>().map_err(|_| bad("bad exponent"))?;
                        pairs.push((id, e));
                    }
                    MonoidElement::Exponents(ExponentVector::from_pairs(pairs))
                } else if p.has_integer_labels() {
                    MonoidElement::Natural(text.parse::<u64>().map_err(|_| bad("expected an integer"))?)
                } else if text == "0" || text.is_empty() {
                    MonoidElement::Exponents(ExponentVector::identity())
                } else {
                    return Err(bad("expected an exponent map id:e,..."));
                }
            }
            MonoidSpec::Affine(_) => {
                let v: std::result::Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse::<i64>()).collect();
                MonoidElement::IntVector(v.map_err(|_| bad("expected a vector a,b,c"))?)
            }
            MonoidSpec::Numerical(_) => {
                MonoidElement::Numerical(text.parse::<u64>().map_err(|_| bad("expected an integer"))?)
            }
        };
        self.canonicalize(&raw)
    }

    /// Default number of powers checked by the generic strong-atom test:
    /// the class-group exponent when known, else 6.
    pub fn default_power_bound(&self) -> u64 {
        match self {
            MonoidSpec::Krull(p) => p.group().exponent().max(2),
            _ => 6,
        }
    }
}

/// True iff `candidate` lies in the monoid.
pub fn membership(spec: &MonoidSpec, candidate: &MonoidElement) -> Result<bool> {
    spec.contains(candidate)
}

/// Σ v(p)·[p] in the class group.
pub fn class_of(pres: &KrullPresentation, v: &ExponentVector) -> Result<ClassElement> {
    pres.class_of(v)
}

/// All members of grade ≤ `bound`, in canonical order.
pub fn enumerate_elements(spec: &MonoidSpec, bound: u64) -> Result<Vec<MonoidElement>> {
    spec.enumerate(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hilbert(b: u64) -> MonoidSpec {
        build_preset("hilbert", &PresetParams { bound: Some(b), ..Default::default() }).unwrap()
    }

    fn nat(n: u64) -> MonoidElement {
        MonoidElement::Natural(n)
    }

    #[test]
    fn hilbert_membership_and_combine() {
        let h = hilbert(1000);
        assert!(membership(&h, &nat(9)).unwrap());
        assert!(!membership(&h, &nat(7)).unwrap());
        assert!(!membership(&h, &nat(2)).unwrap());
        let p = h.combine(&nat(21), &nat(5)).unwrap();
        assert_eq!(h.display(&p), "105");
        let id = h.identity();
        assert_eq!(h.combine(&nat(21), &id).unwrap(), h.canonicalize(&nat(21)).unwrap());
    }

    #[test]
    fn hilbert_divisibility() {
        let h = hilbert(1000);
        assert!(h.divides(&nat(9), &nat(441)).unwrap());
        assert!(!h.divides(&nat(9), &nat(21)).unwrap());
        assert!(matches!(h.divides(&nat(3), &nat(21)), Err(KrullError::NotMember(_))));
    }

    #[test]
    fn affine_examples() {
        let a = build_preset(
            "affine",
            &PresetParams { generators: vec![vec![0, 2], vec![1, 1], vec![2, 0]], ..Default::default() },
        )
        .unwrap();
        assert!(!membership(&a, &MonoidElement::IntVector(vec![1, 0])).unwrap());
        let s = a.combine(&MonoidElement::IntVector(vec![0, 2]), &MonoidElement::IntVector(vec![2, 0])).unwrap();
        assert_eq!(s, MonoidElement::IntVector(vec![2, 2]));
        assert!(matches!(a.combine(&s, &nat(3)), Err(KrullError::FamilyMismatch(_))));
    }

    #[test]
    fn enumeration_examples() {
        let h = hilbert(25);
        let shown: Vec<String> = enumerate_elements(&h, 25).unwrap().iter().map(|e| h.display(e)).collect();
        assert_eq!(shown, ["1", "5", "9", "13", "17", "21", "25"]);
        let n = build_preset("numerical", &PresetParams { generators: vec![vec![2], vec![3]], ..Default::default() })
            .unwrap();
        let shown: Vec<String> = enumerate_elements(&n, 5).unwrap().iter().map(|e| n.display(e)).collect();
        assert_eq!(shown, ["0", "2", "3", "4", "5"]);
    }

    #[test]
    fn preset_errors() {
        assert!(matches!(build_preset("lattice", &PresetParams::default()), Err(KrullError::UnknownPreset(_))));
        assert!(build_preset("hilbert", &PresetParams::default()).is_err());
    }

    #[test]
    fn parse_elements() {
        let h = hilbert(100);
        assert_eq!(h.parse_element("21").unwrap(), h.parse_element("3:1,7:1").unwrap());
        let f = build_preset("free", &PresetParams { bound: Some(2), ..Default::default() }).unwrap();
        assert_eq!(f.parse_element("0").unwrap(), f.identity());
        assert!(f.parse_element("3:1").is_err());
    }
}
