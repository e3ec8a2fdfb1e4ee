use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::decay::decay;
use crate::error::{KrullError, Result};
use crate::monoid::{ExponentVector, KrullPresentation, StrongAtom};

/// Base value f(a) of a scale, kept exact when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleValue {
    Rational(BigRational),
    Real(f64),
}

impl ScaleValue {
    pub fn integer(n: u128) -> Self {
        ScaleValue::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ScaleValue::Rational(r) => r.to_f64().unwrap_or(f64::INFINITY),
            ScaleValue::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ScaleValue::Rational(r) => Some(r),
            ScaleValue::Real(_) => None,
        }
    }

    fn exceeds_one(&self) -> bool {
        match self {
            ScaleValue::Rational(r) => r > &BigRational::one(),
            ScaleValue::Real(x) => *x > 1.0 && x.is_finite(),
        }
    }
}

impl fmt::Display for ScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleValue::Rational(r) => write!(f, "{r}"),
            ScaleValue::Real(x) => write!(f, "{x}"),
        }
    }
}

/// A scale on a Krull monoid, fixed by its values on the presented strong
/// atoms and extended by σ(x) = ∏ f(a)^λ_a(x).
#[derive(Debug, Clone)]
pub struct Scale {
    name: String,
    values: Vec<(StrongAtom, ScaleValue)>,
    index: HashMap<StrongAtom, usize>,
}

impl Scale {
    /// Builds a scale from `f(atom, position)`, where position is the
    /// atom's index in divisor order. Every value must exceed 1.
    pub fn from_fn<F>(pres: &KrullPresentation, name: impl Into<String>, mut f: F) -> Result<Self>
    where
        F: FnMut(&StrongAtom, usize) -> Result<ScaleValue>,
    {
        let mut values = Vec::new();
        let mut index = HashMap::new();
        for (i, a) in pres.strong_atoms().into_iter().enumerate() {
            let v = f(&a, i)?;
            if !v.exceeds_one() {
                return Err(KrullError::ScaleBelowOne { atom: pres.strong_atom_label(&a), value: v.to_string() });
            }
            index.insert(a.clone(), values.len());
            values.push((a, v));
        }
        Ok(Self { name: name.into(), values, index })
    }

    /// σ_s: f(a) = grade(a)^s, where the grade is the integer value for the
    /// naturals and Hilbert presets.
    pub fn power(pres: &KrullPresentation, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(KrullError::InvalidParameter(format!("power scale exponent must be > 0, got {s}")));
        }
        let integral = s.fract() == 0.0 && s <= 64.0;
        Self::from_fn(pres, format!("power:{s}"), |a, _| {
            let g = pres.grade(&a.element());
            if integral {
                Ok(ScaleValue::Rational(BigRational::from_integer(BigInt::from(g).pow(s as u32))))
            } else {
                Ok(ScaleValue::Real((g as f64).powf(s)))
            }
        })
    }

    /// Constant f ≡ c, so σ(x) = c^δ(x).
    pub fn decay(pres: &KrullPresentation, c: ScaleValue) -> Result<Self> {
        Self::from_fn(pres, format!("decay:{c}"), |_, _| Ok(c.clone()))
    }

    /// f(a_k) = 4k² for the k-th strong atom in divisor order.
    pub fn wallis(pres: &KrullPresentation) -> Result<Self> {
        Self::from_fn(pres, "wallis", |_, i| {
            let k = (i + 1) as u128;
            Ok(ScaleValue::integer(4 * k * k))
        })
    }

    /// f(a) = grade(a), the identity scale on integer-labelled presentations.
    pub fn identity(pres: &KrullPresentation) -> Result<Self> {
        Self::from_fn(pres, "identity", |a, _| Ok(ScaleValue::integer(pres.grade(&a.element()))))
    }

    /// σ_f(n) = ∏ p^{f(p)·n(p)}: f(p^k) = grade(p^k)^{w(p)} for integer
    /// weights w.
    pub fn weighted<W>(pres: &KrullPresentation, mut w: W) -> Result<Self>
    where
        W: FnMut(u64) -> u32,
    {
        Self::from_fn(pres, "weighted", |a, _| {
            let g = BigInt::from(pres.grade(&a.element()));
            Ok(ScaleValue::Rational(BigRational::from_integer(g.pow(w(a.divisor)))))
        })
    }

    /// Values given by strong-atom label.
    pub fn from_labels(
        pres: &KrullPresentation,
        name: impl Into<String>,
        values: &HashMap<String, ScaleValue>,
    ) -> Result<Self> {
        Self::from_fn(pres, name, |a, _| {
            let label = pres.strong_atom_label(a);
            values
                .get(&label)
                .cloned()
                .ok_or_else(|| KrullError::InvalidParameter(format!("scale has no value for strong atom {label}")))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[(StrongAtom, ScaleValue)] {
        &self.values
    }

    pub fn value(&self, a: &StrongAtom) -> Result<&ScaleValue> {
        self.index.get(a).map(|&i| &self.values[i].1).ok_or(KrullError::UnknownDivisor(a.divisor))
    }

    /// σ(x) in double precision.
    pub fn eval(&self, pres: &KrullPresentation, x: &ExponentVector) -> Result<f64> {
        let d = decay(pres, x)?;
        let mut acc = 1.0f64;
        for (a, e) in &d.exponents {
            let v = self.value(a)?.to_f64();
            acc *= v.powf(*e as f64 / d.m as f64);
        }
        Ok(acc)
    }

    /// σ(x) exactly, when every base value involved is rational and every
    /// λ_a(x) is integral.
    pub fn eval_exact(&self, pres: &KrullPresentation, x: &ExponentVector) -> Result<Option<BigRational>> {
        let d = decay(pres, x)?;
        let mut acc = BigRational::one();
        for (a, l) in &d.lambda {
            if !l.is_integer() || l.is_negative() {
                return Ok(None);
            }
            let Some(v) = self.value(a)?.as_rational() else {
                return Ok(None);
            };
            let e = l.to_integer().to_u32().ok_or(KrullError::Overflow("scale exponent"))?;
            acc *= v.pow(e as i32);
        }
        Ok(Some(acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn scale_examples() {
        let n = KrullPresentation::naturals(100).unwrap();
        let s2 = Scale::power(&n, 2.0).unwrap();
        let twelve = n.from_integer(12).unwrap();
        assert_eq!(s2.eval_exact(&n, &twelve).unwrap(), Some(BigRational::from_integer(144.into())));
        let dc = Scale::decay(&n, ScaleValue::Real(1.5)).unwrap();
        assert!(close(dc.eval(&n, &twelve).unwrap(), 3.375));
        let w = Scale::weighted(&n, |_| 2).unwrap();
        assert_eq!(w.values(), s2.values());
        let wallis = Scale::wallis(&n).unwrap();
        assert_eq!(wallis.values()[2].1, ScaleValue::integer(36));

        let h = KrullPresentation::hilbert(100).unwrap();
        let id = Scale::identity(&h).unwrap();
        assert!(close(id.eval(&h, &h.from_integer(21).unwrap()).unwrap(), 21.0));
        // λ = 1/2 is not integral, so no exact value
        assert_eq!(id.eval_exact(&h, &h.from_integer(21).unwrap()).unwrap(), None);
        assert!(close(id.eval(&h, &ExponentVector::identity()).unwrap(), 1.0));
    }

    #[test]
    fn values_at_most_one_are_rejected() {
        let n = KrullPresentation::naturals(10).unwrap();
        assert!(matches!(Scale::decay(&n, ScaleValue::Real(1.0)), Err(KrullError::ScaleBelowOne { .. })));
        let f = KrullPresentation::free(1).unwrap();
        assert!(matches!(Scale::identity(&f), Err(KrullError::ScaleBelowOne { .. })));
    }
}
