use std::cmp::Ordering;
use std::fmt;

/// Finite-support map from divisor id to a positive exponent, stored as
/// `(id, exponent)` pairs sorted by id. Zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector(Vec<(u64, u64)>);

impl ExponentVector {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Builds a canonical vector from arbitrary pairs; repeated ids are
    /// summed and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut v: Vec<(u64, u64)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_unstable_by_key(|p| p.0);
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(v.len());
        for (id, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == id => last.1 += e,
                _ => out.push((id, e)),
            }
        }
        Self(out)
    }

    pub fn single(id: u64, e: u64) -> Self {
        Self::from_pairs([(id, e)])
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.0
    }

    pub fn get(&self, id: u64) -> u64 {
        self.0.binary_search_by_key(&id, |p| p.0).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Self(out)
    }

    pub fn scale(&self, k: u64) -> Self {
        if k == 0 {
            return Self::identity();
        }
        Self(self.0.iter().map(|&(id, e)| (id, e * k)).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().all(|&(id, e)| other.get(id) >= e)
    }

    /// `other - self` when `self <= other` componentwise.
    pub fn complement_in(&self, other: &Self) -> Option<Self> {
        if !self.le(other) {
            return None;
        }
        Some(Self::from_pairs(other.0.iter().map(|&(id, e)| (id, e - self.get(id)))))
    }
}

impl Ord for ExponentVector {
    /// Lexicographic comparison of the dense vectors in increasing id order.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match a.1.cmp(&b.1) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (id, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}:{e}")?;
        }
        Ok(())
    }
}

/// An element of one of the supported monoid families.
///
/// Krull presentations use [`MonoidElement::Exponents`] canonically; a
/// [`MonoidElement::Natural`] given to an integer-labelled presentation
/// (naturals, Hilbert) is factored into exponent form on entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonoidElement {
    Exponents(ExponentVector),
    IntVector(Vec<i64>),
    Natural(u64),
    Numerical(u64),
}

impl MonoidElement {
    pub fn family_name(&self) -> &'static str {
        match self {
            MonoidElement::Exponents(_) => "exponent vector",
            MonoidElement::IntVector(_) => "integer vector",
            MonoidElement::Natural(_) => "natural number",
            MonoidElement::Numerical(_) => "numerical value",
        }
    }

    pub fn as_exponents(&self) -> Option<&ExponentVector> {
        match self {
            MonoidElement::Exponents(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            MonoidElement::IntVector(v) => Some(v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros_and_merges() {
        let v = ExponentVector::from_pairs([(7, 1), (3, 0), (3, 2), (7, 1)]);
        assert_eq!(v.entries(), &[(3, 2), (7, 2)]);
        assert_eq!(v.get(5), 0);
        assert_eq!(v.degree(), 4);
        assert_eq!(v.to_string(), "3:2,7:2");
    }

    #[test]
    fn complement_and_order() {
        let a = ExponentVector::from_pairs([(3, 1)]);
        let b = ExponentVector::from_pairs([(3, 2), (7, 1)]);
        assert_eq!(a.complement_in(&b).unwrap().entries(), &[(3, 1), (7, 1)]);
        assert!(b.complement_in(&a).is_none());
        // dense (1,0) vs (0,1) in id order [3, 5]
        let x = ExponentVector::single(3, 1);
        let y = ExponentVector::single(5, 1);
        assert!(y < x);
        assert!(ExponentVector::identity() < y);
    }
}
