use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::lcm_all;
use crate::error::{KrullError, Result};

/// Finite abelian group given as a direct product of cyclic groups
/// ℤ/n₁ × … × ℤ/n_r. The empty product is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassGroup {
    moduli: Vec<u64>,
}

/// Element of a [`ClassGroup`], one reduced coordinate per modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassElement(Vec<u64>);

impl ClassElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ClassElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl ClassGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(KrullError::InvalidParameter("class group moduli must be >= 1".into()));
        }
        Ok(Self { moduli })
    }

    pub fn trivial() -> Self {
        Self { moduli: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of group elements.
    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// Group exponent: lcm of the moduli.
    pub fn exponent(&self) -> u64 {
        lcm_all(self.moduli.iter().copied())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn zero(&self) -> ClassElement {
        ClassElement(vec![0; self.moduli.len()])
    }

    /// Builds an element from raw coordinates, rejecting coordinates that
    /// are not already reduced.
    pub fn element(&self, coords: &[i64]) -> Result<ClassElement> {
        if coords.len() != self.moduli.len() {
            return Err(KrullError::ClassOutOfRange(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coords.len()
            )));
        }
        let mut out = Vec::with_capacity(coords.len());
        for (&c, &n) in coords.iter().zip(&self.moduli) {
            if c < 0 || c as u64 >= n {
                return Err(KrullError::ClassOutOfRange(format!("coordinate {c} not in [0, {n})")));
            }
            out.push(c as u64);
        }
        Ok(ClassElement(out))
    }

    pub fn add(&self, a: &ClassElement, b: &ClassElement) -> ClassElement {
        ClassElement(a.0.iter().zip(&b.0).zip(&self.moduli).map(|((x, y), n)| (x + y) % n).collect())
    }

    pub fn scale(&self, a: &ClassElement, k: u64) -> ClassElement {
        ClassElement(
            a.0.iter().zip(&self.moduli).map(|(&x, &n)| ((x as u128 * k as u128) % n as u128) as u64).collect(),
        )
    }

    /// Multiplicative order of `a`: lcm of nᵢ / gcd(nᵢ, aᵢ).
    pub fn order_of(&self, a: &ClassElement) -> u64 {
        lcm_all(a.0.iter().zip(&self.moduli).map(|(&x, &n)| n / n.gcd(&x)))
    }
}
