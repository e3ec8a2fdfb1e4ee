use crate::error::{KrullError, Result};

/// Additive submonoid of ℕ₀ generated by finitely many positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalMonoidSpec {
    generators: Vec<u64>,
}

impl NumericalMonoidSpec {
    pub fn new(mut generators: Vec<u64>) -> Result<Self> {
        if generators.is_empty() || generators.contains(&0) {
            return Err(KrullError::InvalidParameter("numerical monoid generators must be >= 1".into()));
        }
        generators.sort_unstable();
        generators.dedup();
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Membership table for 0..=bound.
    pub fn member_table(&self, bound: u64) -> Vec<bool> {
        let n = bound as usize;
        let mut t = vec![false; n + 1];
        t[0] = true;
        for i in 1..=n {
            t[i] = self.generators.iter().any(|&g| g as usize <= i && t[i - g as usize]);
        }
        t
    }

    pub fn contains(&self, n: u64) -> bool {
        self.member_table(n)[n as usize]
    }

    pub fn enumerate(&self, bound: u64) -> Vec<u64> {
        self.member_table(bound).into_iter().enumerate().filter(|p| p.1).map(|p| p.0 as u64).collect()
    }
}
