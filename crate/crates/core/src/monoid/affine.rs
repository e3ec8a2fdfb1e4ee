use std::collections::{BTreeSet, HashMap};

use crate::cone;
use crate::error::{KrullError, Result};

/// Finitely generated submonoid of ℤ^d.
#[derive(Debug, Clone)]
pub struct AffineMonoidSpec {
    dim: usize,
    generators: Vec<Vec<i64>>,
    /// Integer functional positive on every generator; present iff the
    /// generated cone is pointed.
    grading: Option<Vec<i64>>,
}

impl AffineMonoidSpec {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(KrullError::InvalidParameter("affine monoid needs generators".into()));
        }
        for g in &generators {
            if g.len() != dim {
                return Err(KrullError::DimensionMismatch { expected: dim, got: g.len() });
            }
            if g.iter().all(|&x| x == 0) {
                return Err(KrullError::InvalidParameter("generators must be nonzero".into()));
            }
        }
        let grading = cone::grading_functional(&generators)?;
        Ok(Self { dim, generators, grading })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn is_pointed(&self) -> bool {
        self.grading.is_some()
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    fn functional(&self) -> Result<&[i64]> {
        self.grading.as_deref().ok_or(KrullError::NotPointed)
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(KrullError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    /// λ·v for the grading functional λ.
    pub fn grade(&self, v: &[i64]) -> Result<i64> {
        self.check_dim(v)?;
        Ok(self.functional()?.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Membership by dynamic programming on the grading: v ∈ M iff v = 0 or
    /// v − g ∈ M for some generator g, and the grade strictly drops.
    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        self.check_dim(v)?;
        let lambda = self.functional()?.to_vec();
        let mut memo: HashMap<Vec<i64>, bool> = HashMap::new();
        Ok(self.member_rec(v.to_vec(), &lambda, &mut memo))
    }

    fn member_rec(&self, v: Vec<i64>, lambda: &[i64], memo: &mut HashMap<Vec<i64>, bool>) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        let g: i64 = lambda.iter().zip(&v).map(|(a, b)| a * b).sum();
        if g <= 0 {
            return false;
        }
        if let Some(&known) = memo.get(&v) {
            return known;
        }
        let mut found = false;
        for gen in &self.generators {
            let w: Vec<i64> = v.iter().zip(gen).map(|(a, b)| a - b).collect();
            if self.member_rec(w, lambda, memo) {
                found = true;
                break;
            }
        }
        memo.insert(v, found);
        found
    }

    /// All members of grade ≤ `bound`, sorted by grade then lexicographically.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Vec<i64>>> {
        let lambda = self.functional()?.to_vec();
        let grade = |v: &[i64]| -> i64 { lambda.iter().zip(v).map(|(a, b)| a * b).sum() };
        let mut seen: BTreeSet<(i64, Vec<i64>)> = BTreeSet::new();
        let zero = vec![0; self.dim];
        seen.insert((0, zero.clone()));
        let mut frontier = vec![zero];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for g in &self.generators {
                    let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + b).collect();
                    let gw = grade(&w);
                    if gw as u64 <= bound && seen.insert((gw, w.clone())) {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen.into_iter().map(|p| p.1).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_two() -> AffineMonoidSpec {
        AffineMonoidSpec::new(2, vec![vec![0, 2], vec![1, 1], vec![2, 0]]).unwrap()
    }

    #[test]
    fn parity_obstructs_membership() {
        let m = rank_two();
        assert!(!m.contains(&[1, 0]).unwrap());
        assert!(m.contains(&[3, 1]).unwrap());
        assert!(!m.contains(&[-1, 1]).unwrap());
        // oracle: members are exactly the nonnegative vectors with even sum
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(m.contains(&[x, y]).unwrap(), (x + y) % 2 == 0, "({x},{y})");
            }
        }
    }

    #[test]
    fn non_pointed_is_rejected() {
        let m = AffineMonoidSpec::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(!m.is_pointed());
        assert_eq!(m.contains(&[0]), Err(KrullError::NotPointed));
        assert!(matches!(m.enumerate(3), Err(KrullError::NotPointed)));
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let m = rank_two();
        let all = m.enumerate(8).unwrap();
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        assert!(all.windows(2).all(|w| m.grade(&w[0]).unwrap() <= m.grade(&w[1]).unwrap()));
        assert!(all.iter().all(|v| m.contains(v).unwrap()));
    }
}
