//! Exact rational cone computations for finitely generated submonoids of ℤ^d.
//!
//! Membership is decided with the Farkas alternative (a d-variable
//! Fourier–Motzkin system); positive verdicts are certified by shrinking
//! the generator set to a minimal one and solving the resulting linearly
//! independent system exactly.

pub mod fm;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{KrullError, Result};
use fm::{q, System, Q};

/// Generators above this count are rejected.
pub const MAX_GENERATORS: usize = 32;
/// Dimensions above this are rejected.
pub const MAX_DIMENSION: usize = 6;

/// An extreme ray of a pointed cone with the generators lying on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ray {
    /// Primitive integer vector spanning the ray (entries coprime).
    pub primitive: Vec<i64>,
    /// Each generator on the ray and the multiple c with g = c·primitive.
    pub generators_on_ray: Vec<(Vec<i64>, u64)>,
}

/// Result of a cone-membership query.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeMembership {
    pub member: bool,
    /// Nonnegative coefficients c with Σ cᵢ gᵢ = v, present iff `member`.
    pub coefficients: Option<Vec<Q>>,
}

fn check_shape(generators: &[Vec<i64>], dim: usize) -> Result<()> {
    if generators.len() > MAX_GENERATORS {
        return Err(KrullError::SizeLimit(format!(
            "{} generators exceed the limit of {MAX_GENERATORS}",
            generators.len()
        )));
    }
    if dim > MAX_DIMENSION {
        return Err(KrullError::SizeLimit(format!("dimension {dim} exceeds the limit of {MAX_DIMENSION}")));
    }
    for g in generators {
        if g.len() != dim {
            return Err(KrullError::DimensionMismatch { expected: dim, got: g.len() });
        }
    }
    Ok(())
}

fn dims(generators: &[Vec<i64>], v: Option<&[i64]>) -> usize {
    generators.first().map(|g| g.len()).or(v.map(|v| v.len())).unwrap_or(0)
}

/// Farkas test: v ∈ cone(G) iff no y has y·g ≥ 0 for all g and y·v < 0.
fn in_cone_decide(generators: &[&[i64]], v: &[i64]) -> Result<bool> {
    let d = v.len();
    if v.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    let mut sys = System::new(d);
    for g in generators {
        sys.ge(g.iter().map(|&x| q(x)).collect(), q(0));
    }
    sys.le(v.iter().map(|&x| q(x)).collect(), q(-1));
    Ok(sys.solve()?.is_none())
}

/// Decides v ∈ cone(generators) exactly; positive answers carry a
/// certificate combination.
pub fn cone_membership(generators: &[Vec<i64>], v: &[i64]) -> Result<ConeMembership> {
    let d = dims(generators, Some(v));
    check_shape(generators, d)?;
    if v.len() != d {
        return Err(KrullError::DimensionMismatch { expected: d, got: v.len() });
    }
    let all: Vec<&[i64]> = generators.iter().map(|g| g.as_slice()).collect();
    if !in_cone_decide(&all, v)? {
        return Ok(ConeMembership { member: false, coefficients: None });
    }
    // shrink to a minimal generating subset; it is linearly independent
    let mut keep: Vec<usize> = (0..generators.len()).collect();
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<&[i64]> =
            keep.iter().enumerate().filter(|&(pos, _)| pos != i).map(|(_, &k)| generators[k].as_slice()).collect();
        if in_cone_decide(&trial, v)? {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    let columns: Vec<Vec<Q>> = keep.iter().map(|&k| generators[k].iter().map(|&x| q(x)).collect()).collect();
    let target: Vec<Q> = v.iter().map(|&x| q(x)).collect();
    let sol = fm::solve_unique(&columns, &target)
        .ok_or_else(|| KrullError::Unsupported("minimal generating subset is not independent".into()))?;
    if sol.iter().any(|c| c.is_negative()) {
        return Err(KrullError::Unsupported("certificate has a negative coefficient".into()));
    }
    let mut coefficients = vec![Q::zero(); generators.len()];
    for (c, &k) in sol.into_iter().zip(&keep) {
        coefficients[k] = c;
    }
    Ok(ConeMembership { member: true, coefficients: Some(coefficients) })
}

/// A positive integer functional λ with λ·g ≥ 1 for every generator, or
/// `None` when the cone is not pointed.
pub fn grading_functional(generators: &[Vec<i64>]) -> Result<Option<Vec<i64>>> {
    let d = dims(generators, None);
    check_shape(generators, d)?;
    if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
        return Err(KrullError::InvalidParameter("generators must be nonzero".into()));
    }
    let mut sys = System::new(d);
    for g in generators {
        sys.ge(g.iter().map(|&x| q(x)).collect(), q(1));
    }
    let Some(y) = sys.solve()? else {
        return Ok(None);
    };
    let l = y.iter().fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<num_bigint::BigInt> = y.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    let out: Option<Vec<i64>> = ints.iter().map(|c| i64::try_from(c).ok()).collect();
    out.map(Some).ok_or(KrullError::Overflow("grading functional"))
}

/// True iff no nonzero v has both v and −v in the cone.
pub fn is_pointed(generators: &[Vec<i64>]) -> Result<bool> {
    Ok(grading_functional(generators)?.is_some())
}

/// Pointedness by the primal route: the cone is pointed iff Σ cᵢ gᵢ = 0
/// with c ≥ 0 forces c = 0 (normalized here by Σ cᵢ = 1).
pub fn has_nontrivial_zero_combination(generators: &[Vec<i64>]) -> Result<bool> {
    let d = dims(generators, None);
    check_shape(generators, d)?;
    let k = generators.len();
    let mut sys = System::new(k);
    for row in 0..d {
        sys.eq(generators.iter().map(|g| q(g[row])).collect(), q(0));
    }
    sys.eq(vec![q(1); k], q(1));
    for i in 0..k {
        let mut e = vec![q(0); k];
        e[i] = q(1);
        sys.ge(e, q(0));
    }
    Ok(sys.solve()?.is_some())
}

/// g / gcd(entries), direction preserved.
pub fn primitive(g: &[i64]) -> (Vec<i64>, u64) {
    let c = g.iter().fold(0i64, |acc, &x| acc.gcd(&x)).unsigned_abs();
    if c == 0 {
        return (g.to_vec(), 0);
    }
    (g.iter().map(|&x| x / c as i64).collect(), c)
}

/// Extreme rays of a pointed cone, sorted by primitive vector.
pub fn extreme_rays(generators: &[Vec<i64>]) -> Result<Vec<Ray>> {
    if !is_pointed(generators)? {
        return Err(KrullError::NotPointed);
    }
    let mut groups: Vec<Ray> = Vec::new();
    for g in generators {
        let (prim, c) = primitive(g);
        match groups.iter_mut().find(|r| r.primitive == prim) {
            Some(r) => {
                if !r.generators_on_ray.iter().any(|(h, _)| h == g) {
                    r.generators_on_ray.push((g.clone(), c));
                }
            }
            None => groups.push(Ray { primitive: prim, generators_on_ray: vec![(g.clone(), c)] }),
        }
    }
    let mut rays = Vec::new();
    for ray in &groups {
        let others: Vec<&[i64]> =
            generators.iter().filter(|g| primitive(g).0 != ray.primitive).map(|g| g.as_slice()).collect();
        if !in_cone_decide(&others, &ray.primitive)? {
            let mut r = ray.clone();
            r.generators_on_ray.sort_by_key(|p| p.1);
            rays.push(r);
        }
    }
    rays.sort_by(|a, b| a.primitive.cmp(&b.primitive));
    Ok(rays)
}

/// Strong atoms of the affine monoid generated by `generators`: for each
/// extreme ray with multiples c₁,…,c_j of its primitive u, the element
/// (min cᵢ)·u when that minimum divides every cᵢ.
pub fn strong_atoms_affine(generators: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let rays = extreme_rays(generators)?;
    let mut out = Vec::new();
    for r in &rays {
        let c = r.generators_on_ray.iter().map(|p| p.1).min().expect("ray has a generator");
        if r.generators_on_ray.iter().all(|p| p.1 % c == 0) {
            out.push(r.primitive.iter().map(|&x| x * c as i64).collect());
        }
    }
    debug_assert!(out.len() <= rays.len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn circle(n_max: i64) -> Vec<Vec<i64>> {
        (0..=n_max).map(|n| vec![n * n - 1, 2 * n, n * n + 1]).collect()
    }

    #[test]
    fn membership_examples() {
        let m = cone_membership(&[vec![0, 2], vec![2, 0]], &[1, 1]).unwrap();
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(m.coefficients, Some(vec![half.clone(), half]));
        let g = vec![vec![0, 2], vec![1, 1], vec![2, 0]];
        assert!(!cone_membership(&g, &[-1, 0]).unwrap().member);
        let c = cone_membership(&circle(10), &[3, 4, 5]).unwrap();
        assert!(c.member);
        // the infeasibility certificate needs a parallel row with a smaller history
        let pm = vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]];
        assert!(cone_membership(&pm, &[3, -1, 5]).unwrap().member);
        assert!(matches!(cone_membership(&g, &[1, 1, 1]), Err(KrullError::DimensionMismatch { .. })));
    }

    #[test]
    fn pointedness_examples() {
        assert!(!is_pointed(&[vec![1, 0], vec![-1, 0]]).unwrap());
        assert!(is_pointed(&[vec![0, 2], vec![1, 1], vec![2, 0]]).unwrap());
        let pm = vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]];
        assert!(is_pointed(&pm).unwrap());
        assert!(!has_nontrivial_zero_combination(&pm).unwrap());
        assert!(has_nontrivial_zero_combination(&[vec![1, 0], vec![-1, 0]]).unwrap());
    }

    #[test]
    fn rays_of_rank_two_example() {
        let rays = extreme_rays(&[vec![0, 2], vec![1, 1], vec![2, 0]]).unwrap();
        let prims: Vec<Vec<i64>> = rays.iter().map(|r| r.primitive.clone()).collect();
        assert_eq!(prims, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(strong_atoms_affine(&[vec![0, 2], vec![1, 1], vec![2, 0]]).unwrap(), vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn circle_generators_all_extreme() {
        let g = circle(10);
        assert_eq!(extreme_rays(&g).unwrap().len(), 11);
        let mut s = strong_atoms_affine(&g).unwrap();
        s.sort();
        let mut expected = g.clone();
        expected.sort();
        assert_eq!(s, expected);
    }

    #[test]
    fn ray_with_non_cyclic_multiples() {
        let g = vec![vec![2, 0], vec![3, 0], vec![0, 1]];
        let rays = extreme_rays(&g).unwrap();
        assert_eq!(rays[1].generators_on_ray, vec![(vec![2, 0], 2), (vec![3, 0], 3)]);
        assert_eq!(strong_atoms_affine(&g).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn limits_and_errors() {
        assert_eq!(extreme_rays(&[vec![1, 0], vec![-1, 0]]), Err(KrullError::NotPointed));
        let many: Vec<Vec<i64>> = (0..33).map(|i| vec![1, i]).collect();
        assert!(matches!(is_pointed(&many), Err(KrullError::SizeLimit(_))));
        assert!(matches!(is_pointed(&[vec![1; 7]]), Err(KrullError::SizeLimit(_))));
    }
}
