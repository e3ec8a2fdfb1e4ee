//! Exact Fourier–Motzkin feasibility over the rationals.
//!
//! Systems are `A_eq x = b_eq`, `A x ≤ b`. Equalities are removed by
//! Gaussian substitution first; the remaining variables are eliminated
//! one at a time, discarding rows that fail Chernikov's history test and
//! parallel rows dominated by a tighter row with a subset history. A feasible point is recovered by back-substitution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

use crate::error::{KrullError, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Hard cap on the number of original inequality rows (history bitsets
/// are 128 bits wide).
pub const MAX_ROWS: usize = 128;
/// Cap on live rows during elimination.
const MAX_LIVE_ROWS: usize = 200_000;

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Q>,
    rhs: Q,
    history: u128,
}

#[derive(Debug, Clone, Default)]
pub struct System {
    nvars: usize,
    equalities: Vec<(Vec<Q>, Q)>,
    inequalities: Vec<(Vec<Q>, Q)>,
}

impl System {
    pub fn new(nvars: usize) -> Self {
        Self { nvars, ..Default::default() }
    }

    /// Adds `coeffs · x = rhs`.
    pub fn eq(&mut self, coeffs: Vec<Q>, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.nvars);
        self.equalities.push((coeffs, rhs));
        self
    }

    /// Adds `coeffs · x ≤ rhs`.
    pub fn le(&mut self, coeffs: Vec<Q>, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.nvars);
        self.inequalities.push((coeffs, rhs));
        self
    }

    /// Adds `coeffs · x ≥ rhs`.
    pub fn ge(&mut self, coeffs: Vec<Q>, rhs: Q) -> &mut Self {
        let neg = coeffs.into_iter().map(|c| -c).collect();
        self.le(neg, -rhs)
    }

    /// Checks a candidate point exactly.
    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        let dot = |c: &[Q]| c.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
        self.equalities.iter().all(|(c, b)| &dot(c) == b) && self.inequalities.iter().all(|(c, b)| &dot(c) <= b)
    }

    /// Returns a feasible point, or `None` when the system is infeasible.
    pub fn solve(&self) -> Result<Option<Vec<Q>>> {
        if self.inequalities.len() > MAX_ROWS {
            return Err(KrullError::SizeLimit(format!(
                "{} inequality rows exceed the limit of {MAX_ROWS}",
                self.inequalities.len()
            )));
        }
        let n = self.nvars;

        // 1. Gaussian substitution of equalities: x_j = (rhs - Σ c_k x_k) / c_j.
        let mut eqs = self.equalities.clone();
        let mut ineqs: Vec<(Vec<Q>, Q)> = self.inequalities.clone();
        let mut substitutions: Vec<(usize, Vec<Q>, Q)> = Vec::new();
        while let Some((coeffs, rhs)) = eqs.pop() {
            let pivot = match coeffs.iter().position(|c| !c.is_zero()) {
                Some(j) => j,
                None => {
                    if rhs.is_zero() {
                        continue;
                    }
                    return Ok(None);
                }
            };
            let pc = coeffs[pivot].clone();
            // x_pivot = rhs/pc - Σ_{k≠pivot} (c_k/pc) x_k
            let expr: Vec<Q> =
                coeffs.iter().enumerate().map(|(k, c)| if k == pivot { Q::zero() } else { -(c / &pc) }).collect();
            let constant = &rhs / &pc;
            let substitute = |row: &mut Vec<Q>, b: &mut Q| {
                let a = std::mem::take(&mut row[pivot]);
                if a.is_zero() {
                    return;
                }
                for (k, e) in expr.iter().enumerate() {
                    if !e.is_zero() {
                        row[k] += &a * e;
                    }
                }
                *b -= &a * &constant;
            };
            for (row, b) in eqs.iter_mut() {
                substitute(row, b);
            }
            for (row, b) in ineqs.iter_mut() {
                substitute(row, b);
            }
            for (_, e, c) in substitutions.iter_mut() {
                // earlier substitutions may reference x_pivot
                let mut b = -c.clone();
                substitute(e, &mut b);
                *c = -b;
            }
            substitutions.push((pivot, expr, constant));
        }
        let substituted: Vec<bool> = {
            let mut s = vec![false; n];
            for (j, _, _) in &substitutions {
                s[*j] = true;
            }
            s
        };

        // 2. Fourier–Motzkin on the free variables.
        let rows: Vec<Row> =
            ineqs.into_iter().enumerate().map(|(i, (coeffs, rhs))| Row { coeffs, rhs, history: 1u128 << i }).collect();
        let Some(mut rows) = prune(rows) else {
            return Ok(None);
        };
        let mut remaining: Vec<usize> = (0..n).filter(|&j| !substituted[j]).collect();
        let mut eliminated: Vec<(usize, Vec<Row>)> = Vec::new();
        let mut step = 0usize;
        while !remaining.is_empty() {
            // choose the variable with the fewest generated rows
            let (pos_in_remaining, _) = remaining
                .iter()
                .enumerate()
                .map(|(idx, &j)| {
                    let p = rows.iter().filter(|r| r.coeffs[j].is_positive()).count();
                    let m = rows.iter().filter(|r| r.coeffs[j].is_negative()).count();
                    (idx, p * m)
                })
                .min_by_key(|&(idx, cost)| (cost, idx))
                .expect("nonempty");
            let j = remaining.remove(pos_in_remaining);
            step += 1;
            let (involved, mut rest): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| !r.coeffs[j].is_zero());
            let pos: Vec<&Row> = involved.iter().filter(|r| r.coeffs[j].is_positive()).collect();
            let neg: Vec<&Row> = involved.iter().filter(|r| r.coeffs[j].is_negative()).collect();
            for p in &pos {
                for m in &neg {
                    let history = p.history | m.history;
                    if history.count_ones() as usize > step + 1 {
                        continue;
                    }
                    // (-a_m) * p + a_p * m eliminates x_j
                    let sp = -&m.coeffs[j];
                    let sm = p.coeffs[j].clone();
                    let coeffs: Vec<Q> = p
                        .coeffs
                        .iter()
                        .zip(&m.coeffs)
                        .enumerate()
                        .map(|(k, (a, b))| if k == j { Q::zero() } else { a * &sp + b * &sm })
                        .collect();
                    let rhs = &p.rhs * &sp + &m.rhs * &sm;
                    rest.push(Row { coeffs, rhs, history });
                }
            }
            if rest.len() > MAX_LIVE_ROWS {
                return Err(KrullError::SizeLimit("Fourier–Motzkin intermediate system too large".into()));
            }
            rows = match prune(rest) {
                Some(r) => r,
                None => return Ok(None),
            };
            eliminated.push((j, involved));
        }

        // 3. Back-substitution in reverse elimination order.
        let mut x = vec![Q::zero(); n];
        for (j, involved) in eliminated.iter().rev() {
            let mut lower: Option<Q> = None;
            let mut upper: Option<Q> = None;
            for r in involved {
                let mut rest = r.rhs.clone();
                for (k, c) in r.coeffs.iter().enumerate() {
                    if k != *j && !c.is_zero() {
                        rest -= c * &x[k];
                    }
                }
                let bound = rest / &r.coeffs[*j];
                if r.coeffs[*j].is_positive() {
                    upper = Some(match upper {
                        Some(u) if u <= bound => u,
                        _ => bound,
                    });
                } else {
                    lower = Some(match lower {
                        Some(l) if l >= bound => l,
                        _ => bound,
                    });
                }
            }
            x[*j] = match (lower, upper) {
                (Some(l), _) => l,
                (None, Some(u)) => {
                    if u >= Q::zero() {
                        Q::zero()
                    } else {
                        u
                    }
                }
                (None, None) => Q::zero(),
            };
        }
        for (j, expr, constant) in substitutions.iter().rev() {
            let mut v = constant.clone();
            for (k, e) in expr.iter().enumerate() {
                if !e.is_zero() {
                    v += e * &x[k];
                }
            }
            x[*j] = v;
        }
        if !self.satisfied_by(&x) {
            return Err(KrullError::Unsupported(
                "Fourier–Motzkin back-substitution produced an infeasible point".into(),
            ));
        }
        Ok(Some(x))
    }
}

/// Drops trivially satisfied rows and rows dominated by a parallel row
/// that is at least as tight and whose history is a subset of theirs; a
/// tighter row with a larger history does not replace a looser one, since
/// the history test may later need the smaller history. Returns `None` on
/// an infeasible constant row.
fn prune(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut groups: HashMap<Vec<Q>, Vec<Row>> = HashMap::new();
    let mut order: Vec<Vec<Q>> = Vec::new();
    for r in rows {
        let lead = r.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs());
        let Some(lead) = lead else {
            if r.rhs.is_negative() {
                return None;
            }
            continue;
        };
        let coeffs: Vec<Q> = r.coeffs.iter().map(|c| c / &lead).collect();
        let row = Row { rhs: &r.rhs / &lead, coeffs: coeffs.clone(), history: r.history };
        let subset = |a: u128, b: u128| a & !b == 0;
        match groups.get_mut(&coeffs) {
            Some(group) => {
                if group.iter().any(|e| e.rhs <= row.rhs && subset(e.history, row.history)) {
                    continue;
                }
                group.retain(|e| !(row.rhs <= e.rhs && subset(row.history, e.history)));
                group.push(row);
            }
            None => {
                order.push(coeffs.clone());
                groups.insert(coeffs, vec![row]);
            }
        }
    }
    Some(order.into_iter().flat_map(|k| groups.remove(&k).expect("present")).collect())
}

/// Solves a square or overdetermined system `A x = b` exactly; returns the
/// unique solution when A has full column rank and the system is
/// consistent.
#[allow(clippy::needless_range_loop)]
pub fn solve_unique(columns: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let ncols = columns.len();
    let nrows = b.len();
    let mut m: Vec<Vec<Q>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let r = (pivot_row..nrows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, r);
        let p = m[pivot_row][col].clone();
        for k in col..=ncols {
            let v = &m[pivot_row][k] / &p;
            m[pivot_row][k] = v;
        }
        for r2 in 0..nrows {
            if r2 != pivot_row && !m[r2][col].is_zero() {
                let f = m[r2][col].clone();
                for k in col..=ncols {
                    let v = &m[pivot_row][k] * &f;
                    m[r2][k] -= v;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    Some((0..ncols).map(|i| m[i][ncols].clone()).collect())
}

/// Rank of a set of integer vectors.
#[allow(clippy::needless_range_loop)]
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let d = vectors[0].len();
    let mut m: Vec<Vec<Q>> = vectors.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
    let mut r = 0;
    for col in 0..d {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[r][col];
                for k in col..d {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn simple_box_is_feasible() {
        let mut s = System::new(2);
        s.le(qv(&[1, 0]), q(3)).ge(qv(&[1, 0]), q(1)).le(qv(&[1, 1]), q(2)).ge(qv(&[0, 1]), q(0));
        let x = s.solve().unwrap().unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut s = System::new(2);
        s.le(qv(&[1, 1]), q(1)).ge(qv(&[1, 0]), q(1)).ge(qv(&[0, 1]), q(1));
        assert!(s.solve().unwrap().is_none());
    }

    #[test]
    fn equalities_are_respected() {
        // x + y = 1, x - y = 0, x >= 0
        let mut s = System::new(2);
        s.eq(qv(&[1, 1]), q(1)).eq(qv(&[1, -1]), q(0)).ge(qv(&[1, 0]), q(0));
        let x = s.solve().unwrap().unwrap();
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(x, vec![half.clone(), half]);
        let mut t = System::new(1);
        t.eq(qv(&[1]), q(-1)).ge(qv(&[1]), q(0));
        assert!(t.solve().unwrap().is_none());
    }

    #[test]
    fn unique_solve_and_rank() {
        let cols = vec![qv(&[0, 2]), qv(&[2, 0])];
        let sol = solve_unique(&cols, &qv(&[1, 1])).unwrap();
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(sol, vec![half.clone(), half]);
        assert_eq!(rank(&[vec![1, 1, 1], vec![2, 2, 2], vec![0, 1, 0]]), 2);
    }
}
