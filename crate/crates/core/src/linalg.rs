//! Exact linear algebra over `Q`.
//!
//! Rows are cleared of denominators and reduced with fraction-free
//! (Bareiss) elimination, so every intermediate entry is an integer minor of
//! the input. Kernels are read off the echelon form by back substitution.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{Int, Rat};

/// Scales a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let l = row.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Row echelon form with integer entries.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows only, in echelon order.
    pub rows: Vec<Vec<Int>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis: one vector per free column `f`, with `x_f = 1` and the
    /// other free coordinates zero.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![Rat::zero(); self.ncols];
                x[f] = Rat::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
                    let mut acc = Rat::zero();
                    for j in p + 1..self.ncols {
                        if !row[j].is_zero() && !x[j].is_zero() {
                            acc += &x[j] * Rat::from_integer(row[j].clone());
                        }
                    }
                    x[p] = -acc / Rat::from_integer(row[p].clone());
                }
                x
            })
            .collect()
    }
}

/// Fraction-free Gaussian elimination.
pub fn bareiss(mut a: Vec<Vec<Int>>, ncols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = Int::one();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let (top, rest) = a.split_at_mut(row + 1);
        let pivot_row = &top[row];
        let piv = &pivot_row[col];
        for r in rest.iter_mut() {
            if r[col].is_zero() {
                // Still has to be rescaled to stay a minor.
                if !prev.is_one() || !piv.is_one() {
                    for x in r[col + 1..ncols].iter_mut() {
                        if !x.is_zero() {
                            let v = &*x * piv;
                            debug_assert!(v.is_multiple_of(&prev));
                            *x = v / &prev;
                        }
                    }
                }
                continue;
            }
            let lead = r[col].clone();
            for j in col + 1..ncols {
                let v = piv * &r[j] - &lead * &pivot_row[j];
                debug_assert!(v.is_multiple_of(&prev));
                r[j] = v / &prev;
            }
            r[col] = Int::zero();
        }
        prev = pivot_row[col].clone();
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    Echelon {
        rows: a,
        pivots,
        ncols,
    }
}

/// Echelon form of a rational matrix given by rows.
pub fn echelon(rows: &[Vec<Rat>], ncols: usize) -> Echelon {
    bareiss(rows.iter().map(|r| clear_denominators(r)).collect(), ncols)
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    echelon(rows, ncols).rank()
}

/// Kernel of the matrix with the given rows.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    echelon(rows, ncols).kernel()
}

/// Solves a square nonsingular system `A x = b`. `None` when singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = Rat::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[col].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == col || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Incrementally grown row space over `Q`.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }
}

pub fn dot(x: &[Rat], y: &[Rat]) -> Rat {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
        m.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    /// Textbook elimination over Q, kept separate from the fraction-free path.
    fn naive_rank(mut m: Vec<Vec<Rat>>, ncols: usize) -> usize {
        let mut row = 0;
        for col in 0..ncols {
            let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for i in row + 1..m.len() {
                let f = &m[i][col] / &m[row][col];
                for j in 0..ncols {
                    let v = &f * &m[row][j];
                    m[i][j] -= v;
                }
            }
            row += 1;
        }
        row
    }

    #[test]
    fn rank_and_kernel_small() {
        let m = to_rat(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let e = echelon(&m, 3);
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k.len(), 1);
        for row in &m {
            assert!(dot(row, &k[0]).is_zero());
        }
        assert_eq!(k[0], vec![rat(-1, 1), rat(-1, 1), rat(1, 1)]);
    }

    #[test]
    fn skipped_columns_stay_exact() {
        let m = to_rat(&[vec![0, 2, 4, 1], vec![0, 3, 6, 5], vec![0, 1, 2, 7], vec![0, 0, 0, 3]]);
        assert_eq!(rank(&m, 4), 2);
        assert_eq!(kernel(&m, 4).len(), 2);
    }

    #[test]
    fn solve_square() {
        let a = to_rat(&[vec![2, 1], vec![1, 3]]);
        let x = solve(&a, &[rat(3, 1), rat(5, 1)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert!(solve(&to_rat(&[vec![1, 2], vec![2, 4]]), &[rat(1, 1), rat(1, 1)]).is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_naive_elimination(
            rows in prop::collection::vec(prop::collection::vec(-4i64..5, 6), 1..7),
            den in 1i64..5,
        ) {
            let m: Vec<Vec<Rat>> = rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, den)).collect())
                .collect();
            let e = echelon(&m, 6);
            prop_assert_eq!(e.rank(), naive_rank(m.clone(), 6));
            let k = e.kernel();
            prop_assert_eq!(k.len() + e.rank(), 6);
            for v in &k {
                for row in &m {
                    prop_assert!(dot(row, v).is_zero());
                }
            }
            let mut span = Span::new();
            for row in &m {
                span.insert(row.clone());
            }
            prop_assert_eq!(span.dim(), e.rank());
        }
    }
}
