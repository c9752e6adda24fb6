//! Elimination over GF(2) and over k.

use crate::field::{FieldElem, FieldError, FieldSpec};
use std::sync::Arc;

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for i in 0..w {
            let s = self.data[src * w + i];
            self.data[dst * w + i] ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let w = self.words;
            for i in 0..w {
                self.data.swap(a * w + i, b * w + i);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(|_, _| {}, |_, _| {}).len()
    }

    /// Row-reduces in place, calling `on_xor(dst, src)` and `on_swap(a, b)`
    /// for every row operation. Returns pivot columns, row i pivoting on entry i.
    pub fn reduce(
        &mut self,
        mut on_xor: impl FnMut(usize, usize),
        mut on_swap: impl FnMut(usize, usize),
    ) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            self.swap_rows(r, p);
            on_swap(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                    on_xor(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Solves A x = b for a 0/1 matrix A and b with entries in k.
/// Returns the solution with free unknowns set to zero, or None if inconsistent.
pub fn solve_f2_system(a: &BitMatrix, b: &[FieldElem], spec: &Arc<FieldSpec>) -> Option<Vec<FieldElem>> {
    assert_eq!(a.rows(), b.len());
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let pivots = {
        let rhs_cell = std::cell::RefCell::new(&mut rhs);
        m.reduce(
            |dst, src| {
                let mut r = rhs_cell.borrow_mut();
                let s = r[src].clone();
                r[dst] = &r[dst] + &s;
            },
            |x, y| rhs_cell.borrow_mut().swap(x, y),
        )
    };
    if rhs[pivots.len()..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![FieldElem::zero(spec); a.cols()];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i].clone();
    }
    Some(x)
}

/// Row echelon rank of a matrix over k.
pub fn rank_k(rows: &[Vec<FieldElem>]) -> usize {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let n_rows = m.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = m[0].len();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        let pivot_row: Vec<FieldElem> = m[r].iter().map(|v| v * &inv).collect();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *v = &*v + &(&f * p);
            }
        }
        m[r] = pivot_row;
        r += 1;
    }
    r
}

/// Inverse of a square matrix over k.
pub fn inverse_k(mat: &[Vec<FieldElem>], spec: &Arc<FieldSpec>) -> Result<Vec<Vec<FieldElem>>, FieldError> {
    let n = mat.len();
    let mut a: Vec<Vec<FieldElem>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElem::one(spec) } else { FieldElem::zero(spec) }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(FieldError::DivisionByZero)?;
        a.swap(c, p);
        let inv = a[c][c].inv()?;
        a[c] = a[c].iter().map(|v| v * &inv).collect();
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let pr = a[c].clone();
            for (v, p) in a[i].iter_mut().zip(&pr) {
                *v = &*v + &(&f * p);
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul_k(a: &[Vec<FieldElem>], b: &[Vec<FieldElem>], spec: &Arc<FieldSpec>) -> Vec<Vec<FieldElem>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(FieldElem::zero(spec), |acc, (x, brow)| &acc + &(x * &brow[j]))
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_rank() {
        let mut m = BitMatrix::zeros(3, 70);
        m.set(0, 0, true);
        m.set(1, 0, true);
        m.set(1, 69, true);
        m.set(2, 69, true);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn f2_system_with_field_rhs() {
        let k = FieldSpec::f2t();
        let t = FieldElem::var(&k, 0);
        let mut a = BitMatrix::zeros(2, 2);
        a.set(0, 0, true);
        a.set(0, 1, true);
        a.set(1, 1, true);
        let x = solve_f2_system(&a, &[t.clone(), FieldElem::one(&k)], &k).unwrap();
        assert_eq!(x[1], FieldElem::one(&k));
        assert_eq!(x[0], &t + &FieldElem::one(&k));
        let mut a = BitMatrix::zeros(2, 1);
        a.set(0, 0, true);
        a.set(1, 0, true);
        assert!(solve_f2_system(&a, &[t.clone(), FieldElem::one(&k)], &k).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let k = FieldSpec::f2t();
        let p = |s: &str| FieldElem::parse(s, &k).unwrap();
        let m = vec![vec![p("t"), p("1")], vec![p("1"), p("t^2")]];
        let inv = inverse_k(&m, &k).unwrap();
        let id = mat_mul_k(&m, &inv, &k);
        assert!(id[0][0].is_one() && id[1][1].is_one() && id[0][1].is_zero() && id[1][0].is_zero());
        assert_eq!(rank_k(&m), 2);
        assert_eq!(rank_k(&[vec![p("t"), p("1")], vec![p("t^2"), p("t")]]), 1);
    }
}
