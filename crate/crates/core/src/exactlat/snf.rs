//! Smith normal form with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * m * v == s`, with `s` diagonal, non-negative, and `s[i][i] | s[i+1][i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `s`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    // v is stored transposed so column operations become row operations.
    vt: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        self.vt.swap(i, j);
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for target in [&mut self.a, &mut self.u] {
            let (s, d) = pick(target, src, dst);
            for (x, y) in d.iter_mut().zip(s.iter()) {
                *x -= q * y;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            let t = q * &row[src];
            row[dst] -= t;
        }
        let (s, d) = pick(&mut self.vt, src, dst);
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
    }
}

fn pick(rows: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = rows.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn snf(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = Work {
        a: m.to_rows(),
        u: identity_rows(rows),
        vt: identity_rows(cols),
    };

    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = &w.a[i][j];
                    if !e.is_zero()
                        && best.is_none_or(|(bi, bj)| e.abs() < w.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w);
            };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_axpy(i, t, &q);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_axpy(j, t, &q);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }

            // Enforce the divisibility chain: fold an offending row into row t.
            let pivot = w.a[t][t].clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => w.row_axpy(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w)
}

fn finish(w: Work) -> SmithForm {
    let Work { a, u, vt } = w;
    SmithForm {
        s: IntMatrix::from_rows(&a).reshaped_or(a.len(), vt.len()),
        u: IntMatrix::from_rows(&u).reshaped_or(u.len(), u.len()),
        v: IntMatrix::from_rows(&vt).reshaped_or(vt.len(), vt.len()).transpose(),
    }
}

impl IntMatrix {
    // from_rows cannot recover the column count of a matrix with zero rows.
    fn reshaped_or(self, rows: usize, cols: usize) -> IntMatrix {
        if self.rows() == rows && self.cols() == cols {
            self
        } else {
            IntMatrix::zeros(rows, cols)
        }
    }
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    snf(m).rank()
}

/// Basis (as columns) of the integer kernel `{x : m x = 0}`; always saturated.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let f = snf(m);
    let r = f.rank();
    let cols: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| f.v.column(j)).collect();
    IntMatrix::from_columns(m.cols(), &cols)
}
