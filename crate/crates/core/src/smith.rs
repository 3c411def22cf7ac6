//! Smith normal form over the integers, with the transformation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `d = l * a * r` with `l`, `r` unimodular and `d` diagonal, each diagonal
/// entry non-negative and dividing the next. `l_inv` and `r_inv` are the
/// inverses of `l` and `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub l: IntMatrix,
    pub l_inv: IntMatrix,
    pub r: IntMatrix,
    pub r_inv: IntMatrix,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..n).filter(|&i| !self.d[i][i].is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..n).map(|i| self.d[i][i].clone()).collect()
    }

    /// A basis of the integer kernel `{v : a v = 0}` as columns of `r`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let cols = self.r.len();
        (self.rank()..cols)
            .map(|j| (0..cols).map(|i| self.r[i][j].clone()).collect())
            .collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |s, k| s + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn from_i64(a: &[Vec<i64>]) -> IntMatrix {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

// row_i += k * row_j on `m`
fn row_add(m: &mut IntMatrix, i: usize, j: usize, k: &BigInt) {
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(src.iter()) {
        *x += k * y;
    }
}

fn col_add(m: &mut IntMatrix, i: usize, j: usize, k: &BigInt) {
    for row in m.iter_mut() {
        let y = row[j].clone();
        row[i] += k * y;
    }
}

fn col_swap(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

struct State {
    d: IntMatrix,
    l: IntMatrix,
    l_inv: IntMatrix,
    r: IntMatrix,
    r_inv: IntMatrix,
}

impl State {
    // row_i += k row_j, so l gains the same op and l_inv the inverse column op
    fn row_add(&mut self, i: usize, j: usize, k: &BigInt) {
        row_add(&mut self.d, i, j, k);
        row_add(&mut self.l, i, j, k);
        col_add(&mut self.l_inv, j, i, &-k);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.d.swap(i, j);
        self.l.swap(i, j);
        col_swap(&mut self.l_inv, i, j);
    }

    fn row_neg(&mut self, i: usize) {
        for x in self.d[i].iter_mut().chain(self.l[i].iter_mut()) {
            *x = -&*x;
        }
        for row in self.l_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    fn col_add(&mut self, i: usize, j: usize, k: &BigInt) {
        col_add(&mut self.d, i, j, k);
        col_add(&mut self.r, i, j, k);
        row_add(&mut self.r_inv, j, i, &-k);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        col_swap(&mut self.d, i, j);
        col_swap(&mut self.r, i, j);
        self.r_inv.swap(i, j);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut s = State {
        d: a.clone(),
        l: identity(rows),
        l_inv: identity(rows),
        r: identity(cols),
        r_inv: identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s.d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| s.d[i][j].abs() < s.d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(s);
            };
            s.row_swap(t, pi);
            s.col_swap(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = s.d[i][t].div_floor(&s.d[t][t]);
                if !q.is_zero() {
                    s.row_add(i, t, &-q);
                }
                if !s.d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = s.d[t][j].div_floor(&s.d[t][t]);
                if !q.is_zero() {
                    s.col_add(j, t, &-q);
                }
                if !s.d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the rest of the block by the pivot
            let mut bad_row = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.d[i][j].is_multiple_of(&s.d[t][t]) {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => s.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.d[t][t].is_negative() {
            s.row_neg(t);
        }
    }
    finish(s)
}

fn finish(s: State) -> SmithForm {
    SmithForm { d: s.d, l: s.l, l_inv: s.l_inv, r: s.r, r_inv: s.r_inv }
}

/// Unimodular matrix whose first row is the primitive vector `c`.
pub fn complete_to_unimodular(c: &[BigInt]) -> Option<IntMatrix> {
    let snf = smith_normal_form(&vec![c.to_vec()]);
    // c^T r = (±1, 0, ...) so c^T = ±(first row of r_inv)
    if !snf.d[0][0].is_one() {
        return None;
    }
    let mut m = snf.r_inv;
    if snf.l[0][0].is_negative() {
        for x in m[0].iter_mut() {
            *x = -&*x;
        }
    }
    debug_assert_eq!(m[0], c);
    Some(m)
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let cols = snf.r.len();
    let lb: Vec<BigInt> = snf
        .l
        .iter()
        .map(|row| row.iter().zip(b).fold(BigInt::zero(), |s, (x, y)| s + x * y))
        .collect();
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); cols];
    for (i, v) in lb.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !v.is_zero() {
                return None;
            }
        } else {
            if !v.is_multiple_of(&d) {
                return None;
            }
            y[i] = v / &d;
        }
    }
    Some(
        (0..cols)
            .map(|i| (0..cols).fold(BigInt::zero(), |s, j| s + &snf.r[i][j] * &y[j]))
            .collect(),
    )
}
