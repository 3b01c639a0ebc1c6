//! Small integral lattices: fixed-capacity vectors, integer matrices,
//! Smith normal form and exact rational solving.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Neg, Sub, SubAssign};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 3;

/// Integer vector of length at most [`MAX_DIM`]. Used both for cocharacters
/// and for covectors (roots); the pairing is the dot product.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatVec {
    n: u8,
    c: [i64; MAX_DIM],
}

impl LatVec {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        LatVec { n: n as u8, c: [0; MAX_DIM] }
    }

    pub fn from_slice(xs: &[i64]) -> Self {
        let mut v = LatVec::zero(xs.len());
        v.c[..xs.len()].copy_from_slice(xs);
        v
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = LatVec::zero(n);
        v.c[i] = 1;
        v
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.c[..self.n as usize]
    }

    pub fn dot(&self, other: &LatVec) -> i64 {
        debug_assert_eq!(self.n, other.n);
        self.as_slice().iter().zip(other.as_slice()).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&x| x == 0)
    }

    pub fn l1(&self) -> i64 {
        self.as_slice().iter().map(|x| x.abs()).sum()
    }

    pub fn scale(&self, k: i64) -> LatVec {
        let mut v = *self;
        for x in &mut v.c[..self.n as usize] {
            *x *= k;
        }
        v
    }

    /// Comma separated coordinates, e.g. `1,0,-2`.
    pub fn to_csv(&self) -> String {
        self.as_slice().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(s: &str) -> Option<LatVec> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return None;
        }
        let xs: Result<Vec<i64>, _> = t.split(',').map(|p| p.trim().parse::<i64>()).collect();
        let xs = xs.ok()?;
        if xs.len() > MAX_DIM {
            return None;
        }
        Some(LatVec::from_slice(&xs))
    }
}

impl fmt::Debug for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

impl fmt::Display for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

impl Index<usize> for LatVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for LatVec {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        let n = self.n as usize;
        &mut self.c[..n][i]
    }
}

impl Add for LatVec {
    type Output = LatVec;
    fn add(mut self, o: LatVec) -> LatVec {
        self += o;
        self
    }
}

impl AddAssign for LatVec {
    fn add_assign(&mut self, o: LatVec) {
        debug_assert_eq!(self.n, o.n);
        for i in 0..self.n as usize {
            self.c[i] += o.c[i];
        }
    }
}

impl Sub for LatVec {
    type Output = LatVec;
    fn sub(mut self, o: LatVec) -> LatVec {
        self -= o;
        self
    }
}

impl SubAssign for LatVec {
    fn sub_assign(&mut self, o: LatVec) {
        debug_assert_eq!(self.n, o.n);
        for i in 0..self.n as usize {
            self.c[i] -= o.c[i];
        }
    }
}

impl Neg for LatVec {
    type Output = LatVec;
    fn neg(self) -> LatVec {
        self.scale(-1)
    }
}

/// Square integer matrix acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    n: u8,
    a: [[i64; MAX_DIM]; MAX_DIM],
}

impl IntMat {
    pub fn identity(n: usize) -> Self {
        let mut m = IntMat { n: n as u8, a: [[0; MAX_DIM]; MAX_DIM] };
        for i in 0..n {
            m.a[i][i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = IntMat::identity(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            m.a[i][..n].copy_from_slice(r);
        }
        m
    }

    pub fn from_columns(cols: &[LatVec]) -> Self {
        let n = cols.len();
        let mut m = IntMat::identity(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.a[i][j] = c[i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn column(&self, j: usize) -> LatVec {
        let n = self.dim();
        let mut v = LatVec::zero(n);
        for i in 0..n {
            v[i] = self.a[i][j];
        }
        v
    }

    pub fn apply(&self, x: &LatVec) -> LatVec {
        let n = self.dim();
        let mut y = LatVec::zero(n);
        for i in 0..n {
            y[i] = (0..n).map(|j| self.a[i][j] * x[j]).sum();
        }
        y
    }

    /// Covector `β ∘ self`, i.e. the row vector `β^T M`.
    pub fn pull_back(&self, beta: &LatVec) -> LatVec {
        let n = self.dim();
        let mut y = LatVec::zero(n);
        for j in 0..n {
            y[j] = (0..n).map(|i| beta[i] * self.a[i][j]).sum();
        }
        y
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        let n = self.dim();
        let mut m = IntMat::identity(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i][j] = (0..n).map(|k| self.a[i][k] * o.a[k][j]).sum();
            }
        }
        m
    }

    pub fn scale(&self, k: i64) -> IntMat {
        let mut m = *self;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m.a[i][j] *= k;
            }
        }
        m
    }

    pub fn add(&self, o: &IntMat) -> IntMat {
        self.sub(&o.scale(-1))
    }

    pub fn sub(&self, o: &IntMat) -> IntMat {
        let mut m = *self;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m.a[i][j] -= o.a[i][j];
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim()).map(|i| self.a[i][..self.dim()].to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMat::identity(self.dim())
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// Smith normal form `U A V = D` of a (rows × cols) integer matrix,
/// together with the inverses of the unimodular transforms.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub u_inv: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
    pub rank: usize,
}

fn ident(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> Smith {
    let rows = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u = ident(rows);
    let mut u_inv = ident(rows);
    let mut v = ident(cols);
    let mut v_inv = ident(cols);

    // Row op r_i += k r_j on m and u; inverse: column op c_j -= k c_i on u_inv.
    fn row_add(m: &mut [Vec<i64>], u: &mut [Vec<i64>], u_inv: &mut [Vec<i64>], i: usize, j: usize, k: i64) {
        for c in 0..m[0].len() {
            m[i][c] += k * m[j][c];
        }
        for c in 0..u[0].len() {
            u[i][c] += k * u[j][c];
        }
        for r in 0..u_inv.len() {
            u_inv[r][j] -= k * u_inv[r][i];
        }
    }
    fn row_swap(m: &mut [Vec<i64>], u: &mut [Vec<i64>], u_inv: &mut [Vec<i64>], i: usize, j: usize) {
        m.swap(i, j);
        u.swap(i, j);
        for r in u_inv.iter_mut() {
            r.swap(i, j);
        }
    }
    fn row_neg(m: &mut [Vec<i64>], u: &mut [Vec<i64>], u_inv: &mut [Vec<i64>], i: usize) {
        for x in m[i].iter_mut() {
            *x = -*x;
        }
        for x in u[i].iter_mut() {
            *x = -*x;
        }
        for r in u_inv.iter_mut() {
            r[i] = -r[i];
        }
    }
    // Column op c_i += k c_j on m and v; inverse: row op r_j -= k r_i on v_inv.
    fn col_add(m: &mut [Vec<i64>], v: &mut [Vec<i64>], v_inv: &mut [Vec<i64>], i: usize, j: usize, k: i64) {
        for r in m.iter_mut() {
            r[i] += k * r[j];
        }
        for r in v.iter_mut() {
            r[i] += k * r[j];
        }
        let n = v_inv[0].len();
        for c in 0..n {
            v_inv[j][c] -= k * v_inv[i][c];
        }
    }
    fn col_swap(m: &mut [Vec<i64>], v: &mut [Vec<i64>], v_inv: &mut [Vec<i64>], i: usize, j: usize) {
        for r in m.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
        v_inv.swap(i, j);
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap(&mut m, &mut u, &mut u_inv, t, pi);
        col_swap(&mut m, &mut v, &mut v_inv, t, pj);
        let mut done = true;
        for i in t + 1..rows {
            let k = m[i][t].div_euclid(m[t][t]);
            if k != 0 {
                row_add(&mut m, &mut u, &mut u_inv, i, t, -k);
            }
            if m[i][t] != 0 {
                done = false;
            }
        }
        for j in t + 1..cols {
            let k = m[t][j].div_euclid(m[t][t]);
            if k != 0 {
                col_add(&mut m, &mut v, &mut v_inv, j, t, -k);
            }
            if m[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility condition on the remaining block
        let p = m[t][t];
        let mut bad = None;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if m[i][j] % p != 0 {
                    bad = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad {
            row_add(&mut m, &mut u, &mut u_inv, t, i, 1);
            continue;
        }
        if p < 0 {
            row_neg(&mut m, &mut u, &mut u_inv, t);
        }
        t += 1;
    }
    let d: Vec<i64> = (0..rows.min(cols)).map(|i| m[i][i]).collect();
    let rank = d.iter().filter(|&&x| x != 0).count();
    Smith { d, u, u_inv, v, v_inv, rank }
}

/// Integer kernel basis of an n×n integer matrix (as columns).
pub fn integer_kernel(a: &IntMat) -> Vec<LatVec> {
    let n = a.dim();
    let s = smith_normal_form(&a.rows(), n);
    (s.rank..n)
        .map(|j| LatVec::from_slice(&(0..n).map(|i| s.v[i][j]).collect::<Vec<_>>()))
        .collect()
}

/// Solve `A x = b` over ℚ for square invertible `A`.
pub fn solve_rational(a: &[Vec<Rational64>], b: &[Rational64]) -> Option<Vec<Rational64>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rational_rank<T>(rows: &[Vec<T>]) -> usize
where
    T: Clone + Zero + One + Signed + std::ops::Div<Output = T> + PartialEq,
{
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone() / p.clone();
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let k = b.len();
        a.iter()
            .map(|r| (0..b[0].len()).map(|j| (0..k).map(|t| r[t] * b[t][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn smith_diagonalises() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&a, 3);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.d[i] } else { 0 };
                assert_eq!(d[i][j], want);
            }
        }
        assert_eq!(s.d, vec![2, 6, 12]);
        assert_eq!(mat_mul(&s.u, &s.u_inv), ident(3));
        assert_eq!(mat_mul(&s.v, &s.v_inv), ident(3));
    }

    #[test]
    fn kernel_of_swap_minus_identity() {
        let theta = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let k = integer_kernel(&theta.sub(&IntMat::identity(2)));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0].abs(), 1);
        assert_eq!(k[0][0], k[0][1]);
    }
}
