//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`Int`]) and
//! rationals ([`Rat`]): Hermite/Smith normal forms, primitive integer kernels,
//! rational solves, determinants and inverses. No floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        IMat {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        IMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: &[Vec<Int>]) -> Self {
        assert!(!cols.is_empty());
        let rows = cols[0].len();
        assert!(cols.iter().all(|c| c.len() == rows));
        let mut m = IMat::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = y;
            self[(i, b)] = x;
        }
    }

    /// col_b += k * col_a
    fn add_col(&mut self, b: usize, a: usize, k: &Int) {
        for i in 0..self.rows {
            let t = &self[(i, a)] * k;
            self[(i, b)] += t;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| Rat::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        rank_rat(&rows)
    }

    /// Column-style Hermite reduction: returns (H, U) with `self * U = H`,
    /// U unimodular, H in column echelon form (pivots positive, entries to the
    /// right of each pivot zero, entries to the left reduced).
    pub fn col_hermite(&self) -> (IMat, IMat) {
        let mut h = self.clone();
        let mut u = IMat::identity(self.cols);
        let mut pivot_col = 0usize;
        for r in 0..h.rows {
            if pivot_col >= h.cols {
                break;
            }
            // gcd sweep: clear row r to the right of pivot_col
            loop {
                // find column with smallest nonzero |entry| in row r at >= pivot_col
                let mut best: Option<usize> = None;
                for j in pivot_col..h.cols {
                    if !h[(r, j)].is_zero() {
                        match best {
                            None => best = Some(j),
                            Some(b) => {
                                if h[(r, j)].abs() < h[(r, b)].abs() {
                                    best = Some(j)
                                }
                            }
                        }
                    }
                }
                let Some(b) = best else { break };
                h.swap_cols(pivot_col, b);
                u.swap_cols(pivot_col, b);
                let mut done = true;
                for j in (pivot_col + 1)..h.cols {
                    if h[(r, j)].is_zero() {
                        continue;
                    }
                    let q = div_round(&h[(r, j)], &h[(r, pivot_col)]);
                    if !q.is_zero() {
                        let negq = -q;
                        h.add_col(j, pivot_col, &negq);
                        u.add_col(j, pivot_col, &negq);
                    }
                    if !h[(r, j)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[(r, pivot_col)].is_zero() {
                continue; // row r has no pivot; move to next row, same pivot_col
            }
            if h[(r, pivot_col)].is_negative() {
                h.negate_col(pivot_col);
                u.negate_col(pivot_col);
            }
            // reduce earlier columns against this pivot
            let p = h[(r, pivot_col)].clone();
            for j in 0..pivot_col {
                let q = h[(r, j)].div_floor(&p);
                if !q.is_zero() {
                    let negq = -q;
                    h.add_col(j, pivot_col, &negq);
                    u.add_col(j, pivot_col, &negq);
                }
            }
            pivot_col += 1;
        }
        (h, u)
    }

    /// Primitive basis of the integer kernel `{ x : self * x = 0 }`,
    /// canonicalized (column Hermite form of the kernel, first nonzero entry
    /// of each basis vector positive).
    pub fn kernel_basis(&self) -> Vec<Vec<Int>> {
        let (h, u) = self.col_hermite();
        let mut kernel_cols: Vec<Vec<Int>> = Vec::new();
        for j in 0..self.cols {
            if (0..self.rows).all(|i| h[(i, j)].is_zero()) {
                kernel_cols.push(u.column(j));
            }
        }
        if kernel_cols.is_empty() {
            return kernel_cols;
        }
        // canonical form: column hermite of the kernel matrix, sign-normalized
        let km = IMat::from_columns(&kernel_cols);
        let (kh, _) = km.col_hermite();
        let mut basis: Vec<Vec<Int>> = Vec::new();
        for j in 0..kh.cols {
            let col = kh.column(j);
            if col.iter().any(|v| !v.is_zero()) {
                basis.push(col);
            }
        }
        for b in &mut basis {
            if let Some(first) = b.iter().find(|v| !v.is_zero()) {
                if first.is_negative() {
                    for v in b.iter_mut() {
                        *v = -v.clone();
                    }
                }
            }
        }
        basis
    }

    /// Elementary divisors (Smith normal form diagonal, nonzero entries only).
    pub fn elementary_divisors(&self) -> Vec<Int> {
        let mut m = self.clone();
        let mut divisors = Vec::new();
        let mut top = 0usize;
        let mut left = 0usize;
        while top < m.rows && left < m.cols {
            // find nonzero entry with minimal |.| in the remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for i in top..m.rows {
                for j in left..m.cols {
                    if !m[(i, j)].is_zero() {
                        match &pivot {
                            None => pivot = Some((i, j)),
                            Some((pi, pj)) => {
                                let (pi, pj) = (*pi, *pj);
                                if m[(i, j)].abs() < m[(pi, pj)].abs() {
                                    pivot = Some((i, j))
                                }
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap_rows(top, pi);
            m.swap_cols(left, pj);
            // clear row and column; restart if a remainder shrinks the pivot
            let mut clean = true;
            for i in (top + 1)..m.rows {
                if !m[(i, left)].is_zero() {
                    let q = div_round(&m[(i, left)], &m[(top, left)]);
                    let negq = -q;
                    m.add_row(i, top, &negq);
                    if !m[(i, left)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in (left + 1)..m.cols {
                if !m[(top, j)].is_zero() {
                    let q = div_round(&m[(top, j)], &m[(top, left)]);
                    let negq = -q;
                    m.add_col(j, left, &negq);
                    if !m[(top, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // ensure divisibility of the rest by the pivot
            let p = m[(top, left)].clone();
            let mut fixed = true;
            'outer: for i in (top + 1)..m.rows {
                for j in (left + 1)..m.cols {
                    if !(&m[(i, j)] % &p).is_zero() {
                        m.add_row(top, i, &Int::one());
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                continue;
            }
            divisors.push(p.abs());
            top += 1;
            left += 1;
        }
        divisors
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = y;
            self[(b, j)] = x;
        }
    }

    /// row_b += k * row_a
    fn add_row(&mut self, b: usize, a: usize, k: &Int) {
        for j in 0..self.cols {
            let t = &self[(a, j)] * k;
            self[(b, j)] += t;
        }
    }

    /// Determinant (square matrices) via fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(swap) = ((k + 1)..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Int::zero();
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = Int::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Round-to-nearest integer division (ties toward zero); keeps Hermite
/// pivots small.
fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    let two_r: Int = &r * Int::from(2);
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Rank of a rational matrix given as rows.
pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < m.len() && col < ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &inv;
                for j in col..ncols {
                    let t = &m[rank][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Solve the square rational system `A x = b` exactly. Returns `None` when
/// `A` is singular.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let t = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Solve a general (possibly non-square) rational system `A x = b`.
/// Returns one solution if consistent, `None` otherwise.
pub fn solve_rat_general(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    if nrows == 0 {
        return Some(Vec::new());
    }
    let ncols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].clone();
        for j in col..=ncols {
            m[rank][j] = &m[rank][j] / &inv;
        }
        for i in 0..nrows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=ncols {
                    let t = &m[rank][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    // consistency
    for i in rank..nrows {
        if !m[i][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for &(r, c) in &pivots {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square rational matrix. `None` when singular.
pub fn invert_rat(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve_rat(a, &e)?);
    }
    // cols[j] is the j-th column of the inverse
    let mut inv = vec![vec![Rat::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            inv[i][j] = v.clone();
        }
    }
    Some(inv)
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * Rat::from_integer(y.clone()))
        .sum()
}

pub fn lcm_int(a: &Int, b: &Int) -> Int {
    if a.is_zero() && b.is_zero() {
        return Int::zero();
    }
    (a * b).abs() / a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_fermat_deformation_toy() {
        // A = [[1,3,0],[2,0,3]]
        let a = IMat::from_rows_i64(&[&[1, 3, 0], &[2, 0, 3]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(3), int(-1), int(-2)]);
        assert!(a.mul_vec(&k[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn kernel_of_nonsingular_is_empty() {
        let a = IMat::from_rows_i64(&[&[3, 0], &[0, 3]]);
        assert!(a.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_is_primitive() {
        // rows chosen so naive elimination could produce a non-primitive vector
        let a = IMat::from_rows_i64(&[&[2, 4, 6]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        // stacked elementary divisors must all be 1 for a primitive basis
        let mut rows: Vec<Vec<Int>> = k.clone();
        let m = IMat::from_rows(std::mem::take(&mut rows));
        let divs = m.elementary_divisors();
        assert!(divs.iter().all(|d| d.is_one()));
    }

    #[test]
    fn smith_divisors() {
        let a = IMat::from_rows_i64(&[&[2, 0], &[0, 4]]);
        let d = a.elementary_divisors();
        assert_eq!(d, vec![int(2), int(4)]);
        let b = IMat::from_rows_i64(&[&[2, 1], &[0, 3]]);
        let d = b.elementary_divisors();
        assert_eq!(d, vec![int(1), int(6)]);
    }

    #[test]
    fn bareiss_det() {
        let a = IMat::from_rows_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(a.det(), int(-3));
        let b = IMat::from_rows_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(b.det(), int(0));
    }

    #[test]
    fn rational_solve_and_invert() {
        let a = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(3), rat_int(5)],
        ];
        let x = solve_rat(&a, &[rat_int(1), rat_int(2)]).unwrap();
        assert_eq!(x, vec![rat_int(-1), rat_int(1)]);
        let inv = invert_rat(&a).unwrap();
        assert_eq!(inv[0][0], rat_int(-5));
        assert_eq!(inv[0][1], rat_int(2));
    }

    #[test]
    fn underdetermined_solve() {
        let a = vec![vec![rat_int(1), rat_int(1), rat_int(1)]];
        let x = solve_rat_general(&a, &[rat_int(3)]).unwrap();
        assert_eq!(dot_rat(&x, &[rat_int(1), rat_int(1), rat_int(1)]), rat_int(3));
        let inconsistent = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(2), rat_int(2)],
        ];
        assert!(solve_rat_general(&inconsistent, &[rat_int(1), rat_int(3)]).is_none());
    }
}
