//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) and
//! rationals ([`BigRational`]). Matrices are dense and stored row-major; the
//! sizes this crate deals with are small (compound matrices of a 12×12 input
//! top out at 924×924), so no attempt is made at sparse storage or fast
//! multiplication.

use std::fmt;
use std::ops::Mul;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Fails when `entries.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Convenience constructor from small integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged matrix rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product. Panics on a length mismatch.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix columns");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(bareiss_determinant(self.rows, self.entries.clone()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Submatrix on the given (sorted or not) row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(IntMatrix::rows).sum();
        let cols = blocks.iter().map(IntMatrix::cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    /// Reduces every entry into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x.mod_floor(m)).collect() }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{}]", self.row(i).iter().join(","))?;
        }
        write!(f, "]")
    }
}

fn bareiss_determinant(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = pivot;
    }
    sign * a[n * n - 1].clone()
}

/// A dense matrix of rationals, each entry kept in lowest terms with a
/// positive denominator (guaranteed by [`BigRational`]).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rational()
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(BigRational::is_integer)
    }

    /// The integer matrix with the same entries, if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(BigRational::to_integer).collect(),
        })
    }

    pub fn checked_mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix columns");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det *= &pivot;
            for i in k + 1..n {
                let factor = &a[i * n + k] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = &factor * &a[k * n + j];
                    a[i * n + j] -= v;
                }
            }
        }
        Ok(det)
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{}]", self.row(i).iter().join(","))?;
        }
        write!(f, "]")
    }
}

/// Exact inverse by Gauss–Jordan elimination.
pub fn rational_inverse(a: &RatMatrix) -> Result<RatMatrix> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch(format!("inverse of a non-square {}x{} matrix", a.rows, a.cols)));
    }
    let n = a.rows;
    let mut m = a.entries.clone();
    let mut inv = RatMatrix::identity(n).entries;
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i * n + k].is_zero()).ok_or(Error::SingularMatrix)?;
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
                inv.swap(k * n + j, p * n + j);
            }
        }
        let pivot = m[k * n + k].clone();
        for j in 0..n {
            m[k * n + j] /= &pivot;
            inv[k * n + j] /= &pivot;
        }
        for i in 0..n {
            if i == k || m[i * n + k].is_zero() {
                continue;
            }
            let factor = m[i * n + k].clone();
            for j in 0..n {
                let (a1, b1) = (&factor * &m[k * n + j], &factor * &inv[k * n + j]);
                m[i * n + j] -= a1;
                inv[i * n + j] -= b1;
            }
        }
    }
    Ok(RatMatrix { rows: n, cols: n, entries: inv })
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal of `D` (length `min(rows, cols)`), nonnegative and forming a divisibility chain.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with transforms.
///
/// The nonzero diagonal of `D` is canonical; `U` and `V` are whatever the
/// elimination produced.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        // smallest nonzero entry in the trailing block becomes the pivot
        let pivot = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !d.get(i, j).is_zero())
            .min_by(|&(i1, j1), &(i2, j2)| d.get(i1, j1).abs().cmp(&d.get(i2, j2).abs()));
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        loop {
            for i in t + 1..m {
                if let Some(bezout) = bezout_step(d.get(t, t), d.get(i, t)) {
                    combine_rows(&mut d, &mut u, t, i, &bezout);
                }
            }
            for j in t + 1..n {
                if let Some(bezout) = bezout_step(d.get(t, t), d.get(t, j)) {
                    combine_cols(&mut d, &mut v, t, j, &bezout);
                }
            }
            if (t + 1..m).any(|i| !d.get(i, t).is_zero()) {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(d.get(t, t)));
            match offender {
                Some((i, _)) => add_row_multiple(&mut d, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, &mut u, t);
        }
    }
    SmithForm { u, d, v }
}

/// A unimodular `[[x, y], [z, w]]` sending `(a, b)` to `(gcd, 0)`, or `None`
/// when `b` is already zero.
fn bezout_step(a: &BigInt, b: &BigInt) -> Option<[BigInt; 4]> {
    if b.is_zero() {
        return None;
    }
    if b.is_multiple_of(a) {
        return Some([BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()]);
    }
    let eg = a.extended_gcd(b);
    Some([eg.x, eg.y, -(b / &eg.gcd), a / &eg.gcd])
}

/// `(row s, row r) ← (x·s + y·r, z·s + w·r)`
fn combine_rows(d: &mut IntMatrix, u: &mut IntMatrix, s: usize, r: usize, [x, y, z, w]: &[BigInt; 4]) {
    for m in [d, u] {
        for j in 0..m.cols {
            let (a, b) = (m.get(s, j).clone(), m.get(r, j).clone());
            m.entries[s * m.cols + j] = x * &a + y * &b;
            m.entries[r * m.cols + j] = z * &a + w * &b;
        }
    }
}

/// `(col s, col c) ← (x·s + y·c, z·s + w·c)`
fn combine_cols(d: &mut IntMatrix, v: &mut IntMatrix, s: usize, c: usize, [x, y, z, w]: &[BigInt; 4]) {
    for m in [d, v] {
        for i in 0..m.rows {
            let (a, b) = (m.get(i, s).clone(), m.get(i, c).clone());
            m.entries[i * m.cols + s] = x * &a + y * &b;
            m.entries[i * m.cols + c] = z * &a + w * &b;
        }
    }
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        d.entries.swap(a * d.cols + j, b * d.cols + j);
    }
    for j in 0..u.cols {
        u.entries.swap(a * u.cols + j, b * u.cols + j);
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        d.entries.swap(i * d.cols + a, i * d.cols + b);
    }
    for i in 0..v.rows {
        v.entries.swap(i * v.cols + a, i * v.cols + b);
    }
}

/// row[target] += factor * row[source]
fn add_row_multiple(d: &mut IntMatrix, u: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for m in [d, u] {
        for j in 0..m.cols {
            let delta = factor * m.get(source, j);
            m.entries[target * m.cols + j] += delta;
        }
    }
}

fn negate_row(d: &mut IntMatrix, u: &mut IntMatrix, r: usize) {
    for m in [d, u] {
        for j in 0..m.cols {
            let idx = r * m.cols + j;
            m.entries[idx] = -std::mem::take(&mut m.entries[idx]);
        }
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
///
/// This fixes the basis `e_{i1} ∧ … ∧ e_{ik}` of the `k`-th exterior power
/// used by [`compound_matrix`].
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The `k`-th compound matrix: entry `(S, T)` is the minor `det A[S, T]`,
/// with row and column subsets in lexicographic order.
pub fn compound_matrix(a: &IntMatrix, k: usize) -> Result<IntMatrix> {
    if k > a.rows.min(a.cols) {
        return Err(Error::OrderOutOfRange { k, rows: a.rows, cols: a.cols });
    }
    let row_sets = index_subsets(a.rows, k);
    let col_sets = index_subsets(a.cols, k);
    let mut out = IntMatrix::zeros(row_sets.len(), col_sets.len());
    for (i, rs) in row_sets.iter().enumerate() {
        for (j, cs) in col_sets.iter().enumerate() {
            let minor = bareiss_determinant(k, a.submatrix(rs, cs).entries);
            out.set(i, j, minor);
        }
    }
    Ok(out)
}
