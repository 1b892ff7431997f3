use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use super::{AlgebraError, Dvr, Ring};

/// Dense row-major matrix over a ring descriptor `R`.
///
/// Zero-row and zero-column shapes are legal; products with them are the
/// evident empty or zero matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Result<Self, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn from_fn(ring: R, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    /// `c` times the identity.
    pub fn scalar(ring: R, n: usize, c: &R::Elem) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { c.clone() } else { ring.zero() })
    }

    pub fn diagonal(ring: R, entries: &[R::Elem]) -> Self {
        let n = entries.len();
        Self::from_fn(ring, n, n, |i, j| if i == j { entries[i].clone() } else { ring.zero() })
    }

    /// Row-major integer literal; panics if `values.len() != rows * cols`.
    pub fn from_ints(ring: R, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "literal has the wrong number of entries");
        Matrix { ring, rows, cols, data: values.iter().map(|&v| ring.from_int(v)).collect() }
    }

    pub fn ring(&self) -> R {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R::Elem) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.ring.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.ring, self.rows)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if r.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    let prod = if r.is_one(a) {
                        b.clone()
                    } else if r.is_one(b) {
                        a.clone()
                    } else {
                        r.mul(a, b)
                    };
                    out.data[idx] = if r.is_zero(&out.data[idx]) { prod } else { r.add(&out.data[idx], &prod) };
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, op: &str, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self, AlgebraError> {
        if self.shape() != other.shape() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot {op} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, "add", |a, b| self.ring.add(a, b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, "subtract", |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| self.ring.neg(a))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map(|a| self.ring.mul(c, a))
    }

    /// Entrywise exact division; `None` if some entry is not divisible by `c`.
    pub fn divide_by(&self, c: &R::Elem) -> Option<Self> {
        let data = self.data.iter().map(|a| self.ring.divide(a, c)).collect::<Option<Vec<_>>>()?;
        Some(Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn map(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Applies `f` entrywise into a matrix over another ring.
    pub fn map_into<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        Matrix { ring: target, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols, "submatrix out of range");
        Self::from_fn(self.ring, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn try_hstack(&self, right: &Self) -> Result<Self, AlgebraError> {
        if self.rows != right.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, right.rows
            )));
        }
        Ok(Self::from_fn(self.ring, self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                right.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn try_vstack(&self, below: &Self) -> Result<Self, AlgebraError> {
        if self.cols != below.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Ok(Matrix { ring: self.ring, rows: self.rows + below.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, right: &Self) -> Self {
        self.try_hstack(right).expect("hstack")
    }

    pub fn vstack(&self, below: &Self) -> Self {
        self.try_vstack(below).expect("vstack")
    }

    /// The block matrix `(a b; c d)`.
    pub fn try_block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, AlgebraError> {
        a.try_hstack(b)?.try_vstack(&c.try_hstack(d)?)
    }

    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        Self::try_block2(a, b, c, d).expect("block shapes")
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let r = self.ring;
        Self::block2(
            self,
            &Self::zeros(r, self.rows, other.cols),
            &Self::zeros(r, other.rows, self.cols),
            other,
        )
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &R::Elem) {
        let r = self.ring;
        for j in 0..self.cols {
            let v = r.mul(c, &self.data[src * self.cols + j]);
            let idx = dst * self.cols + j;
            self.data[idx] = r.add(&self.data[idx], &v);
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &R::Elem) {
        let r = self.ring;
        for i in 0..self.rows {
            let v = r.mul(&self.data[i * self.cols + src], c);
            let idx = i * self.cols + dst;
            self.data[idx] = r.add(&self.data[idx], &v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = self.ring.mul(c, &self.data[idx]);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &R::Elem) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = self.ring.mul(&self.data[idx], c);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is
    /// exact in an integral domain.
    pub fn det(&self) -> Result<R::Elem, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let r = self.ring;
        let n = self.rows;
        let mut a = self.clone();
        let mut sign_negative = false;
        let mut prev = r.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !r.is_zero(a.get(i, k))) else {
                return Ok(r.zero());
            };
            if p != k {
                a.swap_rows(p, k);
                sign_negative = !sign_negative;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = r.sub(&r.mul(a.get(k, k), a.get(i, j)), &r.mul(a.get(i, k), a.get(k, j)));
                    let q = r.divide(&num, &prev).expect("Bareiss division is exact");
                    a.set(i, j, q);
                }
                a.set(i, k, r.zero());
            }
            prev = a.get(k, k).clone();
        }
        let det = if n == 0 { r.one() } else { a.get(n - 1, n - 1).clone() };
        Ok(if sign_negative { r.neg(&det) } else { det })
    }

    /// Exact inverse by Gauss-Jordan elimination with unit pivots. Over a
    /// local ring a square matrix is invertible iff such pivots always exist.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let r = self.ring;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(r, n);
        for k in 0..n {
            let p = (k..n)
                .filter(|&i| r.is_unit(a.get(i, k)))
                .min_by_key(|&i| r.size(a.get(i, k)))
                .ok_or(AlgebraError::NotInvertible)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pivot_inv = r.inverse(a.get(k, k)).expect("unit pivot");
            a.scale_row(k, &pivot_inv);
            inv.scale_row(k, &pivot_inv);
            for i in 0..n {
                if i == k || r.is_zero(a.get(i, k)) {
                    continue;
                }
                let c = r.neg(a.get(i, k));
                a.add_row_multiple(i, k, &c);
                inv.add_row_multiple(i, k, &c);
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    /// JSON form `{rows, cols, entries: [canonical strings]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.data.iter().map(|a| self.ring.format(a)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(ring: R, value: &Value) -> Result<Self, AlgebraError> {
        let parse_err = |reason: &str| AlgebraError::Parse { input: value.to_string(), reason: reason.into() };
        let dim = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| parse_err(&format!("missing `{key}`")))
        };
        let rows = dim("rows")?;
        let cols = dim("cols")?;
        let entries = value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("missing `entries`"))?;
        let data = entries
            .iter()
            .map(|e| match e {
                Value::String(s) => ring.parse(s),
                Value::Number(n) => ring.parse(&n.to_string()),
                _ => Err(parse_err("entries must be strings or integers")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::new(ring, rows, cols, data)
    }
}

impl<R: Dvr> Matrix<R> {
    /// Entrywise reduction modulo the uniformizer.
    pub fn residue(&self) -> Matrix<R::Residue> {
        self.map_into(self.ring.residue_field(), |a| self.ring.residue(a))
    }

    /// Entrywise canonical lift of a residue-field matrix.
    pub fn lift(ring: R, m: &Matrix<R::Residue>) -> Matrix<R> {
        m.map_into(ring, |a| ring.lift(a))
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.ring.format(self.get(i, j)))?;
            }
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &Matrix<R>) -> Matrix<R> {
        self.try_mul(rhs).expect("matrix product shape")
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: &Matrix<R>) -> Matrix<R> {
        self.try_add(rhs).expect("matrix sum shape")
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: &Matrix<R>) -> Matrix<R> {
        self.try_sub(rhs).expect("matrix difference shape")
    }
}

impl<R: Ring> Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        Matrix::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{QtLocal, ZLocal};

    fn z5() -> ZLocal {
        ZLocal::new(5).unwrap()
    }

    #[test]
    fn identity_inverts_to_itself() {
        let e = Matrix::identity(z5(), 3);
        assert_eq!(e.inverse().unwrap(), e);
        assert_eq!(e.det().unwrap(), z5().one());
    }

    #[test]
    fn determinant_with_positive_valuation_is_not_invertible() {
        let r = z5();
        let m = Matrix::from_ints(r, 2, 2, &[2, 1, 1, 3]);
        assert_eq!(m.det().unwrap(), r.from_int(5));
        assert_eq!(m.inverse(), Err(AlgebraError::NotInvertible));
    }

    #[test]
    fn unipotent_inverse() {
        let r = z5();
        let m = Matrix::from_ints(r, 2, 2, &[1, 5, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_ints(r, 2, 2, &[1, -5, 0, 1]));
        assert!((&m * &inv).is_identity());
    }

    #[test]
    fn determinant_needs_row_swaps() {
        let r = z5();
        let m = Matrix::from_ints(r, 3, 3, &[0, 2, 1, 3, 0, 4, 1, 1, 0]);
        // Cofactor expansion along the first row: -2*(0-4) + 1*(3-0) = 11.
        assert_eq!(m.det().unwrap(), r.from_int(11));
        let inv = m.inverse().unwrap();
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn empty_shapes() {
        let r = z5();
        let a = Matrix::zeros(r, 0, 3);
        let b = Matrix::zeros(r, 3, 2);
        assert_eq!(&a * &b, Matrix::zeros(r, 0, 2));
        let c = Matrix::zeros(r, 2, 0);
        let d = Matrix::zeros(r, 0, 4);
        assert_eq!(&c * &d, Matrix::zeros(r, 2, 4));
        assert_eq!(Matrix::zeros(r, 0, 0).det().unwrap(), r.one());
        assert_eq!(Matrix::zeros(r, 0, 0).inverse().unwrap(), Matrix::identity(r, 0));
    }

    #[test]
    fn blocks_and_transpose() {
        let r = z5();
        let a = Matrix::from_ints(r, 1, 1, &[1]);
        let b = Matrix::from_ints(r, 1, 2, &[2, 3]);
        let c = Matrix::from_ints(r, 1, 1, &[4]);
        let d = Matrix::from_ints(r, 1, 2, &[5, 6]);
        let m = Matrix::block2(&a, &b, &c, &d);
        assert_eq!(m, Matrix::from_ints(r, 2, 3, &[1, 2, 3, 4, 5, 6]));
        assert_eq!(m.submatrix(0, 2, 1, 3), b.vstack(&d));
        assert_eq!(m.transpose().transpose(), m);
        assert!(Matrix::try_block2(&a, &b, &d, &d).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = QtLocal;
        let m = Matrix::new(r, 1, 2, vec![r.parse("1 + t").unwrap(), r.parse("(t)/(2 + t)").unwrap()]).unwrap();
        let v = m.to_json();
        assert_eq!(Matrix::from_json(r, &v).unwrap(), m);
        let z = z5();
        let v = serde_json::json!({"rows": 1, "cols": 2, "entries": ["1/2", 5]});
        assert_eq!(Matrix::from_json(z, &v).unwrap().get(0, 1), &z.from_int(5));
    }

    #[test]
    fn residue_and_lift() {
        let r = z5();
        let m = Matrix::from_ints(r, 2, 2, &[7, 5, -1, 1]);
        let k = m.residue();
        assert_eq!(k.entries(), &[2, 0, 4, 1]);
        assert_eq!(Matrix::lift(r, &k).residue(), k);
    }
}
