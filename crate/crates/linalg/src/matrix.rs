//! Dense row-major matrices over a [`Field`].
//!
//! Maps act on column vectors: a map `V -> W` is a `dim W x dim V` matrix and
//! `g ∘ f` is `g.mul(&f)`.

use rand::RngCore;

use crate::field::Field;
use crate::LinalgError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Tensor,
    DirectSum,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_data(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::from_data(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    /// A single column.
    pub fn column_vector(field: &F, v: Vec<F::Elem>) -> Self {
        let n = v.len();
        Self::from_data(field, n, 1, v)
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &F, rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn random(field: &F, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self::from_data(field, rows, cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in product {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    if !f.is_zero(b) {
                        f.add_mul(d, a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        f.add_mul(&mut acc, a, b);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| op(a, b))
            .collect();
        Self::from_data(&self.field, self.rows, self.cols, data)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }
    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self::from_data(&self.field, self.rows, self.cols, data)
    }
    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.field.neg(a)).collect();
        Self::from_data(&self.field, self.rows, self.cols, data)
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &F::Elem, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.field.is_zero(c) {
            return;
        }
        for (d, b) in self.data.iter_mut().zip(&other.data) {
            if !self.field.is_zero(b) {
                self.field.add_mul(d, c, b);
            }
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(&self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self.data[i * self.cols + j];
                if self.field.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] =
                            self.field.mul(a, &other.data[k * other.cols + l]);
                    }
                }
            }
        }
        out
    }

    pub fn dsum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn combine(&self, other: &Self, mode: Combine) -> Self {
        match mode {
            Combine::Tensor => self.kron(other),
            Combine::DirectSum => self.dsum(other),
        }
    }

    /// Block diagonal matrix.
    pub fn block_diag(field: &F, blocks: &[Self]) -> Self {
        let r = blocks.iter().map(|b| b.rows).sum();
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            out.paste(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        out
    }

    /// Writes `block` with its top-left corner at `(i, j)`.
    pub fn paste(&mut self, i: usize, j: usize, block: &Self) {
        assert!(i + block.rows <= self.rows && j + block.cols <= self.cols);
        for a in 0..block.rows {
            for b in 0..block.cols {
                self.data[(i + a) * self.cols + j + b] = block.data[a * block.cols + b].clone();
            }
        }
    }

    pub fn block(&self, i: usize, j: usize, rows: usize, cols: usize) -> Self {
        assert!(i + rows <= self.rows && j + cols <= self.cols);
        let mut out = Self::zeros(&self.field, rows, cols);
        for a in 0..rows {
            for b in 0..cols {
                out.data[a * cols + b] = self.data[(i + a) * self.cols + j + b].clone();
            }
        }
        out
    }

    pub fn hstack(field: &F, rows: usize, parts: &[&Self]) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut j = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.paste(0, j, p);
            j += p.cols;
        }
        out
    }

    pub fn vstack(field: &F, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut i = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.paste(i, 0, p);
            i += p.rows;
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, idx.len());
        for (b, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.data[i * idx.len() + b] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self::from_data(&self.field, idx.len(), self.cols, data)
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(&m.data[i * m.cols + c])) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(&m.data[r * m.cols + c]).expect("nonzero pivot");
            for x in &mut m.data[r * m.cols..(r + 1) * m.cols] {
                *x = f.mul(x, &inv);
            }
            let pivot_row: Vec<F::Elem> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.data[i * m.cols + c].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let neg = f.neg(&factor);
                let row = &mut m.data[i * m.cols..(i + 1) * m.cols];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !f.is_zero(p) {
                        f.add_mul(x, &neg, p);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Columns form a basis of the null space, one per free column.
    pub fn kernel(&self) -> Self {
        let f = &self.field;
        let red = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (b, &fc) in free.iter().enumerate() {
            out.data[fc * free.len() + b] = f.one();
            for (i, &pc) in red.pivots.iter().enumerate() {
                out.data[pc * free.len() + b] = f.neg(red.matrix.get(i, fc));
            }
        }
        out
    }

    /// A column basis of the image, taken from the pivot columns.
    pub fn image(&self) -> Self {
        let red = self.rref();
        self.select_columns(&red.pivots)
    }

    /// Projection onto a complement of the image spanned by standard basis
    /// vectors; rows = `rows - rank`, annihilates the image.
    pub fn cokernel_projection(&self) -> Self {
        crate::subspace::Quotient::of_image(self)
            .projection()
            .clone()
    }

    /// Some `x` with `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &Self) -> Result<Self, LinalgError> {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let f = &self.field;
        let aug = Self::hstack(f, self.rows, &[self, b]);
        let red = aug.rref();
        if red.pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::NoSolution);
        }
        let mut x = Self::zeros(f, self.cols, b.cols);
        for (i, &pc) in red.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = red.matrix.get(i, self.cols + j).clone();
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[F::Elem]) -> Result<Vec<F::Elem>, LinalgError> {
        let bm = Self::column_vector(&self.field, b.to_vec());
        Ok(self.solve(&bm)?.column(0))
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotInvertible);
        }
        let id = Self::identity(&self.field, self.rows);
        match self.solve(&id) {
            Ok(x) if self.rank() == self.rows => Ok(x),
            _ => Err(LinalgError::NotInvertible),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let f = f101();
        let id = Matrix::identity(&f, 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn rref_rational_rank_one() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::from_i64(&q, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn rref_of_zero() {
        let f = f101();
        let z = Matrix::zeros(&f, 3, 3);
        let r = z.rref();
        assert!(r.matrix.is_zero());
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn kernel_image_cokernel_examples() {
        let f = f101();
        let m = Matrix::from_i64(&f, &[&[1, 0], &[0, 0]]);
        assert_eq!(m.kernel(), Matrix::from_i64(&f, &[&[0], &[1]]));
        assert_eq!(m.image(), Matrix::from_i64(&f, &[&[1], &[0]]));

        let inj = Matrix::from_i64(&f, &[&[1], &[1]]);
        assert_eq!(inj.kernel().cols(), 0);
        let p = inj.cokernel_projection();
        assert_eq!(p.rows(), 1);
        assert!(p.mul(&inj).is_zero());

        let id = Matrix::identity(&f, 3);
        assert_eq!(id.kernel().cols(), 0);
        assert_eq!(id.cokernel_projection().rows(), 0);
    }

    #[test]
    fn solve_examples() {
        let f = f101();
        let id = Matrix::identity(&f, 2);
        let b = Matrix::from_i64(&f, &[&[5], &[7]]);
        assert_eq!(id.solve(&b).unwrap(), b);

        let row = Matrix::from_i64(&f, &[&[1, 1]]);
        let x = row.solve_vec(&[1]).unwrap();
        assert_eq!(f.add(&x[0], &x[1]), 1);

        let z = Matrix::from_i64(&f, &[&[0]]);
        assert_eq!(z.solve_vec(&[1]), Err(LinalgError::NoSolution));
    }

    #[test]
    fn kron_and_direct_sum() {
        let f = f101();
        let i6 = Matrix::identity(&f, 2).kron(&Matrix::identity(&f, 3));
        assert_eq!(i6, Matrix::identity(&f, 6));

        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[2]]);
        let b = Matrix::from_i64(&q, &[&[0, 1], &[1, 0]]);
        assert_eq!(
            a.combine(&b, Combine::Tensor),
            Matrix::from_i64(&q, &[&[0, 2], &[2, 0]])
        );

        let d = Matrix::identity(&f, 1).combine(&Matrix::zeros(&f, 1, 1), Combine::DirectSum);
        assert_eq!(d, Matrix::from_i64(&f, &[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f101();
        let m = Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let s = Matrix::from_i64(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(LinalgError::NotInvertible));
    }
}
