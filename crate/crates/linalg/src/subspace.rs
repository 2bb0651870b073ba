//! Subspaces, quotients and subquotients of `F^n`.

use crate::field::Field;
use crate::matrix::Matrix;
use crate::LinalgError;

/// A subspace of `F^ambient_dim` given by independent basis columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    /// Span of the columns of `generators` (dependent columns dropped).
    pub fn span(generators: &Matrix<F>) -> Self {
        Subspace {
            ambient_dim: generators.rows(),
            basis: generators.image(),
        }
    }

    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(field, ambient_dim, 0),
        }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.basis.solve_vec(v).is_ok()
    }

    pub fn contains_all(&self, vs: &Matrix<F>) -> bool {
        self.basis.solve(vs).is_ok()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let f = self.basis.field();
        Self::span(&Matrix::hstack(
            f,
            self.ambient_dim,
            &[&self.basis, &other.basis],
        ))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        // x = B a = C b  <=>  [B | -C] (a,b) = 0
        let f = self.basis.field();
        let neg = other.basis.neg();
        let k = Matrix::hstack(f, self.ambient_dim, &[&self.basis, &neg]).kernel();
        let a = k.block(0, 0, self.dim(), k.cols());
        Self::span(&self.basis.mul(&a))
    }
}

/// Kernel, image and cokernel projection of one matrix.
#[derive(Clone, Debug)]
pub struct SubspaceOps<F: Field> {
    pub kernel: Subspace<F>,
    pub image: Subspace<F>,
    pub cokernel_projection: Matrix<F>,
}

pub fn subspace_ops<F: Field>(m: &Matrix<F>) -> SubspaceOps<F> {
    SubspaceOps {
        kernel: Subspace {
            ambient_dim: m.cols(),
            basis: m.kernel(),
        },
        image: Subspace::span(m),
        cokernel_projection: m.cokernel_projection(),
    }
}

/// `F^n / B` with a complement of `B` spanned by standard basis vectors.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    projection: Matrix<F>,
    section: Matrix<F>,
}

impl<F: Field> Quotient<F> {
    pub fn of_image(m: &Matrix<F>) -> Self {
        Self::of_subspace(&Subspace::span(m))
    }

    pub fn of_subspace(sub: &Subspace<F>) -> Self {
        let f = sub.basis.field();
        let n = sub.ambient_dim;
        let b = sub.dim();
        let id = Matrix::identity(f, n);
        let red = Matrix::hstack(f, n, &[&sub.basis, &id]).rref();
        let comp: Vec<usize> = red
            .pivots
            .iter()
            .filter(|&&p| p >= b)
            .map(|&p| p - b)
            .collect();
        let section = id.select_columns(&comp);
        let full = Matrix::hstack(f, n, &[&sub.basis, &section]);
        let inv = full.inverse().expect("basis plus complement is invertible");
        let projection = inv.block(b, 0, n - b, n);
        Quotient {
            projection,
            section,
        }
    }

    /// `(n - b) x n`, annihilates `B`.
    pub fn projection(&self) -> &Matrix<F> {
        &self.projection
    }
    /// `n x (n - b)` with `projection * section = id`.
    pub fn section(&self) -> &Matrix<F> {
        &self.section
    }
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
    /// Map induced on quotients by `op` (which must preserve `B`).
    pub fn induced(&self, op: &Matrix<F>) -> Matrix<F> {
        self.projection.mul(op).mul(&self.section)
    }
}

/// `Z / B` for subspaces `B ⊆ Z ⊆ F^n`, with representatives of a basis.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    ambient_dim: usize,
    reps: Matrix<F>,
    boundaries: Matrix<F>,
    rows: Vec<usize>,
    left_inverse: Matrix<F>,
}

impl<F: Field> Subquotient<F> {
    /// `cycles` and `boundaries` are spanning columns; `B ⊆ Z` is checked.
    pub fn new(cycles: &Matrix<F>, boundaries: &Matrix<F>) -> Result<Self, LinalgError> {
        let f = cycles.field();
        let n = cycles.rows();
        let b = boundaries.image();
        if cycles.solve(&b).is_err() {
            return Err(LinalgError::NotSubspace);
        }
        let red = Matrix::hstack(f, n, &[&b, cycles]).rref();
        let picked: Vec<usize> = red
            .pivots
            .iter()
            .filter(|&&p| p >= b.cols())
            .map(|&p| p - b.cols())
            .collect();
        let reps = cycles.select_columns(&picked);
        let m = Matrix::hstack(f, n, &[&reps, &b]);
        let rows = m.transpose().rref().pivots;
        let left_inverse = m
            .select_rows(&rows)
            .inverse()
            .expect("independent rows of a full-column-rank matrix");
        Ok(Subquotient {
            ambient_dim: n,
            reps,
            boundaries: b,
            rows,
            left_inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    /// Columns are cycle representatives of a basis of `Z / B`.
    pub fn representatives(&self) -> &Matrix<F> {
        &self.reps
    }
    pub fn boundaries(&self) -> &Matrix<F> {
        &self.boundaries
    }

    /// Class of a cycle `v` in the representative basis. `v` must lie in `Z`;
    /// this is verified.
    pub fn coords(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, LinalgError> {
        let f = self.reps.field();
        let picked: Vec<F::Elem> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.left_inverse.mul_vec(&picked);
        let back = Matrix::hstack(f, self.ambient_dim, &[&self.reps, &self.boundaries]).mul_vec(&c);
        if back != v {
            return Err(LinalgError::NotSubspace);
        }
        Ok(c[..self.dim()].to_vec())
    }

    /// Matrix of the map induced by `op` (ambient -> other's ambient), which
    /// must send cycles to cycles and boundaries to boundaries.
    pub fn induced_to(
        &self,
        other: &Subquotient<F>,
        mut op: impl FnMut(&[F::Elem]) -> Vec<F::Elem>,
    ) -> Result<Matrix<F>, LinalgError> {
        let f = self.reps.field();
        let cols: Vec<Vec<F::Elem>> = self
            .reps
            .columns()
            .iter()
            .map(|r| other.coords(&op(r)))
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_columns(f, other.dim(), &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn quotient_projection_and_section() {
        let f = PrimeField::new(101).unwrap();
        let m = Matrix::from_i64(&f, &[&[1], &[1], &[0]]);
        let q = Quotient::of_image(&m);
        assert_eq!(q.dim(), 2);
        assert!(q.projection().mul(&m).is_zero());
        assert!(q.projection().mul(q.section()).is_identity());
    }

    #[test]
    fn intersection_and_sum() {
        let f = PrimeField::new(101).unwrap();
        let a = Subspace::span(&Matrix::from_i64(&f, &[&[1, 0], &[0, 1], &[0, 0]]));
        let b = Subspace::span(&Matrix::from_i64(&f, &[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(a.intersection(&b).dim(), 1);
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn subquotient_coordinates() {
        let f = PrimeField::new(101).unwrap();
        let z = Matrix::from_i64(&f, &[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(&f, &[&[1], &[1], &[0]]);
        let sq = Subquotient::new(&z, &b).unwrap();
        assert_eq!(sq.dim(), 1);
        let c1 = sq.coords(&[1, 0, 0]).unwrap();
        let c2 = sq.coords(&[0, 100, 0]).unwrap();
        assert_eq!(c1, c2);
        assert!(sq.coords(&[0, 0, 1]).is_err());
        let bad = Subquotient::new(&b, &z);
        assert!(bad.is_err());
    }
}
