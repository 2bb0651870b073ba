use proptest::prelude::*;
use qshape_linalg::{Field, Matrix, PrimeField, Quotient};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f101() -> PrimeField {
    PrimeField::new(101).unwrap()
}

/// Random matrix with a controlled number of nonzero entries, so that rank
/// deficiency actually occurs.
fn sparse(rows: usize, cols: usize, seed: u64, density: u32) -> Matrix<PrimeField> {
    let f = f101();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(&f, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rand::Rng::gen_ratio(&mut rng, density, 10) {
                m.set(i, j, f.random(&mut rng));
            }
        }
    }
    m
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(r in 0usize..7, c in 0usize..7, seed: u64, d in 1u32..10) {
        let m = sparse(r, c, seed, d);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank(), m.rref().matrix.rank());
    }

    #[test]
    fn kernel_is_annihilated(r in 0usize..7, c in 0usize..7, seed: u64, d in 1u32..10) {
        let m = sparse(r, c, seed, d);
        let k = m.kernel();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols() + m.rank(), c);
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn cokernel_projection_has_right_rank(r in 0usize..7, c in 0usize..7, seed: u64, d in 1u32..10) {
        let m = sparse(r, c, seed, d);
        let q = Quotient::of_image(&m);
        prop_assert!(q.projection().mul(&m).is_zero());
        prop_assert_eq!(q.projection().rank(), r - m.rank());
        prop_assert!(q.projection().mul(q.section()).is_identity());
    }

    #[test]
    fn kron_rank_is_multiplicative(seed: u64, d in 1u32..10) {
        let a = sparse(3, 4, seed, d);
        let b = sparse(2, 3, seed.wrapping_add(1), d);
        prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
    }

    #[test]
    fn solve_returns_exact_solutions(seed: u64, d in 1u32..10) {
        let a = sparse(4, 5, seed, d);
        let x0 = sparse(5, 2, seed ^ 7, 5);
        let b = a.mul(&x0);
        let x = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul(&x), b);
    }

    #[test]
    fn rref_is_deterministic(seed: u64) {
        let m = sparse(5, 5, seed, 6);
        let (a, b) = (m.rref(), m.rref());
        prop_assert_eq!(a.matrix, b.matrix);
        prop_assert_eq!(a.pivots, b.pivots);
    }
}
