use std::sync::Arc;

use proptest::prelude::*;
use qshape_core::algebra::Algebra;
use qshape_core::cohomology::{hh, hh_relres, GSpec};
use qshape_core::exact::{is_conflation, is_relative_projective, relative_cover, ExactStructure};
use qshape_core::oracles::{is_trivial, is_weq, stable_hom_split, TrivialMode};
use qshape_core::qmod::{hom_qa, QMod};
use qshape_core::random::{
    disc, random_complex, random_hom_qa, random_quasi_iso, random_short_exact, rng,
};
use qshape_core::shape::{build_kcategory, mesh_generator, KCategory, MeshFamily};
use qshape_core::{Field, PrimeField};
use rand::RngCore;

type F = PrimeField;

fn fld() -> F {
    PrimeField::new(101).unwrap()
}

fn window(family: MeshFamily, lo: i64, hi: i64) -> Arc<KCategory<F>> {
    build_kcategory(&mesh_generator(family, lo, hi).unwrap(), &fld()).unwrap()
}

fn algebra(which: usize) -> Arc<Algebra<F>> {
    let f = fld();
    Arc::new(match which % 3 {
        0 => Algebra::ground(&f),
        1 => Algebra::dual_numbers(&f),
        _ => Algebra::path_a2(&f),
    })
}

/// A small complex (or 3-complex when `three`) supported in 0..=3.
fn sample(three: bool, alg: &Arc<Algebra<F>>, r: &mut dyn RngCore) -> QMod<F> {
    let shape = if three {
        window(MeshFamily::NComplex(3), -2, 7)
    } else {
        window(MeshFamily::ComplexShape, -2, 6)
    };
    random_complex(&shape, alg, 0, 3, r, 2).unwrap()
}

fn structures() -> [ExactStructure<F>; 2] {
    [ExactStructure::Abelian, ExactStructure::Split]
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn relative_cover_is_a_deflation_from_a_projective(seed in any::<u64>(), a in 0usize..3, three in any::<bool>()) {
        let mut r = rng(seed);
        let x = sample(three, &algebra(a), &mut r);
        for e in structures() {
            let phi = relative_cover(&x, &e).unwrap();
            for q in 0..x.shape().num_objects() {
                prop_assert_eq!(phi.component(q).rank(), x.dim(q));
            }
            prop_assert!(is_relative_projective(phi.source(), &e).unwrap());
        }
    }

    #[test]
    fn hom_is_additive(seed in any::<u64>(), a in 0usize..3) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let (x, y, z) = (sample(false, &alg, &mut r), sample(false, &alg, &mut r), sample(false, &alg, &mut r));
        let sum = QMod::direct_sum(&[&x, &y]).unwrap().module;
        let whole = hom_qa(&sum, &z).unwrap().dim();
        prop_assert_eq!(whole, hom_qa(&x, &z).unwrap().dim() + hom_qa(&y, &z).unwrap().dim());
        let whole = hom_qa(&z, &sum).unwrap().dim();
        prop_assert_eq!(whole, hom_qa(&z, &x).unwrap().dim() + hom_qa(&z, &y).unwrap().dim());
    }

    #[test]
    fn cohomology_is_additive(seed in any::<u64>(), a in 0usize..2, q in 0i64..4) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let (x, y) = (sample(false, &alg, &mut r), sample(false, &alg, &mut r));
        let sum = QMod::direct_sum(&[&x, &y]).unwrap().module;
        let g = GSpec::Stalk { test: alg.regular(), object: q.to_string() };
        let e = ExactStructure::Abelian;
        let dim = |m: &QMod<F>| hh(&g, &e, 0, 1, m).unwrap().value.dim();
        prop_assert_eq!(dim(&sum), dim(&x) + dim(&y));
    }

    #[test]
    fn complete_and_relative_resolutions_agree(
        seed in any::<u64>(), a in 0usize..3, three in any::<bool>(), q in 0i64..4, n in -1i64..2, i in 1usize..3,
    ) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let x = sample(three, &alg, &mut r);
        for e in structures() {
            let g = GSpec::Stalk { test: alg.regular(), object: q.to_string() };
            let tac = hh(&g, &e, n, i, &x).unwrap().value.dim();
            let relres = hh_relres(&g, &e, n, i, &x).unwrap().value.dim();
            prop_assert_eq!(tac, relres, "structure {:?}", e.kind());
        }
    }

    #[test]
    fn discs_are_trivial(seed in any::<u64>(), a in 0usize..3, start in 0i64..4) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let shape = window(MeshFamily::ComplexShape, -2, 6);
        let m = qshape_core::random::random_module(&alg, &mut r, 2);
        let d = disc(&shape, &alg, start, &m).unwrap();
        let v = is_trivial(&d, &ExactStructure::Abelian, &[alg.regular()], TrivialMode::N0).unwrap();
        prop_assert!(v.verdict);
        prop_assert!(v.witnesses.is_empty());
    }

    #[test]
    fn weak_equivalences_compose(seed in any::<u64>(), a in 0usize..3) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let x = sample(false, &alg, &mut r);
        let e = ExactStructure::Abelian;
        let t = [alg.regular()];
        let phi = random_quasi_iso(&x, 0, 3, &mut r).unwrap();
        // The sampler returns an inclusion X -> X ⊕ D or a retraction onto X;
        // keep drawing until the source is phi's target so the two compose.
        let psi = loop {
            let psi = random_quasi_iso(phi.target(), 0, 3, &mut r).unwrap();
            if psi.source().dims() == phi.target().dims() {
                break psi;
            }
        };
        prop_assert!(is_weq(&phi, &e, &t).unwrap().verdict);
        prop_assert!(is_weq(&psi, &e, &t).unwrap().verdict);
        prop_assert!(is_weq(&psi.compose(&phi), &e, &t).unwrap().verdict);
    }

    #[test]
    fn null_homotopic_maps_form_an_ideal(seed in any::<u64>(), a in 0usize..3) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let (x, y) = (sample(false, &alg, &mut r), sample(false, &alg, &mut r));
        let st = stable_hom_split(&x, &y).unwrap();
        let f = x.field().clone();
        let coeffs: Vec<_> = (0..st.ideal_dim()).map(|_| f.random(&mut r)).collect();
        let null = st.hom.from_vector(&st.hom.basis().mul_vec(&st.ideal.mul_vec(&coeffs)));
        prop_assert!(st.in_ideal(&null).unwrap());
        let (xs, ys) = (st.hom.source(), st.hom.target());
        let pre = random_hom_qa(xs, xs, &mut r).unwrap();
        let post = random_hom_qa(ys, ys, &mut r).unwrap();
        prop_assert!(st.in_ideal(&post.compose(&null).compose(&pre)).unwrap());
    }

    #[test]
    fn short_exact_sequences_are_abelian_conflations(seed in any::<u64>(), a in 0usize..3) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let (x, y) = (sample(false, &alg, &mut r), sample(false, &alg, &mut r));
        let (iota, pi) = random_short_exact(&x, &y, &mut r).unwrap();
        prop_assert!(is_conflation(&iota, &pi, &ExactStructure::Abelian).unwrap());
    }
}

#[test]
fn ground_field_short_exact_sequences_split() {
    // Over k every exact sequence of vector spaces splits objectwise.
    let mut r = rng(7);
    let alg = algebra(0);
    for _ in 0..20 {
        let (x, y) = (sample(false, &alg, &mut r), sample(false, &alg, &mut r));
        let (iota, pi) = random_short_exact(&x, &y, &mut r).unwrap();
        assert!(is_conflation(&iota, &pi, &ExactStructure::Split).unwrap());
    }
}
