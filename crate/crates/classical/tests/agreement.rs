use std::sync::Arc;

use proptest::prelude::*;
use qshape_classical::{
    cohomology, homotopy_class_dim, is_quasi_iso, to_qmod, translate, translate_map,
};
use qshape_core::algebra::Algebra;
use qshape_core::cohomology::{hh, GSpec};
use qshape_core::exact::ExactStructure;
use qshape_core::oracles::stable_hom_split;
use qshape_core::qmod::QMod;
use qshape_core::random::{random_complex, random_quasi_iso, rng};
use qshape_core::shape::{build_kcategory, mesh_generator, KCategory, MeshFamily};
use qshape_core::PrimeField;
use rand::RngCore;

type F = PrimeField;

fn window(order: usize) -> Arc<KCategory<F>> {
    let family = if order == 2 {
        MeshFamily::ComplexShape
    } else {
        MeshFamily::NComplex(order)
    };
    build_kcategory(
        &mesh_generator(family, -2, 7).unwrap(),
        &PrimeField::new(101).unwrap(),
    )
    .unwrap()
}

fn algebra(which: usize) -> Arc<Algebra<F>> {
    let f = PrimeField::new(101).unwrap();
    Arc::new(match which % 3 {
        0 => Algebra::ground(&f),
        1 => Algebra::dual_numbers(&f),
        _ => Algebra::path_a2(&f),
    })
}

fn sample(order: usize, alg: &Arc<Algebra<F>>, r: &mut dyn RngCore) -> QMod<F> {
    random_complex(&window(order), alg, 0, 3, r, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_round_trips(seed in any::<u64>(), a in 0usize..3, order in 2usize..5) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let x = sample(order, &alg, &mut r);
        let c = translate(&x).unwrap();
        c.validate().unwrap();
        prop_assert_eq!(c.order, order);
        let back = to_qmod(&c, x.shape(), &alg).unwrap();
        prop_assert_eq!(translate(&back).unwrap(), c);
    }

    #[test]
    fn stalk_cohomology_is_shifted_classical_cohomology(seed in any::<u64>(), a in 0usize..3, q in -1i64..4) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let x = sample(2, &alg, &mut r);
        let g = GSpec::Stalk { test: alg.regular(), object: q.to_string() };
        let engine = hh(&g, &ExactStructure::Abelian, 0, 1, &x).unwrap().value.dim();
        prop_assert_eq!(engine, cohomology(&translate(&x).unwrap(), q + 1).dim);
    }

    #[test]
    fn homotopy_classes_match(seed in any::<u64>(), a in 0usize..3, order in 2usize..4) {
        let mut r = rng(seed);
        let alg = algebra(a);
        let (x, y) = (sample(order, &alg, &mut r), sample(order, &alg, &mut r));
        let engine = stable_hom_split(&x, &y).unwrap().quotient_dim();
        prop_assert_eq!(engine, homotopy_class_dim(&translate(&x).unwrap(), &translate(&y).unwrap()));
    }

    #[test]
    fn sampled_quasi_isos_are_classical_quasi_isos(seed in any::<u64>(), a in 0usize..3, order in 2usize..4) {
        let mut r = rng(seed);
        let x = sample(order, &algebra(a), &mut r);
        let phi = random_quasi_iso(&x, 0, 3, &mut r).unwrap();
        prop_assert!(is_quasi_iso(&translate_map(&phi).unwrap()));
    }
}
