//! The adjoint triple `F_q ⊣ E_q ⊣ G_q`, stalk functors `C_q ⊣ S_q ⊣ K_q`,
//! and the global functors 𝔽, 𝔾, 𝕂, ℂ with their canonical sequences.
//!
//! Layouts: `F_q(M)(p) = Q(q,p) ⊗ M` stores `b ⊗ m` at `b·dim M + m`;
//! `G_q(M)(p) = Hom_k(Q(p,q), M)` stores `f` as the stack of `f(b_j)`.

use std::sync::Arc;

use qshape_linalg::{Field, Matrix};
use serde::Serialize;

use crate::algebra::{find_invertible_combination, hom_a, split_surjection, AModule, Algebra};
use crate::qmod::{cokernel, hom_qa, kernel, QMod, QModMap};
use crate::room::check_room;
use crate::shape::KCategory;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Induce {
    F,
    G,
    S,
}

pub fn induce<F: Field>(
    kind: Induce,
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    q: usize,
    m: &AModule<F>,
) -> Result<QMod<F>, Error> {
    match kind {
        Induce::F => induce_f(shape, alg, q, m),
        Induce::G => induce_g(shape, alg, q, m),
        Induce::S => induce_s(shape, alg, q, m),
    }
}

pub fn induce_f<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    q: usize,
    m: &AModule<F>,
) -> Result<QMod<F>, Error> {
    let f = shape.field();
    let n = shape.num_objects();
    let values = (0..n).map(|p| m.power(shape.hom_dim(q, p))).collect();
    let arrows = (0..shape.arrows().len())
        .map(|a| {
            shape
                .post_compose_arrow(q, a)
                .kron(&Matrix::identity(f, m.dim()))
        })
        .collect();
    let x = QMod::new(shape.clone(), alg.clone(), values, arrows)?;
    check_room(&x)?;
    Ok(x)
}

pub fn induce_g<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    q: usize,
    m: &AModule<F>,
) -> Result<QMod<F>, Error> {
    let f = shape.field();
    let n = shape.num_objects();
    let values = (0..n).map(|p| m.power(shape.hom_dim(p, q))).collect();
    let arrows = (0..shape.arrows().len())
        .map(|a| {
            shape
                .pre_compose_arrow(a, q)
                .transpose()
                .kron(&Matrix::identity(f, m.dim()))
        })
        .collect();
    let x = QMod::new(shape.clone(), alg.clone(), values, arrows)?;
    check_room(&x)?;
    Ok(x)
}

pub fn induce_s<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    q: usize,
    m: &AModule<F>,
) -> Result<QMod<F>, Error> {
    let x = QMod::from_sparse(shape.clone(), alg.clone(), vec![(q, m.clone())], vec![])?;
    check_room(&x)?;
    Ok(x)
}

/// Counit `F_q(X(q)) -> X`, `b ⊗ x ↦ X(b) x`.
pub fn counit_f<F: Field>(x: &QMod<F>, q: usize) -> Result<QModMap<F>, Error> {
    let c = x.shape();
    let fq = induce_f(c, x.algebra(), q, x.value(q))?;
    let comps = (0..c.num_objects())
        .map(|p| {
            let blocks: Vec<Matrix<F>> = (0..c.hom_dim(q, p))
                .map(|b| x.basis_action(q, p, b))
                .collect();
            let refs: Vec<&Matrix<F>> = blocks.iter().collect();
            Matrix::hstack(x.field(), x.dim(p), &refs)
        })
        .collect();
    Ok(QModMap::new_unchecked(fq, x.clone(), comps))
}

/// Unit `X -> G_q(X(q))`, `x ↦ (b ↦ X(b) x)`.
pub fn unit_g<F: Field>(x: &QMod<F>, q: usize) -> Result<QModMap<F>, Error> {
    let c = x.shape();
    let gq = induce_g(c, x.algebra(), q, x.value(q))?;
    let comps = (0..c.num_objects())
        .map(|p| {
            let blocks: Vec<Matrix<F>> = (0..c.hom_dim(p, q))
                .map(|b| x.basis_action(p, q, b))
                .collect();
            let refs: Vec<&Matrix<F>> = blocks.iter().collect();
            Matrix::vstack(x.field(), x.dim(p), &refs)
        })
        .collect();
    Ok(QModMap::new_unchecked(x.clone(), gq, comps))
}

/// `K_q(X)`: elements of `X(q)` killed by every radical morphism out of `q`,
/// with its inclusion into `X(q)`.
pub fn stalk_k<F: Field>(x: &QMod<F>, q: usize) -> (AModule<F>, Matrix<F>) {
    let c = x.shape();
    let f = x.field();
    let mut rows: Vec<Matrix<F>> = Vec::new();
    for p in 0..c.num_objects() {
        if x.dim(p) == 0 {
            continue;
        }
        for j in c.radical_basis(q, p) {
            rows.push(x.basis_action(q, p, j));
        }
    }
    let refs: Vec<&Matrix<F>> = rows.iter().collect();
    let stacked = Matrix::vstack(f, x.dim(q), &refs);
    let incl = stacked.kernel();
    let module = x
        .value(q)
        .submodule(&incl)
        .expect("kernel of A-linear maps");
    (module, incl)
}

/// `C_q(X)`: `X(q)` modulo images of radical morphisms into `q`, with the
/// projection from `X(q)`.
pub fn stalk_c<F: Field>(x: &QMod<F>, q: usize) -> (AModule<F>, Matrix<F>) {
    let c = x.shape();
    let f = x.field();
    let mut cols: Vec<Matrix<F>> = Vec::new();
    for p in 0..c.num_objects() {
        if x.dim(p) == 0 {
            continue;
        }
        for j in c.radical_basis(p, q) {
            cols.push(x.basis_action(p, q, j));
        }
    }
    let refs: Vec<&Matrix<F>> = cols.iter().collect();
    let spans = Matrix::hstack(f, x.dim(q), &refs);
    let quot = qshape_linalg::Quotient::of_image(&spans);
    (x.value(q).quotient(&quot), quot.projection().clone())
}

#[derive(Clone, Debug)]
pub struct GlobalFgkc<F: Field> {
    pub f: QMod<F>,
    pub g: QMod<F>,
    pub k: QMod<F>,
    pub c: QMod<F>,
    /// `ε^X: 𝔽(X) -> X`
    pub counit: QModMap<F>,
    /// `η^X: X -> 𝔾(X)`
    pub unit: QModMap<F>,
    /// `𝕂(X) -> 𝔽(X)`
    pub k_incl: QModMap<F>,
    /// `𝔾(X) -> ℂ(X)`
    pub c_proj: QModMap<F>,
}

/// `𝔽(X) = ⊕_q F_q(X(q))` with its counit (sum over the support).
pub fn big_f<F: Field>(x: &QMod<F>) -> Result<QModMap<F>, Error> {
    let supp = x.support();
    if supp.is_empty() {
        return Ok(QModMap::zero(x, x));
    }
    let counits: Vec<QModMap<F>> = supp
        .iter()
        .map(|&q| counit_f(x, q))
        .collect::<Result<_, _>>()?;
    let sources: Vec<&QMod<F>> = counits.iter().map(|e| e.source()).collect();
    let sum = QMod::direct_sum(&sources)?;
    let mut eps = QModMap::zero(&sum.module, x);
    for (e, p) in counits.iter().zip(&sum.projections) {
        eps = eps.add(&e.compose(p));
    }
    Ok(eps)
}

/// `𝔾(X) = ⊕_q G_q(X(q))` with its unit.
pub fn big_g<F: Field>(x: &QMod<F>) -> Result<QModMap<F>, Error> {
    let supp = x.support();
    if supp.is_empty() {
        return Ok(QModMap::zero(x, x));
    }
    let units: Vec<QModMap<F>> = supp
        .iter()
        .map(|&q| unit_g(x, q))
        .collect::<Result<_, _>>()?;
    let targets: Vec<&QMod<F>> = units.iter().map(|e| e.target()).collect();
    let sum = QMod::direct_sum(&targets)?;
    let mut eta = QModMap::zero(x, &sum.module);
    for (e, i) in units.iter().zip(&sum.inclusions) {
        eta = eta.add(&i.compose(e));
    }
    Ok(eta)
}

pub fn global_fgkc<F: Field>(x: &QMod<F>) -> Result<GlobalFgkc<F>, Error> {
    let counit = big_f(x)?;
    let unit = big_g(x)?;
    let (k, k_incl) = kernel(&counit);
    let (c, c_proj) = cokernel(&unit);
    Ok(GlobalFgkc {
        f: counit.source().clone(),
        g: unit.target().clone(),
        k,
        c,
        counit,
        unit,
        k_incl,
        c_proj,
    })
}

/// Both canonical sequences split objectwise (A-linearly).
pub fn objectwise_split<F: Field>(g: &GlobalFgkc<F>) -> bool {
    let x = g.counit.target();
    (0..x.shape().num_objects()).all(|p| {
        split_surjection(g.counit.component(p), g.f.value(p), x.value(p)).is_some()
            && split_surjection(g.c_proj.component(p), g.g.value(p), g.c.value(p)).is_some()
    })
}

/// An isomorphism `X -> Y`, searched among basis elements of the Hom space
/// and seeded random combinations.
pub fn find_qmod_iso<F: Field>(
    x: &QMod<F>,
    y: &QMod<F>,
    seed: u64,
) -> Result<Option<QModMap<F>>, Error> {
    if x.dims() != y.dims() {
        return Ok(None);
    }
    if x.is_zero() {
        return Ok(Some(QModMap::zero(x, y)));
    }
    let hs = hom_qa(x, y)?;
    // Search on one block-diagonal matrix so invertibility is tested at once.
    let f = x.field();
    let blocks: Vec<Matrix<F>> = hs
        .basis_maps()
        .iter()
        .map(|m| Matrix::block_diag(f, m.components()))
        .collect();
    Ok(find_invertible_combination(f, &blocks, seed).map(|b| {
        let mut comps = Vec::new();
        let mut off = 0;
        for q in 0..x.shape().num_objects() {
            let d = x.dim(q);
            comps.push(b.block(off, off, d, d));
            off += d;
        }
        QModMap::new_unchecked(x.clone(), y.clone(), comps)
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct SerreComparison {
    pub dims_f: Vec<usize>,
    pub dims_g: Vec<usize>,
    pub isomorphic: bool,
}

/// Compares `F_q(M)` with `G_{𝕊q}(M)`.
pub fn serre_compare<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    q: usize,
    m: &AModule<F>,
) -> Result<SerreComparison, Error> {
    let sq = shape.serre(q).ok_or_else(|| Error::WindowInsufficient {
        object: shape.object_name(q).to_string(),
        needed: 1,
    })?;
    let fq = induce_f(shape, alg, q, m)?;
    let gq = induce_g(shape, alg, sq, m)?;
    let isomorphic = find_qmod_iso(&fq, &gq, 7)?.is_some();
    Ok(SerreComparison {
        dims_f: fq.dims(),
        dims_g: gq.dims(),
        isomorphic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AdjointPair {
    FE,
    EG,
    CS,
    SK,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub pair: AdjointPair,
    pub hom_in_q: usize,
    pub hom_in_a: usize,
    pub rank: usize,
    pub ok: bool,
}

/// Dimension agreement plus injectivity of the explicit comparison map built
/// from units and counits.
pub fn adjunction_check<F: Field>(
    pair: AdjointPair,
    q: usize,
    m: &AModule<F>,
    x: &QMod<F>,
) -> Result<AdjunctionReport, Error> {
    let c = x.shape();
    let alg = x.algebra();
    let f = x.field();
    let flat = |mats: Vec<Matrix<F>>, rows: usize| {
        let cols: Vec<Vec<F::Elem>> = mats.into_iter().map(|mm| mm.data().to_vec()).collect();
        Matrix::from_columns(f, rows, &cols).rank()
    };
    let (hom_in_q, hom_in_a, rank) = match pair {
        AdjointPair::FE => {
            let fq = induce_f(c, alg, q, m)?;
            let lhs = hom_qa(&fq, x)?;
            let rhs = hom_a(m, x.value(q));
            // M -> Q(q,q) ⊗ M onto the identity summand (identity is basis 0).
            let mut u = Matrix::zeros(f, fq.dim(q), m.dim());
            u.paste(0, 0, &Matrix::identity(f, m.dim()));
            let imgs = lhs
                .basis_maps()
                .iter()
                .map(|psi| psi.component(q).mul(&u))
                .collect();
            (lhs.dim(), rhs.len(), flat(imgs, x.dim(q) * m.dim()))
        }
        AdjointPair::EG => {
            let gq = induce_g(c, alg, q, m)?;
            let lhs = hom_qa(x, &gq)?;
            let rhs = hom_a(x.value(q), m);
            let mut ev = Matrix::zeros(f, m.dim(), gq.dim(q));
            ev.paste(0, 0, &Matrix::identity(f, m.dim()));
            let imgs = lhs
                .basis_maps()
                .iter()
                .map(|psi| ev.mul(psi.component(q)))
                .collect();
            (lhs.dim(), rhs.len(), flat(imgs, m.dim() * x.dim(q)))
        }
        AdjointPair::CS => {
            let sq = induce_s(c, alg, q, m)?;
            let lhs = hom_qa(x, &sq)?;
            let (cq, proj) = stalk_c(x, q);
            let rhs = hom_a(&cq, m);
            let imgs = rhs
                .iter()
                .map(|h| {
                    let mut comps = QModMap::zero(x, &sq).components().to_vec();
                    comps[q] = h.mul(&proj);
                    let phi = QModMap::new_unchecked(x.clone(), sq.clone(), comps);
                    debug_assert!(phi.validate().ok);
                    Matrix::column_vector(f, lhs.to_vector(&phi))
                })
                .collect();
            (lhs.dim(), rhs.len(), flat(imgs, lhs.ambient_dim()))
        }
        AdjointPair::SK => {
            let sq = induce_s(c, alg, q, m)?;
            let lhs = hom_qa(&sq, x)?;
            let (kq, incl) = stalk_k(x, q);
            let rhs = hom_a(m, &kq);
            let imgs = rhs
                .iter()
                .map(|h| {
                    let mut comps = QModMap::zero(&sq, x).components().to_vec();
                    comps[q] = incl.mul(h);
                    let phi = QModMap::new_unchecked(sq.clone(), x.clone(), comps);
                    debug_assert!(phi.validate().ok);
                    Matrix::column_vector(f, lhs.to_vector(&phi))
                })
                .collect();
            (lhs.dim(), rhs.len(), flat(imgs, lhs.ambient_dim()))
        }
    };
    Ok(AdjunctionReport {
        pair,
        hom_in_q,
        hom_in_a,
        rank,
        ok: hom_in_q == hom_in_a && rank == hom_in_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmod::{is_short_exact, tensor_over_q, validate_qmod};
    use crate::shape::{build_kcategory, mesh_generator, MeshFamily};
    use qshape_linalg::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }
    fn cpx() -> Arc<KCategory<PrimeField>> {
        build_kcategory(
            &mesh_generator(MeshFamily::ComplexShape, 0, 6).unwrap(),
            &f(),
        )
        .unwrap()
    }
    fn k() -> Arc<Algebra<PrimeField>> {
        Arc::new(Algebra::ground(&f()))
    }
    fn kk() -> AModule<PrimeField> {
        Algebra::vector_space(&f(), 1)
    }

    #[test]
    fn discs_and_stalks() {
        let c = cpx();
        let a = Arc::new(Algebra::dual_numbers(&f()));
        let disc = induce_f(&c, &a, 2, &a.regular()).unwrap();
        assert_eq!(disc.dims(), vec![0, 0, 2, 2, 0, 0, 0]);
        assert!(validate_qmod(&disc).ok);
        assert!(disc.arrow(2).is_identity());
        let g = induce_g(&c, &a, 2, &a.regular()).unwrap();
        assert_eq!(g.dims(), vec![0, 2, 2, 0, 0, 0, 0]);
        assert!(validate_qmod(&g).ok);
        let s = induce_s(&c, &a, 3, &a.regular()).unwrap();
        assert_eq!(s.evaluate("3").unwrap(), a.regular());
        assert!(s.evaluate("2").unwrap().is_zero());
        assert!(induce_f(&c, &a, 2, &a.zero_module()).unwrap().is_zero());
        assert!(matches!(
            induce_f(&c, &a, 5, &a.regular()),
            Err(Error::WindowInsufficient { .. })
        ));
    }

    #[test]
    fn stalk_adjoint_formulas() {
        let c = cpx();
        let s = induce_s(&c, &k(), 3, &kk()).unwrap();
        assert_eq!(stalk_k(&s, 3).0.dim(), 1);
        assert_eq!(stalk_c(&s, 3).0.dim(), 1);
        let disc = induce_f(&c, &k(), 3, &kk()).unwrap();
        assert_eq!(stalk_k(&disc, 3).0.dim(), 0);
        for p in 2..5 {
            let g = induce_g(&c, &k(), p, &kk()).unwrap();
            for q in 1..6 {
                assert_eq!(stalk_k(&g, q).0.dim(), usize::from(p == q), "K_{q} G_{p}");
            }
        }
    }

    #[test]
    fn global_functors_on_a_stalk() {
        let c = cpx();
        let s = induce_s(&c, &k(), 3, &kk()).unwrap();
        let g = global_fgkc(&s).unwrap();
        assert_eq!(g.f.dims(), vec![0, 0, 0, 1, 1, 0, 0]);
        assert_eq!(g.k.dims(), vec![0, 0, 0, 0, 1, 0, 0]);
        assert_eq!(g.c.dims(), vec![0, 0, 1, 0, 0, 0, 0]);
        assert!(is_short_exact(&g.k_incl, &g.counit));
        assert!(is_short_exact(&g.unit, &g.c_proj));
        assert!(objectwise_split(&g));
        let z = global_fgkc(&QMod::zero(&c, &k())).unwrap();
        assert!(z.f.is_zero() && z.g.is_zero() && z.k.is_zero() && z.c.is_zero());
    }

    #[test]
    fn serre_isomorphism() {
        let c = cpx();
        let r = serre_compare(&c, &k(), 2, &kk()).unwrap();
        assert!(r.isomorphic);
        assert_eq!(r.dims_f, r.dims_g);
        let mut pres = mesh_generator(MeshFamily::ComplexShape, 0, 6).unwrap();
        pres.serre = pres
            .objects
            .iter()
            .map(|o| (o.clone(), o.clone()))
            .collect();
        let bad = build_kcategory(&pres, &f()).unwrap();
        let r = serre_compare(&bad, &k(), 2, &kk()).unwrap();
        assert!(!r.isomorphic);
        assert_ne!(r.dims_f, r.dims_g);
    }

    #[test]
    fn adjunctions_on_samples() {
        let c = cpx();
        let a = Arc::new(Algebra::dual_numbers(&f()));
        let x = induce_f(&c, &a, 2, &a.regular()).unwrap();
        let m = a.regular();
        for pair in [
            AdjointPair::FE,
            AdjointPair::EG,
            AdjointPair::CS,
            AdjointPair::SK,
        ] {
            for q in 2..5 {
                let r = adjunction_check(pair, q, &m, &x).unwrap();
                assert!(r.ok, "{r:?}");
            }
        }
    }

    #[test]
    fn co_yoneda() {
        let c = cpx();
        let op = c.opposite();
        let a = Arc::new(Algebra::dual_numbers(&f()));
        let x = induce_f(&c, &a, 2, &a.regular()).unwrap();
        for q in 2..5 {
            // Q(-, q) as a right module is F_q on the opposite shape.
            let rep = induce_f(&op, &k(), q, &kk()).unwrap();
            let t = tensor_over_q(&rep, &x).unwrap();
            assert_eq!(t.module.dim(), x.dim(q));
            assert!(crate::algebra::find_isomorphism(&t.module, x.value(q), 3).is_some());
        }
        let s = induce_s(&c, &a, 3, &a.regular()).unwrap();
        let rs = induce_s(&op, &k(), 3, &kk()).unwrap();
        assert_eq!(tensor_over_q(&rs, &s).unwrap().module, a.regular());
    }
}
