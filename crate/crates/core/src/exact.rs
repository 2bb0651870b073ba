//! Exact structures on A-modules, lifted objectwise to Q-shaped modules,
//! together with relative covers, resolutions and Ext.

use std::sync::Arc;

use qshape_linalg::{Field, Matrix};
use serde::Serialize;

use crate::adjoint::induce_f;
use crate::algebra::{
    is_theta_exact_seq, split_surjection, theta_precover_extending, AModule, Algebra, Precover,
};
use crate::homcx::{hom_cohomology, HomCohomology, ProjComplex};
use crate::qmod::{hom_qa, is_short_exact, kernel, QMod, QModMap};
use crate::room::{joint_support, widen_for};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum ExactStructure<F: Field> {
    /// All short exact sequences.
    Abelian,
    /// Split short exact sequences only.
    Split,
    /// Sequences kept exact by `Hom_A(T, -)` for each listed `T`.
    Theta(Vec<AModule<F>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactKind {
    Abelian,
    Split,
    Theta,
}

impl<F: Field> ExactStructure<F> {
    pub fn kind(&self) -> ExactKind {
        match self {
            ExactStructure::Abelian => ExactKind::Abelian,
            ExactStructure::Split => ExactKind::Split,
            ExactStructure::Theta(_) => ExactKind::Theta,
        }
    }

    /// A deflation onto `m` from a projective of the structure.
    pub fn module_cover(&self, alg: &Algebra<F>, m: &AModule<F>) -> Precover<F> {
        self.module_cover_extending(alg, m, None)
    }

    /// Projective summands which, added to `existing`, give a deflation onto
    /// `m`; empty when `existing` already is one.
    pub fn module_cover_extending(
        &self,
        alg: &Algebra<F>,
        m: &AModule<F>,
        existing: Option<(&AModule<F>, &Matrix<F>)>,
    ) -> Precover<F> {
        match self {
            ExactStructure::Abelian => theta_precover_extending(alg, m, &[alg.regular()], existing),
            ExactStructure::Split => match existing {
                Some((src, map)) if split_surjection(map, src, m).is_some() => Precover {
                    source: alg.zero_module(),
                    map: Matrix::zeros(alg.field(), m.dim(), 0),
                },
                _ => Precover {
                    source: m.clone(),
                    map: Matrix::identity(alg.field(), m.dim()),
                },
            },
            ExactStructure::Theta(theta) => theta_precover_extending(alg, m, theta, existing),
        }
    }

    pub fn module_is_projective(&self, alg: &Algebra<F>, m: &AModule<F>) -> bool {
        let cover = self.module_cover(alg, m);
        split_surjection(&cover.map, &cover.source, m).is_some()
    }

    /// Whether a short exact sequence of A-modules is a conflation.
    pub fn module_is_conflation(
        &self,
        iota: &Matrix<F>,
        pi: &Matrix<F>,
        middle: &AModule<F>,
        right: &AModule<F>,
    ) -> Result<bool, Error> {
        if !crate::algebra::is_short_exact(iota, pi) {
            return Err(Error::NotExact("module sequence".into()));
        }
        Ok(match self {
            ExactStructure::Abelian => true,
            ExactStructure::Split => split_surjection(pi, middle, right).is_some(),
            ExactStructure::Theta(theta) => is_theta_exact_seq(iota, pi, middle, right, theta)?,
        })
    }
}

/// Objectwise conflation test for `X' -ι-> X -π-> X''`.
pub fn is_conflation<F: Field>(
    iota: &QModMap<F>,
    pi: &QModMap<F>,
    e: &ExactStructure<F>,
) -> Result<bool, Error> {
    if !is_short_exact(iota, pi) {
        return Err(Error::NotExact("sequence of Q-shaped modules".into()));
    }
    let x = iota.target();
    for q in 0..x.shape().num_objects() {
        if !e.module_is_conflation(
            iota.component(q),
            pi.component(q),
            x.value(q),
            pi.target().value(q),
        )? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Φ: ⊕_q F_q(C_q) -> X`, where at each object of the support `C_q` covers
/// only what the summands induced at earlier objects do not already reach.
pub fn relative_cover<F: Field>(x: &QMod<F>, e: &ExactStructure<F>) -> Result<QModMap<F>, Error> {
    let c = x.shape();
    let f = x.field();
    let alg = x.algebra();
    let supp = x.support();
    if supp.is_empty() {
        return Ok(QModMap::zero(x, x));
    }
    let mut pieces: Vec<QMod<F>> = Vec::new();
    let mut comps_per_piece: Vec<Vec<Matrix<F>>> = Vec::new();
    for &q in &supp {
        let values: Vec<&AModule<F>> = pieces.iter().map(|p| p.value(q)).collect();
        let reached = AModule::direct_sum_all(f, alg.dim(), &values);
        let blocks: Vec<&Matrix<F>> = comps_per_piece.iter().map(|cs| &cs[q]).collect();
        let reach_map = Matrix::hstack(f, x.dim(q), &blocks);
        let existing = (!pieces.is_empty()).then_some((&reached, &reach_map));
        let cover = e.module_cover_extending(alg, x.value(q), existing);
        if cover.source.dim() == 0 {
            continue;
        }
        let fq = induce_f(c, alg, q, &cover.source)?;
        let comps: Vec<Matrix<F>> = (0..c.num_objects())
            .map(|p| {
                let blocks: Vec<Matrix<F>> = (0..c.hom_dim(q, p))
                    .map(|b| x.basis_action(q, p, b).mul(&cover.map))
                    .collect();
                let refs: Vec<&Matrix<F>> = blocks.iter().collect();
                Matrix::hstack(f, x.dim(p), &refs)
            })
            .collect();
        pieces.push(fq);
        comps_per_piece.push(comps);
    }
    let refs: Vec<&QMod<F>> = pieces.iter().collect();
    let sum = QMod::direct_sum(&refs)?;
    let mut phi = QModMap::zero(&sum.module, x);
    for ((piece, comps), proj) in pieces.iter().zip(comps_per_piece).zip(&sum.projections) {
        let m = QModMap::new_unchecked(piece.clone(), x.clone(), comps);
        phi = phi.add(&m.compose(proj));
    }
    Ok(phi)
}

/// Whether the relative cover of `x` admits a section.
pub fn is_relative_projective<F: Field>(x: &QMod<F>, e: &ExactStructure<F>) -> Result<bool, Error> {
    if x.is_zero() {
        return Ok(true);
    }
    let phi = relative_cover(x, e)?;
    Ok(section(&phi)?.is_some())
}

/// A morphism `s` with `φ ∘ s = id`, if any.
pub fn section<F: Field>(phi: &QModMap<F>) -> Result<Option<QModMap<F>>, Error> {
    let x = phi.target();
    let hs = hom_qa(x, phi.source())?;
    let ends = hom_qa(x, x)?;
    let sys = hs.apply_to_basis(&ends, |s| phi.compose(s));
    let id = ends.to_vector(&QModMap::identity(x));
    Ok(sys
        .solve_vec(&id)
        .ok()
        .map(|c| hs.from_vector(&hs.basis().mul_vec(&c))))
}

#[derive(Clone, Debug)]
pub struct RelResolution<F: Field> {
    pub complex: ProjComplex<F>,
    /// `P_0 -> X`
    pub augmentation: QModMap<F>,
    /// `Ω^{j+1} X = ker(P_j -> Ω^j X)`
    pub syzygies: Vec<QMod<F>>,
}

/// Relative projective resolution with terms `P_0 .. P_len`.
pub fn relative_resolution<F: Field>(
    x: &QMod<F>,
    e: &ExactStructure<F>,
    len: usize,
) -> Result<RelResolution<F>, Error> {
    let aug = relative_cover(x, e)?;
    let mut terms = vec![aug.source().clone()];
    let mut maps = Vec::new();
    let mut syzygies = Vec::new();
    let (mut omega, mut incl) = kernel(&aug);
    for _ in 0..len {
        let phi = relative_cover(&omega, e)?;
        maps.push(incl.compose(&phi));
        terms.push(phi.source().clone());
        syzygies.push(omega);
        (omega, incl) = kernel(&phi);
    }
    syzygies.push(omega);
    Ok(RelResolution {
        complex: ProjComplex { terms, maps },
        augmentation: aug,
        syzygies,
    })
}

/// Reach needed to resolve to length `len` without touching the window edge.
pub fn resolution_reach(nilpotence: usize, len: usize) -> usize {
    (len + 1) * nilpotence.saturating_sub(1).max(1)
}

#[derive(Clone, Debug)]
pub struct ExtGroup<F: Field> {
    pub degree: usize,
    pub cohomology: HomCohomology<F>,
    pub resolution: RelResolution<F>,
    pub shape: Arc<crate::shape::KCategory<F>>,
}

impl<F: Field> ExtGroup<F> {
    pub fn dim(&self) -> usize {
        self.cohomology.dim()
    }
}

/// `Ext^i_E(X, Y)` via a relative projective resolution of `X`.
pub fn relative_ext<F: Field>(
    x: &QMod<F>,
    y: &QMod<F>,
    e: &ExactStructure<F>,
    i: usize,
) -> Result<ExtGroup<F>, Error> {
    let n = x.shape().reduction_length();
    let shape = widen_for(
        x.shape(),
        &joint_support(&[x, y]),
        resolution_reach(n, i + 1),
    )?;
    let x = x.transport(&shape)?;
    let y = y.transport(&shape)?;
    let resolution = relative_resolution(&x, e, i + 1)?;
    let cohomology = hom_cohomology(&resolution.complex, &y, i)?;
    Ok(ExtGroup {
        degree: i,
        cohomology,
        resolution,
        shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::induce_s;
    use crate::shape::{build_kcategory, mesh_generator, MeshFamily};
    use qshape_linalg::PrimeField;

    fn cpx(lo: i64, hi: i64) -> Arc<crate::shape::KCategory<PrimeField>> {
        let f = PrimeField::new(101).unwrap();
        build_kcategory(
            &mesh_generator(MeshFamily::ComplexShape, lo, hi).unwrap(),
            &f,
        )
        .unwrap()
    }

    #[test]
    fn stalk_ext_over_complexes() {
        // Ext^1(S_q, S_{q+1}) ≠ 0 for complexes: the disc extension.
        let c = cpx(0, 8);
        let f = c.field().clone();
        let k = Arc::new(Algebra::ground(&f));
        let one = Algebra::vector_space(&f, 1);
        let q = c.object("4").unwrap();
        let s4 = induce_s(&c, &k, q, &one).unwrap();
        let s5 = induce_s(&c, &k, c.object("5").unwrap(), &one).unwrap();
        let s3 = induce_s(&c, &k, c.object("3").unwrap(), &one).unwrap();
        let e = ExactStructure::Abelian;
        assert_eq!(relative_ext(&s4, &s5, &e, 1).unwrap().dim(), 1);
        assert_eq!(relative_ext(&s4, &s3, &e, 1).unwrap().dim(), 0);
        assert_eq!(relative_ext(&s4, &s4, &e, 0).unwrap().dim(), 1);
        // Over a field every short exact sequence splits.
        assert_eq!(
            relative_ext(&s4, &s5, &ExactStructure::Split, 1)
                .unwrap()
                .dim(),
            1
        );
    }

    #[test]
    fn covers_are_projective() {
        let c = cpx(0, 8);
        let f = c.field().clone();
        let a = Arc::new(Algebra::dual_numbers(&f));
        let simple = a.simple_from_augmentation(&[f.one(), f.zero()]).unwrap();
        let x = induce_s(&c, &a, c.object("4").unwrap(), &simple).unwrap();
        for e in [ExactStructure::Abelian, ExactStructure::Split] {
            let phi = relative_cover(&x, &e).unwrap();
            assert!(is_relative_projective(phi.source(), &e).unwrap());
            assert_eq!(is_relative_projective(&x, &e).unwrap(), false);
        }
    }
}
