//! Decision procedures for the model structures: trivial objects and weak
//! equivalences through `ℍ^*_{S⟨q⟩,n}(Hom_A(T, -))`, stable Hom spaces
//! modulo the relevant ideals, suspension and triangles.

use qshape_linalg::{Field, Matrix, Quotient};
use serde::Serialize;

use crate::adjoint::{big_g, global_fgkc};
use crate::algebra::AModule;
use crate::cohomology::{g_window, hom_a_functor, GSpec};
use crate::exact::{relative_cover, ExactStructure};
use crate::homcx::hom_cohomology;
use crate::qmod::{hom_qa, HomSpace, QMod, QModMap};
use crate::room::{check_room, joint_support, neighbourhood, widen_for, with_room};
use crate::shape::KCategory;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub test: usize,
    pub object: String,
    pub n: i64,
    pub i: usize,
    /// Dimension of the offending group (source group for maps).
    pub dim: usize,
    /// For maps: dimension of the target group and rank of the induced map.
    pub target_dim: Option<usize>,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleVerdict {
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    /// Set when a positive verdict is only as good as the finite test set.
    pub testset_relative: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialMode {
    /// `ℍ^1` at `n = 0` only.
    N0,
    /// `ℍ^1` for every `n` in the inclusive range.
    WindowN(i64, i64),
}

fn check_testset<F: Field>(
    x: &QMod<F>,
    e: &ExactStructure<F>,
    testset: &[AModule<F>],
) -> Result<(), Error> {
    for (i, t) in testset.iter().enumerate() {
        if !e.module_is_projective(x.algebra(), t) {
            return Err(Error::TestsetNotProjective(i));
        }
    }
    Ok(())
}

fn step<F: Field>(c: &KCategory<F>) -> usize {
    c.reduction_length().saturating_sub(1).max(1)
}

/// Objects `q` whose stalk resolution can see the support, on a window
/// widened so that all of them sit off the edge.
fn candidate_objects<F: Field>(mods: &[&QMod<F>], radius: usize) -> Result<Vec<QMod<F>>, Error> {
    with_room(mods, radius)
}

/// Whether `X` is trivial: `ℍ^1_{S⟨q⟩,n}(Hom_A(T, X)) = 0` for all test
/// modules `T` and objects `q` (and `n = 0` or a window of `n`).
pub fn is_trivial<F: Field>(
    x: &QMod<F>,
    e: &ExactStructure<F>,
    testset: &[AModule<F>],
    mode: TrivialMode,
) -> Result<OracleVerdict, Error> {
    check_testset(x, e, testset)?;
    let testset_relative = matches!(e, ExactStructure::Split);
    if x.is_zero() {
        return Ok(OracleVerdict {
            verdict: true,
            witnesses: vec![],
            testset_relative,
        });
    }
    let s = step(x.shape());
    let ns: Vec<i64> = match mode {
        TrivialMode::N0 => vec![0],
        TrivialMode::WindowN(a, b) => (a..=b).collect(),
    };
    let max_abs = ns
        .iter()
        .map(|n| n.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let radius = (max_abs + 3) * s;
    let x = candidate_objects(&[x], radius)?.remove(0);
    let shape = x.shape().clone();
    let ys: Vec<QMod<F>> = testset
        .iter()
        .map(|t| Ok(hom_a_functor(t, &x)?.0))
        .collect::<Result<_, Error>>()?;
    let mut witnesses = Vec::new();
    for &n in &ns {
        let reach = (n.unsigned_abs() as usize + 3) * s;
        for (ti, y) in ys.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for q in neighbourhood(&shape, &y.support(), reach) {
                let g = GSpec::Module(stalk(&shape, q)?);
                let gw = g_window(&g, y, &ExactStructure::Abelian, n - 3, n - 1)?;
                let cx = gw.resolution(n, 3)?;
                let h = hom_cohomology(&cx, &gw.target(y)?, 1)?;
                if h.dim() > 0 {
                    witnesses.push(Witness {
                        test: ti,
                        object: shape.object_name(q).to_string(),
                        n,
                        i: 1,
                        dim: h.dim(),
                        target_dim: None,
                        rank: None,
                    });
                }
            }
        }
    }
    Ok(OracleVerdict {
        verdict: witnesses.is_empty(),
        witnesses,
        testset_relative,
    })
}

fn stalk<F: Field>(shape: &std::sync::Arc<KCategory<F>>, q: usize) -> Result<QMod<F>, Error> {
    let f = shape.field();
    let k = std::sync::Arc::new(crate::algebra::Algebra::ground(f));
    crate::adjoint::induce_s(shape, &k, q, &crate::algebra::Algebra::vector_space(f, 1))
}

/// `Hom_A(T, φ)` between the functors built by [`hom_a_functor`].
fn hom_a_functor_map<F: Field>(t: &AModule<F>, phi: &QModMap<F>) -> Result<QModMap<F>, Error> {
    let f = phi.source().field();
    let (hx, bx) = hom_a_functor(t, phi.source())?;
    let (hy, by) = hom_a_functor(t, phi.target())?;
    let comps = (0..hx.shape().num_objects())
        .map(|q| {
            let cols = (0..bx[q].cols())
                .map(|k| {
                    let h = Matrix::from_data(f, phi.source().dim(q), t.dim(), bx[q].column(k));
                    by[q]
                        .solve_vec(phi.component(q).mul(&h).data())
                        .map_err(Error::from)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_columns(f, by[q].cols(), &cols))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    QModMap::new(hx, hy, comps)
}

/// Whether `φ` is a weak equivalence: the induced maps on `ℍ^1` and `ℍ^2`
/// at `n = 0` are invertible for every test module and object.
pub fn is_weq<F: Field>(
    phi: &QModMap<F>,
    e: &ExactStructure<F>,
    testset: &[AModule<F>],
) -> Result<OracleVerdict, Error> {
    check_testset(phi.source(), e, testset)?;
    let testset_relative = matches!(e, ExactStructure::Split);
    let s = step(phi.source().shape());
    let radius = 4 * s;
    let shape = widen_for(
        phi.source().shape(),
        &joint_support(&[phi.source(), phi.target()]),
        radius,
    )?;
    let phi = phi.transport(&shape)?;
    let mut witnesses = Vec::new();
    for (ti, t) in testset.iter().enumerate() {
        let m = hom_a_functor_map(t, &phi)?;
        let supp = joint_support(&[m.source(), m.target()]);
        if supp.is_empty() {
            continue;
        }
        for q in neighbourhood(&shape, &supp, radius - s) {
            let g = GSpec::Module(stalk(&shape, q)?);
            let gw = g_window(&g, m.source(), &ExactStructure::Abelian, -4, -1)?;
            let cx = gw.resolution(0, 4)?;
            let mm = gw.target_map(&m)?;
            for i in 1..=2 {
                let hx = hom_cohomology(&cx, mm.source(), i)?;
                let hy = hom_cohomology(&cx, mm.target(), i)?;
                let ind = hx.post_compose(&hy, &mm)?;
                let rank = if ind.rows() == 0 || ind.cols() == 0 {
                    0
                } else {
                    ind.rank()
                };
                if !(hx.dim() == hy.dim() && rank == hx.dim()) {
                    witnesses.push(Witness {
                        test: ti,
                        object: shape.object_name(q).to_string(),
                        n: 0,
                        i,
                        dim: hx.dim(),
                        target_dim: Some(hy.dim()),
                        rank: Some(rank),
                    });
                }
            }
        }
    }
    Ok(OracleVerdict {
        verdict: witnesses.is_empty(),
        witnesses,
        testset_relative,
    })
}

/// Membership in the kernel of the localisation from the homotopy category
/// to the derived category: triviality for the abelian structure.
pub fn in_acyclic_kernel<F: Field>(x: &QMod<F>) -> Result<bool, Error> {
    let a = x.algebra().regular();
    Ok(is_trivial(x, &ExactStructure::Abelian, &[a], TrivialMode::N0)?.verdict)
}

/// `Hom(X, Y)` modulo an ideal, in coordinates of the Hom basis.
#[derive(Clone, Debug)]
pub struct StableHom<F: Field> {
    pub hom: HomSpace<F>,
    /// Columns span the ideal (Hom-basis coordinates).
    pub ideal: Matrix<F>,
    pub quotient: Quotient<F>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StableHomSummary {
    pub ambient_dim: usize,
    pub ideal_dim: usize,
    pub quotient_dim: usize,
}

impl<F: Field> StableHom<F> {
    fn from_generators(hom: HomSpace<F>, gens: &[Vec<F::Elem>]) -> Result<Self, Error> {
        let f = hom.source().field();
        let coords = gens
            .iter()
            .map(|v| hom.basis().solve_vec(v).map_err(Error::from))
            .collect::<Result<Vec<_>, _>>()?;
        let raw = Matrix::from_columns(f, hom.dim(), &coords);
        let ideal = if raw.cols() == 0 { raw } else { raw.image() };
        let quotient = Quotient::of_image(&ideal);
        Ok(StableHom {
            hom,
            ideal,
            quotient,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.hom.dim()
    }
    pub fn ideal_dim(&self) -> usize {
        self.ideal.cols()
    }
    pub fn quotient_dim(&self) -> usize {
        self.quotient.dim()
    }
    pub fn summary(&self) -> StableHomSummary {
        StableHomSummary {
            ambient_dim: self.ambient_dim(),
            ideal_dim: self.ideal_dim(),
            quotient_dim: self.quotient_dim(),
        }
    }

    /// Representatives of a quotient basis, as morphisms.
    pub fn representatives(&self) -> Vec<QModMap<F>> {
        let sec = self.quotient.section();
        (0..sec.cols())
            .map(|j| {
                self.hom
                    .from_vector(&self.hom.basis().mul_vec(&sec.column(j)))
            })
            .collect()
    }

    /// Class of a morphism in the quotient.
    pub fn class_of(&self, m: &QModMap<F>) -> Result<Vec<F::Elem>, Error> {
        let c = self.hom.coords(m)?;
        Ok(self.quotient.projection().mul_vec(&c))
    }

    pub fn in_ideal(&self, m: &QModMap<F>) -> Result<bool, Error> {
        let f = self.hom.source().field();
        Ok(self.class_of(m)?.iter().all(|c| f.is_zero(c)))
    }
}

/// Morphisms in the homotopy category: `Hom(X, Y)` modulo maps factoring
/// through `η^X: X -> 𝔾(X)`.
pub fn stable_hom_split<F: Field>(x: &QMod<F>, y: &QMod<F>) -> Result<StableHom<F>, Error> {
    let s = step(x.shape());
    let mods = with_room(&[x, y], s)?;
    let (x, y) = (&mods[0], &mods[1]);
    let hom = hom_qa(x, y)?;
    let eta = big_g(x)?;
    let through = hom_qa(eta.target(), y)?;
    let gens: Vec<Vec<F::Elem>> = through
        .basis_maps()
        .iter()
        .map(|psi| hom.to_vector(&psi.compose(&eta)))
        .collect();
    StableHom::from_generators(hom, &gens)
}

/// `Hom(X, Y)` modulo maps factoring through the relative cover of `Y`.
pub fn hom_mod_projectives<F: Field>(
    x: &QMod<F>,
    y: &QMod<F>,
    e: &ExactStructure<F>,
) -> Result<StableHom<F>, Error> {
    let s = step(x.shape());
    let mods = with_room(&[x, y], s)?;
    let (x, y) = (&mods[0], &mods[1]);
    let hom = hom_qa(x, y)?;
    let phi = relative_cover(y, e)?;
    let into = hom_qa(x, phi.source())?;
    let gens: Vec<Vec<F::Elem>> = into
        .basis_maps()
        .iter()
        .map(|psi| hom.to_vector(&phi.compose(psi)))
        .collect();
    StableHom::from_generators(hom, &gens)
}

/// `ΣX = ℂ(X)`.
pub fn suspend<F: Field>(x: &QMod<F>) -> Result<QMod<F>, Error> {
    let s = step(x.shape());
    let x = with_room(&[x], s)?.remove(0);
    let c = global_fgkc(&x)?.c;
    check_room(&c)?;
    Ok(c)
}

/// Triangle `X' -> X -> X'' -> ΣX'` of a conflation in the split structure.
#[derive(Clone, Debug)]
pub struct Triangle<F: Field> {
    pub iota: QModMap<F>,
    pub pi: QModMap<F>,
    /// Extension of `η^{X'}` along `ι`.
    pub extension: QModMap<F>,
    /// `X'' -> ΣX'`
    pub connecting: QModMap<F>,
}

pub fn triangle_of_conflation<F: Field>(
    iota: &QModMap<F>,
    pi: &QModMap<F>,
) -> Result<Triangle<F>, Error> {
    let s = step(iota.source().shape());
    let shape = widen_for(
        iota.source().shape(),
        &joint_support(&[iota.source(), iota.target(), pi.target()]),
        s,
    )?;
    let iota = iota.transport(&shape)?;
    let pi = pi.transport(&shape)?;
    let g = global_fgkc(iota.source())?;
    let hs = hom_qa(iota.target(), &g.g)?;
    let ends = hom_qa(iota.source(), &g.g)?;
    let sys = hs.apply_to_basis(&ends, |u| u.compose(&iota));
    let c = sys
        .solve_vec(&ends.to_vector(&g.unit))
        .map_err(|_| Error::NotExact("inflation is not split objectwise".into()))?;
    let extension = hs.from_vector(&hs.basis().mul_vec(&c));
    let cu = g.c_proj.compose(&extension);
    let f = shape.field();
    let comps = (0..shape.num_objects())
        .map(|q| {
            let p = pi.component(q);
            if p.rows() == 0 {
                return Ok(Matrix::zeros(f, g.c.dim(q), 0));
            }
            let section = p.solve(&Matrix::identity(f, p.rows()))?;
            Ok(cu.component(q).mul(&section))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let connecting = QModMap::new(pi.target().clone(), g.c.clone(), comps)?;
    Ok(Triangle {
        iota,
        pi,
        extension,
        connecting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::{induce_f, induce_s};
    use crate::algebra::Algebra;
    use crate::exact::relative_ext;
    use crate::shape::{build_kcategory, mesh_generator, MeshFamily};
    use qshape_linalg::PrimeField;
    use std::sync::Arc;

    fn fld() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn cpx() -> Arc<KCategory<PrimeField>> {
        build_kcategory(
            &mesh_generator(MeshFamily::ComplexShape, -3, 5).unwrap(),
            &fld(),
        )
        .unwrap()
    }

    /// `0 -> k -> A -> k -> 0` over the dual numbers in degrees 0..2.
    fn witness_w(c: &Arc<KCategory<PrimeField>>) -> QMod<PrimeField> {
        let f = fld();
        let a = Arc::new(Algebra::dual_numbers(&f));
        let s = a.simple_from_augmentation(&[f.one(), f.zero()]).unwrap();
        // Basis of A is (1, x): k -> A sends 1 to x; A -> k sends 1 to 1.
        QMod::from_sparse(
            c.clone(),
            a.clone(),
            vec![
                (c.object("0").unwrap(), s.clone()),
                (c.object("1").unwrap(), a.regular()),
                (c.object("2").unwrap(), s),
            ],
            vec![
                (c.arrow("d0").unwrap(), Matrix::from_i64(&f, &[&[0], &[1]])),
                (c.arrow("d1").unwrap(), Matrix::from_i64(&f, &[&[1, 0]])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn discs_trivial_stalks_not() {
        let c = cpx();
        let k = Arc::new(Algebra::ground(&fld()));
        let one = Algebra::vector_space(&fld(), 1);
        let disc = induce_f(&c, &k, c.object("0").unwrap(), &one).unwrap();
        let s0 = induce_s(&c, &k, c.object("0").unwrap(), &one).unwrap();
        let e = ExactStructure::Abelian;
        assert!(
            is_trivial(&disc, &e, &[one.clone()], TrivialMode::N0)
                .unwrap()
                .verdict
        );
        let v = is_trivial(&s0, &e, &[one.clone()], TrivialMode::N0).unwrap();
        assert!(!v.verdict);
        assert_eq!(v.witnesses.len(), 1);
        assert_eq!(v.witnesses[0].object, "-1");
        assert!(
            is_trivial(&QMod::zero(&c, &k), &e, &[one.clone()], TrivialMode::N0)
                .unwrap()
                .verdict
        );
        assert!(
            !is_trivial(&s0, &e, &[one.clone()], TrivialMode::WindowN(-2, 2))
                .unwrap()
                .verdict
        );
        assert_eq!(stable_hom_split(&disc, &disc).unwrap().quotient_dim(), 0);
        assert_eq!(stable_hom_split(&s0, &s0).unwrap().quotient_dim(), 1);
        let sigma = suspend(&s0).unwrap();
        assert_eq!(
            sigma
                .support()
                .iter()
                .map(|&q| sigma.shape().object_name(q))
                .collect::<Vec<_>>(),
            ["-1"]
        );
    }

    #[test]
    fn kernel_witness_is_nonzero_in_homotopy_category() {
        let c = cpx();
        let w = witness_w(&c);
        assert!(in_acyclic_kernel(&w).unwrap());
        let st = stable_hom_split(&w, &w).unwrap();
        let id = QModMap::identity(&st.hom.source().clone());
        assert!(!st.in_ideal(&id).unwrap());
        let a = w.algebra().clone();
        let s = a
            .simple_from_augmentation(&[fld().one(), fld().zero()])
            .unwrap();
        let zero = QMod::zero(&c, &a);
        let phi = QModMap::zero(&zero, &w);
        assert!(
            is_weq(&phi, &ExactStructure::Abelian, &[a.regular()])
                .unwrap()
                .verdict
        );
        let split = is_weq(&phi, &ExactStructure::Split, &[a.regular(), s]).unwrap();
        assert!(!split.verdict);
        assert!(split.testset_relative);
    }

    #[test]
    fn suspension_matches_split_ext() {
        let c = cpx();
        let w = witness_w(&c);
        let a = w.algebra().clone();
        let s = a
            .simple_from_augmentation(&[fld().one(), fld().zero()])
            .unwrap();
        let s0 = induce_s(&c, &a, c.object("1").unwrap(), &s).unwrap();
        for (x, y) in [(&w, &w), (&s0, &w), (&w, &s0), (&s0, &s0)] {
            let st = stable_hom_split(x, &suspend(y).unwrap()).unwrap();
            let ext = relative_ext(x, y, &ExactStructure::Split, 1).unwrap();
            assert_eq!(st.quotient_dim(), ext.dim());
        }
    }
}
