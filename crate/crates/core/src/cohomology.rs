//! Cohomology functors attached to a generating object: `ℍ^i_{U,n}(X) =
//! Ext^i(σ^n U, X)` computed from the canonical complete resolution, the
//! Tor side, the relative variant for `S⟨q⟩ ⊗ T`, long exact sequences and
//! dimension shifting.
//!
//! Position `j` of the resolution of `σ^n U` is the term `𝕋^{n-1-j}(U)`.

use std::sync::Arc;

use qshape_linalg::{Field, Matrix, Subquotient};
use serde::Serialize;

use crate::adjoint::induce_s;
use crate::algebra::{hom_a, AModule, Algebra};
use crate::exact::{is_conflation, relative_ext, ExactStructure};
use crate::homcx::{
    algebra_action, connecting_map, exact_at, hom_cohomology, HomCohomology, ProjComplex,
};
use crate::qmod::{is_short_exact, tensor_over_q, QMod, QModMap};
use crate::room::union_window;
use crate::tac::{canonical_tac, syzygy, tensor_module, tensor_window, TacWindow};
use crate::Error;

/// The generating object of a cohomology functor.
#[derive(Clone, Debug)]
pub enum GSpec<F: Field> {
    /// `U` with ground coefficients; Hom is taken over `Q` into `X♮`.
    Module(QMod<F>),
    /// `S⟨q⟩ ⊗ T`; Hom is taken over `Q` and `A`.
    Stalk { test: AModule<F>, object: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ViaTac,
    ViaRelRes,
    ViaTor,
}

#[derive(Clone, Debug)]
pub struct CohomReport<F: Field> {
    pub value: AModule<F>,
    pub n: i64,
    pub i: usize,
    pub route: Route,
    /// Window the computation ran on.
    pub window: Option<(i64, i64)>,
}

impl<F: Field> CohomReport<F> {
    pub fn dim(&self) -> usize {
        self.value.dim()
    }
}

/// A complete-resolution window for `g`, placed so that `anchor` fits too.
pub(crate) struct GWindow<F: Field> {
    pub window: TacWindow<F>,
    pub relative: bool,
}

impl<F: Field> GWindow<F> {
    pub fn resolution(&self, n: i64, count: usize) -> Result<ProjComplex<F>, Error> {
        self.window.resolution(n, count)
    }

    /// `X` on this window, forgetting coefficients for a [`GSpec::Module`].
    pub fn target(&self, x: &QMod<F>) -> Result<QMod<F>, Error> {
        let y = x.transport(&self.window.shape)?;
        Ok(if self.relative { y } else { y.underlying_k() })
    }

    pub fn target_map(&self, phi: &QModMap<F>) -> Result<QModMap<F>, Error> {
        let m = phi.transport(&self.window.shape)?;
        Ok(if self.relative { m } else { m.underlying_k() })
    }
}

fn window_meta_range<F: Field>(w: &TacWindow<F>) -> Option<(i64, i64)> {
    w.shape.window_meta().map(|m| (m.lo, m.hi))
}

pub(crate) fn g_window<F: Field>(
    g: &GSpec<F>,
    anchor: &QMod<F>,
    e: &ExactStructure<F>,
    lo: i64,
    hi: i64,
) -> Result<GWindow<F>, Error> {
    match g {
        GSpec::Module(u) => {
            if !u.algebra().is_ground() {
                return Err(Error::Invalid(
                    "generating module must have ground coefficients".into(),
                ));
            }
            let shape = union_window(u.shape(), anchor.shape())?;
            let u = u.transport(&shape)?;
            let window = canonical_tac(&u, &ExactStructure::Abelian, lo, hi)?;
            Ok(GWindow {
                window,
                relative: false,
            })
        }
        GSpec::Stalk { test, object } => {
            let alg = anchor.algebra();
            if !e.module_is_projective(alg, test) {
                return Err(Error::TestsetNotProjective(0));
            }
            let shape = anchor.shape();
            let k = Arc::new(Algebra::ground(anchor.field()));
            let u = induce_s(
                shape,
                &k,
                shape.object(object)?,
                &Algebra::vector_space(anchor.field(), 1),
            )?;
            let w = canonical_tac(&u, &ExactStructure::Abelian, lo, hi)?;
            Ok(GWindow {
                window: tensor_window(&w, alg, test)?,
                relative: true,
            })
        }
    }
}

/// Degrees of the complete resolution needed for positions `0..count`.
fn degrees(n: i64, count: usize) -> (i64, i64) {
    (n - count as i64, n - 1)
}

fn value_of<F: Field>(
    h: &HomCohomology<F>,
    x: &QMod<F>,
    relative: bool,
) -> Result<AModule<F>, Error> {
    if relative || x.algebra().is_ground() {
        Ok(Algebra::vector_space(x.field(), h.dim()))
    } else {
        let action = algebra_action(h, x)?;
        AModule::new(h.dim(), action)
    }
}

/// `ℍ^i_{g,n}(X)` through the canonical complete resolution.
pub fn hh<F: Field>(
    g: &GSpec<F>,
    e: &ExactStructure<F>,
    n: i64,
    i: usize,
    x: &QMod<F>,
) -> Result<CohomReport<F>, Error> {
    let (lo, hi) = degrees(n, i + 2);
    let gw = g_window(g, x, e, lo, hi)?;
    let cx = gw.resolution(n, i + 2)?;
    let target = gw.target(x)?;
    let h = hom_cohomology(&cx, &target, i)?;
    let action_source = x.transport(&gw.window.shape)?;
    Ok(CohomReport {
        value: value_of(&h, &action_source, gw.relative)?,
        n,
        i,
        route: Route::ViaTac,
        window: window_meta_range(&gw.window),
    })
}

/// `ℍ^i_{U,n}(X) = Ext^i_Q(σ^n U, X)` with the A-action inherited from `X`.
pub fn hh_ext<F: Field>(
    u: &QMod<F>,
    n: i64,
    i: usize,
    x: &QMod<F>,
) -> Result<CohomReport<F>, Error> {
    if i == 0 {
        return Err(Error::Invalid(
            "cohomological degree must be positive".into(),
        ));
    }
    hh(&GSpec::Module(u.clone()), &ExactStructure::Abelian, n, i, x)
}

/// The same group through a relative resolution of `σ^n g` built
/// independently of the complete resolution.
pub fn hh_relres<F: Field>(
    g: &GSpec<F>,
    e: &ExactStructure<F>,
    n: i64,
    i: usize,
    x: &QMod<F>,
) -> Result<CohomReport<F>, Error> {
    let (source, target, structure) = match g {
        GSpec::Module(u) => {
            let shape = union_window(u.shape(), x.shape())?;
            (
                u.transport(&shape)?,
                x.transport(&shape)?.underlying_k(),
                ExactStructure::Abelian,
            )
        }
        GSpec::Stalk { test, object } => {
            let shape = x.shape();
            let k = Arc::new(Algebra::ground(x.field()));
            let s = induce_s(
                shape,
                &k,
                shape.object(object)?,
                &Algebra::vector_space(x.field(), 1),
            )?;
            (tensor_module(&s, x.algebra(), test)?, x.clone(), e.clone())
        }
    };
    let sigma = syzygy(&source, n)?;
    let ext = relative_ext(&sigma, &target, &structure, i)?;
    Ok(CohomReport {
        value: Algebra::vector_space(x.field(), ext.dim()),
        n,
        i,
        route: Route::ViaRelRes,
        window: ext.shape.window_meta().map(|m| (m.lo, m.hi)),
    })
}

/// `Tor_i^Q(σ^n R, X)` for a right module `R` (ground coefficients, on the
/// opposite shape), as an A-module.
pub fn hh_tor<F: Field>(
    r: &QMod<F>,
    n: i64,
    i: usize,
    x: &QMod<F>,
) -> Result<CohomReport<F>, Error> {
    if i == 0 {
        return Err(Error::Invalid("homological degree must be positive".into()));
    }
    if !r.algebra().is_ground() {
        return Err(Error::Invalid(
            "right module must have ground coefficients".into(),
        ));
    }
    let shape = union_window(r.shape(), x.shape())?;
    let r = r.transport(&shape)?;
    let (lo, hi) = degrees(n, i + 2);
    let w = canonical_tac(&r, &ExactStructure::Abelian, lo, hi)?;
    let cx = w.resolution(n, i + 2)?;
    let x = x.transport(&w.shape.opposite())?;
    let f = x.field();
    let tensors = (i - 1..=i + 1)
        .map(|j| tensor_over_q(&cx.terms[j], &x))
        .collect::<Result<Vec<_>, _>>()?;
    // d_j: P_{j+1} ⊗ X -> P_j ⊗ X in quotient coordinates.
    let induced =
        |j: usize, from: &crate::qmod::TensorProduct<F>, to: &crate::qmod::TensorProduct<F>| {
            let blocks: Vec<Matrix<F>> = (0..x.shape().num_objects())
                .map(|q| cx.maps[j].component(q).kron(&Matrix::identity(f, x.dim(q))))
                .collect();
            to.quotient
                .projection()
                .mul(&Matrix::block_diag(f, &blocks))
                .mul(from.quotient.section())
        };
    let d_out = induced(i - 1, &tensors[1], &tensors[0]);
    let d_in = induced(i, &tensors[2], &tensors[1]);
    let cycles = if d_out.rows() == 0 {
        Matrix::identity(f, tensors[1].module.dim())
    } else {
        d_out.kernel()
    };
    let group = Subquotient::new(&cycles, &d_in)?;
    let action = tensors[1]
        .module
        .action()
        .iter()
        .map(|a| group.induced_to(&group, |v| a.mul_vec(v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CohomReport {
        value: AModule::new(group.dim(), action)?,
        n,
        i,
        route: Route::ViaTor,
        window: window_meta_range(&w),
    })
}

/// `Hom_k(R, k)` for a right module: a left module on the opposite shape.
pub fn dual_module<F: Field>(r: &QMod<F>) -> Result<QMod<F>, Error> {
    let shape = r.shape().opposite();
    let values = r.values().iter().map(|v| v.dual()).collect();
    let arrows = r.arrow_matrices().iter().map(|a| a.transpose()).collect();
    QMod::new(shape, r.algebra().clone(), values, arrows)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub tor_dim: usize,
    pub ext_dim: usize,
    pub ok: bool,
}

/// `dim Tor_i(σ^n R, X♮) = dim Ext^i_Q(X♮, σ^{-n} Hom_k(R, k))`.
pub fn duality_check<F: Field>(
    r: &QMod<F>,
    n: i64,
    i: usize,
    x: &QMod<F>,
) -> Result<DualityReport, Error> {
    let xk = x.underlying_k();
    let tor = hh_tor(r, n, i, &xk)?;
    let dr = dual_module(r)?;
    let shape = union_window(dr.shape(), xk.shape())?;
    let sigma = syzygy(&dr.transport(&shape)?, -n)?;
    let ext = relative_ext(&xk, &sigma, &ExactStructure::Abelian, i)?;
    Ok(DualityReport {
        tor_dim: tor.dim(),
        ext_dim: ext.dim(),
        ok: tor.dim() == ext.dim(),
    })
}

/// `Hom_A(T, X)` as a module with ground coefficients, with the chosen basis
/// of each `Hom_A(T, X(q))`.
pub fn hom_a_functor<F: Field>(
    t: &AModule<F>,
    x: &QMod<F>,
) -> Result<(QMod<F>, Vec<Matrix<F>>), Error> {
    let f = x.field();
    let c = x.shape();
    let bases: Vec<Matrix<F>> = (0..c.num_objects())
        .map(|q| {
            let hs = hom_a(t, x.value(q));
            let cols: Vec<Vec<F::Elem>> = hs.iter().map(|h| h.data().to_vec()).collect();
            Matrix::from_columns(f, x.dim(q) * t.dim(), &cols)
        })
        .collect();
    let values = bases
        .iter()
        .map(|b| Algebra::vector_space(f, b.cols()))
        .collect();
    let mut arrows = Vec::new();
    for (a, arrow) in c.arrows().iter().enumerate() {
        let (p, q) = (arrow.src, arrow.dst);
        let xa = x.arrow(a);
        let cols = (0..bases[p].cols())
            .map(|k| {
                let h = Matrix::from_data(f, x.dim(p), t.dim(), bases[p].column(k));
                bases[q].solve_vec(xa.mul(&h).data()).map_err(Error::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        arrows.push(Matrix::from_columns(f, bases[q].cols(), &cols));
    }
    let k = Arc::new(Algebra::ground(f));
    Ok((QMod::new(c.clone(), k, values, arrows)?, bases))
}

#[derive(Clone, Debug, Serialize)]
pub struct HcalReport {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub relres_dim: usize,
    pub explicit_iso: bool,
    pub agree: bool,
}

/// `Ext^i_E(σ^n(S⟨q⟩ ⊗ T), X)` against `ℍ^i_{S⟨q⟩,n}(Hom_A(T, X))`, with the
/// adjunction isomorphism checked on cohomology.
pub fn hcal_relative<F: Field>(
    t: &AModule<F>,
    object: &str,
    n: i64,
    i: usize,
    x: &QMod<F>,
    e: &ExactStructure<F>,
) -> Result<HcalReport, Error> {
    let f = x.field();
    let (lo, hi) = degrees(n, i + 2);
    let gw = g_window(
        &GSpec::Stalk {
            test: t.clone(),
            object: object.to_string(),
        },
        x,
        e,
        lo,
        hi,
    )?;
    let shape = gw.window.shape.clone();
    let xs = x.transport(&shape)?;
    let lhs_cx = gw.resolution(n, i + 2)?;
    let lhs = hom_cohomology(&lhs_cx, &xs, i)?;

    let k = Arc::new(Algebra::ground(f));
    let s = induce_s(
        &shape,
        &k,
        shape.object(object)?,
        &Algebra::vector_space(f, 1),
    )?;
    let plain = canonical_tac(&s, &ExactStructure::Abelian, lo, hi)?;
    let (y, bases) = hom_a_functor(t, &xs.transport(&plain.shape)?)?;
    let rhs_cx = plain.resolution(n, i + 2)?;
    let rhs = hom_cohomology(&rhs_cx, &y, i)?;

    // ψ: P ⊗ T -> X  ↦  (u ↦ (t ↦ ψ(u ⊗ t))) : P -> Hom_A(T, X).
    let dt = t.dim();
    let p = &rhs_cx.terms[i];
    let iso_matrix = lhs.induced(&rhs, |psi| {
        let comps = (0..shape.num_objects())
            .map(|r| {
                let du = p.dim(r);
                let m = psi.component(r);
                let cols: Vec<Vec<F::Elem>> = (0..du)
                    .map(|u| {
                        let block = m.block(0, u * dt, m.rows(), dt);
                        bases[r]
                            .solve_vec(block.data())
                            .expect("component is A-linear")
                    })
                    .collect();
                Matrix::from_columns(f, bases[r].cols(), &cols)
            })
            .collect();
        QModMap::new(p.clone(), y.clone(), comps).expect("adjunct is natural")
    })?;
    let explicit_iso =
        iso_matrix.is_square() && (iso_matrix.rows() == 0 || iso_matrix.is_invertible());

    let relres = hh_relres(
        &GSpec::Stalk {
            test: t.clone(),
            object: object.to_string(),
        },
        e,
        n,
        i,
        x,
    )?;
    let agree = lhs.dim() == rhs.dim() && explicit_iso && relres.dim() == lhs.dim();
    Ok(HcalReport {
        lhs_dim: lhs.dim(),
        rhs_dim: rhs.dim(),
        relres_dim: relres.dim(),
        explicit_iso,
        agree,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Joint {
    pub label: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    /// `(dim H^j(X'), dim H^j(X), dim H^j(X''))` for `j = 0..=imax`.
    pub dims: Vec<(usize, usize, usize)>,
    pub joints: Vec<Joint>,
    pub ok: bool,
}

/// Exactness of the long exact sequence of `ℍ^*_{g,n}` on a conflation
/// `X' -ι-> X -π-> X''`, from `ℍ^0` (i.e. `Hom(σ^n g, -)`) up to `ℍ^imax`.
pub fn les_check<F: Field>(
    iota: &QModMap<F>,
    pi: &QModMap<F>,
    g: &GSpec<F>,
    e: &ExactStructure<F>,
    n: i64,
    imax: usize,
) -> Result<LesReport, Error> {
    match g {
        GSpec::Module(_) => {
            if !is_short_exact(iota, pi) {
                return Err(Error::NotExact("sequence".into()));
            }
        }
        GSpec::Stalk { .. } => {
            if !is_conflation(iota, pi, e)? {
                return Err(Error::NotExact("sequence is not a conflation".into()));
            }
        }
    }
    let (lo, hi) = degrees(n, imax + 2);
    let gw = g_window(g, iota.target(), e, lo, hi)?;
    let cx = gw.resolution(n, imax + 2)?;
    let iota = gw.target_map(iota)?;
    let pi = gw.target_map(pi)?;
    let (x1, x2, x3) = (
        iota.source().clone(),
        iota.target().clone(),
        pi.target().clone(),
    );
    let mut h1 = Vec::new();
    let mut h2 = Vec::new();
    let mut h3 = Vec::new();
    for j in 0..=imax + 1 {
        h1.push(hom_cohomology(&cx, &x1, j)?);
        if j <= imax {
            h2.push(hom_cohomology(&cx, &x2, j)?);
            h3.push(hom_cohomology(&cx, &x3, j)?);
        }
    }
    let f = x1.field();
    let mut joints = Vec::new();
    let mut dims = Vec::new();
    let zero_in = |d: usize| Matrix::zeros(f, d, 0);
    for j in 0..=imax {
        dims.push((h1[j].dim(), h2[j].dim(), h3[j].dim()));
        let a = h1[j].post_compose(&h2[j], &iota)?;
        let b = h2[j].post_compose(&h3[j], &pi)?;
        let c = connecting_map(&cx, &iota, &pi, &h3[j], &h1[j + 1])?;
        if j == 0 {
            joints.push(Joint {
                label: "H0(X')".into(),
                ok: exact_at(&zero_in(h1[0].dim()), &a, h1[0].dim()),
            });
        }
        joints.push(Joint {
            label: format!("H{j}(X)"),
            ok: exact_at(&a, &b, h2[j].dim()),
        });
        joints.push(Joint {
            label: format!("H{j}(X'')"),
            ok: exact_at(&b, &c, h3[j].dim()),
        });
        if j < imax {
            let a_next = h1[j + 1].post_compose(&h2[j + 1], &iota)?;
            joints.push(Joint {
                label: format!("H{}(X')", j + 1),
                ok: exact_at(&c, &a_next, h1[j + 1].dim()),
            });
        }
    }
    let ok = joints.iter().all(|j| j.ok);
    Ok(LesReport { dims, joints, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub dim_lhs: usize,
    pub dim_rhs: usize,
    pub relres_lhs: usize,
    pub relres_rhs: usize,
    pub identification_iso: bool,
    pub ok: bool,
}

/// `ℍ^i_{g,n}(X) ≅ ℍ^{i+d}_{g,n+d}(X)`: both read off one window, where the
/// identification is the identity on the shared Hom term.
pub fn shift_check<F: Field>(
    g: &GSpec<F>,
    e: &ExactStructure<F>,
    n: i64,
    d: i64,
    i: usize,
    x: &QMod<F>,
) -> Result<ShiftReport, Error> {
    let i2 = i as i64 + d;
    if i == 0 || i2 < 1 {
        return Err(Error::Invalid(
            "both cohomological degrees must be positive".into(),
        ));
    }
    let i2 = i2 as usize;
    let lo = n - i as i64 - 2;
    let hi = (n - 1).max(n + d - 1);
    let gw = g_window(g, x, e, lo, hi)?;
    let target = gw.target(x)?;
    let lhs = hom_cohomology(&gw.resolution(n, i + 2)?, &target, i)?;
    let rhs = hom_cohomology(&gw.resolution(n + d, i2 + 2)?, &target, i2)?;
    let m = lhs.induced(&rhs, |psi| psi.clone())?;
    let identification_iso = m.is_square() && (m.rows() == 0 || m.is_invertible());
    let relres_lhs = hh_relres(g, e, n, i, x)?.dim();
    let relres_rhs = hh_relres(g, e, n + d, i2, x)?.dim();
    let ok = identification_iso
        && lhs.dim() == rhs.dim()
        && relres_lhs == lhs.dim()
        && relres_rhs == rhs.dim();
    Ok(ShiftReport {
        dim_lhs: lhs.dim(),
        dim_rhs: rhs.dim(),
        relres_lhs,
        relres_rhs,
        identification_iso,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::induce_f;
    use crate::shape::{build_kcategory, mesh_generator, KCategory, MeshFamily};
    use qshape_linalg::PrimeField;

    fn fld() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn cpx() -> Arc<KCategory<PrimeField>> {
        build_kcategory(
            &mesh_generator(MeshFamily::ComplexShape, -4, 4).unwrap(),
            &fld(),
        )
        .unwrap()
    }

    fn k() -> Arc<Algebra<PrimeField>> {
        Arc::new(Algebra::ground(&fld()))
    }

    fn stalk(c: &Arc<KCategory<PrimeField>>, at: &str) -> QMod<PrimeField> {
        induce_s(
            c,
            &k(),
            c.object(at).unwrap(),
            &Algebra::vector_space(&fld(), 1),
        )
        .unwrap()
    }

    /// k in degrees `q` and `q+1` joined by `c`.
    fn pair(c: &Arc<KCategory<PrimeField>>, q: i64, coeff: i64) -> QMod<PrimeField> {
        let f = fld();
        let one = Algebra::vector_space(&f, 1);
        QMod::from_sparse(
            c.clone(),
            k(),
            vec![
                (c.object(&q.to_string()).unwrap(), one.clone()),
                (c.object(&(q + 1).to_string()).unwrap(), one),
            ],
            vec![(
                c.arrow(&format!("d{q}")).unwrap(),
                Matrix::from_i64(&f, &[&[coeff]]),
            )],
        )
        .unwrap()
    }

    #[test]
    fn stalks_detect_shifted_cohomology() {
        // ℍ¹_{S⟨q⟩,0}(X) picks out classical H^{q+1}(X).
        let c = cpx();
        let x = stalk(&c, "0");
        for q in -2..=2 {
            let u = stalk(&c, &q.to_string());
            let h = hh_ext(&u, 0, 1, &x).unwrap();
            let r = hh_relres(&GSpec::Module(u), &ExactStructure::Abelian, 0, 1, &x).unwrap();
            assert_eq!(h.dim(), usize::from(q == -1));
            assert_eq!(h.dim(), r.dim());
        }
        let p = pair(&c, 0, 0);
        assert_eq!(hh_ext(&stalk(&c, "0"), 0, 1, &p).unwrap().dim(), 1);
        assert_eq!(hh_ext(&stalk(&c, "-1"), 0, 1, &p).unwrap().dim(), 1);
    }

    #[test]
    fn discs_are_invisible() {
        let c = cpx();
        let disc = induce_f(
            &c,
            &k(),
            c.object("0").unwrap(),
            &Algebra::vector_space(&fld(), 1),
        )
        .unwrap();
        assert_eq!(disc.dims(), pair(&c, 0, 1).dims());
        for q in -2..=2 {
            for n in -1..=1 {
                for i in 1..=2 {
                    assert_eq!(
                        hh_ext(&stalk(&c, &q.to_string()), n, i, &disc)
                            .unwrap()
                            .dim(),
                        0
                    );
                }
            }
        }
        let zero = QMod::zero(&c, &k());
        assert_eq!(hh_ext(&stalk(&c, "0"), 0, 1, &zero).unwrap().dim(), 0);
    }

    #[test]
    fn coefficients_act_on_cohomology() {
        let c = cpx();
        let a = Arc::new(Algebra::dual_numbers(&fld()));
        let x = induce_s(&c, &a, c.object("1").unwrap(), &a.regular()).unwrap();
        let h = hh_ext(&stalk(&c, "0"), 0, 1, &x).unwrap();
        assert_eq!(h.dim(), 2);
        assert!(crate::algebra::validate_module(&a, &h.value).ok);
        assert!(crate::algebra::find_isomorphism(&h.value, &a.regular(), 3).is_some());
    }

    #[test]
    fn tor_side_and_duality() {
        let c = cpx();
        let op = c.opposite();
        let r = induce_s(
            &op,
            &k(),
            op.object("0").unwrap(),
            &Algebra::vector_space(&fld(), 1),
        )
        .unwrap();
        let disc = pair(&c, 0, 1);
        for n in -1..=1 {
            for i in 1..=2 {
                assert_eq!(hh_tor(&r, n, i, &disc).unwrap().dim(), 0);
            }
        }
        let mut nonzero = 0;
        for x in [stalk(&c, "0"), pair(&c, -1, 0), stalk(&c, "2")] {
            for n in -1..=1 {
                for i in 1..=2 {
                    let d = duality_check(&r, n, i, &x).unwrap();
                    assert!(d.ok, "n={n} i={i}: {d:?}");
                    nonzero += usize::from(d.tor_dim > 0);
                }
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn relative_formula_over_dual_numbers() {
        let c = cpx();
        let a = Arc::new(Algebra::dual_numbers(&fld()));
        let simple = a
            .simple_from_augmentation(&[fld().one(), fld().zero()])
            .unwrap();
        let x = QMod::from_sparse(
            c.clone(),
            a.clone(),
            vec![
                (c.object("0").unwrap(), simple.clone()),
                (c.object("1").unwrap(), a.regular()),
            ],
            vec![],
        )
        .unwrap();
        for q in ["-1", "0", "1"] {
            for n in -1..=1 {
                for i in 1..=2 {
                    let r =
                        hcal_relative(&a.regular(), q, n, i, &x, &ExactStructure::Abelian).unwrap();
                    assert!(r.agree, "q={q} n={n} i={i}: {r:?}");
                }
            }
        }
        let zero = QMod::zero(&c, &a);
        assert!(
            hcal_relative(&a.regular(), "0", 0, 1, &zero, &ExactStructure::Abelian)
                .unwrap()
                .agree
        );
    }

    #[test]
    fn les_of_disc_sequence() {
        // S_1 -> disc -> S_0 over complexes.
        let c = cpx();
        let f = fld();
        let disc = pair(&c, 0, 1);
        let s1 = stalk(&c, "1");
        let s0 = stalk(&c, "0");
        let n = c.num_objects();
        let at = |name: &str| c.object(name).unwrap();
        let comps = |src: &QMod<PrimeField>, dst: &QMod<PrimeField>, on: &str| {
            (0..n)
                .map(|q| {
                    if q == at(on) {
                        Matrix::identity(&f, 1)
                    } else {
                        Matrix::zeros(&f, dst.dim(q), src.dim(q))
                    }
                })
                .collect::<Vec<_>>()
        };
        let iota = QModMap::new(s1.clone(), disc.clone(), comps(&s1, &disc, "1")).unwrap();
        let pi = QModMap::new(disc.clone(), s0.clone(), comps(&disc, &s0, "0")).unwrap();
        for q in ["-1", "0", "1"] {
            let g = GSpec::Module(stalk(&c, q));
            let r = les_check(&iota, &pi, &g, &ExactStructure::Abelian, 0, 3).unwrap();
            assert!(r.ok, "{q}: {r:?}");
        }
        let a = Arc::new(Algebra::ground(&f));
        let g = GSpec::Stalk {
            test: a.regular(),
            object: "0".into(),
        };
        assert!(
            les_check(&iota, &pi, &g, &ExactStructure::Abelian, 1, 2)
                .unwrap()
                .ok
        );
    }

    #[test]
    fn shifting_degrees() {
        let c = cpx();
        let x = pair(&c, -1, 0);
        for q in ["-1", "0", "1"] {
            let g = GSpec::Module(stalk(&c, q));
            for (n, d, i) in [(0, 1, 1), (0, -1, 2), (1, 2, 1), (-1, 0, 1)] {
                let r = shift_check(&g, &ExactStructure::Abelian, n, d, i, &x).unwrap();
                assert!(r.ok, "{q} n={n} d={d} i={i}: {r:?}");
            }
        }
    }
}
