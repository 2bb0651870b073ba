//! Canonical totally acyclic complexes of relative projectives.
//!
//! For `X` with objectwise projective values the complex is spliced from
//! the canonical sequences: `𝕋^m = 𝔽(𝕂^{-m-1}X)` for `m < 0` and
//! `𝕋^m = 𝔾(ℂ^m X)` for `m ≥ 0`, with cycle objects `𝕂^{-m}X` (`m ≤ 0`)
//! and `ℂ^m X` (`m ≥ 0`). Only a finite range of degrees is built.

use std::sync::Arc;

use qshape_linalg::{Field, Matrix};
use serde::Serialize;

use crate::adjoint::{big_f, big_g, find_qmod_iso};
use crate::algebra::{hom_a, AModule, Algebra};
use crate::exact::{is_conflation, is_relative_projective, ExactStructure};
use crate::homcx::ProjComplex;
use crate::qmod::{cokernel, image, kernel, QMod, QModMap};
use crate::room::widen_for;
use crate::shape::KCategory;
use crate::Error;

#[derive(Clone, Debug)]
pub struct TacWindow<F: Field> {
    pub lo: i64,
    pub hi: i64,
    pub shape: Arc<KCategory<F>>,
    /// `𝕋^m` for `m` in `lo..=hi`.
    pub terms: Vec<QMod<F>>,
    /// `∂^m: 𝕋^m -> 𝕋^{m+1}` for `m` in `lo..hi`.
    pub diffs: Vec<QModMap<F>>,
    /// Cycle object in degree `m` (the image of `∂^{m-1}`) for `m` in `lo..=hi`.
    pub cycles: Vec<QMod<F>>,
}

impl<F: Field> TacWindow<F> {
    fn idx(&self, m: i64) -> Result<usize, Error> {
        if m < self.lo || m > self.hi {
            return Err(Error::Invalid(format!(
                "degree {m} outside [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok((m - self.lo) as usize)
    }
    pub fn term(&self, m: i64) -> Result<&QMod<F>, Error> {
        Ok(&self.terms[self.idx(m)?])
    }
    pub fn diff(&self, m: i64) -> Result<&QModMap<F>, Error> {
        if m == self.hi {
            return Err(Error::Invalid(format!(
                "no differential out of top degree {m}"
            )));
        }
        Ok(&self.diffs[self.idx(m)?])
    }
    pub fn cycle(&self, m: i64) -> Result<&QMod<F>, Error> {
        Ok(&self.cycles[self.idx(m)?])
    }

    /// The projective resolution of `σ^n` read off the window: position
    /// `j` holds `𝕋^{n-1-j}` for `j < count`.
    pub fn resolution(&self, n: i64, count: usize) -> Result<ProjComplex<F>, Error> {
        let mut terms = Vec::with_capacity(count);
        let mut maps = Vec::new();
        for j in 0..count as i64 {
            terms.push(self.term(n - 1 - j)?.clone());
            if j > 0 {
                maps.push(self.diff(n - 1 - j)?.clone());
            }
        }
        Ok(ProjComplex { terms, maps })
    }

    pub fn map_terms(
        &self,
        f: impl Fn(&QMod<F>) -> Result<QMod<F>, Error>,
    ) -> Result<Vec<QMod<F>>, Error> {
        self.terms.iter().map(f).collect()
    }
}

/// Arrows of room needed to build degrees `lo..=hi`, plus one more step so
/// the terms can themselves be covered.
pub fn tac_reach(nilpotence: usize, lo: i64, hi: i64) -> usize {
    let step = nilpotence.saturating_sub(1).max(1) as i64;
    let fwd = if lo < 0 { -lo * step } else { 0 };
    let bwd = if hi >= 0 { (hi + 1) * step } else { 0 };
    (fwd.max(bwd) + step) as usize
}

/// Widens the window of `x` so degrees `lo..=hi` of its canonical complex fit.
pub fn shape_for<F: Field>(x: &QMod<F>, lo: i64, hi: i64) -> Result<Arc<KCategory<F>>, Error> {
    widen_for(
        x.shape(),
        &x.support(),
        tac_reach(x.shape().reduction_length(), lo, hi),
    )
}

pub fn canonical_tac<F: Field>(
    x: &QMod<F>,
    e: &ExactStructure<F>,
    lo: i64,
    hi: i64,
) -> Result<TacWindow<F>, Error> {
    if lo > hi {
        return Err(Error::Invalid(format!("empty degree range [{lo}, {hi}]")));
    }
    for q in x.support() {
        if !e.module_is_projective(x.algebra(), x.value(q)) {
            return Err(Error::NotObjectwiseProjective(
                x.shape().object_name(q).to_string(),
            ));
        }
    }
    let shape = shape_for(x, lo, hi)?;
    let x = x.transport(&shape)?;

    // Left half: K_0 = X, ε_j: 𝔽(K_j) -> K_j, ι_j: K_{j+1} -> 𝔽(K_j).
    let left = if lo < 0 { (-lo) as usize } else { 0 };
    let mut ks = vec![x.clone()];
    let mut eps = Vec::new();
    let mut iotas = Vec::new();
    for j in 0..left {
        let e_j = big_f(&ks[j])?;
        let (k, i) = kernel(&e_j);
        eps.push(e_j);
        iotas.push(i);
        ks.push(k);
    }
    // Right half: C_0 = X, η_m: C_m -> 𝔾(C_m), π_m: 𝔾(C_m) -> C_{m+1}.
    let right = if hi >= 0 { hi as usize + 1 } else { 0 };
    let mut cs = vec![x.clone()];
    let mut etas = Vec::new();
    let mut pis = Vec::new();
    for m in 0..right {
        let h = big_g(&cs[m])?;
        if m + 1 < right {
            let (c, p) = cokernel(&h);
            pis.push(p);
            cs.push(c);
        }
        etas.push(h);
    }

    let mut terms = Vec::new();
    let mut cycles = Vec::new();
    let mut diffs = Vec::new();
    for m in lo..=hi {
        if m < 0 {
            let j = (-m - 1) as usize;
            terms.push(eps[j].source().clone());
            cycles.push(ks[(-m) as usize].clone());
        } else {
            terms.push(etas[m as usize].target().clone());
            cycles.push(cs[m as usize].clone());
        }
        if m == hi {
            break;
        }
        let d = if m <= -2 {
            let j = (-m - 1) as usize;
            iotas[j - 1].compose(&eps[j])
        } else if m == -1 {
            etas[0].compose(&eps[0])
        } else {
            etas[m as usize + 1].compose(&pis[m as usize])
        };
        diffs.push(d);
    }
    Ok(TacWindow {
        lo,
        hi,
        shape,
        terms,
        diffs,
        cycles,
    })
}

/// `σ^n X`: `ℂ^n X` for `n ≥ 0`, `𝕂^{-n} X` for `n < 0`.
pub fn syzygy<F: Field>(x: &QMod<F>, n: i64) -> Result<QMod<F>, Error> {
    let shape = shape_for(x, n.min(0) - 1, n.max(0))?;
    let mut y = x.transport(&shape)?;
    for _ in 0..n.unsigned_abs() {
        y = if n > 0 {
            cokernel(&big_g(&y)?).0
        } else {
            kernel(&big_f(&y)?).0
        };
    }
    Ok(y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TacCheck {
    RelativeProjective,
    SquareZero,
    Exactness,
    Conflation,
    TestHomExact,
}

#[derive(Clone, Debug, Serialize)]
pub struct TacFailure {
    pub degree: i64,
    pub check: TacCheck,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TacReport {
    pub lo: i64,
    pub hi: i64,
    pub ok: bool,
    pub first_failure: Option<TacFailure>,
}

/// Checks, degree by degree, relative projectivity of terms and, at interior
/// degrees, `∂∂ = 0`, exactness, conflation of the cycle sequence, and
/// exactness of `Hom_A(W(q), T)` for each test module `T`.
pub fn verify_totally_acyclic<F: Field>(
    w: &TacWindow<F>,
    theta: &[AModule<F>],
    e: &ExactStructure<F>,
) -> Result<TacReport, Error> {
    let fail = |degree, check, detail: String| {
        Ok(TacReport {
            lo: w.lo,
            hi: w.hi,
            ok: false,
            first_failure: Some(TacFailure {
                degree,
                check,
                detail,
            }),
        })
    };
    let c = &w.shape;
    for m in w.lo..=w.hi {
        if !is_relative_projective(w.term(m)?, e)? {
            return fail(
                m,
                TacCheck::RelativeProjective,
                "term has no section of its cover".into(),
            );
        }
        if m == w.lo || m == w.hi {
            continue;
        }
        let din = w.diff(m - 1)?;
        let dout = w.diff(m)?;
        if !dout.compose(din).is_zero() {
            return fail(
                m,
                TacCheck::SquareZero,
                "consecutive differentials compose nonzero".into(),
            );
        }
        for q in 0..c.num_objects() {
            let dim = w.term(m)?.dim(q);
            let (a, b) = (din.component(q), dout.component(q));
            if rank(a) + rank(b) != dim {
                return fail(
                    m,
                    TacCheck::Exactness,
                    format!("at object {}", c.object_name(q)),
                );
            }
        }
        let (_, incl, _) = image(din);
        let (_, _, onto) = image(dout);
        if !is_conflation(&incl, &onto, e)? {
            return fail(
                m,
                TacCheck::Conflation,
                "cycle sequence is not a conflation".into(),
            );
        }
        for (ti, t) in theta.iter().enumerate() {
            for q in 0..c.num_objects() {
                let mid = hom_a(w.term(m)?.value(q), t);
                let into = pullback_rank(&hom_a(w.term(m + 1)?.value(q), t), dout.component(q));
                let out = pullback_rank(&mid, din.component(q));
                if into + out != mid.len() {
                    return fail(
                        m,
                        TacCheck::TestHomExact,
                        format!("test module {ti} at object {}", c.object_name(q)),
                    );
                }
            }
        }
    }
    Ok(TacReport {
        lo: w.lo,
        hi: w.hi,
        ok: true,
        first_failure: None,
    })
}

fn rank<F: Field>(m: &Matrix<F>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        0
    } else {
        m.rank()
    }
}

/// Rank of `h ↦ h ∘ d` on the span of `hs`.
fn pullback_rank<F: Field>(hs: &[Matrix<F>], d: &Matrix<F>) -> usize {
    if hs.is_empty() || d.cols() == 0 {
        return 0;
    }
    let f = d.field();
    let rows = hs[0].rows() * d.cols();
    if rows == 0 {
        return 0;
    }
    let cols: Vec<Vec<F::Elem>> = hs.iter().map(|h| h.mul(d).data().to_vec()).collect();
    Matrix::from_columns(f, rows, &cols).rank()
}

/// `U ⊗_k T` for `U` with ground coefficients: values `U(q) ⊗ T` laid out
/// as `u·dim T + t`.
pub fn tensor_module<F: Field>(
    u: &QMod<F>,
    alg: &Arc<Algebra<F>>,
    t: &AModule<F>,
) -> Result<QMod<F>, Error> {
    if !u.algebra().is_ground() {
        return Err(Error::Invalid(
            "left factor must have ground coefficients".into(),
        ));
    }
    let f = u.field();
    let id = Matrix::identity(f, t.dim());
    let values = u.values().iter().map(|v| t.power(v.dim())).collect();
    let arrows = u.arrow_matrices().iter().map(|a| a.kron(&id)).collect();
    QMod::new(u.shape().clone(), alg.clone(), values, arrows)
}

pub fn tensor_map<F: Field>(
    phi: &QModMap<F>,
    source: &QMod<F>,
    target: &QMod<F>,
    t: &AModule<F>,
) -> QModMap<F> {
    let id = Matrix::identity(phi.source().field(), t.dim());
    let comps = phi.components().iter().map(|m| m.kron(&id)).collect();
    QModMap::new_unchecked(source.clone(), target.clone(), comps)
}

/// `𝕋(U) ⊗ T` computed termwise from the ground-field window of `U`.
pub fn tensor_window<F: Field>(
    w: &TacWindow<F>,
    alg: &Arc<Algebra<F>>,
    t: &AModule<F>,
) -> Result<TacWindow<F>, Error> {
    let terms = w.map_terms(|x| tensor_module(x, alg, t))?;
    let cycles = w
        .cycles
        .iter()
        .map(|x| tensor_module(x, alg, t))
        .collect::<Result<Vec<_>, _>>()?;
    let diffs = w
        .diffs
        .iter()
        .enumerate()
        .map(|(i, d)| tensor_map(d, &terms[i], &terms[i + 1], t))
        .collect();
    Ok(TacWindow {
        lo: w.lo,
        hi: w.hi,
        shape: w.shape.clone(),
        terms,
        diffs,
        cycles,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorCompatibility {
    pub lo: i64,
    pub hi: i64,
    pub terms_isomorphic: Vec<bool>,
    pub cycles_isomorphic: Vec<bool>,
    pub ok: bool,
}

/// Compares `𝕋(U) ⊗ T` with `𝕋(U ⊗ T)` (and their cycle objects) degreewise.
pub fn tensor_compatibility<F: Field>(
    u: &QMod<F>,
    alg: &Arc<Algebra<F>>,
    t: &AModule<F>,
    e: &ExactStructure<F>,
    lo: i64,
    hi: i64,
) -> Result<TensorCompatibility, Error> {
    let wu = canonical_tac(u, &ExactStructure::Abelian, lo, hi)?;
    let lhs = tensor_window(&wu, alg, t)?;
    let ut = tensor_module(u, alg, t)?;
    let rhs = canonical_tac(&ut, e, lo, hi)?;
    let iso = |a: &QMod<F>, b: &QMod<F>| -> Result<bool, Error> {
        let b = b.transport(a.shape())?;
        Ok(find_qmod_iso(a, &b, 7)?.is_some())
    };
    let terms_isomorphic = lhs
        .terms
        .iter()
        .zip(&rhs.terms)
        .map(|(a, b)| iso(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let cycles_isomorphic = lhs
        .cycles
        .iter()
        .zip(&rhs.cycles)
        .map(|(a, b)| iso(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let ok = terms_isomorphic
        .iter()
        .chain(&cycles_isomorphic)
        .all(|&b| b);
    Ok(TensorCompatibility {
        lo,
        hi,
        terms_isomorphic,
        cycles_isomorphic,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::induce_s;
    use crate::shape::{build_kcategory, mesh_generator, MeshFamily};
    use qshape_linalg::PrimeField;

    fn stalk(family: MeshFamily, at: &str) -> QMod<PrimeField> {
        let f = PrimeField::new(101).unwrap();
        let c = build_kcategory(&mesh_generator(family, 0, 6).unwrap(), &f).unwrap();
        let k = Arc::new(Algebra::ground(&f));
        induce_s(&c, &k, c.object(at).unwrap(), &Algebra::vector_space(&f, 1)).unwrap()
    }

    #[test]
    fn stalk_tac_is_totally_acyclic() {
        for fam in [
            MeshFamily::ComplexShape,
            MeshFamily::NComplex(3),
            MeshFamily::MeshAn(2),
        ] {
            let at = if matches!(fam, MeshFamily::MeshAn(_)) {
                "3:1"
            } else {
                "3"
            };
            let x = stalk(fam, at);
            let w = canonical_tac(&x, &ExactStructure::Abelian, -3, 2).unwrap();
            let k = Algebra::vector_space(x.field(), 1);
            let r = verify_totally_acyclic(&w, &[k], &ExactStructure::Abelian).unwrap();
            assert!(r.ok, "{fam:?}: {:?}", r.first_failure);
            assert_eq!(
                w.cycle(0).unwrap().dims(),
                x.transport(&w.shape).unwrap().dims()
            );
        }
    }

    #[test]
    fn doctored_differential_is_located() {
        let x = stalk(MeshFamily::ComplexShape, "3");
        let mut w = canonical_tac(&x, &ExactStructure::Abelian, -3, 2).unwrap();
        let i = (0 - w.lo) as usize;
        w.diffs[i] = QModMap::zero(w.diffs[i].source(), w.diffs[i].target());
        let k = Algebra::vector_space(x.field(), 1);
        let r = verify_totally_acyclic(&w, &[k], &ExactStructure::Abelian).unwrap();
        let fail = r.first_failure.unwrap();
        assert_eq!(fail.degree, 0);
        assert_eq!(fail.check, TacCheck::Exactness);
    }

    #[test]
    fn complex_syzygies_of_stalks_shift() {
        // For complexes, ℂ(S_q) = S_{q-1} and 𝕂(S_q) = S_{q+1}.
        let x = stalk(MeshFamily::ComplexShape, "3");
        let c = syzygy(&x, 1).unwrap();
        let k = syzygy(&x, -1).unwrap();
        assert_eq!(
            c.support()
                .iter()
                .map(|&q| c.shape().object_name(q).to_string())
                .collect::<Vec<_>>(),
            ["2"]
        );
        assert_eq!(
            k.support()
                .iter()
                .map(|&q| k.shape().object_name(q).to_string())
                .collect::<Vec<_>>(),
            ["4"]
        );
    }
}
