//! Complexes of projectives and the cohomology of their Hom complexes.
//!
//! A [`ProjComplex`] is indexed homologically by position: `maps[j]` goes
//! from `terms[j + 1]` to `terms[j]`. `Hom(P, X)` is then a cochain complex
//! with `δ^j: Hom(P_j, X) -> Hom(P_{j+1}, X)`, `ψ ↦ ψ ∘ d_j`.

use qshape_linalg::{Field, Matrix, Subquotient};

use crate::qmod::{hom_qa, HomSpace, QMod, QModMap};
use crate::Error;

#[derive(Clone, Debug)]
pub struct ProjComplex<F: Field> {
    pub terms: Vec<QMod<F>>,
    pub maps: Vec<QModMap<F>>,
}

impl<F: Field> ProjComplex<F> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Cohomology of `Hom(P, X)` at one position, in the ambient coordinates of
/// `Hom(P_j, X)`.
#[derive(Clone, Debug)]
pub struct HomCohomology<F: Field> {
    pub position: usize,
    pub space: HomSpace<F>,
    pub group: Subquotient<F>,
}

impl<F: Field> HomCohomology<F> {
    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// Matrix of the map induced by an ambient-coordinate operator into
    /// another cohomology group.
    pub fn induced(
        &self,
        other: &HomCohomology<F>,
        op: impl Fn(&QModMap<F>) -> QModMap<F>,
    ) -> Result<Matrix<F>, Error> {
        Ok(self.group.induced_to(&other.group, |v| {
            other.space.to_vector(&op(&self.space.from_vector(v)))
        })?)
    }

    /// Map induced by post-composition with `phi: X -> Y`.
    pub fn post_compose(
        &self,
        other: &HomCohomology<F>,
        phi: &QModMap<F>,
    ) -> Result<Matrix<F>, Error> {
        self.induced(other, |psi| phi.compose(psi))
    }
}

/// Differential `Hom(P_j, X) -> Hom(P_{j+1}, X)` on basis elements, with
/// images in ambient coordinates.
fn delta<F: Field>(
    cx: &ProjComplex<F>,
    j: usize,
    from: &HomSpace<F>,
    to: &HomSpace<F>,
) -> Matrix<F> {
    from.apply_to_basis(to, |psi| psi.compose(&cx.maps[j]))
}

pub fn hom_cohomology<F: Field>(
    cx: &ProjComplex<F>,
    x: &QMod<F>,
    j: usize,
) -> Result<HomCohomology<F>, Error> {
    let f = x.field();
    let space = hom_qa(&cx.terms[j], x)?;
    let cycles = if j < cx.maps.len() {
        let next = hom_qa(&cx.terms[j + 1], x)?;
        let d = delta(cx, j, &space, &next);
        space.basis().mul(&d.kernel())
    } else {
        space.basis().clone()
    };
    let boundaries = if j > 0 {
        let prev = hom_qa(&cx.terms[j - 1], x)?;
        delta(cx, j - 1, &prev, &space)
    } else {
        Matrix::zeros(f, space.ambient_dim(), 0)
    };
    let group = Subquotient::new(&cycles, &boundaries)?;
    Ok(HomCohomology {
        position: j,
        space,
        group,
    })
}

/// Action of the coefficient algebra of `x` on a cohomology group computed
/// with the underlying ground-field module of `x` as target.
pub fn algebra_action<F: Field>(
    h: &HomCohomology<F>,
    x: &QMod<F>,
) -> Result<Vec<Matrix<F>>, Error> {
    (0..x.algebra().dim())
        .map(|i| {
            h.induced(h, |psi| {
                let comps = psi
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(q, m)| x.value(q).act(i).mul(m))
                    .collect();
                QModMap::new_unchecked(psi.source().clone(), psi.target().clone(), comps)
            })
        })
        .collect()
}

/// The connecting map `H^j(Hom(P, X'')) -> H^{j+1}(Hom(P, X'))` of a short
/// exact sequence `X' -ι-> X -π-> X''` on which `Hom(P_j, -)` is exact.
pub fn connecting_map<F: Field>(
    cx: &ProjComplex<F>,
    iota: &QModMap<F>,
    pi: &QModMap<F>,
    from: &HomCohomology<F>,
    to: &HomCohomology<F>,
) -> Result<Matrix<F>, Error> {
    let f = iota.source().field();
    let j = from.position;
    let mid = hom_qa(&cx.terms[j], iota.target())?;
    let mid_next = hom_qa(&cx.terms[j + 1], iota.target())?;
    let lift_sys = mid.apply_to_basis(&from.space, |psi| pi.compose(psi));
    let incl_sys = to.space.apply_to_basis(&mid_next, |psi| iota.compose(psi));
    let mut cols = Vec::new();
    for r in from.group.representatives().columns() {
        let c = lift_sys
            .solve_vec(&r)
            .map_err(|_| Error::NotExact("cycle does not lift along the epimorphism".into()))?;
        let lift = mid.from_vector(&mid.basis().mul_vec(&c));
        let image = mid_next.to_vector(&lift.compose(&cx.maps[j]));
        let c2 = incl_sys.solve_vec(&image).map_err(|_| {
            Error::NotExact("boundary does not factor through the monomorphism".into())
        })?;
        cols.push(to.group.coords(&to.space.basis().mul_vec(&c2))?);
    }
    Ok(Matrix::from_columns(f, to.dim(), &cols))
}

/// Whether `A -f-> B -g-> C` is exact at `B` (`dim B` given explicitly so
/// that empty matrices carry no ambiguity).
pub fn exact_at<F: Field>(f: &Matrix<F>, g: &Matrix<F>, dim_b: usize) -> bool {
    let rf = if f.rows() == 0 || f.cols() == 0 {
        0
    } else {
        f.rank()
    };
    let rg = if g.rows() == 0 || g.cols() == 0 {
        0
    } else {
        g.rank()
    };
    let composite_zero = f.cols() == 0 || g.rows() == 0 || g.mul(f).is_zero();
    composite_zero && rf + rg == dim_b
}
