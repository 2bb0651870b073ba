//! Chain complexes and N-complexes of modules over a finite-dimensional
//! algebra, with textbook cohomology, quasi-isomorphisms and homotopy classes.
//!
//! Deliberately independent of the Q-shaped machinery: only the linear
//! algebra layer is shared. [`translate`] reads a module on a complex-shaped
//! window as a complex.

use std::sync::Arc;

use qshape_core::algebra::{AModule, Algebra};
use qshape_core::qmod::QMod;
use qshape_core::shape::{KCategory, MeshFamily};
use qshape_linalg::{Field, Matrix, Subquotient};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassicalError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid complex: {0}")]
    Invalid(String),
}

/// A module given by the matrices of the algebra's basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Module<F: Field> {
    pub dim: usize,
    pub action: Vec<Matrix<F>>,
}

/// An N-complex `C^m -> C^{m+1}` concentrated in `lo .. lo + terms.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexA<F: Field> {
    pub field: F,
    pub order: usize,
    pub algebra_dim: usize,
    pub lo: i64,
    pub terms: Vec<Module<F>>,
    /// `diffs[i]: C^{lo+i} -> C^{lo+i+1}`
    pub diffs: Vec<Matrix<F>>,
}

/// A degreewise family of maps `C^m -> D^m`, indexed from `lo`.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    pub source: ComplexA<F>,
    pub target: ComplexA<F>,
    pub lo: i64,
    pub comps: Vec<Matrix<F>>,
}

impl<F: Field> ComplexA<F> {
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn dim(&self, m: i64) -> usize {
        self.term(m).map_or(0, |t| t.dim)
    }

    pub fn term(&self, m: i64) -> Option<&Module<F>> {
        if m < self.lo {
            return None;
        }
        self.terms.get((m - self.lo) as usize)
    }

    /// `d^m`, zero outside the stored range.
    pub fn d(&self, m: i64) -> Matrix<F> {
        if m >= self.lo && ((m - self.lo) as usize) < self.diffs.len() {
            self.diffs[(m - self.lo) as usize].clone()
        } else {
            Matrix::zeros(&self.field, self.dim(m + 1), self.dim(m))
        }
    }

    /// `d^{m+r-1} ∘ … ∘ d^m`.
    pub fn d_power(&self, m: i64, r: usize) -> Matrix<F> {
        let mut acc = Matrix::identity(&self.field, self.dim(m));
        for k in 0..r as i64 {
            acc = self.d(m + k).mul(&acc);
        }
        acc
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        for m in self.lo..=self.hi() {
            if !self.d_power(m, self.order).is_zero() {
                return Err(ClassicalError::Invalid(format!(
                    "{} consecutive differentials from degree {m} do not compose to zero",
                    self.order
                )));
            }
        }
        Ok(())
    }
}

fn rank<F: Field>(m: &Matrix<F>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        0
    } else {
        m.rank()
    }
}

fn kernel<F: Field>(f: &F, m: &Matrix<F>) -> Matrix<F> {
    if m.rows() == 0 {
        Matrix::identity(f, m.cols())
    } else {
        m.kernel()
    }
}

/// Reads a module on a complex or N-complex window as a complex over the
/// same degrees.
pub fn translate<F: Field>(x: &QMod<F>) -> Result<ComplexA<F>, ClassicalError> {
    let shape = x.shape();
    let meta = shape
        .window_meta()
        .filter(|m| !m.opposite)
        .ok_or_else(|| ClassicalError::ShapeMismatch("not a generated complex window".into()))?;
    let order = match meta.family {
        MeshFamily::ComplexShape => 2,
        MeshFamily::NComplex(n) => n,
        MeshFamily::MeshAn(_) => {
            return Err(ClassicalError::ShapeMismatch(
                "mesh windows are not complexes".into(),
            ))
        }
    };
    let index = |m: i64| {
        shape
            .object(&m.to_string())
            .map_err(|e| ClassicalError::ShapeMismatch(e.to_string()))
    };
    let mut terms = Vec::new();
    for m in meta.lo..=meta.hi {
        let v = x.value(index(m)?);
        terms.push(Module {
            dim: v.dim(),
            action: v.action().to_vec(),
        });
    }
    let mut diffs = Vec::new();
    for m in meta.lo..meta.hi {
        let a = shape
            .arrow(&format!("d{m}"))
            .ok_or_else(|| ClassicalError::ShapeMismatch(format!("arrow d{m} missing")))?;
        diffs.push(x.arrow(a).clone());
    }
    Ok(ComplexA {
        field: x.field().clone(),
        order,
        algebra_dim: x.algebra().dim(),
        lo: meta.lo,
        terms,
        diffs,
    })
}

/// The inverse of [`translate`] onto a window of the matching family.
pub fn to_qmod<F: Field>(
    c: &ComplexA<F>,
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
) -> Result<QMod<F>, ClassicalError> {
    let err = |e: qshape_core::Error| ClassicalError::ShapeMismatch(e.to_string());
    let mut values = Vec::new();
    for m in c.lo..=c.hi() {
        let t = c.term(m).expect("in range");
        if t.dim == 0 {
            continue;
        }
        values.push((
            shape.object(&m.to_string()).map_err(err)?,
            AModule::new(t.dim, t.action.clone()).map_err(err)?,
        ));
    }
    let mut arrows = Vec::new();
    for m in c.lo..c.hi() {
        let d = c.d(m);
        if d.rows() == 0 || d.cols() == 0 {
            continue;
        }
        let a = shape
            .arrow(&format!("d{m}"))
            .ok_or_else(|| ClassicalError::ShapeMismatch(format!("arrow d{m} missing")))?;
        arrows.push((a, d));
    }
    QMod::from_sparse(shape.clone(), alg.clone(), values, arrows).map_err(err)
}

/// `ker d^{(r)} / im d^{(N-r)}` at degree `m` as a subquotient of `C^m`.
fn amplitude_group<F: Field>(c: &ComplexA<F>, r: usize, m: i64) -> Subquotient<F> {
    let f = &c.field;
    let cycles = kernel(f, &c.d_power(m, r));
    let s = (c.order - r) as i64;
    let boundaries = c.d_power(m - s, c.order - r);
    Subquotient::new(&cycles, &boundaries).expect("N-complex: images lie in kernels")
}

/// Amplitude cohomology `ker d^r / im d^{N-r}` at degree `m`, as a module.
pub fn amplitude<F: Field>(c: &ComplexA<F>, r: usize, m: i64) -> Module<F> {
    assert!(r >= 1 && r < c.order, "amplitude index must lie in 1..N");
    let g = amplitude_group(c, r, m);
    let action = match c.term(m) {
        Some(t) if g.dim() > 0 => t
            .action
            .iter()
            .map(|a| {
                g.induced_to(&g, |v| a.mul_vec(v))
                    .expect("action preserves the subquotient")
            })
            .collect(),
        _ => (0..c.algebra_dim)
            .map(|_| Matrix::zeros(&c.field, g.dim(), g.dim()))
            .collect(),
    };
    Module {
        dim: g.dim(),
        action,
    }
}

/// Ordinary cohomology `H^m` (amplitude 1 of a 2-complex).
pub fn cohomology<F: Field>(c: &ComplexA<F>, m: i64) -> Module<F> {
    amplitude(c, 1, m)
}

/// Degrees where cohomology could be nonzero.
fn degree_range<F: Field>(c: &ComplexA<F>) -> std::ops::RangeInclusive<i64> {
    c.lo - c.order as i64..=c.hi() + c.order as i64
}

pub fn is_acyclic<F: Field>(c: &ComplexA<F>) -> bool {
    degree_range(c).all(|m| (1..c.order).all(|r| amplitude_group(c, r, m).dim() == 0))
}

impl<F: Field> ChainMap<F> {
    pub fn comp(&self, m: i64) -> Matrix<F> {
        if m >= self.lo && ((m - self.lo) as usize) < self.comps.len() {
            self.comps[(m - self.lo) as usize].clone()
        } else {
            Matrix::zeros(&self.source.field, self.target.dim(m), self.source.dim(m))
        }
    }
}

/// Reads a morphism on a complex window as a chain map.
pub fn translate_map<F: Field>(
    phi: &qshape_core::qmod::QModMap<F>,
) -> Result<ChainMap<F>, ClassicalError> {
    let source = translate(phi.source())?;
    let target = translate(phi.target())?;
    let shape = phi.source().shape();
    let comps = (source.lo..=source.hi())
        .map(|m| {
            shape
                .object(&m.to_string())
                .map(|q| phi.component(q).clone())
                .map_err(|e| ClassicalError::ShapeMismatch(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChainMap {
        lo: source.lo,
        source,
        target,
        comps,
    })
}

/// Induced maps on all amplitude cohomologies are isomorphisms.
pub fn is_quasi_iso<F: Field>(phi: &ChainMap<F>) -> bool {
    let (c, d) = (&phi.source, &phi.target);
    let lo = c.lo.min(d.lo) - c.order as i64;
    let hi = c.hi().max(d.hi()) + c.order as i64;
    for m in lo..=hi {
        for r in 1..c.order {
            let gc = amplitude_group(c, r, m);
            let gd = amplitude_group(d, r, m);
            if gc.dim() != gd.dim() {
                return false;
            }
            if gc.dim() == 0 {
                continue;
            }
            let f = phi.comp(m);
            let ind = gc
                .induced_to(&gd, |v| f.mul_vec(v))
                .expect("chain maps preserve cycles");
            if !ind.is_invertible() {
                return false;
            }
        }
    }
    true
}

/// Row-major `vec(P X Q) = (P ⊗ Qᵀ) vec(X)`.
fn sandwich<F: Field>(p: &Matrix<F>, q: &Matrix<F>) -> Matrix<F> {
    p.kron(&q.transpose())
}

struct Layout {
    lo: i64,
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    total: usize,
}

impl Layout {
    fn new(lo: i64, shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::new();
        let mut total = 0;
        for (r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        Layout {
            lo,
            offsets,
            shapes,
            total,
        }
    }
    fn slot(&self, m: i64) -> Option<usize> {
        let i = m - self.lo;
        (i >= 0 && (i as usize) < self.shapes.len()).then_some(i as usize)
    }
    fn unpack<F: Field>(&self, f: &F, v: &[F::Elem], m: i64) -> Matrix<F> {
        let i = self.slot(m).expect("degree in layout");
        let (r, c) = self.shapes[i];
        Matrix::from_data(
            f,
            r,
            c,
            v[self.offsets[i]..self.offsets[i] + r * c].to_vec(),
        )
    }
}

/// Block rows `Σ_k coeffs_k(vec X_{m_k})` collected into one system.
struct System<F: Field> {
    field: F,
    cols: usize,
    rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> System<F> {
    fn add(&mut self, blocks: &[(usize, Matrix<F>)]) {
        let height = blocks.first().map_or(0, |b| b.1.rows());
        for i in 0..height {
            let mut row = vec![self.field.zero(); self.cols];
            for (off, m) in blocks {
                for j in 0..m.cols() {
                    let e = m.get(i, j);
                    if !self.field.is_zero(e) {
                        row[off + j] = self.field.add(&row[off + j], e);
                    }
                }
            }
            self.rows.push(row);
        }
    }
    fn kernel(&self) -> Matrix<F> {
        if self.rows.is_empty() {
            return Matrix::identity(&self.field, self.cols);
        }
        Matrix::from_rows(&self.field, self.rows.clone()).kernel()
    }
}

fn a_linearity<F: Field>(sys: &mut System<F>, off: usize, src: &Module<F>, dst: &Module<F>) {
    let f = &sys.field.clone();
    for (a, b) in src.action.iter().zip(&dst.action) {
        // X·a_src - a_dst·X
        let left = sandwich(&Matrix::identity(f, dst.dim), a);
        let right = sandwich(b, &Matrix::identity(f, src.dim));
        sys.add(&[(off, left.sub(&right))]);
    }
}

/// Basis (as columns of packed degreewise matrices) of the chain maps `C -> D`.
fn chain_maps<F: Field>(c: &ComplexA<F>, d: &ComplexA<F>) -> (Layout, Matrix<F>) {
    let f = &c.field;
    let lo = c.lo.min(d.lo);
    let hi = c.hi().max(d.hi());
    let layout = Layout::new(lo, (lo..=hi).map(|m| (d.dim(m), c.dim(m))).collect());
    let zero = |n: usize| Module {
        dim: n,
        action: (0..c.algebra_dim)
            .map(|_| Matrix::zeros(f, n, n))
            .collect::<Vec<_>>(),
    };
    let mut sys = System {
        field: f.clone(),
        cols: layout.total,
        rows: Vec::new(),
    };
    for m in lo..=hi {
        let i = layout.slot(m).unwrap();
        let src = c.term(m).cloned().unwrap_or_else(|| zero(0));
        let dst = d.term(m).cloned().unwrap_or_else(|| zero(0));
        a_linearity(&mut sys, layout.offsets[i], &src, &dst);
        if m < hi {
            // d_D f^m - f^{m+1} d_C = 0
            let j = layout.slot(m + 1).unwrap();
            let left = sandwich(&d.d(m), &Matrix::identity(f, c.dim(m)));
            let right = sandwich(&Matrix::identity(f, d.dim(m + 1)), &c.d(m)).neg();
            sys.add(&[(layout.offsets[i], left), (layout.offsets[j], right)]);
        }
    }
    let basis = sys.kernel();
    (layout, basis)
}

/// Dimension of the space of chain maps `C -> D`.
pub fn chain_map_dim<F: Field>(c: &ComplexA<F>, d: &ComplexA<F>) -> usize {
    chain_maps(c, d).1.cols()
}

/// Dimension of chain maps modulo null-homotopic ones, where a homotopy is
/// `s^m: C^m -> D^{m-N+1}` and `f = Σ_i d^{N-1-i} s d^i`.
pub fn homotopy_class_dim<F: Field>(c: &ComplexA<F>, d: &ComplexA<F>) -> usize {
    let f = &c.field;
    let n = c.order as i64;
    let (maps_layout, maps) = chain_maps(c, d);
    let lo = c.lo.min(d.lo);
    let hi = c.hi().max(d.hi());
    let h_layout = Layout::new(
        lo,
        (lo..=hi).map(|m| (d.dim(m - n + 1), c.dim(m))).collect(),
    );
    let zero = |k: usize| Module {
        dim: k,
        action: (0..c.algebra_dim)
            .map(|_| Matrix::zeros(f, k, k))
            .collect::<Vec<_>>(),
    };
    let mut sys = System {
        field: f.clone(),
        cols: h_layout.total,
        rows: Vec::new(),
    };
    for m in lo..=hi {
        let i = h_layout.slot(m).unwrap();
        let src = c.term(m).cloned().unwrap_or_else(|| zero(0));
        let dst = d.term(m - n + 1).cloned().unwrap_or_else(|| zero(0));
        a_linearity(&mut sys, h_layout.offsets[i], &src, &dst);
    }
    let homotopies = sys.kernel();
    let mut images: Vec<Vec<F::Elem>> = Vec::new();
    for col in homotopies.columns() {
        let mut v = vec![f.zero(); maps_layout.total];
        for m in lo..=hi {
            let slot = maps_layout.slot(m).unwrap();
            let mut acc = Matrix::zeros(f, d.dim(m), c.dim(m));
            for i in 0..n {
                let k = m + i;
                let Some(_) = h_layout.slot(k) else { continue };
                let s = h_layout.unpack(f, &col, k);
                let term = d
                    .d_power(k - n + 1, (n - 1 - i) as usize)
                    .mul(&s)
                    .mul(&c.d_power(m, i as usize));
                acc = acc.add(&term);
            }
            let off = maps_layout.offsets[slot];
            for (t, e) in acc.data().iter().enumerate() {
                v[off + t] = e.clone();
            }
        }
        images.push(v);
    }
    let null_rank = if images.is_empty() {
        0
    } else {
        rank(&Matrix::from_columns(f, maps_layout.total, &images))
    };
    maps.cols() - null_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use qshape_linalg::PrimeField;

    fn field() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn kmod(n: usize) -> Module<PrimeField> {
        Module {
            dim: n,
            action: vec![Matrix::identity(&field(), n)],
        }
    }

    fn two_term(c: i64) -> ComplexA<PrimeField> {
        ComplexA {
            field: field(),
            order: 2,
            algebra_dim: 1,
            lo: 0,
            terms: vec![kmod(1), kmod(1)],
            diffs: vec![Matrix::from_i64(&field(), &[&[c]])],
        }
    }

    #[test]
    fn identity_complex_is_acyclic_and_contractible() {
        let disc = two_term(1);
        assert!(is_acyclic(&disc));
        assert_eq!(chain_map_dim(&disc, &disc), 1);
        assert_eq!(homotopy_class_dim(&disc, &disc), 0);
    }

    #[test]
    fn zero_map_pair_has_two_cohomologies() {
        let c = two_term(0);
        assert_eq!(cohomology(&c, 0).dim, 1);
        assert_eq!(cohomology(&c, 1).dim, 1);
        assert!(!is_acyclic(&c));
        assert_eq!(homotopy_class_dim(&c, &c), 2);
    }

    #[test]
    fn three_complex_amplitudes() {
        // A single module at degree 0: ker d = A.
        let c = ComplexA {
            field: field(),
            order: 3,
            algebra_dim: 1,
            lo: 0,
            terms: vec![kmod(2)],
            diffs: vec![],
        };
        assert_eq!(amplitude(&c, 1, 0).dim, 2);
        assert_eq!(amplitude(&c, 2, 0).dim, 2);
        // k = k = k is a contractible 3-complex.
        let seg = ComplexA {
            field: field(),
            order: 3,
            algebra_dim: 1,
            lo: 0,
            terms: vec![kmod(1), kmod(1), kmod(1)],
            diffs: vec![Matrix::identity(&field(), 1), Matrix::identity(&field(), 1)],
        };
        assert!(seg.validate().is_ok());
        assert!(is_acyclic(&seg));
        assert_eq!(homotopy_class_dim(&seg, &seg), 0);
        // k = k is not.
        let short = ComplexA {
            terms: vec![kmod(1), kmod(1)],
            diffs: vec![Matrix::identity(&field(), 1)],
            ..seg
        };
        assert!(!is_acyclic(&short));
    }

    #[test]
    fn projection_from_disc_is_not_quasi_iso() {
        let disc = two_term(1);
        let stalk = ComplexA {
            terms: vec![kmod(1), kmod(0)],
            diffs: vec![Matrix::zeros(&field(), 0, 1)],
            ..disc.clone()
        };
        let proj = ChainMap {
            source: disc.clone(),
            target: stalk,
            lo: 0,
            comps: vec![Matrix::identity(&field(), 1), Matrix::zeros(&field(), 0, 1)],
        };
        assert!(!is_quasi_iso(&proj));
        let id = ChainMap {
            source: disc.clone(),
            target: disc.clone(),
            lo: 0,
            comps: vec![Matrix::identity(&field(), 1), Matrix::identity(&field(), 1)],
        };
        assert!(is_quasi_iso(&id));
    }
}
