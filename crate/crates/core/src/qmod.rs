//! Q-shaped A-modules on a window: k-linear functors `Q -> Mod A`, natural
//! transformations, Hom spaces and the objectwise abelian operations.

use std::sync::Arc;

use qshape_linalg::{Field, Matrix, Quotient};

use crate::algebra::{hom_a, validate_module, AModule, Algebra, Report};
use crate::shape::{KCategory, Path};
use crate::Error;

#[derive(Clone, Debug)]
pub struct QMod<F: Field> {
    shape: Arc<KCategory<F>>,
    algebra: Arc<Algebra<F>>,
    values: Arc<Vec<AModule<F>>>,
    arrows: Arc<Vec<Matrix<F>>>,
}

impl<F: Field> PartialEq for QMod<F> {
    fn eq(&self, other: &Self) -> bool {
        same_shape(&self.shape, &other.shape)
            && self.algebra == other.algebra
            && self.values == other.values
            && self.arrows == other.arrows
    }
}

pub fn same_shape<F: Field>(a: &Arc<KCategory<F>>, b: &Arc<KCategory<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> QMod<F> {
    /// `values[q]` for every object, `arrows[a]` of size `dim(dst) x dim(src)`.
    pub fn new(
        shape: Arc<KCategory<F>>,
        algebra: Arc<Algebra<F>>,
        values: Vec<AModule<F>>,
        arrows: Vec<Matrix<F>>,
    ) -> Result<Self, Error> {
        if values.len() != shape.num_objects() || arrows.len() != shape.arrows().len() {
            return Err(Error::Invalid(
                "wrong number of values or arrow matrices".into(),
            ));
        }
        for v in &values {
            if v.action().len() != algebra.dim() {
                return Err(Error::Invalid(
                    "value has the wrong number of action matrices".into(),
                ));
            }
        }
        for (a, m) in shape.arrows().iter().zip(&arrows) {
            if m.rows() != values[a.dst].dim() || m.cols() != values[a.src].dim() {
                return Err(Error::Invalid(format!(
                    "arrow `{}` matrix has wrong size",
                    a.name
                )));
            }
        }
        Ok(QMod {
            shape,
            algebra,
            values: Arc::new(values),
            arrows: Arc::new(arrows),
        })
    }

    /// Values and arrow actions given only where nonzero.
    pub fn from_sparse(
        shape: Arc<KCategory<F>>,
        algebra: Arc<Algebra<F>>,
        values: Vec<(usize, AModule<F>)>,
        arrows: Vec<(usize, Matrix<F>)>,
    ) -> Result<Self, Error> {
        let f = shape.field().clone();
        let mut vals = vec![algebra.zero_module(); shape.num_objects()];
        for (q, v) in values {
            vals[q] = v;
        }
        let mut mats: Vec<Matrix<F>> = shape
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(&f, vals[a.dst].dim(), vals[a.src].dim()))
            .collect();
        for (a, m) in arrows {
            mats[a] = m;
        }
        Self::new(shape, algebra, vals, mats)
    }

    pub fn zero(shape: &Arc<KCategory<F>>, algebra: &Arc<Algebra<F>>) -> Self {
        Self::from_sparse(shape.clone(), algebra.clone(), vec![], vec![]).expect("zero module")
    }

    pub fn shape(&self) -> &Arc<KCategory<F>> {
        &self.shape
    }
    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }
    pub fn field(&self) -> &F {
        self.shape.field()
    }
    pub fn value(&self, q: usize) -> &AModule<F> {
        &self.values[q]
    }
    pub fn values(&self) -> &[AModule<F>] {
        &self.values
    }
    pub fn dim(&self, q: usize) -> usize {
        self.values[q].dim()
    }
    pub fn arrow(&self, a: usize) -> &Matrix<F> {
        &self.arrows[a]
    }
    pub fn arrow_matrices(&self) -> &[Matrix<F>] {
        &self.arrows
    }
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&q| self.dim(q) > 0)
            .collect()
    }
    pub fn total_dim(&self) -> usize {
        self.values.iter().map(|v| v.dim()).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn dims(&self) -> Vec<usize> {
        self.values.iter().map(|v| v.dim()).collect()
    }

    pub fn path_action(&self, path: &Path) -> Matrix<F> {
        let f = self.field();
        let mut m = Matrix::identity(f, self.dim(path.src));
        for &a in &path.arrows {
            m = self.arrows[a].mul(&m);
        }
        m
    }

    /// `X(b)` for basis morphism `j` of `Q(p, q)`.
    pub fn basis_action(&self, p: usize, q: usize, j: usize) -> Matrix<F> {
        self.path_action(&self.shape.hom_basis(p, q)[j])
    }

    /// `X(g)` for an element of `Q(p, q)` given by coordinates.
    pub fn element_action(&self, p: usize, q: usize, coords: &[F::Elem]) -> Matrix<F> {
        let f = self.field();
        let mut acc = Matrix::zeros(f, self.dim(q), self.dim(p));
        for (j, c) in coords.iter().enumerate() {
            if !f.is_zero(c) {
                acc.add_scaled(c, &self.basis_action(p, q, j));
            }
        }
        acc
    }

    pub fn evaluate(&self, object: &str) -> Result<AModule<F>, Error> {
        Ok(self.values[self.shape.object(object)?].clone())
    }

    /// The forgetful image over the ground field.
    pub fn underlying_k(&self) -> QMod<F> {
        QMod {
            shape: self.shape.clone(),
            algebra: Arc::new(Algebra::ground(self.field())),
            values: Arc::new(self.values.iter().map(|v| v.underlying()).collect()),
            arrows: self.arrows.clone(),
        }
    }

    /// Same data on another window of the same family (objects and arrows
    /// matched by name). Fails if some support object or arrow is missing.
    pub fn transport(&self, shape: &Arc<KCategory<F>>) -> Result<QMod<F>, Error> {
        if same_shape(&self.shape, shape) {
            return Ok(self.clone());
        }
        let mut values = Vec::new();
        for q in self.support() {
            values.push((
                shape.object(self.shape.object_name(q))?,
                self.values[q].clone(),
            ));
        }
        let mut arrows = Vec::new();
        for (i, a) in self.shape.arrows().iter().enumerate() {
            if self.dim(a.src) == 0 || self.dim(a.dst) == 0 {
                continue;
            }
            let j = shape
                .arrow(&a.name)
                .ok_or_else(|| Error::ShapeMismatch(format!("arrow `{}` missing", a.name)))?;
            arrows.push((j, self.arrows[i].clone()));
        }
        let out = QMod::from_sparse(shape.clone(), self.algebra.clone(), values, arrows)?;
        // Arrows of the new window touching the support but absent before
        // would carry unspecified data.
        for a in shape.arrows() {
            if out.dim(a.src) > 0 && out.dim(a.dst) > 0 && self.shape.arrow(&a.name).is_none() {
                return Err(Error::ShapeMismatch(format!(
                    "arrow `{}` has no data",
                    a.name
                )));
            }
        }
        Ok(out)
    }

    pub fn direct_sum(parts: &[&QMod<F>]) -> Result<DirectSum<F>, Error> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
        let (shape, alg) = (first.shape.clone(), first.algebra.clone());
        for p in parts {
            check_compatible(first, p)?;
        }
        let f = shape.field().clone();
        let n = shape.num_objects();
        let values: Vec<AModule<F>> = (0..n)
            .map(|q| {
                let vs: Vec<&AModule<F>> = parts.iter().map(|p| p.value(q)).collect();
                AModule::direct_sum_all(&f, alg.dim(), &vs)
            })
            .collect();
        let arrows: Vec<Matrix<F>> = (0..shape.arrows().len())
            .map(|a| {
                let blocks: Vec<Matrix<F>> = parts.iter().map(|p| p.arrow(a).clone()).collect();
                Matrix::block_diag(&f, &blocks)
            })
            .collect();
        let sum = QMod::new(shape.clone(), alg, values, arrows)?;
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        let mut offsets = vec![0usize; n];
        for p in parts {
            let inc: Vec<Matrix<F>> = (0..n)
                .map(|q| {
                    let mut m = Matrix::zeros(&f, sum.dim(q), p.dim(q));
                    m.paste(offsets[q], 0, &Matrix::identity(&f, p.dim(q)));
                    m
                })
                .collect();
            let proj: Vec<Matrix<F>> = inc.iter().map(|m| m.transpose()).collect();
            for q in 0..n {
                offsets[q] += p.dim(q);
            }
            inclusions.push(QModMap::new_unchecked((*p).clone(), sum.clone(), inc));
            projections.push(QModMap::new_unchecked(sum.clone(), (*p).clone(), proj));
        }
        Ok(DirectSum {
            module: sum,
            inclusions,
            projections,
        })
    }
}

fn check_compatible<F: Field>(x: &QMod<F>, y: &QMod<F>) -> Result<(), Error> {
    if !same_shape(&x.shape, &y.shape) {
        return Err(Error::ShapeMismatch(
            "modules live on different shapes".into(),
        ));
    }
    if x.algebra != y.algebra {
        return Err(Error::ShapeMismatch(
            "modules have different coefficient algebras".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub module: QMod<F>,
    pub inclusions: Vec<QModMap<F>>,
    pub projections: Vec<QModMap<F>>,
}

pub fn validate_qmod<F: Field>(x: &QMod<F>) -> Report {
    let c = &x.shape;
    let f = x.field();
    for q in 0..c.num_objects() {
        let rep = validate_module(&x.algebra, x.value(q));
        if !rep.ok {
            return Report::fail(format!(
                "value at {}: {}",
                c.object_name(q),
                rep.witness.unwrap_or_default()
            ));
        }
    }
    for (i, a) in c.arrows().iter().enumerate() {
        if !x.value(a.src).is_a_linear(x.arrow(i), x.value(a.dst)) {
            return Report::fail(format!("arrow {} is not A-linear", a.name));
        }
    }
    for (ri, rel) in c.presentation().relations.iter().enumerate() {
        let Some(first) = rel.first() else { continue };
        let src = c.arrow(&first.path[0]).map(|a| c.arrows()[a].src);
        let dst = c
            .arrow(first.path.last().unwrap())
            .map(|a| c.arrows()[a].dst);
        let (Some(src), Some(dst)) = (src, dst) else {
            continue;
        };
        let mut acc = Matrix::zeros(f, x.dim(dst), x.dim(src));
        for t in rel {
            let coeff = f.parse(&t.coeff).expect("validated at build");
            let path = Path {
                src,
                arrows: t.path.iter().map(|n| c.arrow(n).unwrap()).collect(),
            };
            acc.add_scaled(&coeff, &x.path_action(&path));
        }
        if !acc.is_zero() {
            return Report::fail(format!("relation {ri} does not act as zero"));
        }
    }
    Report::pass()
}

#[derive(Clone, Debug)]
pub struct QModMap<F: Field> {
    source: QMod<F>,
    target: QMod<F>,
    components: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for QModMap<F> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.components == other.components
    }
}

impl<F: Field> QModMap<F> {
    /// Checks sizes, A-linearity and naturality.
    pub fn new(
        source: QMod<F>,
        target: QMod<F>,
        components: Vec<Matrix<F>>,
    ) -> Result<Self, Error> {
        check_compatible(&source, &target)?;
        let m = Self::new_unchecked(source, target, components);
        let rep = m.validate();
        if !rep.ok {
            return Err(Error::Invalid(format!(
                "not a morphism: {}",
                rep.witness.unwrap_or_default()
            )));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: QMod<F>,
        target: QMod<F>,
        components: Vec<Matrix<F>>,
    ) -> Self {
        debug_assert_eq!(components.len(), source.shape.num_objects());
        QModMap {
            source,
            target,
            components,
        }
    }

    pub fn validate(&self) -> Report {
        let c = &self.source.shape;
        if self.components.len() != c.num_objects() {
            return Report::fail("wrong number of components");
        }
        for q in 0..c.num_objects() {
            let m = &self.components[q];
            if m.rows() != self.target.dim(q) || m.cols() != self.source.dim(q) {
                return Report::fail(format!("component at {} has wrong size", c.object_name(q)));
            }
            if !self.source.value(q).is_a_linear(m, self.target.value(q)) {
                return Report::fail(format!("component at {} is not A-linear", c.object_name(q)));
            }
        }
        for (i, a) in c.arrows().iter().enumerate() {
            let l = self.target.arrow(i).mul(&self.components[a.src]);
            let r = self.components[a.dst].mul(self.source.arrow(i));
            if l != r {
                return Report::fail(format!("not natural at arrow {}", a.name));
            }
        }
        Report::pass()
    }

    pub fn zero(source: &QMod<F>, target: &QMod<F>) -> Self {
        let f = source.field();
        let comps = (0..source.shape.num_objects())
            .map(|q| Matrix::zeros(f, target.dim(q), source.dim(q)))
            .collect();
        Self::new_unchecked(source.clone(), target.clone(), comps)
    }

    pub fn identity(x: &QMod<F>) -> Self {
        let f = x.field();
        let comps = (0..x.shape.num_objects())
            .map(|q| Matrix::identity(f, x.dim(q)))
            .collect();
        Self::new_unchecked(x.clone(), x.clone(), comps)
    }

    pub fn source(&self) -> &QMod<F> {
        &self.source
    }
    pub fn target(&self) -> &QMod<F> {
        &self.target
    }
    pub fn component(&self, q: usize) -> &Matrix<F> {
        &self.components[q]
    }
    pub fn components(&self) -> &[Matrix<F>] {
        &self.components
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &QModMap<F>) -> QModMap<F> {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mul(b))
            .collect();
        Self::new_unchecked(other.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, other: &QModMap<F>) -> QModMap<F> {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn sub(&self, other: &QModMap<F>) -> QModMap<F> {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, c: &F::Elem) -> QModMap<F> {
        let comps = self.components.iter().map(|a| a.scale(c)).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.components
            .iter()
            .all(|m| m.is_square() && m.is_invertible())
    }

    /// Componentwise inverse of an isomorphism.
    pub fn inverse(&self) -> Option<QModMap<F>> {
        let comps = self
            .components
            .iter()
            .map(|m| m.inverse().ok())
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            comps,
        ))
    }

    pub fn underlying_k(&self) -> QModMap<F> {
        Self::new_unchecked(
            self.source.underlying_k(),
            self.target.underlying_k(),
            self.components.clone(),
        )
    }

    /// Same map with the source and target replaced by equal-data modules
    /// (used after transporting to a wider window).
    pub fn transport(&self, shape: &Arc<KCategory<F>>) -> Result<QModMap<F>, Error> {
        let source = self.source.transport(shape)?;
        let target = self.target.transport(shape)?;
        let f = shape.field();
        let mut comps: Vec<Matrix<F>> = (0..shape.num_objects())
            .map(|q| Matrix::zeros(f, target.dim(q), source.dim(q)))
            .collect();
        for q in 0..self.source.shape.num_objects() {
            if self.components[q].rows() > 0 && self.components[q].cols() > 0 {
                comps[shape.object(self.source.shape.object_name(q))?] = self.components[q].clone();
            }
        }
        Ok(Self::new_unchecked(source, target, comps))
    }
}

/// `Hom_{Q,A}(X, Y)` with basis vectors in ambient coordinates: the
/// concatenation over objects of the row-major components.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    source: QMod<F>,
    target: QMod<F>,
    offsets: Vec<usize>,
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn source(&self) -> &QMod<F> {
        &self.source
    }
    pub fn target(&self) -> &QMod<F> {
        &self.target
    }
    /// Columns are the basis elements in ambient coordinates.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn to_vector(&self, m: &QModMap<F>) -> Vec<F::Elem> {
        let mut v = Vec::with_capacity(self.ambient);
        for c in &m.components {
            v.extend_from_slice(c.data());
        }
        v
    }

    pub fn from_vector(&self, v: &[F::Elem]) -> QModMap<F> {
        let f = self.source.field();
        let comps = (0..self.offsets.len())
            .map(|q| {
                let (r, c) = (self.target.dim(q), self.source.dim(q));
                Matrix::from_data(
                    f,
                    r,
                    c,
                    v[self.offsets[q]..self.offsets[q] + r * c].to_vec(),
                )
            })
            .collect();
        QModMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn basis_map(&self, i: usize) -> QModMap<F> {
        self.from_vector(&self.basis.column(i))
    }

    pub fn basis_maps(&self) -> Vec<QModMap<F>> {
        (0..self.dim()).map(|i| self.basis_map(i)).collect()
    }

    /// Coordinates of a morphism in the basis.
    pub fn coords(&self, m: &QModMap<F>) -> Result<Vec<F::Elem>, Error> {
        Ok(self.basis.solve_vec(&self.to_vector(m))?)
    }

    /// Matrix (in ambient coordinates) of a linear operator on morphisms.
    pub fn operator_matrix(
        &self,
        to: &HomSpace<F>,
        op: impl Fn(&QModMap<F>) -> QModMap<F>,
    ) -> Matrix<F> {
        let f = self.source.field();
        let cols: Vec<Vec<F::Elem>> = (0..self.ambient)
            .map(|i| {
                let mut e = vec![f.zero(); self.ambient];
                e[i] = f.one();
                to.to_vector(&op(&self.from_vector(&e)))
            })
            .collect();
        Matrix::from_columns(f, to.ambient, &cols)
    }

    /// Matrix of `op` on basis elements, with images in ambient coordinates
    /// of `to`.
    pub fn apply_to_basis(
        &self,
        to: &HomSpace<F>,
        op: impl Fn(&QModMap<F>) -> QModMap<F>,
    ) -> Matrix<F> {
        let f = self.source.field();
        let cols: Vec<Vec<F::Elem>> = self
            .basis_maps()
            .iter()
            .map(|m| to.to_vector(&op(m)))
            .collect();
        Matrix::from_columns(f, to.ambient, &cols)
    }
}

pub fn hom_qa<F: Field>(x: &QMod<F>, y: &QMod<F>) -> Result<HomSpace<F>, Error> {
    check_compatible(x, y)?;
    let c = &x.shape;
    let f = x.field();
    let n = c.num_objects();
    let mut offsets = Vec::with_capacity(n);
    let mut ambient = 0;
    for q in 0..n {
        offsets.push(ambient);
        ambient += x.dim(q) * y.dim(q);
    }
    // Stage 1: objectwise A-linear maps.
    let local: Vec<Vec<Matrix<F>>> = (0..n)
        .map(|q| {
            if x.dim(q) == 0 || y.dim(q) == 0 {
                Vec::new()
            } else {
                hom_a(x.value(q), y.value(q))
            }
        })
        .collect();
    let mut var_offset = Vec::with_capacity(n);
    let mut vars = 0;
    for l in &local {
        var_offset.push(vars);
        vars += l.len();
    }
    if vars == 0 {
        return Ok(HomSpace {
            source: x.clone(),
            target: y.clone(),
            offsets,
            ambient,
            basis: Matrix::zeros(f, ambient, 0),
        });
    }
    // Stage 2: naturality Y(α) φ_p - φ_q X(α) = 0 on the coefficients.
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (i, a) in c.arrows().iter().enumerate() {
        let (p, q) = (a.src, a.dst);
        if x.dim(p) == 0 || y.dim(q) == 0 || (local[p].is_empty() && local[q].is_empty()) {
            continue;
        }
        let size = y.dim(q) * x.dim(p);
        let mut block = vec![vec![f.zero(); vars]; size];
        for (k, b) in local[p].iter().enumerate() {
            let m = y.arrow(i).mul(b);
            for (r, v) in m.data().iter().enumerate() {
                block[r][var_offset[p] + k] = v.clone();
            }
        }
        for (k, b) in local[q].iter().enumerate() {
            let m = b.mul(x.arrow(i));
            for (r, v) in m.data().iter().enumerate() {
                let cur = &mut block[r][var_offset[q] + k];
                *cur = f.sub(cur, v);
            }
        }
        rows.extend(
            block
                .into_iter()
                .filter(|r| r.iter().any(|v| !f.is_zero(v))),
        );
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(f, vars)
    } else {
        Matrix::from_rows(f, rows).kernel()
    };
    // Expand coefficient vectors to ambient coordinates.
    let mut expand = Matrix::zeros(f, ambient, vars);
    for q in 0..n {
        for (k, b) in local[q].iter().enumerate() {
            for (r, v) in b.data().iter().enumerate() {
                expand.set(offsets[q] + r, var_offset[q] + k, v.clone());
            }
        }
    }
    Ok(HomSpace {
        source: x.clone(),
        target: y.clone(),
        offsets,
        ambient,
        basis: expand.mul(&kernel),
    })
}

/// Subobject spanned objectwise by the columns of `bases[q]`.
pub fn subobject<F: Field>(
    x: &QMod<F>,
    bases: Vec<Matrix<F>>,
) -> Result<(QMod<F>, QModMap<F>), Error> {
    let c = &x.shape;
    let values = (0..c.num_objects())
        .map(|q| x.value(q).submodule(&bases[q]))
        .collect::<Result<Vec<_>, _>>()?;
    let arrows = c
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            bases[a.dst]
                .solve(&x.arrow(i).mul(&bases[a.src]))
                .map_err(|_| Error::Invalid(format!("subspace not stable under {}", a.name)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sub = QMod::new(c.clone(), x.algebra.clone(), values, arrows)?;
    let inc = QModMap::new_unchecked(sub.clone(), x.clone(), bases);
    Ok((sub, inc))
}

/// Quotient by the subobject spanned objectwise by the columns of `spans[q]`.
pub fn quotient_object<F: Field>(
    x: &QMod<F>,
    spans: &[Matrix<F>],
) -> Result<(QMod<F>, QModMap<F>), Error> {
    let c = &x.shape;
    let quots: Vec<Quotient<F>> = spans.iter().map(Quotient::of_image).collect();
    let values = (0..c.num_objects())
        .map(|q| x.value(q).quotient(&quots[q]))
        .collect();
    let arrows = c
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            quots[a.dst]
                .projection()
                .mul(x.arrow(i))
                .mul(quots[a.src].section())
        })
        .collect();
    let qm = QMod::new(c.clone(), x.algebra.clone(), values, arrows)?;
    let proj = QModMap::new_unchecked(
        x.clone(),
        qm.clone(),
        quots.iter().map(|q| q.projection().clone()).collect(),
    );
    Ok((qm, proj))
}

pub fn kernel<F: Field>(phi: &QModMap<F>) -> (QMod<F>, QModMap<F>) {
    let bases = phi.components.iter().map(|m| m.kernel()).collect();
    subobject(&phi.source, bases).expect("kernels are subobjects")
}

pub fn cokernel<F: Field>(phi: &QModMap<F>) -> (QMod<F>, QModMap<F>) {
    quotient_object(&phi.target, &phi.components).expect("images are subobjects")
}

/// Image with its inclusion into the target and the corestriction.
pub fn image<F: Field>(phi: &QModMap<F>) -> (QMod<F>, QModMap<F>, QModMap<F>) {
    let bases: Vec<Matrix<F>> = phi.components.iter().map(|m| m.image()).collect();
    let (im, inc) = subobject(&phi.target, bases.clone()).expect("images are subobjects");
    let coim = phi
        .components
        .iter()
        .zip(&bases)
        .map(|(m, b)| b.solve(m).expect("lies in the image"))
        .collect();
    let corestriction = QModMap::new_unchecked(phi.source.clone(), im.clone(), coim);
    (im, inc, corestriction)
}

/// Objectwise exactness of `0 -> X' -ι-> X -π-> X'' -> 0`.
pub fn is_short_exact<F: Field>(iota: &QModMap<F>, pi: &QModMap<F>) -> bool {
    (0..iota.source.shape.num_objects())
        .all(|q| crate::algebra::is_short_exact(iota.component(q), pi.component(q)))
}

/// `R ⊗_Q X` for a right module `R` (a module over the opposite shape with
/// ground coefficients).
#[derive(Clone, Debug)]
pub struct TensorProduct<F: Field> {
    pub module: AModule<F>,
    pub quotient: Quotient<F>,
    pub offsets: Vec<usize>,
}

pub fn tensor_over_q<F: Field>(r: &QMod<F>, x: &QMod<F>) -> Result<TensorProduct<F>, Error> {
    if !r.shape.is_opposite_of(&x.shape) {
        return Err(Error::ShapeMismatch(
            "right module must live on the opposite shape".into(),
        ));
    }
    if !r.algebra.is_ground() {
        return Err(Error::ShapeMismatch(
            "right module must have ground coefficients".into(),
        ));
    }
    crate::room::check_room(r)?;
    crate::room::check_room(x)?;
    let c = &x.shape;
    let f = x.field();
    let n = c.num_objects();
    let mut offsets = Vec::with_capacity(n);
    let mut ambient = 0;
    for q in 0..n {
        offsets.push(ambient);
        ambient += r.dim(q) * x.dim(q);
    }
    // Relations R(α^op)(r) ⊗ x - r ⊗ X(α)(x) for α: p -> q, r ∈ R(q), x ∈ X(p).
    let mut rels: Vec<Vec<F::Elem>> = Vec::new();
    for (i, a) in c.arrows().iter().enumerate() {
        let (p, q) = (a.src, a.dst);
        let (rq, xp) = (r.dim(q), x.dim(p));
        let ra = r.arrow(i); // R(q) -> R(p)
        let xa = x.arrow(i); // X(p) -> X(q)
        for s in 0..rq {
            for t in 0..xp {
                let mut v = vec![f.zero(); ambient];
                for u in 0..r.dim(p) {
                    let c = ra.get(u, s);
                    if !f.is_zero(c) {
                        let idx = offsets[p] + u * xp + t;
                        v[idx] = f.add(&v[idx], c);
                    }
                }
                for w in 0..x.dim(q) {
                    let c = xa.get(w, t);
                    if !f.is_zero(c) {
                        let idx = offsets[q] + s * x.dim(q) + w;
                        v[idx] = f.sub(&v[idx], c);
                    }
                }
                if v.iter().any(|e| !f.is_zero(e)) {
                    rels.push(v);
                }
            }
        }
    }
    let quotient = Quotient::of_image(&Matrix::from_columns(f, ambient, &rels));
    let action = (0..x.algebra.dim())
        .map(|i| {
            let blocks: Vec<Matrix<F>> = (0..n)
                .map(|q| Matrix::identity(f, r.dim(q)).kron(x.value(q).act(i)))
                .collect();
            quotient.induced(&Matrix::block_diag(f, &blocks))
        })
        .collect();
    Ok(TensorProduct {
        module: AModule::new(quotient.dim(), action)?,
        quotient,
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{build_kcategory, mesh_generator, MeshFamily};
    use qshape_linalg::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn cpx() -> Arc<KCategory<PrimeField>> {
        build_kcategory(
            &mesh_generator(MeshFamily::ComplexShape, 0, 4).unwrap(),
            &f(),
        )
        .unwrap()
    }

    fn k() -> Arc<Algebra<PrimeField>> {
        Arc::new(Algebra::ground(&f()))
    }

    fn vs(n: usize) -> AModule<PrimeField> {
        Algebra::vector_space(&f(), n)
    }

    /// k in degrees `q` and `q+1` joined by the scalar `c`.
    fn two_term(q: usize, c: i64) -> QMod<PrimeField> {
        QMod::from_sparse(
            cpx(),
            k(),
            vec![(q, vs(1)), (q + 1, vs(1))],
            vec![(q, Matrix::from_i64(&f(), &[&[c]]))],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(validate_qmod(&QMod::zero(&cpx(), &k())).ok);
        assert!(validate_qmod(&two_term(1, 1)).ok);
        let id = Matrix::identity(&f(), 1);
        let bad = QMod::from_sparse(
            cpx(),
            k(),
            vec![(1, vs(1)), (2, vs(1)), (3, vs(1))],
            vec![(1, id.clone()), (2, id)],
        )
        .unwrap();
        let rep = validate_qmod(&bad);
        assert!(!rep.ok);
    }

    #[test]
    fn hom_spaces() {
        let s1 = QMod::from_sparse(cpx(), k(), vec![(1, vs(1))], vec![]).unwrap();
        assert_eq!(hom_qa(&s1, &s1).unwrap().dim(), 1);
        let disc = two_term(1, 1);
        assert_eq!(hom_qa(&disc, &s1).unwrap().dim(), 1);
        assert_eq!(hom_qa(&s1, &disc).unwrap().dim(), 0);
        let zero = QMod::zero(&cpx(), &k());
        assert_eq!(hom_qa(&zero, &disc).unwrap().dim(), 0);
        let sum = QMod::direct_sum(&[&disc, &s1]).unwrap();
        assert_eq!(
            hom_qa(&disc, &sum.module).unwrap().dim(),
            hom_qa(&disc, &disc).unwrap().dim() + hom_qa(&disc, &s1).unwrap().dim()
        );
        for m in hom_qa(&disc, &sum.module).unwrap().basis_maps() {
            assert!(m.validate().ok);
        }
    }

    #[test]
    fn kernels_and_cokernels() {
        let disc = two_term(1, 1);
        let s1 = QMod::from_sparse(cpx(), k(), vec![(1, vs(1))], vec![]).unwrap();
        let hs = hom_qa(&disc, &s1).unwrap();
        let eps = hs.basis_map(0);
        let (ker, inc) = kernel(&eps);
        assert_eq!(ker.dims(), vec![0, 0, 1, 0, 0]);
        assert!(is_short_exact(&inc, &eps));
        let (coker, _) = cokernel(&inc);
        assert_eq!(coker.dims(), s1.dims());
        let (ker_id, _) = kernel(&QModMap::identity(&disc));
        assert!(ker_id.is_zero());
        let (im, i, c) = image(&eps);
        assert_eq!(im.dims(), s1.dims());
        assert_eq!(i.compose(&c), eps);
    }
}
