//! Finite-dimensional algebras given by structure constants, their modules,
//! and the θ-relative notions on `Mod A` for a finite list θ of modules.

use qshape_linalg::{Field, Matrix, Quotient, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::Error;

/// `mult[i][j]` holds the coordinates of `e_i · e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra<F: Field> {
    field: F,
    labels: Vec<String>,
    mult: Vec<Vec<Vec<F::Elem>>>,
    unit: Vec<F::Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Report {
    pub fn pass() -> Self {
        Report {
            ok: true,
            witness: None,
        }
    }
    pub fn fail(w: impl Into<String>) -> Self {
        Report {
            ok: false,
            witness: Some(w.into()),
        }
    }
}

impl<F: Field> Algebra<F> {
    pub fn new(
        field: &F,
        labels: Vec<String>,
        mult: Vec<Vec<Vec<F::Elem>>>,
        unit: Vec<F::Elem>,
    ) -> Result<Self, Error> {
        let d = labels.len();
        if d == 0
            || mult.len() != d
            || mult
                .iter()
                .any(|r| r.len() != d || r.iter().any(|v| v.len() != d))
            || unit.len() != d
        {
            return Err(Error::Invalid(
                "algebra structure constants have wrong shape".into(),
            ));
        }
        let a = Algebra {
            field: field.clone(),
            labels,
            mult,
            unit,
        };
        let rep = a.validate();
        if !rep.ok {
            return Err(Error::Invalid(format!(
                "not a unital associative algebra: {}",
                rep.witness.unwrap()
            )));
        }
        Ok(a)
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: &F) -> Self {
        Algebra {
            field: field.clone(),
            labels: vec!["1".into()],
            mult: vec![vec![vec![field.one()]]],
            unit: vec![field.one()],
        }
    }

    /// `k[x]/(x²)` with basis `{1, x}`.
    pub fn dual_numbers(field: &F) -> Self {
        let (z, o) = (field.zero(), field.one());
        Algebra {
            field: field.clone(),
            labels: vec!["1".into(), "x".into()],
            mult: vec![
                vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
                vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
            ],
            unit: vec![o, z],
        }
    }

    /// Path algebra of `1 --a--> 2` with basis `{e1, e2, a}`; products read
    /// right to left, so `a = e2 · a · e1`.
    pub fn path_a2(field: &F) -> Self {
        let e = |i: usize| {
            let mut v = vec![field.zero(); 3];
            v[i] = field.one();
            v
        };
        let zero = vec![field.zero(); 3];
        let mut mult = vec![vec![zero.clone(); 3]; 3];
        mult[0][0] = e(0);
        mult[1][1] = e(1);
        mult[2][0] = e(2);
        mult[1][2] = e(2);
        Algebra {
            field: field.clone(),
            labels: vec!["e1".into(), "e2".into(), "a".into()],
            mult,
            unit: vec![field.one(), field.one(), field.zero()],
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[F::Elem] {
        &self.unit
    }
    pub fn mult(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.mult[i][j]
    }
    pub fn is_ground(&self) -> bool {
        self.dim() == 1
    }

    pub fn opposite(&self) -> Self {
        let d = self.dim();
        Algebra {
            field: self.field.clone(),
            labels: self.labels.clone(),
            mult: (0..d)
                .map(|i| (0..d).map(|j| self.mult[j][i].clone()).collect())
                .collect(),
            unit: self.unit.clone(),
        }
    }

    pub fn product(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let c = f.mul(x, y);
                if f.is_zero(&c) {
                    continue;
                }
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    f.add_mul(o, &c, m);
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Report {
        let d = self.dim();
        let f = &self.field;
        let e = |i: usize| {
            let mut v = vec![f.zero(); d];
            v[i] = f.one();
            v
        };
        for i in 0..d {
            if self.product(&self.unit, &e(i)) != e(i) || self.product(&e(i), &self.unit) != e(i) {
                return Report::fail(format!(
                    "unit does not act as identity on {}",
                    self.labels[i]
                ));
            }
            for j in 0..d {
                for k in 0..d {
                    let l = self.product(&self.product(&e(i), &e(j)), &e(k));
                    let r = self.product(&e(i), &self.product(&e(j), &e(k)));
                    if l != r {
                        return Report::fail(format!(
                            "({}·{})·{} ≠ {}·({}·{})",
                            self.labels[i],
                            self.labels[j],
                            self.labels[k],
                            self.labels[i],
                            self.labels[j],
                            self.labels[k]
                        ));
                    }
                }
            }
        }
        Report::pass()
    }

    /// Matrix of left multiplication by `e_i` on the regular module.
    fn left_mult(&self, i: usize) -> Matrix<F> {
        let d = self.dim();
        let mut m = Matrix::zeros(&self.field, d, d);
        for j in 0..d {
            for k in 0..d {
                m.set(k, j, self.mult[i][j][k].clone());
            }
        }
        m
    }

    pub fn regular(&self) -> AModule<F> {
        AModule {
            dim: self.dim(),
            action: (0..self.dim()).map(|i| self.left_mult(i)).collect(),
        }
    }

    /// The free module `A^n`.
    pub fn free_rank(&self, n: usize) -> AModule<F> {
        self.regular().power(n)
    }

    pub fn zero_module(&self) -> AModule<F> {
        AModule {
            dim: 0,
            action: (0..self.dim())
                .map(|_| Matrix::zeros(&self.field, 0, 0))
                .collect(),
        }
    }

    /// `k^n` over the ground field.
    pub fn vector_space(field: &F, n: usize) -> AModule<F> {
        AModule {
            dim: n,
            action: vec![Matrix::identity(field, n)],
        }
    }

    /// One-dimensional module on which basis element `i` acts by `aug[i]`.
    pub fn simple_from_augmentation(&self, aug: &[F::Elem]) -> Result<AModule<F>, Error> {
        let m = AModule {
            dim: 1,
            action: aug
                .iter()
                .map(|a| Matrix::from_rows(&self.field, vec![vec![a.clone()]]))
                .collect(),
        };
        let rep = validate_module(self, &m);
        if !rep.ok {
            return Err(Error::Invalid(format!(
                "augmentation is not multiplicative: {:?}",
                rep.witness
            )));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModule<F: Field> {
    dim: usize,
    action: Vec<Matrix<F>>,
}

impl<F: Field> AModule<F> {
    /// Action matrices, one per algebra basis element (all `dim x dim`).
    pub fn new(dim: usize, action: Vec<Matrix<F>>) -> Result<Self, Error> {
        if action.is_empty() || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Invalid(
                "action matrices must be square of size dim".into(),
            ));
        }
        Ok(AModule { dim, action })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
    pub fn action(&self) -> &[Matrix<F>] {
        &self.action
    }
    pub fn act(&self, i: usize) -> &Matrix<F> {
        &self.action[i]
    }
    pub fn field(&self) -> &F {
        self.action[0].field()
    }

    /// `V ⊗ M` for `V = k^n`, laid out as `n` consecutive copies of `M`.
    pub fn power(&self, n: usize) -> Self {
        let f = self.field();
        AModule {
            dim: n * self.dim,
            action: self
                .action
                .iter()
                .map(|a| Matrix::identity(f, n).kron(a))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        AModule {
            dim: self.dim + other.dim,
            action: self
                .action
                .iter()
                .zip(&other.action)
                .map(|(a, b)| a.dsum(b))
                .collect(),
        }
    }

    pub fn direct_sum_all(field: &F, algebra_dim: usize, parts: &[&Self]) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        let action = (0..algebra_dim)
            .map(|i| {
                let blocks: Vec<Matrix<F>> = parts.iter().map(|p| p.action[i].clone()).collect();
                Matrix::block_diag(field, &blocks)
            })
            .collect();
        AModule { dim, action }
    }

    /// `Hom_k(M, k)`: a module over the opposite algebra.
    pub fn dual(&self) -> Self {
        AModule {
            dim: self.dim,
            action: self.action.iter().map(|a| a.transpose()).collect(),
        }
    }

    /// Submodule spanned by the columns of `basis` (independent, A-stable).
    pub fn submodule(&self, basis: &Matrix<F>) -> Result<Self, Error> {
        let action = self
            .action
            .iter()
            .map(|a| {
                basis
                    .solve(&a.mul(basis))
                    .map_err(|_| Error::Invalid("subspace is not A-stable".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(AModule {
            dim: basis.cols(),
            action,
        })
    }

    /// Quotient by an A-stable subspace.
    pub fn quotient(&self, q: &Quotient<F>) -> Self {
        AModule {
            dim: q.dim(),
            action: self.action.iter().map(|a| q.induced(a)).collect(),
        }
    }

    /// Same vector space viewed over the ground field.
    pub fn underlying(&self) -> Self {
        AModule {
            dim: self.dim,
            action: vec![Matrix::identity(self.field(), self.dim)],
        }
    }

    pub fn is_a_linear(&self, f: &Matrix<F>, target: &Self) -> bool {
        f.rows() == target.dim
            && f.cols() == self.dim
            && self
                .action
                .iter()
                .zip(&target.action)
                .all(|(a, b)| b.mul(f) == f.mul(a))
    }
}

pub fn validate_module<F: Field>(alg: &Algebra<F>, m: &AModule<F>) -> Report {
    let f = alg.field();
    if m.action.len() != alg.dim() {
        return Report::fail(format!(
            "expected {} action matrices, got {}",
            alg.dim(),
            m.action.len()
        ));
    }
    let combo = |coeffs: &[F::Elem]| {
        let mut acc = Matrix::zeros(f, m.dim, m.dim);
        for (c, a) in coeffs.iter().zip(&m.action) {
            if !f.is_zero(c) {
                acc.add_scaled(c, a);
            }
        }
        acc
    };
    if !combo(alg.unit()).is_identity() {
        return Report::fail("unit does not act as the identity");
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            if m.action[i].mul(&m.action[j]) != combo(alg.mult(i, j)) {
                return Report::fail(format!("{}·{}", alg.labels()[i], alg.labels()[j]));
            }
        }
    }
    Report::pass()
}

/// Skip constraints from basis elements acting as scalars: they hold for
/// every linear map.
fn is_scalar<F: Field>(a: &Matrix<F>) -> bool {
    let f = a.field();
    if a.rows() == 0 {
        return true;
    }
    let c = a.get(0, 0).clone();
    (0..a.rows())
        .all(|i| (0..a.cols()).all(|j| *a.get(i, j) == if i == j { c.clone() } else { f.zero() }))
}

/// Basis of `Hom_A(M, N)`, each element an `N.dim x M.dim` matrix.
pub fn hom_a<F: Field>(m: &AModule<F>, n: &AModule<F>) -> Vec<Matrix<F>> {
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let vars = dm * dn;
    if vars == 0 {
        return Vec::new();
    }
    // Unknown X (dn x dm) flattened row-major; constraint N_a X - X M_a = 0.
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (ma, na) in m.action.iter().zip(&n.action) {
        if is_scalar(ma) && is_scalar(na) && (dm == 0 || dn == 0 || ma.get(0, 0) == na.get(0, 0)) {
            continue;
        }
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![f.zero(); vars];
                for t in 0..dn {
                    let v = na.get(r, t);
                    if !f.is_zero(v) {
                        row[t * dm + c] = f.add(&row[t * dm + c], v);
                    }
                }
                for s in 0..dm {
                    let v = ma.get(s, c);
                    if !f.is_zero(v) {
                        row[r * dm + s] = f.sub(&row[r * dm + s], v);
                    }
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(f, vars)
    } else {
        Matrix::from_rows(f, rows).kernel()
    };
    kernel
        .columns()
        .into_iter()
        .map(|v| Matrix::from_data(f, dn, dm, v))
        .collect()
}

/// An A-linear map `M -> N` that is invertible, if one exists among basis
/// elements of `Hom_A(M, N)` and a few seeded random combinations.
pub fn find_isomorphism<F: Field>(m: &AModule<F>, n: &AModule<F>, seed: u64) -> Option<Matrix<F>> {
    if m.dim != n.dim {
        return None;
    }
    if m.dim == 0 {
        return Some(Matrix::zeros(m.field(), 0, 0));
    }
    let basis = hom_a(m, n);
    find_invertible_combination(m.field(), &basis, seed)
}

pub(crate) fn find_invertible_combination<F: Field>(
    f: &F,
    basis: &[Matrix<F>],
    seed: u64,
) -> Option<Matrix<F>> {
    if let Some(b) = basis.iter().find(|b| b.is_invertible()) {
        return Some(b.clone());
    }
    let first = basis.first()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..24 {
        let mut acc = Matrix::zeros(f, first.rows(), first.cols());
        for b in basis {
            acc.add_scaled(&f.random(&mut rng), b);
        }
        if acc.is_invertible() {
            return Some(acc);
        }
    }
    None
}

/// Greedy generating set: standard basis vectors added while they are not in
/// the submodule generated so far.
pub fn generators<F: Field>(m: &AModule<F>) -> Vec<Vec<F::Elem>> {
    let f = m.field();
    let mut gens: Vec<Vec<F::Elem>> = Vec::new();
    let mut span = Matrix::zeros(f, m.dim, 0);
    for i in 0..m.dim {
        let mut e = vec![f.zero(); m.dim];
        e[i] = f.one();
        if span.cols() > 0 && span.solve_vec(&e).is_ok() {
            continue;
        }
        let cols: Vec<Vec<F::Elem>> = m.action.iter().map(|a| a.mul_vec(&e)).collect();
        let mut all = span.columns();
        all.extend(cols);
        span = Matrix::from_columns(f, m.dim, &all).image();
        gens.push(e);
    }
    gens
}

/// Source of a precover with the evaluation map into `M`.
#[derive(Clone, Debug)]
pub struct Precover<F: Field> {
    pub source: AModule<F>,
    pub map: Matrix<F>,
}

/// A θ-precover `⊕ T_i -> M` (with `A` added to θ so that it is onto).
pub fn theta_precover<F: Field>(
    alg: &Algebra<F>,
    m: &AModule<F>,
    theta: &[AModule<F>],
) -> Precover<F> {
    theta_precover_extending(alg, m, theta, None)
}

/// Summands `T -h-> M` are taken greedily from bases of `Hom_A(T, M)`, each
/// only when `h` is not already reached through the summands chosen so far
/// or through `existing`; the result together with `existing` is a precover.
pub fn theta_precover_extending<F: Field>(
    alg: &Algebra<F>,
    m: &AModule<F>,
    theta: &[AModule<F>],
    existing: Option<(&AModule<F>, &Matrix<F>)>,
) -> Precover<F> {
    let f = alg.field();
    let regular = alg.regular();
    let mut tests: Vec<&AModule<F>> = theta.iter().collect();
    if !theta.contains(&regular) {
        tests.push(&regular);
    }
    let mut chosen: Vec<(usize, Matrix<F>)> = Vec::new();
    for (ti, t) in tests.iter().enumerate() {
        let hs = hom_a(t, m);
        if hs.is_empty() {
            continue;
        }
        let ambient = m.dim * t.dim;
        let mut reached: Vec<Vec<F::Elem>> = Vec::new();
        if let Some((src, map)) = existing {
            reached.extend(hom_a(t, src).iter().map(|g| map.mul(g).data().to_vec()));
        }
        for (tj, h) in &chosen {
            reached.extend(
                hom_a(t, tests[*tj])
                    .iter()
                    .map(|g| h.mul(g).data().to_vec()),
            );
        }
        let mut span = Subspace::span(&Matrix::from_columns(f, ambient, &reached));
        let endos = hom_a(t, t);
        for h in hs {
            if span.contains(h.data()) {
                continue;
            }
            let cols: Vec<Vec<F::Elem>> = endos.iter().map(|g| h.mul(g).data().to_vec()).collect();
            span = span.sum(&Subspace::span(&Matrix::from_columns(f, ambient, &cols)));
            chosen.push((ti, h));
        }
    }
    let parts: Vec<&AModule<F>> = chosen.iter().map(|(ti, _)| tests[*ti]).collect();
    let source = AModule::direct_sum_all(f, alg.dim(), &parts);
    let blocks: Vec<&Matrix<F>> = chosen.iter().map(|(_, h)| h).collect();
    let map = Matrix::hstack(f, m.dim, &blocks);
    Precover { source, map }
}

/// Abelian exactness of `0 -> M' -ι-> M -π-> M'' -> 0`.
pub fn is_short_exact<F: Field>(iota: &Matrix<F>, pi: &Matrix<F>) -> bool {
    iota.cols() + pi.rows() == iota.rows()
        && pi.cols() == iota.rows()
        && iota.rank() == iota.cols()
        && pi.rank() == pi.rows()
        && pi.mul(iota).is_zero()
}

/// Whether `Hom_A(T, -)` keeps the sequence exact for all `T ∈ θ`.
pub fn is_theta_exact_seq<F: Field>(
    iota: &Matrix<F>,
    pi: &Matrix<F>,
    middle: &AModule<F>,
    right: &AModule<F>,
    theta: &[AModule<F>],
) -> Result<bool, Error> {
    if !is_short_exact(iota, pi) {
        return Err(Error::NotExact("module sequence".into()));
    }
    for t in theta {
        let target = hom_a(t, right).len();
        let imgs: Vec<Vec<F::Elem>> = hom_a(t, middle)
            .iter()
            .map(|h| pi.mul(h).data().to_vec())
            .collect();
        let rank = if imgs.is_empty() {
            0
        } else {
            Matrix::from_columns(pi.field(), t.dim * right.dim, &imgs).rank()
        };
        if rank < target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An A-linear `s: target -> source` with `π s = id`, if one exists.
pub fn split_surjection<F: Field>(
    pi: &Matrix<F>,
    source: &AModule<F>,
    target: &AModule<F>,
) -> Option<Matrix<F>> {
    let f = pi.field();
    if target.dim == 0 {
        return Some(Matrix::zeros(f, source.dim, 0));
    }
    let hs = hom_a(target, source);
    if hs.is_empty() {
        return None;
    }
    let cols: Vec<Vec<F::Elem>> = hs.iter().map(|h| pi.mul(h).data().to_vec()).collect();
    let sys = Matrix::from_columns(f, target.dim * target.dim, &cols);
    let c = sys.solve_vec(Matrix::identity(f, target.dim).data()).ok()?;
    let mut s = Matrix::zeros(f, source.dim, target.dim);
    for (ci, h) in c.iter().zip(&hs) {
        s.add_scaled(ci, h);
    }
    Some(s)
}

/// An A-linear `r: target -> source` with `r ι = id`, if one exists.
pub fn split_injection<F: Field>(
    iota: &Matrix<F>,
    source: &AModule<F>,
    target: &AModule<F>,
) -> Option<Matrix<F>> {
    let f = iota.field();
    if source.dim == 0 {
        return Some(Matrix::zeros(f, 0, target.dim));
    }
    let hs = hom_a(target, source);
    if hs.is_empty() {
        return None;
    }
    let cols: Vec<Vec<F::Elem>> = hs.iter().map(|h| h.mul(iota).data().to_vec()).collect();
    let sys = Matrix::from_columns(f, source.dim * source.dim, &cols);
    let c = sys.solve_vec(Matrix::identity(f, source.dim).data()).ok()?;
    let mut r = Matrix::zeros(f, source.dim, target.dim);
    for (ci, h) in c.iter().zip(&hs) {
        r.add_scaled(ci, h);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qshape_linalg::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn simple(a: &Algebra<PrimeField>) -> AModule<PrimeField> {
        a.simple_from_augmentation(&[1, 0]).unwrap()
    }

    #[test]
    fn builtin_algebras_validate() {
        for a in [
            Algebra::ground(&f()),
            Algebra::dual_numbers(&f()),
            Algebra::path_a2(&f()),
        ] {
            assert!(a.validate().ok);
            assert!(validate_module(&a, &a.regular()).ok);
            assert!(a.opposite().validate().ok);
        }
    }

    #[test]
    fn module_validation() {
        let a = Algebra::dual_numbers(&f());
        let k = Algebra::ground(&f());
        assert!(validate_module(&k, &Algebra::vector_space(&f(), 2)).ok);
        let reg = AModule::new(
            2,
            vec![
                Matrix::identity(&f(), 2),
                Matrix::from_i64(&f(), &[&[0, 0], &[1, 0]]),
            ],
        )
        .unwrap();
        assert!(validate_module(&a, &reg).ok);
        assert_eq!(reg, a.regular());
        let bad = AModule::new(
            2,
            vec![Matrix::identity(&f(), 2), Matrix::identity(&f(), 2)],
        )
        .unwrap();
        let rep = validate_module(&a, &bad);
        assert!(!rep.ok);
        assert_eq!(rep.witness.as_deref(), Some("x·x"));
    }

    #[test]
    fn hom_dimensions() {
        let a = Algebra::dual_numbers(&f());
        let reg = a.regular();
        let k = simple(&a);
        assert_eq!(hom_a(&reg, &reg).len(), 2);
        assert_eq!(hom_a(&k, &reg).len(), 1);
        assert_eq!(hom_a(&reg, &k).len(), 1);
        assert_eq!(hom_a(&k, &k).len(), 1);
        let sum = reg.direct_sum(&k);
        assert_eq!(hom_a(&reg, &sum).len(), 3);
    }

    #[test]
    fn dual_of_regular_is_regular() {
        let a = Algebra::dual_numbers(&f());
        let reg = a.regular();
        let iso = find_isomorphism(&reg.dual(), &reg, 1).unwrap();
        assert!(reg.dual().is_a_linear(&iso, &reg));
        // kA2 is not self-injective: its regular module is not self-dual.
        let p = Algebra::path_a2(&f());
        assert!(find_isomorphism(&p.regular().dual(), &p.opposite().regular(), 1).is_none());
    }

    #[test]
    fn precovers() {
        let a = Algebra::dual_numbers(&f());
        let reg = a.regular();
        let k = simple(&a);
        let free = theta_precover(&a, &k, &[reg.clone()]);
        assert_eq!(free.source.dim(), 2);
        assert_eq!(free.map.rank(), 1);
        let pc = theta_precover(&a, &k, &[reg.clone(), k.clone()]);
        assert_eq!(pc.source.dim(), 3);
        assert!(split_surjection(&pc.map, &pc.source, &k).is_some());
        assert!(split_surjection(&free.map, &free.source, &k).is_none());
        // Without A in θ a free summand is added.
        let only_k = theta_precover(&a, &reg, &[k.clone()]);
        assert_eq!(only_k.map.rank(), 2);
    }

    #[test]
    fn theta_exactness() {
        let a = Algebra::dual_numbers(&f());
        let reg = a.regular();
        let k = simple(&a);
        let iota = Matrix::from_i64(&f(), &[&[0], &[1]]);
        let pi = Matrix::from_i64(&f(), &[&[1, 0]]);
        assert!(is_theta_exact_seq(&iota, &pi, &reg, &k, &[reg.clone()]).unwrap());
        assert!(!is_theta_exact_seq(&iota, &pi, &reg, &k, &[reg.clone(), k.clone()]).unwrap());
        let bad = Matrix::from_i64(&f(), &[&[1], &[0]]);
        assert!(is_theta_exact_seq(&bad, &pi, &reg, &k, &[reg.clone()]).is_err());
    }

    #[test]
    fn generating_sets() {
        let a = Algebra::dual_numbers(&f());
        assert_eq!(generators(&a.regular()).len(), 1);
        assert_eq!(generators(&a.regular().power(2)).len(), 2);
        assert_eq!(generators(&simple(&a).power(3)).len(), 3);
    }
}
