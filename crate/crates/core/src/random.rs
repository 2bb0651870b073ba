//! Seeded generators for modules, complexes, maps and short exact sequences.

use std::sync::Arc;

use qshape_linalg::{Field, Matrix, Quotient};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjoint::{big_f, big_g, induce_f, induce_g, induce_s};
use crate::algebra::{find_isomorphism, hom_a, split_surjection, theta_precover, AModule, Algebra};
use crate::qmod::{cokernel, hom_qa, image, kernel, QMod, QModMap};
use crate::room::with_room;
use crate::shape::{KCategory, MeshFamily};
use crate::Error;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small modules: the regular module, its cyclic submodules `A·b` and
/// quotients `A/A·b` for basis elements `b`, up to isomorphism.
pub fn module_zoo<F: Field>(alg: &Algebra<F>) -> Vec<AModule<F>> {
    let f = alg.field();
    let reg = alg.regular();
    let mut zoo = vec![reg.clone()];
    for b in 0..alg.dim() {
        let mut e = vec![f.zero(); alg.dim()];
        e[b] = f.one();
        let cols: Vec<Vec<F::Elem>> = reg.action().iter().map(|a| a.mul_vec(&e)).collect();
        let span = Matrix::from_columns(f, alg.dim(), &cols);
        let basis = span.image();
        if basis.cols() == 0 {
            continue;
        }
        let sub = reg.submodule(&basis).expect("cyclic submodule");
        let quot = reg.quotient(&Quotient::of_image(&basis));
        for m in [sub, quot] {
            if m.dim() > 0
                && !zoo
                    .iter()
                    .any(|z| z.dim() == m.dim() && find_isomorphism(z, &m, 1).is_some())
            {
                zoo.push(m);
            }
        }
    }
    zoo.sort_by_key(|m| m.dim());
    zoo
}

pub fn random_combination<F: Field>(
    f: &F,
    rng: &mut dyn RngCore,
    mats: &[Matrix<F>],
    rows: usize,
    cols: usize,
) -> Matrix<F> {
    let mut acc = Matrix::zeros(f, rows, cols);
    for m in mats {
        acc.add_scaled(&f.random(rng), m);
    }
    acc
}

/// Direct sum of zoo modules with total dimension at most `max_dim`.
pub fn random_module<F: Field>(
    alg: &Algebra<F>,
    rng: &mut dyn RngCore,
    max_dim: usize,
) -> AModule<F> {
    let zoo = module_zoo(alg);
    let mut parts: Vec<AModule<F>> = Vec::new();
    let mut dim = 0;
    let target = rng.gen_range(1..=max_dim.max(1));
    for _ in 0..8 {
        let fit: Vec<&AModule<F>> = zoo.iter().filter(|m| dim + m.dim() <= target).collect();
        if fit.is_empty() {
            break;
        }
        let m = fit[rng.gen_range(0..fit.len())].clone();
        dim += m.dim();
        parts.push(m);
        if rng.gen_bool(0.4) {
            break;
        }
    }
    let refs: Vec<&AModule<F>> = parts.iter().collect();
    AModule::direct_sum_all(alg.field(), alg.dim(), &refs)
}

pub fn random_hom_a<F: Field>(m: &AModule<F>, n: &AModule<F>, rng: &mut dyn RngCore) -> Matrix<F> {
    random_combination(m.field(), rng, &hom_a(m, n), n.dim(), m.dim())
}

/// A random A-linear automorphism.
pub fn random_automorphism<F: Field>(m: &AModule<F>, rng: &mut dyn RngCore) -> Matrix<F> {
    let ends = hom_a(m, m);
    for _ in 0..32 {
        let g = random_combination(m.field(), rng, &ends, m.dim(), m.dim());
        if g.rows() == 0 || g.is_invertible() {
            return g;
        }
    }
    Matrix::identity(m.field(), m.dim())
}

pub fn random_hom_qa<F: Field>(
    x: &QMod<F>,
    y: &QMod<F>,
    rng: &mut dyn RngCore,
) -> Result<QModMap<F>, Error> {
    let h = hom_qa(x, y)?;
    let f = x.field();
    let c: Vec<F::Elem> = (0..h.dim()).map(|_| f.random(rng)).collect();
    Ok(h.from_vector(&h.basis().mul_vec(&c)))
}

/// A random module on any shape: the cokernel of a random map between sums
/// of induced, coinduced and stalk modules placed on `objects`.
pub fn random_qmod<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    objects: &[usize],
    rng: &mut dyn RngCore,
    max_dim: usize,
) -> Result<QMod<F>, Error> {
    let pick = |rng: &mut dyn RngCore| -> Result<QMod<F>, Error> {
        let q = objects[rng.gen_range(0..objects.len())];
        let m = random_module(alg, rng, max_dim.min(2));
        match rng.gen_range(0..3) {
            0 => induce_f(shape, alg, q, &m),
            1 => induce_g(shape, alg, q, &m),
            _ => induce_s(shape, alg, q, &m),
        }
    };
    let sum_of = |count: usize, rng: &mut dyn RngCore| -> Result<QMod<F>, Error> {
        let parts = (0..count)
            .map(|_| pick(rng))
            .collect::<Result<Vec<_>, _>>()?;
        let refs: Vec<&QMod<F>> = parts.iter().collect();
        Ok(QMod::direct_sum(&refs)?.module)
    };
    let target = sum_of(rng.gen_range(1..=2), rng)?;
    if rng.gen_bool(0.3) {
        return Ok(target);
    }
    let source = sum_of(1, rng)?;
    let phi = random_hom_qa(&source, &target, rng)?;
    Ok(cokernel(&phi).0)
}

/// Composite-vanishing order of a complex-like family.
pub fn family_order<F: Field>(shape: &KCategory<F>) -> Result<usize, Error> {
    match shape.window_meta().map(|m| m.family) {
        Some(MeshFamily::ComplexShape) => Ok(2),
        Some(MeshFamily::NComplex(n)) => Ok(n),
        _ => Err(Error::UnsupportedFamily(
            "expected a complex or N-complex window".into(),
        )),
    }
}

/// Builds the module with values `terms[m - lo]` at degree `m` and
/// differentials `diffs[m - lo]: degree m -> m + 1`.
pub fn complex_qmod<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    lo: i64,
    terms: &[AModule<F>],
    diffs: &[Matrix<F>],
) -> Result<QMod<F>, Error> {
    let values = terms
        .iter()
        .enumerate()
        .map(|(i, t)| Ok((shape.object(&(lo + i as i64).to_string())?, t.clone())))
        .collect::<Result<Vec<_>, Error>>()?;
    let arrows = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let name = format!("d{}", lo + i as i64);
            let a = shape
                .arrow(&name)
                .ok_or_else(|| Error::ObjectOutsideWindow(name.clone()))?;
            Ok((a, d.clone()))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    QMod::from_sparse(shape.clone(), alg.clone(), values, arrows)
}

/// Random bounded (N-)complex supported in degrees `lo..=hi`.
///
/// Half the samples are generic (each differential a random map out of the
/// cokernel of the preceding composite); the rest are sums of segments
/// `M = M = … = M`, short exact pieces `A·b -> A -> A/A·b` and stalks,
/// conjugated by random automorphisms.
pub fn random_complex<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    lo: i64,
    hi: i64,
    rng: &mut dyn RngCore,
    max_dim: usize,
) -> Result<QMod<F>, Error> {
    let n = family_order(shape)?;
    let len = (hi - lo + 1) as usize;
    let (terms, diffs) = if rng.gen_bool(0.5) {
        let terms: Vec<AModule<F>> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    alg.zero_module()
                } else {
                    random_module(alg, rng, max_dim)
                }
            })
            .collect();
        let diffs = random_differentials(alg, n, &terms, rng);
        (terms, diffs)
    } else {
        block_complex(alg, n, len, rng, max_dim)
    };
    complex_qmod(shape, alg, lo, &terms, &diffs)
}

/// Differentials `terms[m] -> terms[m+1]` with every `n`-fold composite
/// zero: each is a random map out of the cokernel of the preceding composite.
pub fn random_differentials<F: Field>(
    alg: &Algebra<F>,
    n: usize,
    terms: &[AModule<F>],
    rng: &mut dyn RngCore,
) -> Vec<Matrix<F>> {
    let f = alg.field();
    let mut diffs: Vec<Matrix<F>> = Vec::new();
    for m in 0..terms.len().saturating_sub(1) {
        let mut comp = Matrix::identity(f, terms[m].dim());
        for k in 1..n {
            if k > m {
                comp = Matrix::zeros(f, terms[m].dim(), 0);
                break;
            }
            comp = comp.mul(&diffs[m - k]);
        }
        let quot = Quotient::of_image(&comp);
        let coker = terms[m].quotient(&quot);
        let h = if rng.gen_bool(0.15) {
            Matrix::zeros(f, terms[m + 1].dim(), coker.dim())
        } else {
            random_hom_a(&coker, &terms[m + 1], rng)
        };
        diffs.push(h.mul(quot.projection()));
    }
    diffs
}

/// Random bounded (N-)complex whose terms are sums of indecomposable
/// projective modules.
pub fn random_projective_complex<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    lo: i64,
    hi: i64,
    rng: &mut dyn RngCore,
    max_dim: usize,
) -> Result<QMod<F>, Error> {
    let n = family_order(shape)?;
    let projectives: Vec<AModule<F>> = module_zoo(alg)
        .into_iter()
        .filter(|m| is_projective(alg, m))
        .collect();
    let f = alg.field();
    let terms: Vec<AModule<F>> = (lo..=hi)
        .map(|_| {
            let mut parts: Vec<&AModule<F>> = Vec::new();
            let mut dim = 0;
            for _ in 0..rng.gen_range(0..=2) {
                let p = &projectives[rng.gen_range(0..projectives.len())];
                if dim + p.dim() <= max_dim {
                    dim += p.dim();
                    parts.push(p);
                }
            }
            AModule::direct_sum_all(f, alg.dim(), &parts)
        })
        .collect();
    let diffs = random_differentials(alg, n, &terms, rng);
    complex_qmod(shape, alg, lo, &terms, &diffs)
}

fn is_projective<F: Field>(alg: &Algebra<F>, m: &AModule<F>) -> bool {
    let cover = theta_precover(alg, m, &[alg.regular()]);
    split_surjection(&cover.map, &cover.source, m).is_some()
}

fn block_complex<F: Field>(
    alg: &Arc<Algebra<F>>,
    n: usize,
    len: usize,
    rng: &mut dyn RngCore,
    max_dim: usize,
) -> (Vec<AModule<F>>, Vec<Matrix<F>>) {
    let f = alg.field();
    let zoo = module_zoo(alg);
    // Each piece: start degree and a list of (module, map to next).
    let mut pieces: Vec<(usize, Vec<AModule<F>>, Vec<Matrix<F>>)> = Vec::new();
    let mut dims = vec![0usize; len];
    for _ in 0..rng.gen_range(1..=3) {
        let kind = rng.gen_range(0..3);
        let m = zoo[rng.gen_range(0..zoo.len())].clone();
        let (mods, maps) = match kind {
            0 => {
                let l = rng.gen_range(1..=n);
                let maps = (1..l).map(|_| Matrix::identity(f, m.dim())).collect();
                (vec![m; l], maps)
            }
            1 => {
                let reg = alg.regular();
                let b = rng.gen_range(0..alg.dim());
                let mut e = vec![f.zero(); alg.dim()];
                e[b] = f.one();
                let cols: Vec<Vec<F::Elem>> = reg.action().iter().map(|a| a.mul_vec(&e)).collect();
                let basis = Matrix::from_columns(f, alg.dim(), &cols).image();
                if basis.cols() == 0 || basis.cols() == alg.dim() {
                    (vec![reg], vec![])
                } else {
                    let sub = reg.submodule(&basis).expect("cyclic submodule");
                    let quot = Quotient::of_image(&basis);
                    let top = reg.quotient(&quot);
                    (vec![sub, reg, top], vec![basis, quot.projection().clone()])
                }
            }
            _ => (vec![m], vec![]),
        };
        if mods.len() > len {
            continue;
        }
        let start = rng.gen_range(0..=len - mods.len());
        if mods
            .iter()
            .enumerate()
            .any(|(i, md)| dims[start + i] + md.dim() > max_dim.max(2))
        {
            continue;
        }
        for (i, md) in mods.iter().enumerate() {
            dims[start + i] += md.dim();
        }
        pieces.push((start, mods, maps));
    }
    // Assemble degreewise direct sums.
    let mut terms: Vec<Vec<AModule<F>>> = vec![Vec::new(); len];
    let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); len];
    for (start, mods, _) in &pieces {
        for (i, md) in mods.iter().enumerate() {
            let d = start + i;
            offsets[d].push(terms[d].iter().map(|t| t.dim()).sum());
            terms[d].push(md.clone());
        }
    }
    let summed: Vec<AModule<F>> = terms
        .iter()
        .map(|ts| {
            let refs: Vec<&AModule<F>> = ts.iter().collect();
            AModule::direct_sum_all(f, alg.dim(), &refs)
        })
        .collect();
    let mut slot = vec![0usize; len];
    let mut diffs: Vec<Matrix<F>> = (0..len - 1)
        .map(|d| Matrix::zeros(f, summed[d + 1].dim(), summed[d].dim()))
        .collect();
    for (start, mods, maps) in &pieces {
        let idx: Vec<usize> = (0..mods.len())
            .map(|i| {
                let d = start + i;
                let o = offsets[d][slot[d]];
                slot[d] += 1;
                o
            })
            .collect();
        for (i, m) in maps.iter().enumerate() {
            diffs[start + i].paste(idx[i + 1], idx[i], m);
        }
    }
    // Conjugate by random automorphisms.
    let autos: Vec<Matrix<F>> = summed.iter().map(|m| random_automorphism(m, rng)).collect();
    let diffs = diffs
        .iter()
        .enumerate()
        .map(|(d, m)| {
            let inv = if autos[d].rows() == 0 {
                autos[d].clone()
            } else {
                autos[d].inverse().expect("automorphism")
            };
            autos[d + 1].mul(m).mul(&inv)
        })
        .collect();
    (summed, diffs)
}

/// A segment `M = M = … = M` of length `n` (a disc) starting at `start`.
pub fn disc<F: Field>(
    shape: &Arc<KCategory<F>>,
    alg: &Arc<Algebra<F>>,
    start: i64,
    m: &AModule<F>,
) -> Result<QMod<F>, Error> {
    induce_f(shape, alg, shape.object(&start.to_string())?, m)
}

/// A map that is an isomorphism on all cohomology: `X -> X ⊕ D` for a disc
/// `D` (post-composed with a random automorphism), or its retraction.
pub fn random_quasi_iso<F: Field>(
    x: &QMod<F>,
    lo: i64,
    hi: i64,
    rng: &mut dyn RngCore,
) -> Result<QModMap<F>, Error> {
    let shape = x.shape();
    let alg = x.algebra();
    let n = family_order(shape)? as i64;
    let start = rng.gen_range(lo..=(hi - n + 1).max(lo));
    let m = random_module(alg, rng, 2);
    let d = disc(shape, alg, start, &m)?;
    let sum = QMod::direct_sum(&[x, &d])?;
    let y = sum.module.clone();
    let mut aut = QModMap::identity(&y);
    for _ in 0..8 {
        let g = random_hom_qa(&y, &y, rng)?;
        if g.is_iso() {
            aut = g;
            break;
        }
    }
    Ok(if rng.gen_bool(0.5) {
        aut.compose(&sum.inclusions[0])
    } else {
        sum.projections[0].compose(&aut.inverse().expect("automorphism"))
    })
}

/// A short exact sequence `X' -> X -> X''`: a split sum, a canonical
/// sequence `𝕂X -> 𝔽X -> X` or `X -> 𝔾X -> ℂX`, or the image factorisation
/// of a random map. The window is widened as needed.
pub fn random_short_exact<F: Field>(
    x: &QMod<F>,
    y: &QMod<F>,
    rng: &mut dyn RngCore,
) -> Result<(QModMap<F>, QModMap<F>), Error> {
    let step = x.shape().reduction_length().saturating_sub(1).max(1);
    let mods = with_room(&[x, y], step)?;
    let (x, y) = (&mods[0], &mods[1]);
    match rng.gen_range(0..4) {
        0 => {
            let s = QMod::direct_sum(&[x, y])?;
            Ok((s.inclusions[0].clone(), s.projections[1].clone()))
        }
        1 => {
            let eps = big_f(x)?;
            let (_, incl) = kernel(&eps);
            Ok((incl, eps))
        }
        2 => {
            let eta = big_g(x)?;
            let (_, proj) = cokernel(&eta);
            Ok((eta, proj))
        }
        _ => {
            let phi = random_hom_qa(x, y, rng)?;
            let (_, incl) = kernel(&phi);
            let (_, _, onto) = image(&phi);
            Ok((incl, onto))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmod::{is_short_exact, validate_qmod};
    use crate::shape::{build_kcategory, mesh_generator};
    use qshape_linalg::PrimeField;

    #[test]
    fn zoo_of_dual_numbers() {
        let f = PrimeField::new(101).unwrap();
        let a = Algebra::dual_numbers(&f);
        let dims: Vec<usize> = module_zoo(&a).iter().map(|m| m.dim()).collect();
        assert_eq!(dims, [1, 2]);
    }

    #[test]
    fn random_complexes_are_valid() {
        let f = PrimeField::new(101).unwrap();
        for fam in [MeshFamily::ComplexShape, MeshFamily::NComplex(3)] {
            let c = build_kcategory(&mesh_generator(fam, -2, 8).unwrap(), &f).unwrap();
            for alg in [
                Algebra::ground(&f),
                Algebra::dual_numbers(&f),
                Algebra::path_a2(&f),
            ] {
                let alg = Arc::new(alg);
                let mut r = rng(5);
                for _ in 0..20 {
                    let x = random_complex(&c, &alg, 0, 5, &mut r, 4).unwrap();
                    assert!(validate_qmod(&x).ok);
                    let (i, p) = random_short_exact(&x, &x, &mut r).unwrap();
                    assert!(is_short_exact(&i, &p));
                }
            }
        }
    }
}
