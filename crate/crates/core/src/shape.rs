//! Shape categories presented by quivers with homogeneous relations.
//!
//! Hom spaces are computed degreewise: `Q(p,q)_l` is the span of paths of
//! length `l` modulo the degree-`l` part of the ideal. The basis of each
//! graded piece is a set of paths, chosen as a standard complement of the
//! ideal, so every basis morphism is a single path and identities come first.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use qshape_linalg::{Field, Matrix, Quotient, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: String,
    /// Arrow names in traversal order (first arrow leaves the source).
    pub path: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshFamily {
    ComplexShape,
    NComplex(usize),
    MeshAn(usize),
}

/// Marks a presentation as the window `[lo, hi]` of a ℤ-periodic family, so
/// that the window can be widened and its cut edges are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WindowMeta {
    pub family: MeshFamily,
    pub lo: i64,
    pub hi: i64,
    #[serde(default)]
    pub opposite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverPresentation {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<Vec<Term>>,
    #[serde(default)]
    pub serre: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_meta: Option<WindowMeta>,
}

impl QuiverPresentation {
    pub fn opposite(&self) -> Self {
        QuiverPresentation {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowSpec {
                    name: a.name.clone(),
                    src: a.dst.clone(),
                    dst: a.src.clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|t| Term {
                            coeff: t.coeff.clone(),
                            path: t.path.iter().rev().cloned().collect(),
                        })
                        .collect()
                })
                .collect(),
            serre: self
                .serre
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
            window_meta: self.window_meta.map(|m| WindowMeta {
                opposite: !m.opposite,
                ..m
            }),
        }
    }
}

impl WindowMeta {
    /// Column (translation coordinate) of an object id.
    pub fn column_of(&self, id: &str) -> Option<i64> {
        id.split(':').next()?.parse().ok()
    }

    pub fn widened(&self, left: i64, right: i64) -> Self {
        WindowMeta {
            lo: self.lo - left,
            hi: self.hi + right,
            ..*self
        }
    }

    pub fn presentation(&self) -> Result<QuiverPresentation, Error> {
        let p = mesh_generator(self.family, self.lo, self.hi)?;
        Ok(if self.opposite { p.opposite() } else { p })
    }
}

/// Standard presentation of a family on the window `[lo, hi]`.
pub fn mesh_generator(family: MeshFamily, lo: i64, hi: i64) -> Result<QuiverPresentation, Error> {
    if lo >= hi {
        return Err(Error::UnsupportedFamily(format!(
            "empty window [{lo}, {hi}]"
        )));
    }
    let one = || "1".to_string();
    let meta = Some(WindowMeta {
        family,
        lo,
        hi,
        opposite: false,
    });
    match family {
        MeshFamily::ComplexShape | MeshFamily::NComplex(_) => {
            let n = match family {
                MeshFamily::NComplex(n) => n,
                _ => 2,
            };
            if n < 2 {
                return Err(Error::UnsupportedFamily(format!(
                    "{n}-complexes need n >= 2"
                )));
            }
            let objects = (lo..=hi).map(|i| i.to_string()).collect();
            let arrows = (lo..hi)
                .map(|i| ArrowSpec {
                    name: format!("d{i}"),
                    src: i.to_string(),
                    dst: (i + 1).to_string(),
                })
                .collect();
            let relations = (lo..=hi - n as i64)
                .map(|i| {
                    vec![Term {
                        coeff: one(),
                        path: (i..i + n as i64).map(|j| format!("d{j}")).collect(),
                    }]
                })
                .collect();
            let serre = (lo..=hi - (n as i64 - 1))
                .map(|i| (i.to_string(), (i + n as i64 - 1).to_string()))
                .collect();
            Ok(QuiverPresentation {
                objects,
                arrows,
                relations,
                serre,
                window_meta: meta,
            })
        }
        MeshFamily::MeshAn(n) => {
            if n == 0 {
                return Err(Error::UnsupportedFamily("A_0 mesh".into()));
            }
            let n = n as i64;
            let v = |i: i64, j: i64| format!("{i}:{j}");
            let a = |i: i64, j: i64| format!("a{i}:{j}");
            let b = |i: i64, j: i64| format!("b{i}:{j}");
            let mut objects = Vec::new();
            let mut arrows = Vec::new();
            let mut relations = Vec::new();
            let mut serre = BTreeMap::new();
            for i in lo..=hi {
                for j in 1..=n {
                    objects.push(v(i, j));
                    if j < n {
                        arrows.push(ArrowSpec {
                            name: a(i, j),
                            src: v(i, j),
                            dst: v(i, j + 1),
                        });
                    }
                    if j > 1 && i < hi {
                        arrows.push(ArrowSpec {
                            name: b(i, j),
                            src: v(i, j),
                            dst: v(i + 1, j - 1),
                        });
                    }
                    if i < hi && n > 1 {
                        let mut rel = Vec::new();
                        if j < n {
                            rel.push(Term {
                                coeff: one(),
                                path: vec![a(i, j), b(i, j + 1)],
                            });
                        }
                        if j > 1 {
                            rel.push(Term {
                                coeff: "-1".into(),
                                path: vec![b(i, j), a(i + 1, j - 1)],
                            });
                        }
                        relations.push(rel);
                    }
                    let (si, sj) = (i + j - 1, n + 1 - j);
                    if si <= hi {
                        serre.insert(v(i, j), v(si, sj));
                    }
                }
            }
            Ok(QuiverPresentation {
                objects,
                arrows,
                relations,
                serre,
                window_meta: meta,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A path in traversal order; the empty path is the identity of `src`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: usize,
    pub arrows: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Relation<F: Field> {
    src: usize,
    dst: usize,
    len: usize,
    terms: Vec<(F::Elem, Vec<usize>)>,
}

/// One graded piece of a hom space.
#[derive(Clone, Debug)]
struct Piece<F: Field> {
    paths: Vec<Vec<usize>>,
    /// `dim x paths.len()`: coordinates of each path in the piece basis.
    reduce: Matrix<F>,
    basis: Vec<usize>,
    offset: usize,
}

#[derive(Clone, Debug)]
struct HomSpace<F: Field> {
    pieces: Vec<Piece<F>>,
    lookup: HashMap<Vec<usize>, (usize, usize)>,
    dim: usize,
}

#[derive(Debug)]
struct Caches<F: Field> {
    opposite: OnceLock<Arc<KCategory<F>>>,
    widened: Mutex<HashMap<(i64, i64), Arc<KCategory<F>>>>,
}

impl<F: Field> Default for Caches<F> {
    fn default() -> Self {
        Caches {
            opposite: OnceLock::new(),
            widened: Mutex::new(HashMap::new()),
        }
    }
}

/// A Hom-finite k-linear category on a finite window of objects.
#[derive(Debug)]
pub struct KCategory<F: Field> {
    field: F,
    presentation: QuiverPresentation,
    objects: Vec<String>,
    index: HashMap<String, usize>,
    arrows: Vec<Arrow>,
    arrow_index: HashMap<String, usize>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
    relations: Vec<Relation<F>>,
    homs: Vec<Vec<HomSpace<F>>>,
    reduction_length: usize,
    serre: Vec<Option<usize>>,
    boundary: Vec<bool>,
    caches: Caches<F>,
}

impl<F: Field> PartialEq for KCategory<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.presentation == other.presentation
    }
}
impl<F: Field> Eq for KCategory<F> {}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Longest path length tried before giving up; default `2 * objects`.
    pub path_bound: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { path_bound: None }
    }
}

pub fn build_kcategory<F: Field>(
    pres: &QuiverPresentation,
    field: &F,
) -> Result<Arc<KCategory<F>>, Error> {
    KCategory::build(pres, field, BuildOptions::default()).map(Arc::new)
}

type PathsByPair = HashMap<(usize, usize), Vec<Vec<usize>>>;

impl<F: Field> KCategory<F> {
    pub fn build(pres: &QuiverPresentation, field: &F, opts: BuildOptions) -> Result<Self, Error> {
        let objects = pres.objects.clone();
        let mut index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate object `{o}`")));
            }
        }
        let obj = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::ObjectOutsideWindow(name.to_string()))
        };
        let mut arrows = Vec::new();
        let mut arrow_index = HashMap::new();
        for a in &pres.arrows {
            let arrow = Arrow {
                name: a.name.clone(),
                src: obj(&a.src)?,
                dst: obj(&a.dst)?,
            };
            if arrow_index.insert(a.name.clone(), arrows.len()).is_some() {
                return Err(Error::Invalid(format!("duplicate arrow `{}`", a.name)));
            }
            arrows.push(arrow);
        }
        let n = objects.len();
        let mut out_arrows = vec![Vec::new(); n];
        let mut in_arrows = vec![Vec::new(); n];
        for (i, a) in arrows.iter().enumerate() {
            out_arrows[a.src].push(i);
            in_arrows[a.dst].push(i);
        }

        let mut relations = Vec::new();
        for (ri, rel) in pres.relations.iter().enumerate() {
            let mut terms = Vec::new();
            let mut ends: Option<(usize, usize, usize)> = None;
            for t in rel {
                let c = field
                    .parse(&t.coeff)
                    .map_err(|e| Error::MalformedRelation(format!("relation {ri}: {e}")))?;
                if t.path.is_empty() {
                    return Err(Error::MalformedRelation(format!(
                        "relation {ri}: empty path (relations must lie in the arrow ideal)"
                    )));
                }
                let idx: Vec<usize> = t
                    .path
                    .iter()
                    .map(|name| {
                        arrow_index.get(name).copied().ok_or_else(|| {
                            Error::MalformedRelation(format!(
                                "relation {ri}: unknown arrow `{name}`"
                            ))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                for w in idx.windows(2) {
                    if arrows[w[0]].dst != arrows[w[1]].src {
                        return Err(Error::MalformedRelation(format!(
                            "relation {ri}: `{}` then `{}` not composable",
                            arrows[w[0]].name, arrows[w[1]].name
                        )));
                    }
                }
                let e = (
                    arrows[idx[0]].src,
                    arrows[*idx.last().unwrap()].dst,
                    idx.len(),
                );
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => {
                        return Err(Error::MalformedRelation(format!(
                            "relation {ri}: terms differ in endpoints or length (only homogeneous relations are supported)"
                        )))
                    }
                    _ => {}
                }
                if !field.is_zero(&c) {
                    terms.push((c, idx));
                }
            }
            if let (Some((src, dst, len)), false) = (ends, terms.is_empty()) {
                relations.push(Relation {
                    src,
                    dst,
                    len,
                    terms,
                });
            }
        }

        let mut serre = vec![None; n];
        for (a, b) in &pres.serre {
            let (a, b) = (obj(a)?, obj(b)?);
            serre[a] = Some(b);
        }
        let mut seen = vec![false; n];
        for s in serre.iter().flatten() {
            if std::mem::replace(&mut seen[*s], true) {
                return Err(Error::Invalid("serre map is not injective".into()));
            }
        }

        let bound = opts.path_bound.unwrap_or(2 * n).max(2);
        let (homs, reduction_length) =
            Self::reduce_paths(field, n, &arrows, &out_arrows, &relations, bound)?;

        let mut boundary = vec![false; n];
        if let Some(meta) = &pres.window_meta {
            for (i, o) in objects.iter().enumerate() {
                if let Some(c) = meta.column_of(o) {
                    boundary[i] = c == meta.lo || c == meta.hi;
                }
            }
        }

        Ok(KCategory {
            field: field.clone(),
            presentation: pres.clone(),
            objects,
            index,
            arrows,
            arrow_index,
            out_arrows,
            in_arrows,
            relations,
            homs,
            reduction_length,
            serre,
            boundary,
            caches: Caches::default(),
        })
    }

    #[allow(clippy::type_complexity)]
    fn reduce_paths(
        field: &F,
        n: usize,
        arrows: &[Arrow],
        out_arrows: &[Vec<usize>],
        relations: &[Relation<F>],
        bound: usize,
    ) -> Result<(Vec<Vec<HomSpace<F>>>, usize), Error> {
        let mut homs: Vec<Vec<HomSpace<F>>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| HomSpace {
                        pieces: Vec::new(),
                        lookup: HashMap::new(),
                        dim: 0,
                    })
                    .collect()
            })
            .collect();

        // Degree-0 piece: identities.
        let mut paths: PathsByPair = HashMap::new();
        for q in 0..n {
            paths.insert((q, q), vec![Vec::new()]);
        }
        // Ideal generators of the current degree, as vectors over `paths`.
        let mut ideal: HashMap<(usize, usize), Matrix<F>> = HashMap::new();
        let mut len = 0;
        loop {
            // Record the quotient in this degree.
            let mut all_killed = len > 0;
            for (&(p, q), ps) in &paths {
                let gens = ideal
                    .get(&(p, q))
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(field, ps.len(), 0));
                let sub = Subspace::span(&gens);
                if sub.dim() < ps.len() {
                    all_killed = false;
                }
                let quot = Quotient::of_subspace(&sub);
                let proj = quot.projection().clone();
                let basis: Vec<usize> = (0..quot.section().cols())
                    .map(|c| {
                        (0..ps.len())
                            .find(|&r| field.is_one(quot.section().get(r, c)))
                            .expect("standard complement")
                    })
                    .collect();
                let hs = &mut homs[p][q];
                let piece_idx = hs.pieces.len();
                for (i, path) in ps.iter().enumerate() {
                    hs.lookup.insert(path.clone(), (piece_idx, i));
                }
                let dim = proj.rows();
                hs.pieces.push(Piece {
                    paths: ps.clone(),
                    reduce: proj,
                    basis,
                    offset: hs.dim,
                });
                hs.dim += dim;
            }
            if all_killed {
                // Every path of this length vanishes; so do all longer ones.
                // Drop the (zero-dimensional) pieces of this degree.
                for row in homs.iter_mut() {
                    for hs in row.iter_mut() {
                        if let Some(last) = hs.pieces.last() {
                            if last.paths.first().map_or(0, |p| p.len()) == len
                                && last.basis.is_empty()
                            {
                                let piece = hs.pieces.pop().unwrap();
                                for path in piece.paths {
                                    hs.lookup.remove(&path);
                                }
                            }
                        }
                    }
                }
                return Ok((homs, len));
            }
            if len >= bound {
                return Err(Error::HomInfinite(bound));
            }

            // Next degree: extend every path by one arrow.
            let mut next: PathsByPair = HashMap::new();
            let mut keys: Vec<_> = paths.keys().copied().collect();
            keys.sort_unstable();
            for (p, q) in keys {
                for path in &paths[&(p, q)] {
                    for &a in &out_arrows[q] {
                        let mut np = path.clone();
                        np.push(a);
                        next.entry((p, arrows[a].dst)).or_default().push(np);
                    }
                }
            }
            for v in next.values_mut() {
                v.sort();
            }
            let pos: HashMap<(usize, &Vec<usize>), usize> = next
                .iter()
                .flat_map(|(&(p, _), v)| v.iter().enumerate().map(move |(i, path)| ((p, path), i)))
                .collect();
            let mut gens: HashMap<(usize, usize), Vec<Vec<F::Elem>>> = HashMap::new();
            let mut push = |p: usize, q: usize, entries: Vec<(usize, F::Elem)>| {
                let size = next[&(p, q)].len();
                let mut v = vec![field.zero(); size];
                for (i, c) in entries {
                    v[i] = field.add(&v[i], &c);
                }
                gens.entry((p, q)).or_default().push(v);
            };
            // ideal * arrow and arrow * ideal
            for (&(p, q), m) in &ideal {
                let ps = &paths[&(p, q)];
                for col in m.columns() {
                    for &a in &out_arrows[q] {
                        let r = arrows[a].dst;
                        let entries = col
                            .iter()
                            .zip(ps)
                            .filter(|(c, _)| !field.is_zero(c))
                            .map(|(c, path)| {
                                let mut np = path.clone();
                                np.push(a);
                                (pos[&(p, &np)], c.clone())
                            })
                            .collect();
                        push(p, r, entries);
                    }
                    for (a, arrow) in arrows.iter().enumerate() {
                        if arrow.dst != p {
                            continue;
                        }
                        let s = arrow.src;
                        let entries = col
                            .iter()
                            .zip(ps)
                            .filter(|(c, _)| !field.is_zero(c))
                            .map(|(c, path)| {
                                let mut np = vec![a];
                                np.extend_from_slice(path);
                                (pos[&(s, &np)], c.clone())
                            })
                            .collect();
                        push(s, q, entries);
                    }
                }
            }
            for rel in relations.iter().filter(|r| r.len == len + 1) {
                let entries = rel
                    .terms
                    .iter()
                    .map(|(c, path)| (pos[&(rel.src, path)], c.clone()))
                    .collect();
                push(rel.src, rel.dst, entries);
            }
            ideal = gens
                .into_iter()
                .map(|(k, cols)| {
                    let size = next[&k].len();
                    let m = Matrix::from_columns(field, size, &cols);
                    (k, m.image())
                })
                .collect();
            paths = next;
            len += 1;
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn presentation(&self) -> &QuiverPresentation {
        &self.presentation
    }
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn objects(&self) -> &[String] {
        &self.objects
    }
    pub fn object_name(&self, q: usize) -> &str {
        &self.objects[q]
    }
    pub fn object(&self, name: &str) -> Result<usize, Error> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::ObjectOutsideWindow(name.to_string()))
    }
    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }
    pub fn out_arrows(&self, q: usize) -> &[usize] {
        &self.out_arrows[q]
    }
    pub fn in_arrows(&self, q: usize) -> &[usize] {
        &self.in_arrows[q]
    }
    pub fn window_meta(&self) -> Option<&WindowMeta> {
        self.presentation.window_meta.as_ref()
    }
    pub fn serre(&self, q: usize) -> Option<usize> {
        self.serre[q]
    }
    pub fn serre_inverse(&self, q: usize) -> Option<usize> {
        self.serre.iter().position(|s| *s == Some(q))
    }
    pub fn is_boundary(&self, q: usize) -> bool {
        self.boundary[q]
    }
    pub fn boundary_objects(&self) -> Vec<usize> {
        (0..self.num_objects())
            .filter(|&q| self.boundary[q])
            .collect()
    }
    /// Length at which all paths vanish; equals the nilpotence index of the
    /// arrow ideal.
    pub fn reduction_length(&self) -> usize {
        self.reduction_length
    }

    pub fn hom_dim(&self, p: usize, q: usize) -> usize {
        self.homs[p][q].dim
    }

    /// Basis morphisms of `Q(p,q)`, each a path; identity first when `p = q`.
    pub fn hom_basis(&self, p: usize, q: usize) -> Vec<Path> {
        let hs = &self.homs[p][q];
        hs.pieces
            .iter()
            .flat_map(|pc| {
                pc.basis.iter().map(move |&i| Path {
                    src: p,
                    arrows: pc.paths[i].clone(),
                })
            })
            .collect()
    }

    /// Indices of basis elements of `Q(p,q)` lying in the arrow ideal.
    pub fn radical_basis(&self, p: usize, q: usize) -> Vec<usize> {
        let basis = self.hom_basis(p, q);
        (0..basis.len())
            .filter(|&i| !basis[i].arrows.is_empty())
            .collect()
    }

    pub fn target_of(&self, path: &Path) -> usize {
        path.arrows.last().map_or(path.src, |&a| self.arrows[a].dst)
    }

    /// Coordinates of a path in the basis of `Q(src, dst)`.
    pub fn reduce(&self, path: &Path) -> Vec<F::Elem> {
        let q = self.target_of(path);
        let hs = &self.homs[path.src][q];
        let mut v = vec![self.field.zero(); hs.dim];
        if let Some(&(pi, i)) = hs.lookup.get(&path.arrows) {
            let pc = &hs.pieces[pi];
            for r in 0..pc.reduce.rows() {
                v[pc.offset + r] = pc.reduce.get(r, i).clone();
            }
        }
        v
    }

    /// `b ∘ a` for basis elements `a ∈ Q(p,q)`, `b ∈ Q(q,r)`.
    pub fn compose_basis(&self, p: usize, q: usize, r: usize, a: usize, b: usize) -> Vec<F::Elem> {
        let pa = &self.hom_basis(p, q)[a];
        let pb = &self.hom_basis(q, r)[b];
        let mut arrows = pa.arrows.clone();
        arrows.extend_from_slice(&pb.arrows);
        self.reduce(&Path { src: p, arrows })
    }

    /// Composition tensor: entry `[a][b]` holds the coordinates of `b ∘ a`.
    pub fn composition(&self, p: usize, q: usize, r: usize) -> Vec<Vec<Vec<F::Elem>>> {
        (0..self.hom_dim(p, q))
            .map(|a| {
                (0..self.hom_dim(q, r))
                    .map(|b| self.compose_basis(p, q, r, a, b))
                    .collect()
            })
            .collect()
    }

    /// Composition of arbitrary elements given by coordinates.
    pub fn compose(
        &self,
        p: usize,
        q: usize,
        r: usize,
        a: &[F::Elem],
        b: &[F::Elem],
    ) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.hom_dim(p, r)];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                for (o, z) in out.iter_mut().zip(self.compose_basis(p, q, r, i, j)) {
                    f.add_mul(o, &c, &z);
                }
            }
        }
        out
    }

    /// Matrix of `α ∘ −: Q(q,p) → Q(q,p')` for an arrow `α: p → p'`.
    pub fn post_compose_arrow(&self, q: usize, arrow: usize) -> Matrix<F> {
        let (p, p2) = (self.arrows[arrow].src, self.arrows[arrow].dst);
        let cols: Vec<Vec<F::Elem>> = self
            .hom_basis(q, p)
            .into_iter()
            .map(|mut b| {
                b.arrows.push(arrow);
                self.reduce(&b)
            })
            .collect();
        Matrix::from_columns(&self.field, self.hom_dim(q, p2), &cols)
    }

    /// Matrix of `− ∘ α: Q(p',q) → Q(p,q)` for an arrow `α: p → p'`.
    pub fn pre_compose_arrow(&self, arrow: usize, q: usize) -> Matrix<F> {
        let (p, p2) = (self.arrows[arrow].src, self.arrows[arrow].dst);
        let cols: Vec<Vec<F::Elem>> = self
            .hom_basis(p2, q)
            .into_iter()
            .map(|b| {
                let mut arrows = vec![arrow];
                arrows.extend(b.arrows);
                self.reduce(&Path { src: p, arrows })
            })
            .collect();
        Matrix::from_columns(&self.field, self.hom_dim(p, q), &cols)
    }

    pub fn opposite(self: &Arc<Self>) -> Arc<Self> {
        self.caches
            .opposite
            .get_or_init(|| {
                let op = KCategory::build(
                    &self.presentation.opposite(),
                    &self.field,
                    BuildOptions {
                        path_bound: Some(self.reduction_length.max(2 * self.num_objects())),
                    },
                )
                .expect("opposite of a valid presentation is valid");
                let op = Arc::new(op);
                // Seed the involution so that op(op(C)) is C itself.
                let _ = op.caches.opposite.set(self.clone());
                op
            })
            .clone()
    }

    pub fn is_opposite_of(&self, other: &Self) -> bool {
        self.field == other.field && self.presentation == other.presentation.opposite()
    }

    /// The same family on `[lo - left, hi + right]`. Requires window metadata.
    pub fn widened(self: &Arc<Self>, left: i64, right: i64) -> Result<Arc<Self>, Error> {
        let meta = *self
            .window_meta()
            .ok_or_else(|| Error::Invalid("shape has no family metadata".into()))?;
        if left == 0 && right == 0 {
            return Ok(self.clone());
        }
        let w = meta.widened(left, right);
        let mut cache = self.caches.widened.lock().expect("cache lock");
        if let Some(c) = cache.get(&(w.lo, w.hi)) {
            return Ok(c.clone());
        }
        let c = Arc::new(KCategory::build(
            &w.presentation()?,
            &self.field,
            BuildOptions::default(),
        )?);
        cache.insert((w.lo, w.hi), c.clone());
        Ok(c)
    }

    /// Undirected arrow distance from a set of objects.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        self.bfs(sources, true, true)
    }

    /// Directed distances: forward along arrows when `forward`, else backward.
    pub fn directed_distances_from(&self, sources: &[usize], forward: bool) -> Vec<Option<usize>> {
        self.bfs(sources, forward, !forward)
    }

    fn bfs(&self, sources: &[usize], fwd: bool, bwd: bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_objects()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            let mut nbrs = Vec::new();
            if fwd {
                nbrs.extend(self.out_arrows[v].iter().map(|&a| self.arrows[a].dst));
            }
            if bwd {
                nbrs.extend(self.in_arrows[v].iter().map(|&a| self.arrows[a].src));
            }
            for w in nbrs {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Radical bases and the nilpotence index, recomputed from composition.
#[derive(Clone, Debug)]
pub struct RadicalData {
    pub radical_basis: Vec<Vec<Vec<usize>>>,
    pub nilpotence_index: usize,
}

pub fn pseudo_radical_nilpotence<F: Field>(c: &KCategory<F>) -> Result<RadicalData, Error> {
    let n = c.num_objects();
    let f = c.field();
    let mut radical_basis = vec![vec![Vec::new(); n]; n];
    for q in 0..n {
        let basis = c.hom_basis(q, q);
        if basis.first().map_or(true, |b| !b.arrows.is_empty()) {
            return Err(Error::NoStrongRetraction(c.object_name(q).to_string()));
        }
        for p in 0..n {
            radical_basis[p][q] = c.radical_basis(p, q);
        }
    }
    // r^k(p, q) as spanning vectors in hom coordinates.
    let unit = |p: usize, q: usize, i: usize| {
        let mut v = vec![f.zero(); c.hom_dim(p, q)];
        v[i] = f.one();
        v
    };
    let mut power: HashMap<(usize, usize), Vec<Vec<F::Elem>>> = HashMap::new();
    for p in 0..n {
        for q in 0..n {
            let vs: Vec<_> = radical_basis[p][q].iter().map(|&i| unit(p, q, i)).collect();
            if !vs.is_empty() {
                power.insert((p, q), vs);
            }
        }
    }
    let bound = 2 * n + 2;
    let mut k = 1;
    while !power.is_empty() {
        if k > bound {
            return Err(Error::NotNilpotent(bound));
        }
        let mut next: HashMap<(usize, usize), Vec<Vec<F::Elem>>> = HashMap::new();
        for (&(p, q), vs) in &power {
            for r in 0..n {
                for &b in &radical_basis[q][r] {
                    let bv = unit(q, r, b);
                    for a in vs {
                        let v = c.compose(p, q, r, a, &bv);
                        if v.iter().any(|x| !f.is_zero(x)) {
                            next.entry((p, r)).or_default().push(v);
                        }
                    }
                }
            }
        }
        power = next
            .into_iter()
            .map(|(key, vs)| {
                let m = Matrix::from_columns(f, c.hom_dim(key.0, key.1), &vs).image();
                (key, m.columns())
            })
            .filter(|(_, vs)| !vs.is_empty())
            .collect();
        k += 1;
    }
    Ok(RadicalData {
        radical_basis,
        nilpotence_index: k,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check {
            ok: true,
            witness: None,
        }
    }
    fn fail(w: String) -> Self {
        Check {
            ok: false,
            witness: Some(w),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SerreReport {
    pub dimension_symmetry_ok: bool,
    pub pairing: PairingStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetupReport {
    pub hom_finite: Check,
    pub locally_bounded: Check,
    pub strong_retraction: Check,
    pub nilpotent: Check,
    pub nilpotence_index: Option<usize>,
    pub associativity: Check,
    pub serre: SerreReport,
    pub boundary_objects: Vec<String>,
}

impl SetupReport {
    pub fn all_pass(&self) -> bool {
        self.hom_finite.ok
            && self.locally_bounded.ok
            && self.strong_retraction.ok
            && self.nilpotent.ok
            && self.associativity.ok
            && self.serre.dimension_symmetry_ok
            && self.serre.pairing == PairingStatus::Pass
    }
}

pub fn serre_report<F: Field>(c: &KCategory<F>) -> SerreReport {
    let n = c.num_objects();
    let f = c.field();
    let name = |q: usize| c.object_name(q).to_string();
    for q in 0..n {
        let Some(sq) = c.serre(q) else { continue };
        for p in 0..n {
            if c.hom_dim(p, sq) != c.hom_dim(q, p) {
                return SerreReport {
                    dimension_symmetry_ok: false,
                    pairing: PairingStatus::Fail,
                    witness: Some((name(p), name(q))),
                };
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e44e);
    for q in 0..n {
        let Some(sq) = c.serre(q) else { continue };
        let d = c.hom_dim(q, sq);
        let mut candidates: Vec<Vec<F::Elem>> = (0..d)
            .map(|j| {
                let mut t = vec![f.zero(); d];
                t[j] = f.one();
                t
            })
            .collect();
        candidates.push((0..d).map(|_| f.random(&mut rng)).collect());
        let works = |t: &[F::Elem]| {
            (0..n).all(|p| {
                let (da, db) = (c.hom_dim(q, p), c.hom_dim(p, sq));
                let comp = c.composition(q, p, sq);
                let mut m = Matrix::zeros(f, da, db);
                for a in 0..da {
                    for b in 0..db {
                        let mut acc = f.zero();
                        for (x, y) in comp[a][b].iter().zip(t) {
                            f.add_mul(&mut acc, x, y);
                        }
                        m.set(a, b, acc);
                    }
                }
                m.is_invertible()
            })
        };
        if !candidates.iter().any(|t| works(t)) {
            return SerreReport {
                dimension_symmetry_ok: true,
                pairing: PairingStatus::Inconclusive,
                witness: Some((name(q), name(sq))),
            };
        }
    }
    SerreReport {
        dimension_symmetry_ok: true,
        pairing: PairingStatus::Pass,
        witness: None,
    }
}

pub fn validate_setup<F: Field>(c: &KCategory<F>) -> SetupReport {
    let n = c.num_objects();
    let f = c.field();
    let (strong_retraction, nilpotent, nilpotence_index) = match pseudo_radical_nilpotence(c) {
        Ok(r) => (Check::pass(), Check::pass(), Some(r.nilpotence_index)),
        Err(Error::NoStrongRetraction(q)) => {
            (Check::fail(q), Check::fail("not computed".into()), None)
        }
        Err(e) => (Check::pass(), Check::fail(e.to_string()), None),
    };
    let strong_retraction = if strong_retraction.ok {
        match (0..n).find(|&q| c.hom_dim(q, q) != 1 + c.radical_basis(q, q).len()) {
            Some(q) => Check::fail(c.object_name(q).to_string()),
            None => strong_retraction,
        }
    } else {
        strong_retraction
    };
    // Associativity on basis triples of composable hom spaces.
    let mut associativity = Check::pass();
    'outer: for p in 0..n {
        for q in (0..n).filter(|&q| c.hom_dim(p, q) > 0) {
            for r in (0..n).filter(|&r| c.hom_dim(q, r) > 0) {
                for s in (0..n).filter(|&s| c.hom_dim(r, s) > 0) {
                    for a in 0..c.hom_dim(p, q) {
                        for b in 0..c.hom_dim(q, r) {
                            let ba = c.compose_basis(p, q, r, a, b);
                            for cc in 0..c.hom_dim(r, s) {
                                let mut unit = vec![f.zero(); c.hom_dim(r, s)];
                                unit[cc] = f.one();
                                let left = c.compose(p, r, s, &ba, &unit);
                                let cb = c.compose_basis(q, r, s, b, cc);
                                let mut ua = vec![f.zero(); c.hom_dim(p, q)];
                                ua[a] = f.one();
                                let right = c.compose(p, q, s, &ua, &cb);
                                if left != right {
                                    associativity = Check::fail(format!(
                                        "{} {} {} {}",
                                        c.object_name(p),
                                        c.object_name(q),
                                        c.object_name(r),
                                        c.object_name(s)
                                    ));
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    SetupReport {
        hom_finite: Check::pass(),
        locally_bounded: Check::pass(),
        strong_retraction,
        nilpotent,
        nilpotence_index,
        associativity,
        serre: serre_report(c),
        boundary_objects: c
            .boundary_objects()
            .iter()
            .map(|&q| c.object_name(q).to_string())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qshape_linalg::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn shape(fam: MeshFamily, lo: i64, hi: i64) -> Arc<KCategory<PrimeField>> {
        build_kcategory(&mesh_generator(fam, lo, hi).unwrap(), &f()).unwrap()
    }

    #[test]
    fn complex_shape_hom_dims() {
        let c = shape(MeshFamily::ComplexShape, 0, 4);
        for q in 0..5 {
            for p in 0..5 {
                let expect = usize::from(p == q || p == q + 1);
                assert_eq!(c.hom_dim(q, p), expect, "Q({q},{p})");
            }
        }
        assert_eq!(c.reduction_length(), 2);
    }

    #[test]
    fn three_complex_hom_dims() {
        let c = shape(MeshFamily::NComplex(3), 0, 5);
        for q in 0..6usize {
            for p in 0..6usize {
                let expect = usize::from(p >= q && p - q <= 2);
                assert_eq!(c.hom_dim(q, p), expect);
            }
        }
        assert_eq!(pseudo_radical_nilpotence(&*c).unwrap().nilpotence_index, 3);
    }

    #[test]
    fn single_object_is_the_ground_field() {
        let pres = QuiverPresentation {
            objects: vec!["x".into()],
            arrows: vec![],
            relations: vec![],
            serre: [("x".to_string(), "x".to_string())].into_iter().collect(),
            window_meta: None,
        };
        let c = build_kcategory(&pres, &f()).unwrap();
        assert_eq!(c.hom_dim(0, 0), 1);
        assert_eq!(pseudo_radical_nilpotence(&*c).unwrap().nilpotence_index, 1);
        assert!(validate_setup(&*c).all_pass());
        let op = c.opposite();
        assert_eq!(*op, *c);
    }

    #[test]
    fn generator_counts() {
        let p = mesh_generator(MeshFamily::ComplexShape, 0, 3).unwrap();
        assert_eq!(
            (p.objects.len(), p.arrows.len(), p.relations.len()),
            (4, 3, 2)
        );
        let p3 = mesh_generator(MeshFamily::NComplex(3), 0, 4).unwrap();
        assert_eq!(p3.relations.len(), 2);
        assert!(p3.relations.iter().all(|r| r[0].path.len() == 3));
        assert!(mesh_generator(MeshFamily::NComplex(1), 0, 4).is_err());
    }

    #[test]
    fn serre_checks() {
        let c = shape(MeshFamily::ComplexShape, 0, 4);
        let rep = validate_setup(&*c);
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.nilpotence_index, Some(2));

        let mut pres = mesh_generator(MeshFamily::ComplexShape, 0, 4).unwrap();
        pres.serre = pres
            .objects
            .iter()
            .map(|o| (o.clone(), o.clone()))
            .collect();
        let bad = build_kcategory(&pres, &f()).unwrap();
        let rep = serre_report(&*bad);
        assert!(!rep.dimension_symmetry_ok);
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = shape(MeshFamily::ComplexShape, 0, 4);
        let op = c.opposite();
        for p in 0..5 {
            for q in 0..5 {
                assert_eq!(op.hom_dim(p, q), c.hom_dim(q, p));
            }
        }
        assert!(Arc::ptr_eq(&op.opposite(), &c));
        let rebuilt = build_kcategory(&op.presentation().opposite(), &f()).unwrap();
        assert_eq!(*rebuilt, *c);
        assert!(validate_setup(&*op).all_pass());
    }

    #[test]
    fn mesh_a2_matches_complexes() {
        let m = shape(MeshFamily::MeshAn(2), 0, 3);
        let c = shape(MeshFamily::ComplexShape, 0, 7);
        // (i,1) -> 2i, (i,2) -> 2i+1
        for p in 0..8 {
            for q in 0..8 {
                assert_eq!(m.hom_dim(p, q), c.hom_dim(p, q));
            }
        }
        let rep = validate_setup(&*m);
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.nilpotence_index, Some(2));
    }

    #[test]
    fn mesh_a3_serre_symmetry() {
        let m = shape(MeshFamily::MeshAn(3), 0, 4);
        let rep = validate_setup(&*m);
        assert!(rep.all_pass(), "{rep:?}");
        assert_eq!(rep.nilpotence_index, Some(3));
    }

    #[test]
    fn non_homogeneous_relation_rejected() {
        let mut pres = mesh_generator(MeshFamily::ComplexShape, 0, 3).unwrap();
        pres.relations.push(vec![
            Term {
                coeff: "1".into(),
                path: vec!["d0".into()],
            },
            Term {
                coeff: "1".into(),
                path: vec!["d0".into(), "d1".into()],
            },
        ]);
        assert!(matches!(
            build_kcategory(&pres, &f()),
            Err(Error::MalformedRelation(_))
        ));
        let mut bad = mesh_generator(MeshFamily::ComplexShape, 0, 3).unwrap();
        bad.relations.push(vec![Term {
            coeff: "1".into(),
            path: vec!["d1".into(), "d0".into()],
        }]);
        assert!(matches!(
            build_kcategory(&bad, &f()),
            Err(Error::MalformedRelation(_))
        ));
    }

    #[test]
    fn cycle_without_relations_is_hom_infinite() {
        let pres = QuiverPresentation {
            objects: vec!["x".into()],
            arrows: vec![ArrowSpec {
                name: "l".into(),
                src: "x".into(),
                dst: "x".into(),
            }],
            relations: vec![],
            serre: BTreeMap::new(),
            window_meta: None,
        };
        assert!(matches!(
            build_kcategory(&pres, &f()),
            Err(Error::HomInfinite(_))
        ));
    }

    #[test]
    fn boundary_and_widening() {
        let c = shape(MeshFamily::ComplexShape, 0, 4);
        assert_eq!(c.boundary_objects(), vec![0, 4]);
        let w = c.widened(2, 1).unwrap();
        assert_eq!(w.objects().first().unwrap(), "-2");
        assert_eq!(w.objects().last().unwrap(), "5");
        assert!(Arc::ptr_eq(&w, &c.widened(2, 1).unwrap()));
    }
}
