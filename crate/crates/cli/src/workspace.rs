//! JSON workspaces: named presentations, algebras, modules, modules on
//! shapes, maps, exact structures and test sets. Everything is resolved and
//! validated on load.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use qshape_core::adjoint::{induce_f, induce_g, induce_s};
use qshape_core::algebra::{validate_module, AModule, Algebra};
use qshape_core::exact::ExactStructure;
use qshape_core::qmod::{validate_qmod, QMod, QModMap};
use qshape_core::shape::{
    build_kcategory, mesh_generator, KCategory, MeshFamily, QuiverPresentation,
};
use qshape_core::{Field, FieldSpec, Matrix};
use serde::{Deserialize, Serialize};

/// Rows of canonical scalar strings.
pub type MatrixRows = Vec<Vec<String>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub field: String,
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationSpec>,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub qmods: BTreeMap<String, QModSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub structures: BTreeMap<String, StructureSpec>,
    #[serde(default)]
    pub testsets: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PresentationSpec {
    Generated {
        family: MeshFamily,
        lo: i64,
        hi: i64,
    },
    Explicit(QuiverPresentation),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Builtin {
        builtin: String,
    },
    Explicit {
        labels: Vec<String>,
        /// `mult[i][j]` = coordinates of `b_i · b_j`.
        mult: Vec<Vec<Vec<String>>>,
        unit: Vec<String>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleSpec {
    Builtin {
        algebra: String,
        /// `regular`, `free` (with `rank`), `zero` or `simple` (with `augmentation`).
        builtin: String,
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default)]
        augmentation: Option<Vec<String>>,
    },
    Explicit {
        algebra: String,
        dim: usize,
        action: Vec<MatrixRows>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QModSpec {
    Induced {
        presentation: String,
        algebra: String,
        /// `f`, `g` or `s`.
        induced: String,
        object: String,
        module: String,
    },
    Explicit {
        presentation: String,
        algebra: String,
        #[serde(default)]
        values: BTreeMap<String, String>,
        #[serde(default)]
        arrows: BTreeMap<String, MatrixRows>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub components: BTreeMap<String, MatrixRows>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureSpec {
    Named(String),
    Theta { theta: Vec<String> },
}

/// A loaded workspace over the field `F`.
pub struct Workspace<F: Field> {
    pub field: F,
    pub file: WorkspaceFile,
    pub shapes: BTreeMap<String, Arc<KCategory<F>>>,
    pub algebras: BTreeMap<String, Arc<Algebra<F>>>,
    pub modules: BTreeMap<String, (String, AModule<F>)>,
    pub qmods: BTreeMap<String, QMod<F>>,
    pub maps: BTreeMap<String, QModMap<F>>,
}

pub fn parse_file(text: &str) -> Result<WorkspaceFile> {
    serde_json::from_str(text).map_err(|e| anyhow!(ParseError(e.to_string())))
}

/// Malformed input, with the location reported by the JSON reader.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

pub fn field_spec(file: &WorkspaceFile) -> Result<FieldSpec> {
    FieldSpec::parse(&file.field).map_err(|e| anyhow!(ParseError(format!("field: {e}"))))
}

pub fn parse_matrix<F: Field>(
    f: &F,
    rows: &MatrixRows,
    nrows: usize,
    ncols: usize,
) -> Result<Matrix<F>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        bail!("expected a {nrows} x {ncols} matrix");
    }
    let data = rows
        .iter()
        .flatten()
        .map(|s| f.parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_data(f, nrows, ncols, data))
}

pub fn format_matrix<F: Field>(m: &Matrix<F>) -> MatrixRows {
    let f = m.field();
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| f.format(m.get(i, j))).collect())
        .collect()
}

fn builtin_algebra<F: Field>(f: &F, name: &str) -> Result<Algebra<F>> {
    Ok(match name {
        "ground" | "k" => Algebra::ground(f),
        "dual_numbers" => Algebra::dual_numbers(f),
        "path_a2" => Algebra::path_a2(f),
        other => bail!("unknown builtin algebra `{other}`"),
    })
}

impl<F: Field> Workspace<F> {
    pub fn load(file: WorkspaceFile, field: F) -> Result<Self> {
        let f = field.clone();
        let mut shapes = BTreeMap::new();
        for (name, spec) in &file.presentations {
            let pres = match spec {
                PresentationSpec::Generated { family, lo, hi } => {
                    mesh_generator(*family, *lo, *hi)?
                }
                PresentationSpec::Explicit(p) => p.clone(),
            };
            let shape =
                build_kcategory(&pres, &f).with_context(|| format!("presentation `{name}`"))?;
            shapes.insert(name.clone(), shape);
        }
        let mut algebras = BTreeMap::new();
        for (name, spec) in &file.algebras {
            let alg = match spec {
                AlgebraSpec::Builtin { builtin } => builtin_algebra(&f, builtin)?,
                AlgebraSpec::Explicit { labels, mult, unit } => {
                    let parse = |v: &Vec<String>| {
                        v.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>, _>>()
                    };
                    let mult = mult
                        .iter()
                        .map(|row| row.iter().map(parse).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    Algebra::new(&f, labels.clone(), mult, parse(unit)?)?
                }
            };
            algebras.insert(name.clone(), Arc::new(alg));
        }
        let algebra = |name: &str| -> Result<Arc<Algebra<F>>> {
            algebras
                .get(name)
                .cloned()
                .ok_or_else(|| anyhow!("unknown algebra `{name}`"))
        };
        let mut modules = BTreeMap::new();
        for (name, spec) in &file.modules {
            let (alg_name, m) = match spec {
                ModuleSpec::Builtin {
                    algebra: a,
                    builtin,
                    rank,
                    augmentation,
                } => {
                    let alg = algebra(a)?;
                    let m = match builtin.as_str() {
                        "regular" => alg.regular(),
                        "free" => alg.free_rank(rank.unwrap_or(1)),
                        "zero" => alg.zero_module(),
                        "simple" => {
                            let aug = augmentation
                                .as_ref()
                                .ok_or_else(|| {
                                    anyhow!("module `{name}`: simple needs an augmentation")
                                })?
                                .iter()
                                .map(|s| f.parse(s))
                                .collect::<Result<Vec<_>, _>>()?;
                            alg.simple_from_augmentation(&aug)?
                        }
                        other => bail!("module `{name}`: unknown builtin `{other}`"),
                    };
                    (a.clone(), m)
                }
                ModuleSpec::Explicit {
                    algebra: a,
                    dim,
                    action,
                } => {
                    let alg = algebra(a)?;
                    if action.len() != alg.dim() {
                        bail!("module `{name}`: expected {} action matrices", alg.dim());
                    }
                    let mats = action
                        .iter()
                        .map(|r| parse_matrix(&f, r, *dim, *dim))
                        .collect::<Result<Vec<_>>>()
                        .with_context(|| format!("module `{name}`"))?;
                    let m = AModule::new(*dim, mats)?;
                    let rep = validate_module(&alg, &m);
                    if !rep.ok {
                        bail!(
                            "module `{name}` is not a module: {}",
                            rep.witness.unwrap_or_default()
                        );
                    }
                    (a.clone(), m)
                }
            };
            modules.insert(name.clone(), (alg_name, m));
        }
        let module = |name: &str, alg_name: &str| -> Result<AModule<F>> {
            let (a, m) = modules
                .get(name)
                .ok_or_else(|| anyhow!("unknown module `{name}`"))?;
            if a != alg_name {
                bail!("module `{name}` is over `{a}`, expected `{alg_name}`");
            }
            Ok(m.clone())
        };
        let shape = |name: &str| -> Result<Arc<KCategory<F>>> {
            shapes
                .get(name)
                .cloned()
                .ok_or_else(|| anyhow!("unknown presentation `{name}`"))
        };
        let mut qmods = BTreeMap::new();
        for (name, spec) in &file.qmods {
            let x = match spec {
                QModSpec::Induced {
                    presentation,
                    algebra: a,
                    induced,
                    object,
                    module: m,
                } => {
                    let c = shape(presentation)?;
                    let alg = algebra(a)?;
                    let q = c.object(object)?;
                    let m = module(m, a)?;
                    match induced.as_str() {
                        "f" => induce_f(&c, &alg, q, &m)?,
                        "g" => induce_g(&c, &alg, q, &m)?,
                        "s" => induce_s(&c, &alg, q, &m)?,
                        other => bail!("qmod `{name}`: unknown functor `{other}`"),
                    }
                }
                QModSpec::Explicit {
                    presentation,
                    algebra: a,
                    values,
                    arrows,
                } => {
                    let c = shape(presentation)?;
                    let alg = algebra(a)?;
                    let mut vals = vec![alg.zero_module(); c.num_objects()];
                    for (obj, m) in values {
                        vals[c.object(obj)?] = module(m, a)?;
                    }
                    let mut mats: Vec<Matrix<F>> = c
                        .arrows()
                        .iter()
                        .map(|ar| Matrix::zeros(&f, vals[ar.dst].dim(), vals[ar.src].dim()))
                        .collect();
                    for (arrow, rows) in arrows {
                        let i = c
                            .arrow(arrow)
                            .ok_or_else(|| anyhow!("qmod `{name}`: unknown arrow `{arrow}`"))?;
                        let ar = &c.arrows()[i];
                        mats[i] = parse_matrix(&f, rows, vals[ar.dst].dim(), vals[ar.src].dim())
                            .with_context(|| format!("qmod `{name}`, arrow `{arrow}`"))?;
                    }
                    QMod::new(c, alg, vals, mats)?
                }
            };
            let rep = validate_qmod(&x);
            if !rep.ok {
                bail!(
                    "qmod `{name}` is not a module: {}",
                    rep.witness.unwrap_or_default()
                );
            }
            qmods.insert(name.clone(), x);
        }
        let mut maps = BTreeMap::new();
        for (name, spec) in &file.maps {
            let get = |n: &str| {
                qmods
                    .get(n)
                    .cloned()
                    .ok_or_else(|| anyhow!("unknown qmod `{n}`"))
            };
            let (x, y) = (get(&spec.source)?, get(&spec.target)?);
            let c = x.shape().clone();
            let mut comps = QModMap::zero(&x, &y).components().to_vec();
            for (obj, rows) in &spec.components {
                let q = c.object(obj)?;
                comps[q] = parse_matrix(&f, rows, y.dim(q), x.dim(q))
                    .with_context(|| format!("map `{name}` at `{obj}`"))?;
            }
            let phi = QModMap::new(x, y, comps).with_context(|| format!("map `{name}`"))?;
            maps.insert(name.clone(), phi);
        }
        let ws = Workspace {
            field,
            file,
            shapes,
            algebras,
            modules,
            qmods,
            maps,
        };
        for name in ws.file.structures.keys() {
            ws.structure(name)?;
        }
        for (name, members) in &ws.file.testsets {
            for m in members {
                if !ws.modules.contains_key(m) {
                    bail!("testset `{name}`: unknown module `{m}`");
                }
            }
        }
        Ok(ws)
    }

    pub fn qmod(&self, name: &str) -> Result<&QMod<F>> {
        self.qmods
            .get(name)
            .ok_or_else(|| anyhow!("unknown qmod `{name}`"))
    }

    pub fn map(&self, name: &str) -> Result<&QModMap<F>> {
        self.maps
            .get(name)
            .ok_or_else(|| anyhow!("unknown map `{name}`"))
    }

    pub fn module(&self, name: &str) -> Result<&AModule<F>> {
        self.modules
            .get(name)
            .map(|(_, m)| m)
            .ok_or_else(|| anyhow!("unknown module `{name}`"))
    }

    /// `abelian` and `split` are always available; other names are looked up.
    pub fn structure(&self, name: &str) -> Result<ExactStructure<F>> {
        let spec = self
            .file
            .structures
            .get(name)
            .cloned()
            .unwrap_or(StructureSpec::Named(name.to_string()));
        match spec {
            StructureSpec::Named(n) => match n.as_str() {
                "abelian" => Ok(ExactStructure::Abelian),
                "split" => Ok(ExactStructure::Split),
                other => bail!("unknown exact structure `{other}`"),
            },
            StructureSpec::Theta { theta } => Ok(ExactStructure::Theta(
                theta
                    .iter()
                    .map(|m| self.module(m).cloned())
                    .collect::<Result<_>>()?,
            )),
        }
    }

    /// A named test set, or `{A}` for the given algebra when none is named.
    pub fn testset(&self, name: Option<&str>, alg: &Algebra<F>) -> Result<Vec<AModule<F>>> {
        match name {
            Some(n) => self
                .file
                .testsets
                .get(n)
                .ok_or_else(|| anyhow!("unknown testset `{n}`"))?
                .iter()
                .map(|m| self.module(m).cloned())
                .collect(),
            None => Ok(vec![alg.regular()]),
        }
    }
}
