//! Command implementations. Each returns a JSON report and whether the
//! mathematical verdict was positive.

use anyhow::{anyhow, bail, Result};
use qshape_core::algebra::AModule;
use qshape_core::cohomology::{hh, hh_relres, GSpec};
use qshape_core::exact::relative_ext;
use qshape_core::oracles::{
    hom_mod_projectives, in_acyclic_kernel, is_trivial, is_weq, stable_hom_split, OracleVerdict,
    StableHom, TrivialMode,
};
use qshape_core::qmod::{hom_qa, QModMap};
use qshape_core::shape::{mesh_generator, validate_setup, KCategory, MeshFamily};
use qshape_core::tac::{canonical_tac, verify_totally_acyclic};
use qshape_core::Field;
use serde_json::{json, Value};

use crate::selftest;
use crate::workspace::{format_matrix, PresentationSpec, Workspace, WorkspaceFile};

/// Options shared by the workspace commands.
#[derive(Clone, Debug, Default)]
pub struct Args {
    pub structure: Option<String>,
    pub testset: Option<String>,
    pub window: Option<(i64, i64)>,
    pub qmod: Option<String>,
    pub map: Option<String>,
    pub source: Option<String>,
    pub target: Option<String>,
    pub degree: Option<usize>,
    pub n: Option<i64>,
    pub object: Option<String>,
    pub test: Option<String>,
    pub generator: Option<String>,
}

pub struct Report {
    pub body: Value,
    pub verdict: bool,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report {
            body,
            verdict: true,
        }
    }
}

pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("window must look like lo..hi"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

pub fn parse_family(s: &str) -> Result<MeshFamily> {
    let (name, arg) = match s.split_once(':') {
        Some((a, b)) => (a, Some(b.parse::<usize>()?)),
        None => (s, None),
    };
    Ok(match (name, arg) {
        ("cpx" | "complex", None) => MeshFamily::ComplexShape,
        ("ncpx" | "n-complex", Some(n)) => MeshFamily::NComplex(n),
        ("mesh" | "mesh-a", Some(n)) => MeshFamily::MeshAn(n),
        _ => bail!("unknown family `{s}` (use cpx, ncpx:N or mesh:N)"),
    })
}

/// A workspace holding one explicit presentation named `shape`.
pub fn gen_mesh(field: &str, family: MeshFamily, lo: i64, hi: i64) -> Result<Value> {
    let pres = mesh_generator(family, lo, hi)?;
    let file = WorkspaceFile {
        field: field.to_string(),
        presentations: [("shape".to_string(), PresentationSpec::Explicit(pres))].into(),
        algebras: Default::default(),
        modules: Default::default(),
        qmods: Default::default(),
        maps: Default::default(),
        structures: Default::default(),
        testsets: Default::default(),
    };
    Ok(serde_json::to_value(file)?)
}

pub fn selftest(criterion: Option<u8>, seed: u64) -> Result<Report> {
    let outcomes = match criterion {
        Some(id) => vec![selftest::run(id, seed)],
        None => selftest::run_all(seed),
    };
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(Report {
        body: json!({ "command": "selftest", "seed": seed.to_string(), "criteria": outcomes, "pass": pass }),
        verdict: pass,
    })
}

fn window_meta<F: Field>(c: &KCategory<F>) -> Value {
    match c.window_meta() {
        Some(m) => {
            json!({ "family": m.family, "lo": m.lo, "hi": m.hi, "opposite": m.opposite, "objects": c.num_objects() })
        }
        None => json!({ "objects": c.num_objects() }),
    }
}

fn module_json<F: Field>(m: &AModule<F>) -> Value {
    json!({ "dim": m.dim(), "action": m.action().iter().map(format_matrix).collect::<Vec<_>>() })
}

fn verdict_json(v: &OracleVerdict) -> Value {
    json!({ "verdict": v.verdict, "witnesses": v.witnesses, "testset_relative": v.testset_relative })
}

fn stable_json<F: Field>(st: &StableHom<F>) -> Value {
    json!({
        "hom_dim": st.ambient_dim(),
        "ideal_dim": st.ideal_dim(),
        "quotient_dim": st.quotient_dim(),
        "representatives": st.representatives().iter().map(map_json).collect::<Vec<_>>(),
    })
}

fn map_json<F: Field>(phi: &QModMap<F>) -> Value {
    let c = phi.source().shape();
    let comps: serde_json::Map<String, Value> = (0..c.num_objects())
        .filter(|&q| phi.component(q).rows() > 0 && phi.component(q).cols() > 0)
        .map(|q| {
            (
                c.object_name(q).to_string(),
                json!(format_matrix(phi.component(q))),
            )
        })
        .collect();
    Value::Object(comps)
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| anyhow!("missing --{flag}"))
}

pub fn run<F: Field>(command: &str, ws: &Workspace<F>, args: &Args) -> Result<Report> {
    let structure_name = args.structure.as_deref().unwrap_or("abelian");
    let e = ws.structure(structure_name)?;
    match command {
        "validate" => {
            let mut ok = true;
            let mut shapes = serde_json::Map::new();
            for (name, c) in &ws.shapes {
                let rep = validate_setup(c);
                ok &= rep.all_pass();
                shapes.insert(
                    name.clone(),
                    json!({ "setup": rep, "window": window_meta(c) }),
                );
            }
            let algebras: serde_json::Map<String, Value> = ws
                .algebras
                .iter()
                .map(|(n, a)| (n.clone(), json!({ "dim": a.dim(), "valid": a.validate() })))
                .collect();
            let qmods: serde_json::Map<String, Value> = ws
                .qmods
                .iter()
                .map(|(n, x)| {
                    (
                        n.clone(),
                        json!({ "dims": x.dims(), "window": window_meta(x.shape()) }),
                    )
                })
                .collect();
            Ok(Report {
                body: json!({
                    "command": "validate",
                    "field": ws.field.spec().to_string(),
                    "presentations": shapes,
                    "algebras": algebras,
                    "qmods": qmods,
                    "maps": ws.maps.keys().collect::<Vec<_>>(),
                    "pass": ok,
                }),
                verdict: ok,
            })
        }
        "hom" => {
            let (x, y) = (
                ws.qmod(need(&args.source, "source")?)?,
                ws.qmod(need(&args.target, "target")?)?,
            );
            let h = hom_qa(x, y)?;
            Ok(Report::ok(json!({
                "command": "hom",
                "dim": h.dim(),
                "basis": h.basis_maps().iter().map(map_json).collect::<Vec<_>>(),
                "window": window_meta(x.shape()),
            })))
        }
        "ext" => {
            let (x, y) = (
                ws.qmod(need(&args.source, "source")?)?,
                ws.qmod(need(&args.target, "target")?)?,
            );
            let i = args.degree.ok_or_else(|| anyhow!("missing --degree"))?;
            let g = relative_ext(x, y, &e, i)?;
            Ok(Report::ok(json!({
                "command": "ext",
                "structure": structure_name,
                "degree": i,
                "dim": g.dim(),
                "resolution_dims": g.resolution.complex.terms.iter().map(|t| t.total_dim()).collect::<Vec<_>>(),
                "window": window_meta(&g.shape),
            })))
        }
        "cohom" => {
            let x = ws.qmod(need(&args.qmod, "qmod")?)?;
            let n = args.n.unwrap_or(0);
            let i = args.degree.unwrap_or(1);
            let g = match (&args.generator, &args.test) {
                (Some(u), _) => GSpec::Module(ws.qmod(u)?.clone()),
                (None, t) => GSpec::Stalk {
                    test: match t {
                        Some(t) => ws.module(t)?.clone(),
                        None => x.algebra().regular(),
                    },
                    object: need(&args.object, "object")?.to_string(),
                },
            };
            let tac = hh(&g, &e, n, i, x)?;
            let relres = hh_relres(&g, &e, n, i, x)?;
            let agree = tac.dim() == relres.dim();
            Ok(Report {
                body: json!({
                    "command": "cohom",
                    "structure": structure_name,
                    "n": n,
                    "degree": i,
                    "value": module_json(&tac.value),
                    "dim_via_tac": tac.dim(),
                    "dim_via_relative_resolution": relres.dim(),
                    "routes_agree": agree,
                    "window": tac.window.map(|(lo, hi)| json!({ "lo": lo, "hi": hi })),
                }),
                verdict: agree,
            })
        }
        "tac" => {
            let x = ws.qmod(need(&args.qmod, "qmod")?)?;
            let (lo, hi) = args.window.unwrap_or((-3, 2));
            let w = canonical_tac(x, &e, lo, hi)?;
            let theta = ws.testset(args.testset.as_deref(), x.algebra())?;
            let rep = verify_totally_acyclic(&w, &theta, &e)?;
            let terms: serde_json::Map<String, Value> = (lo..=hi)
                .map(|m| Ok((m.to_string(), json!(w.term(m)?.dims()))))
                .collect::<Result<_>>()?;
            let cycles: serde_json::Map<String, Value> = (lo..=hi)
                .map(|m| Ok((m.to_string(), json!(w.cycle(m)?.dims()))))
                .collect::<Result<_>>()?;
            Ok(Report {
                body: json!({
                    "command": "tac",
                    "structure": structure_name,
                    "term_dims": terms,
                    "cycle_dims": cycles,
                    "objects": w.shape.objects(),
                    "verification": rep,
                    "window": window_meta(&w.shape),
                }),
                verdict: rep.ok,
            })
        }
        "trivial" => {
            let x = ws.qmod(need(&args.qmod, "qmod")?)?;
            let theta = ws.testset(args.testset.as_deref(), x.algebra())?;
            let mode = match args.window {
                Some((lo, hi)) => TrivialMode::WindowN(lo, hi),
                None => TrivialMode::N0,
            };
            let v = is_trivial(x, &e, &theta, mode)?;
            Ok(Report {
                body: json!({
                    "command": "trivial",
                    "structure": structure_name,
                    "result": verdict_json(&v),
                    "window": window_meta(x.shape()),
                }),
                verdict: v.verdict,
            })
        }
        "weq" => {
            let phi = ws.map(need(&args.map, "map")?)?;
            let theta = ws.testset(args.testset.as_deref(), phi.source().algebra())?;
            let v = is_weq(phi, &e, &theta)?;
            Ok(Report {
                body: json!({
                    "command": "weq",
                    "structure": structure_name,
                    "result": verdict_json(&v),
                    "window": window_meta(phi.source().shape()),
                }),
                verdict: v.verdict,
            })
        }
        "stable-hom" | "derived-hom" => {
            let (x, y) = (
                ws.qmod(need(&args.source, "source")?)?,
                ws.qmod(need(&args.target, "target")?)?,
            );
            let st = if command == "stable-hom" {
                stable_hom_split(x, y)?
            } else {
                hom_mod_projectives(x, y, &e)?
            };
            Ok(Report::ok(json!({
                "command": command,
                "structure": (command == "derived-hom").then_some(structure_name),
                "result": stable_json(&st),
                "window": window_meta(st.hom.source().shape()),
            })))
        }
        "kernel" => {
            let x = ws.qmod(need(&args.qmod, "qmod")?)?;
            let member = in_acyclic_kernel(x)?;
            let st = stable_hom_split(x, x)?;
            let id_nonzero = !st.in_ideal(&QModMap::identity(x))?;
            Ok(Report {
                body: json!({
                    "command": "kernel",
                    "in_acyclic_kernel": member,
                    "identity_nonzero_in_homotopy_category": id_nonzero,
                    "stable_end_dim": st.quotient_dim(),
                    "window": window_meta(x.shape()),
                }),
                verdict: member,
            })
        }
        other => bail!("unknown command `{other}`"),
    }
}
